#include "adi/structure.hpp"

#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

#include "adi/errors.hpp"

namespace adi {

namespace {
std::string num(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}
}  // namespace

std::size_t StructureModel::node_of(TransducerId id) const {
    const auto it = transducer_nodes.find(id);
    if (it == transducer_nodes.end()) throw LookupError("model has no transducer " + std::to_string(id));
    return it->second;
}

std::vector<TransducerId> StructureModel::transducer_ids() const {
    std::vector<TransducerId> ids;
    for (const auto& [id, node] : transducer_nodes) ids.push_back(id);
    return ids;
}

std::map<TransducerId, double> StructureModel::transducer_positions() const {
    std::map<TransducerId, double> pos;
    for (const auto& [id, node] : transducer_nodes) pos[id] = static_cast<double>(node) * pitch_m;
    return pos;
}

void StructureModel::validate() const {
    const std::size_t n = n_nodes();
    if (n == 0) throw ConfigError("model: no nodes");
    if (stiffnesses.size() + 1 != n)
        throw ConfigError("model: expected " + std::to_string(n - 1) + " springs for " + std::to_string(n) +
                          " nodes, got " + std::to_string(stiffnesses.size()));
    for (std::size_t i = 0; i < n; ++i)
        if (!(masses[i] > 0.0) || !std::isfinite(masses[i]))
            throw ConfigError("model: mass at node " + std::to_string(i) + " must be > 0");
    for (std::size_t j = 0; j < stiffnesses.size(); ++j)
        if (!(stiffnesses[j] > 0.0) || !std::isfinite(stiffnesses[j]))
            throw ConfigError("model: stiffness of spring " + std::to_string(j) + " must be > 0");
    if (!(root_stiffness > 0.0)) throw ConfigError("model: root_stiffness must be > 0");
    if (!(damping.alpha >= 0.0) || !(damping.beta >= 0.0)) throw ConfigError("model: damping must be >= 0");
    if (!(pitch_m > 0.0)) throw ConfigError("model: pitch_m must be > 0");
    std::set<std::size_t> used;
    for (const auto& [id, node] : transducer_nodes) {
        if (node >= n)
            throw ConfigError("model: transducer " + std::to_string(id) + " at node " + std::to_string(node) +
                              " is out of range");
        if (!used.insert(node).second)
            throw ConfigError("model: transducers share node " + std::to_string(node));
    }
}

StructureModel make_uniform_chain(const ChainParams& params) {
    if (params.n_nodes < 8) throw ConfigError("chain: n_nodes must be >= 8 (got " + std::to_string(params.n_nodes) + ")");
    if (params.transducer_count < 2) throw ConfigError("chain: need at least 2 transducers");
    StructureModel m;
    m.masses.assign(params.n_nodes, params.mass_kg);
    m.stiffnesses.assign(params.n_nodes - 1, params.stiffness_n_per_m);
    m.root_stiffness = params.stiffness_n_per_m;
    m.damping = params.damping;
    m.pitch_m = params.pitch_m;
    const std::size_t first = params.n_nodes / 4;
    const std::size_t span = params.n_nodes / 2 - 2;
    const std::size_t spacing = span / (params.transducer_count - 1);
    if (spacing == 0) throw ConfigError("chain: too many transducers for " + std::to_string(params.n_nodes) + " nodes");
    for (std::size_t i = 0; i < params.transducer_count; ++i)
        m.transducer_nodes[static_cast<TransducerId>(i + 1)] = first + i * spacing;
    m.validate();
    return m;
}

StructureModel apply_damage(const StructureModel& model, const DamageSpec& spec) {
    if (spec.site_node >= model.n_nodes())
        throw ConfigError("damage: site node " + std::to_string(spec.site_node) + " is out of range (model has " +
                          std::to_string(model.n_nodes()) + " nodes)");
    if (!(spec.severity >= 0.0 && spec.severity < 1.0))
        throw ConfigError("damage: severity must be in [0, 1) (got " + num(spec.severity) + ")");
    StructureModel out = model;
    const double keep = 1.0 - spec.severity;
    if (spec.site_node == 0)
        out.root_stiffness *= keep;
    else
        out.stiffnesses[spec.site_node - 1] *= keep;
    if (spec.site_node < out.stiffnesses.size()) out.stiffnesses[spec.site_node] *= keep;
    return out;
}

StructureModel apply_damage(const StructureModel& model, std::span<const DamageSpec> specs) {
    StructureModel out = model;
    for (const DamageSpec& s : specs) out = apply_damage(out, s);
    return out;
}

FrfMatrix frf_sweep(const StructureModel& model, std::size_t drive_node, std::span<const double> freqs_hz,
                    Execution exec) {
    model.validate();
    const std::size_t n = model.n_nodes();
    if (drive_node >= n) throw ConfigError("drive node " + std::to_string(drive_node) + " is out of range");
    for (double f : freqs_hz)
        if (!(f >= 0.0) || !std::isfinite(f)) throw ConfigError("frequencies must be finite and >= 0");

    // Static stiffness bands: diagonal and the coupling between i and i + 1.
    std::vector<double> k_diag(n), k_off(n > 0 ? n - 1 : 0);
    for (std::size_t i = 0; i < n; ++i) {
        const double left = i == 0 ? model.root_stiffness : model.stiffnesses[i - 1];
        const double right = i + 1 < n ? model.stiffnesses[i] : 0.0;
        k_diag[i] = left + right;
    }
    for (std::size_t i = 0; i + 1 < n; ++i) k_off[i] = -model.stiffnesses[i];

    FrfMatrix out(freqs_hz.size(), n);
    const double alpha = model.damping.alpha;
    const double beta = model.damping.beta;

    for_each_index(exec, freqs_hz.size(), [&](std::size_t fi) {
        using cd = std::complex<double>;
        const double w = 2.0 * std::numbers::pi * freqs_hz[fi];
        const cd stiff_factor(1.0, w * beta);
        const cd mass_factor(-w * w, w * alpha);
        // Thomas algorithm on the complex-symmetric tridiagonal system.
        std::vector<cd> c_prime(n), d_prime(n);
        double scale = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            scale = std::max(scale, std::abs(k_diag[i] * stiff_factor + model.masses[i] * mass_factor));
        cd prev_c = 0.0, prev_d = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const cd a = i > 0 ? k_off[i - 1] * stiff_factor : cd(0.0);
            const cd b = k_diag[i] * stiff_factor + model.masses[i] * mass_factor;
            const cd c = i + 1 < n ? k_off[i] * stiff_factor : cd(0.0);
            const cd rhs = i == drive_node ? cd(1.0) : cd(0.0);
            const cd pivot = b - a * prev_c;
            if (!(std::abs(pivot) > 1e-14 * scale))
                throw NumericalError("singular dynamic stiffness at bin " + std::to_string(fi) + " (" +
                                     num(freqs_hz[fi]) + " Hz)");
            prev_c = c / pivot;
            prev_d = (rhs - a * prev_d) / pivot;
            c_prime[i] = prev_c;
            d_prime[i] = prev_d;
        }
        auto row = out.row(fi);
        row[n - 1] = d_prime[n - 1];
        for (std::size_t i = n - 1; i-- > 0;) row[i] = d_prime[i] - c_prime[i] * row[i + 1];
        for (const cd& v : row)
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
                throw NumericalError("non-finite response at bin " + std::to_string(fi) + " (" + num(freqs_hz[fi]) +
                                     " Hz)");
    });
    return out;
}

TransferFunction analytic_frf(const StructureModel& model, std::size_t actuator_node, std::size_t sensor_node,
                              std::span<const double> freqs_hz) {
    if (sensor_node >= model.n_nodes()) throw ConfigError("sensor node " + std::to_string(sensor_node) + " is out of range");
    const FrfMatrix h = frf_sweep(model, actuator_node, freqs_hz, Execution::serial);
    TransferFunction tf;
    tf.actuator_id = static_cast<TransducerId>(actuator_node);
    tf.sensor_id = static_cast<TransducerId>(sensor_node);
    tf.freqs_hz.assign(freqs_hz.begin(), freqs_hz.end());
    for (std::size_t f = 0; f < freqs_hz.size(); ++f) {
        const auto v = h(f, sensor_node);
        tf.magnitude.push_back(std::abs(v));
        tf.phase_rad.push_back(wrap_phase(std::arg(v)));
        tf.coherence.push_back(1.0);
    }
    return tf;
}

}  // namespace adi
