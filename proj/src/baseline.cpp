#include "adi/baseline.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <set>
#include <sstream>

#include "adi/errors.hpp"

namespace adi {

namespace {

std::string num(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

// Position of the first differing frequency, or nullopt when identical.
std::optional<std::size_t> first_grid_difference(const std::vector<double>& a, const std::vector<double>& b) {
    const std::size_t n = std::min(a.size(), b.size());
    for (std::size_t k = 0; k < n; ++k)
        if (a[k] != b[k]) return k;
    if (a.size() != b.size()) return n;
    return std::nullopt;
}

double median(std::vector<double> values) {
    const std::size_t n = values.size();
    std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(n / 2), values.end());
    const double upper = values[n / 2];
    if (n % 2 == 1) return upper;
    const double lower = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(n / 2));
    return 0.5 * (lower + upper);
}

}  // namespace

const std::vector<double>& SignatureSet::freqs_hz() const {
    if (pairs.empty()) throw DataError("signature set '" + label + "' is empty");
    return pairs.begin()->second.freqs_hz;
}

void SignatureSet::validate() const {
    const auto& grid = freqs_hz();
    std::set<TransducerId> ids;
    for (const auto& [key, tf] : pairs) {
        if (key != tf.pair())
            throw DataError("signature set '" + label + "': entry " + to_string(key) + " holds transfer function " +
                            to_string(tf.pair()));
        const std::size_t n = tf.freqs_hz.size();
        if (tf.magnitude.size() != n || tf.phase_rad.size() != n || tf.coherence.size() != n)
            throw DataError("signature set '" + label + "': ragged arrays for pair " + to_string(key));
        if (tf.freqs_hz != grid)
            throw DataError("signature set '" + label + "': pair " + to_string(key) + " is on a different grid");
        ids.insert(key.actuator);
        ids.insert(key.sensor);
    }
    std::set<TransducerId> actuators;
    for (const auto& [key, tf] : pairs) actuators.insert(key.actuator);
    for (TransducerId a : actuators)
        for (TransducerId s : ids)
            if (a != s && !pairs.contains({a, s}))
                throw DataError("signature set '" + label + "': missing pair " + to_string(PairKey{a, s}));
}

const PairStatistics& Baseline::at(const PairKey& pair) const {
    const auto it = pairs.find(pair);
    if (it == pairs.end()) throw LookupError("baseline '" + id + "' has no pair " + to_string(pair));
    return it->second;
}

void Baseline::validate() const {
    if (n_datasets < kMinBaselineDatasets)
        throw DataError("baseline '" + id + "': n_datasets " + std::to_string(n_datasets) + " is below the minimum " +
                        std::to_string(kMinBaselineDatasets));
    if (!(floor.phase_rad > 0.0) || !(floor.mag_absolute > 0.0) || !(floor.mag_relative >= 0.0))
        throw DataError("baseline '" + id + "': floor parameters must be positive");
    const std::size_t n = freqs_hz.size();
    for (std::size_t k = 1; k < n; ++k)
        if (!(freqs_hz[k] > freqs_hz[k - 1])) throw DataError("baseline '" + id + "': grid is not strictly ascending");
    for (const auto& [key, st] : pairs) {
        if (st.mag_mean.size() != n || st.mag_std.size() != n || st.phase_mean_rad.size() != n ||
            st.phase_std_rad.size() != n)
            throw DataError("baseline '" + id + "': pair " + to_string(key) + " does not match the grid length");
        for (std::size_t k = 0; k < n; ++k) {
            if (!(st.mag_std[k] > 0.0) || !(st.phase_std_rad[k] > 0.0))
                throw DataError("baseline '" + id + "': non-positive std for pair " + to_string(key));
        }
    }
}

Baseline accumulate_baseline(std::span<const SignatureSet> sets, const FloorParams& floor, std::string id,
                             Execution exec) {
    if (sets.size() < kMinBaselineDatasets)
        throw InsufficientDataError("baseline needs at least " + std::to_string(kMinBaselineDatasets) +
                                    " signature sets (got " + std::to_string(sets.size()) + ")");
    const SignatureSet& first = sets.front();
    first.validate();
    const std::vector<double>& grid = first.freqs_hz();
    for (const SignatureSet& s : sets.subspan(1)) {
        s.validate();
        for (const auto& [key, tf] : s.pairs)
            if (!first.pairs.contains(key))
                throw DataError("set '" + s.label + "' has pair " + to_string(key) + " absent from set '" +
                                first.label + "'");
        for (const auto& [key, tf] : first.pairs) {
            const auto it = s.pairs.find(key);
            if (it == s.pairs.end())
                throw DataError("set '" + s.label + "' is missing pair " + to_string(key));
            if (auto k = first_grid_difference(tf.freqs_hz, it->second.freqs_hz))
                throw DataError("set '" + s.label + "': frequency grid mismatch for pair " + to_string(key) +
                                " at bin " + std::to_string(*k));
        }
    }

    Baseline out;
    out.id = std::move(id);
    out.n_datasets = sets.size();
    out.floor = floor;
    out.freqs_hz = grid;

    std::vector<PairKey> keys;
    for (const auto& [key, tf] : first.pairs) keys.push_back(key);
    std::vector<PairStatistics> stats(keys.size());

    const std::size_t nbins = grid.size();
    const double n = static_cast<double>(sets.size());
    for_each_index(exec, keys.size(), [&](std::size_t p) {
        const PairKey key = keys[p];
        PairStatistics st;
        st.mag_mean.assign(nbins, 0.0);
        st.mag_std.assign(nbins, 0.0);
        st.phase_mean_rad.assign(nbins, 0.0);
        st.phase_std_rad.assign(nbins, 0.0);
        for (std::size_t k = 0; k < nbins; ++k) {
            double sum = 0.0;
            std::complex<double> phasor = 0.0;
            for (const SignatureSet& s : sets) {
                const TransferFunction& tf = s.pairs.at(key);
                sum += tf.magnitude[k];
                phasor += std::polar(1.0, tf.phase_rad[k]);
            }
            const double mean = sum / n;
            const double circ_mean = wrap_phase(std::arg(phasor));
            double ss = 0.0, dsum = 0.0;
            std::vector<double> dev(sets.size());
            for (std::size_t i = 0; i < sets.size(); ++i) {
                const TransferFunction& tf = sets[i].pairs.at(key);
                const double d = tf.magnitude[k] - mean;
                ss += d * d;
                dev[i] = wrap_phase(tf.phase_rad[k] - circ_mean);
                dsum += dev[i];
            }
            const double dmean = dsum / n;
            double pss = 0.0;
            for (double d : dev) pss += (d - dmean) * (d - dmean);
            st.mag_mean[k] = mean;
            st.mag_std[k] = std::sqrt(ss / (n - 1.0));
            st.phase_mean_rad[k] = circ_mean;
            st.phase_std_rad[k] = std::sqrt(pss / (n - 1.0));
        }
        const double mag_floor =
            nbins == 0 ? floor.mag_absolute : std::max(floor.mag_relative * median(st.mag_mean), floor.mag_absolute);
        for (std::size_t k = 0; k < nbins; ++k) {
            st.mag_std[k] = std::max(st.mag_std[k], mag_floor);
            st.phase_std_rad[k] = std::max(st.phase_std_rad[k], floor.phase_rad);
        }
        stats[p] = std::move(st);
    });

    for (std::size_t p = 0; p < keys.size(); ++p) out.pairs.emplace(keys[p], std::move(stats[p]));
    return out;
}

std::string CompatibilityReport::summary() const {
    std::string s;
    for (const auto& issue : issues) {
        if (!s.empty()) s += "; ";
        s += issue;
    }
    return s.empty() ? "ok" : s;
}

CompatibilityReport validate_signature_compatibility(const Baseline& baseline, const SignatureSet& set) {
    CompatibilityReport report;
    for (const auto& [key, st] : baseline.pairs) {
        const auto it = set.pairs.find(key);
        if (it == set.pairs.end()) {
            report.issues.push_back("missing pair " + to_string(key));
            continue;
        }
        if (auto k = first_grid_difference(baseline.freqs_hz, it->second.freqs_hz)) {
            std::string where;
            if (*k < baseline.freqs_hz.size() && *k < it->second.freqs_hz.size())
                where = "first differing frequency " + num(it->second.freqs_hz[*k]) + " Hz (baseline " +
                        num(baseline.freqs_hz[*k]) + " Hz)";
            else
                where = "grid length " + std::to_string(it->second.freqs_hz.size()) + " vs baseline " +
                        std::to_string(baseline.freqs_hz.size());
            report.issues.push_back("grid mismatch for pair " + to_string(key) + ": " + where);
        }
    }
    for (const auto& [key, tf] : set.pairs)
        if (!baseline.pairs.contains(key)) report.issues.push_back("pair " + to_string(key) + " not in baseline");
    return report;
}

}  // namespace adi
