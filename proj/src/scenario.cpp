#include "adi/scenario.hpp"

#include <set>

#include "adi/errors.hpp"
#include "adi/io.hpp"
#include "adi/simulation.hpp"
#include "json_util.hpp"

namespace adi {

using detail::json;

StructureModel ScenarioConfig::model() const {
    StructureModel m = make_uniform_chain(chain);
    if (!transducer_nodes.empty()) {
        m.transducer_nodes = transducer_nodes;
        m.validate();
    }
    return m;
}

void ScenarioConfig::validate() const {
    const StructureModel m = model();
    if (m.transducer_nodes.size() < 2) throw ConfigError("scenario: need at least 2 transducers");
    excitation.validate();
    spectral.validate(excitation.sample_rate_hz);
    if (excitation.sample_count() < 2 * spectral.segment_length)
        throw ConfigError("scenario: excitation is shorter than two spectral segments");
    if (!(noise_std >= 0.0)) throw ConfigError("scenario: noise_std must be >= 0");
    if (!(threshold > 0.0)) throw ConfigError("scenario: threshold must be > 0");
    if (interrogation.window_bins == 0 || interrogation.window_bins % 2 == 0)
        throw ConfigError("scenario: window_bins must be a positive odd integer");
    std::set<std::string> ids;
    for (const auto& b : baselines) {
        if (!ids.insert(b.id).second) throw ConfigError("scenario: duplicate baseline id '" + b.id + "'");
        if (b.cycles < kMinBaselineDatasets)
            throw ConfigError("scenario: baseline '" + b.id + "' needs at least " +
                              std::to_string(kMinBaselineDatasets) + " cycles");
        for (const auto& d : b.damage) apply_damage(m, d);
    }
    std::set<std::string> labels;
    for (const auto& c : cases) {
        if (!labels.insert(c.label).second) throw ConfigError("scenario: duplicate case label '" + c.label + "'");
        if (!ids.contains(c.baseline_id))
            throw ConfigError("scenario: case '" + c.label + "' references unknown baseline '" + c.baseline_id + "'");
        for (const auto& d : c.damage) apply_damage(m, d);
    }
}

ScenarioConfig default_scenario() {
    ScenarioConfig cfg;
    const StructureModel m = cfg.model();
    // Damage sites sit under transducers 1 and 2.
    const std::size_t site1 = m.node_of(1);
    const std::size_t site2 = m.node_of(2);
    const double small = 0.05, medium = 0.15, large = 0.30;
    cfg.baselines = {{"healthy", 13, {}}, {"site1-large", 13, {{site1, large}}}};
    const auto at1 = [&](double s) { return DamageSpec{site1, s}; };
    const auto at2 = [&](double s) { return DamageSpec{site2, s}; };
    cfg.cases = {
        {"case01", "healthy", {}},
        {"case02", "healthy", {}},
        {"case03", "healthy", {at1(small)}},
        {"case04", "healthy", {at1(medium)}},
        {"case05", "healthy", {at1(large)}},
        {"case06", "healthy", {at1(large), at2(small)}},
        {"case07", "healthy", {at1(large), at2(medium)}},
        {"case08", "healthy", {at1(large), at2(large)}},
        {"case09", "site1-large", {at1(large), at2(small)}},
        {"case10", "site1-large", {at1(large), at2(medium)}},
        {"case11", "site1-large", {at1(large), at2(large)}},
    };
    return cfg;
}

namespace {

json damage_to_json(const std::vector<DamageSpec>& damage) {
    json arr = json::array();
    for (const auto& d : damage) arr.push_back({{"site_node", d.site_node}, {"severity", d.severity}});
    return arr;
}

std::vector<DamageSpec> damage_from_json(const json& j, const std::string& src) {
    if (!j.is_array()) throw ParseError(src, 0, "field 'damage' must be an array");
    std::vector<DamageSpec> out;
    for (const json& d : j)
        out.push_back({detail::require_as<std::size_t>(d, "site_node", src), detail::require_as<double>(d, "severity", src)});
    return out;
}

template <typename T>
void read_optional(const json& obj, const char* key, T& target, const std::string& src) {
    if (obj.contains(key)) target = detail::get_as<T>(obj[key], key, src);
}

}  // namespace

std::string scenario_to_json(const ScenarioConfig& c) {
    json j;
    j["model"] = {{"n_nodes", c.chain.n_nodes},
                  {"mass_kg", c.chain.mass_kg},
                  {"stiffness_n_per_m", c.chain.stiffness_n_per_m},
                  {"alpha", c.chain.damping.alpha},
                  {"beta", c.chain.damping.beta},
                  {"pitch_m", c.chain.pitch_m},
                  {"transducer_count", c.chain.transducer_count}};
    json nodes = json::object();
    for (const auto& [id, node] : c.model().transducer_nodes) nodes[std::to_string(id)] = node;
    j["transducers"] = nodes;
    j["excitation"] = {{"kind", to_string(c.excitation.kind)},
                       {"band_low_hz", c.excitation.band_low_hz},
                       {"band_high_hz", c.excitation.band_high_hz},
                       {"amplitude", c.excitation.amplitude},
                       {"duration_s", c.excitation.duration_s},
                       {"sample_rate_hz", c.excitation.sample_rate_hz}};
    j["spectral"] = {{"segment_length", c.spectral.segment_length},
                     {"overlap_fraction", c.spectral.overlap_fraction},
                     {"window", to_string(c.spectral.window)},
                     {"band_low_hz", c.spectral.band_low_hz},
                     {"band_high_hz", c.spectral.band_high_hz}};
    j["floor"] = {{"mag_relative", c.floor.mag_relative},
                  {"mag_absolute", c.floor.mag_absolute},
                  {"phase_rad", c.floor.phase_rad}};
    j["interrogation"] = {{"window_bins", c.interrogation.window_bins},
                          {"threshold", c.threshold},
                          {"null_level", c.localization.null_level},
                          {"exponent", c.localization.exponent}};
    if (c.interrogation.band)
        j["interrogation"]["band"] = {c.interrogation.band->low_hz, c.interrogation.band->high_hz};
    j["noise_std"] = c.noise_std;
    j["seed"] = c.seed;
    json baselines = json::array();
    for (const auto& b : c.baselines)
        baselines.push_back({{"id", b.id}, {"cycles", b.cycles}, {"damage", damage_to_json(b.damage)}});
    j["baselines"] = baselines;
    json cases = json::array();
    for (const auto& k : c.cases)
        cases.push_back({{"label", k.label}, {"baseline", k.baseline_id}, {"damage", damage_to_json(k.damage)}});
    j["cases"] = cases;
    return j.dump(2) + "\n";
}

ScenarioConfig scenario_from_json(const std::string& text, const std::string& src) {
    const json j = detail::parse_json(text, src);
    if (!j.is_object()) throw ParseError(src, 1, "scenario must be a JSON object");
    // Missing sections keep the default scenario's values.
    ScenarioConfig c = default_scenario();
    if (j.contains("model")) {
        const json& m = j["model"];
        read_optional(m, "n_nodes", c.chain.n_nodes, src);
        read_optional(m, "mass_kg", c.chain.mass_kg, src);
        read_optional(m, "stiffness_n_per_m", c.chain.stiffness_n_per_m, src);
        read_optional(m, "alpha", c.chain.damping.alpha, src);
        read_optional(m, "beta", c.chain.damping.beta, src);
        read_optional(m, "pitch_m", c.chain.pitch_m, src);
        read_optional(m, "transducer_count", c.chain.transducer_count, src);
    }
    if (j.contains("transducers")) {
        c.transducer_nodes.clear();
        const json& t = j["transducers"];
        if (!t.is_object()) throw ParseError(src, 0, "field 'transducers' must map id -> node");
        for (const auto& [key, value] : t.items()) {
            int id = 0;
            try {
                id = std::stoi(key);
            } catch (const std::exception&) {
                throw ParseError(src, 0, "transducer id '" + key + "' is not an integer");
            }
            c.transducer_nodes[id] = detail::get_as<std::size_t>(value, "transducers", src);
        }
    }
    if (j.contains("excitation")) {
        const json& e = j["excitation"];
        if (e.contains("kind")) {
            try {
                c.excitation.kind = parse_excitation_kind(detail::get_as<std::string>(e["kind"], "kind", src));
            } catch (const ConfigError& err) {
                throw ParseError(src, 0, err.what());
            }
        }
        read_optional(e, "band_low_hz", c.excitation.band_low_hz, src);
        read_optional(e, "band_high_hz", c.excitation.band_high_hz, src);
        read_optional(e, "amplitude", c.excitation.amplitude, src);
        read_optional(e, "duration_s", c.excitation.duration_s, src);
        read_optional(e, "sample_rate_hz", c.excitation.sample_rate_hz, src);
    }
    if (j.contains("spectral")) {
        const json& s = j["spectral"];
        read_optional(s, "segment_length", c.spectral.segment_length, src);
        read_optional(s, "overlap_fraction", c.spectral.overlap_fraction, src);
        if (s.contains("window")) {
            try {
                c.spectral.window = parse_window_kind(detail::get_as<std::string>(s["window"], "window", src));
            } catch (const ConfigError& err) {
                throw ParseError(src, 0, err.what());
            }
        }
        read_optional(s, "band_low_hz", c.spectral.band_low_hz, src);
        read_optional(s, "band_high_hz", c.spectral.band_high_hz, src);
    }
    if (j.contains("floor")) {
        const json& f = j["floor"];
        read_optional(f, "mag_relative", c.floor.mag_relative, src);
        read_optional(f, "mag_absolute", c.floor.mag_absolute, src);
        read_optional(f, "phase_rad", c.floor.phase_rad, src);
    }
    if (j.contains("interrogation")) {
        const json& q = j["interrogation"];
        read_optional(q, "window_bins", c.interrogation.window_bins, src);
        read_optional(q, "threshold", c.threshold, src);
        read_optional(q, "null_level", c.localization.null_level, src);
        read_optional(q, "exponent", c.localization.exponent, src);
        if (q.contains("band")) {
            const auto band = detail::get_as<std::vector<double>>(q["band"], "band", src);
            if (band.size() != 2) throw ParseError(src, 0, "field 'band' must be [low_hz, high_hz]");
            c.interrogation.band = FrequencyBand{band[0], band[1]};
        }
    }
    read_optional(j, "noise_std", c.noise_std, src);
    read_optional(j, "seed", c.seed, src);
    if (j.contains("baselines")) {
        c.baselines.clear();
        for (const json& b : j["baselines"]) {
            BaselineSpec spec;
            spec.id = detail::require_as<std::string>(b, "id", src);
            read_optional(b, "cycles", spec.cycles, src);
            if (b.contains("damage")) spec.damage = damage_from_json(b["damage"], src);
            c.baselines.push_back(std::move(spec));
        }
    }
    if (j.contains("cases")) {
        c.cases.clear();
        for (const json& k : j["cases"]) {
            CaseSpec spec;
            spec.label = detail::require_as<std::string>(k, "label", src);
            spec.baseline_id = detail::require_as<std::string>(k, "baseline", src);
            if (k.contains("damage")) spec.damage = damage_from_json(k["damage"], src);
            c.cases.push_back(std::move(spec));
        }
    }
    c.validate();
    return c;
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
    return scenario_from_json(read_file(path), path.string());
}

std::uint64_t baseline_cycle_seed(const ScenarioConfig& config, std::size_t baseline_index, std::size_t cycle) {
    return derive_seed(config.seed, {1, baseline_index, cycle});
}

std::uint64_t case_seed(const ScenarioConfig& config, std::size_t case_index) {
    return derive_seed(config.seed, {2, case_index});
}

std::vector<SignatureSet> collect_baseline_sets(const ScenarioConfig& config, std::size_t baseline_index,
                                                Execution exec) {
    const BaselineSpec& spec = config.baselines.at(baseline_index);
    const CycleSimulator sim(apply_damage(config.model(), spec.damage), config.excitation, exec);
    std::vector<SignatureSet> sets(spec.cycles);
    for_each_index(exec, spec.cycles, [&](std::size_t c) {
        sets[c] = sim.cycle(config.spectral, config.noise_std, baseline_cycle_seed(config, baseline_index, c),
                            spec.id + " cycle " + std::to_string(c + 1), Execution::serial);
    });
    return sets;
}

namespace {
[[noreturn]] void rethrow_with_context(const Error& e, const std::string& context) {
    const std::string msg = context + ": " + e.what();
    switch (e.kind()) {
        case ErrorKind::configuration: throw ConfigError(msg);
        case ErrorKind::data: throw DataError(msg);
        case ErrorKind::numerical: throw NumericalError(msg);
    }
    throw DataError(msg);
}
}  // namespace

DiagnosisReport run_scenario(const ScenarioConfig& config, Execution exec) {
    config.validate();
    const StructureModel healthy = config.model();
    const auto positions = healthy.transducer_positions();

    std::map<std::string, Baseline> baselines;
    for (std::size_t b = 0; b < config.baselines.size(); ++b) {
        const BaselineSpec& spec = config.baselines[b];
        // Baselines nobody references are skipped.
        bool used = false;
        for (const auto& c : config.cases) used = used || c.baseline_id == spec.id;
        if (!used) continue;
        try {
            const auto sets = collect_baseline_sets(config, b, exec);
            baselines.emplace(spec.id, accumulate_baseline(sets, config.floor, spec.id, exec));
        } catch (const Error& e) {
            rethrow_with_context(e, "baseline '" + spec.id + "'");
        }
    }

    DiagnosisReport report;
    report.threshold = config.threshold;
    report.rows.resize(config.cases.size());
    for_each_index(exec, config.cases.size(), [&](std::size_t i) {
        const CaseSpec& spec = config.cases[i];
        try {
            const StructureModel model = apply_damage(healthy, spec.damage);
            const SignatureSet set = run_cycle(model, config.excitation, config.spectral, config.noise_std,
                                               case_seed(config, i), spec.label, Execution::serial);
            const DamageIndexVector div =
                interrogate(baselines.at(spec.baseline_id), set, config.interrogation, Execution::serial);
            report.rows[i] = make_report_row(spec.label, div, config.threshold, positions, config.localization);
        } catch (const Error& e) {
            rethrow_with_context(e, "case '" + spec.label + "'");
        }
    });
    return report;
}

}  // namespace adi
