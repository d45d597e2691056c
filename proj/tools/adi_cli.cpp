// adi: command-line front end for simulation, baselining and interrogation.

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "adi/baseline.hpp"
#include "adi/errors.hpp"
#include "adi/interrogation.hpp"
#include "adi/io.hpp"
#include "adi/report.hpp"
#include "adi/scenario.hpp"
#include "adi/simulation.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitNumerical = 4;

struct GlobalOptions {
    std::optional<std::uint64_t> seed;
    std::string config;
    std::string out;
};

adi::ScenarioConfig scenario(const GlobalOptions& g) {
    adi::ScenarioConfig cfg = g.config.empty() ? adi::default_scenario() : adi::load_scenario(g.config);
    if (g.seed) cfg.seed = *g.seed;
    return cfg;
}

std::optional<adi::FrequencyBand> parse_band(const std::vector<double>& band) {
    if (band.empty()) return std::nullopt;
    if (band.size() != 2) throw adi::ConfigError("--band takes two values: LOW_HZ HIGH_HZ");
    return adi::FrequencyBand{band[0], band[1]};
}

adi::PairKey parse_pair(const std::string& text) {
    const auto comma = text.find(',');
    if (comma == std::string::npos) throw adi::ConfigError("--pair expects ACTUATOR,SENSOR (got '" + text + "')");
    try {
        return {std::stoi(text.substr(0, comma)), std::stoi(text.substr(comma + 1))};
    } catch (const std::exception&) {
        throw adi::ConfigError("--pair expects integers (got '" + text + "')");
    }
}

std::string label_of(const fs::path& dir) {
    const fs::path clean = dir.has_filename() ? dir : dir.parent_path();
    return clean.filename().string();
}

adi::SignatureSet signatures_from_dir(const fs::path& dir, const adi::SpectralParams& spectral) {
    const auto records = adi::load_cycle_directory(dir);
    return adi::signatures_from_records(records, spectral, label_of(dir));
}

adi::SpectralParams spectral_of(const adi::BaselineDocument& doc, const GlobalOptions& g) {
    if (doc.spectral) return *doc.spectral;
    return scenario(g).spectral;
}

std::vector<double> load_maxima(const fs::path& path) {
    if (path.extension() == ".json") return adi::max_di_per_row(adi::load_report(path));
    return adi::load_value_list(path);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Active damage interrogation: transfer-function signatures, baselines and damage indices"};
    app.require_subcommand(1);
    app.fallthrough();
    GlobalOptions g;
    app.add_option("--seed", g.seed, "Override the scenario seed");
    app.add_option("--config", g.config, "Scenario configuration (JSON); built-in default when omitted");
    app.add_option("--out", g.out, "Output file or directory");

    // simulate
    auto* simulate = app.add_subcommand("simulate", "Simulate baseline and case recordings for a scenario");
    simulate->callback([&] {
        if (g.out.empty()) throw adi::ConfigError("simulate needs --out DIR");
        const adi::ScenarioConfig cfg = scenario(g);
        cfg.validate();
        const fs::path root = g.out;
        adi::write_file_atomic(root / "scenario.json", adi::scenario_to_json(cfg));
        const adi::StructureModel healthy = cfg.model();
        std::size_t written = 0;
        for (std::size_t b = 0; b < cfg.baselines.size(); ++b) {
            const auto& spec = cfg.baselines[b];
            const adi::CycleSimulator sim(adi::apply_damage(healthy, spec.damage), cfg.excitation);
            for (std::size_t c = 0; c < spec.cycles; ++c) {
                const std::uint64_t seed = adi::baseline_cycle_seed(cfg, b, c);
                std::vector<adi::TimeSeriesRecord> records;
                for (adi::TransducerId id : sim.model().transducer_ids())
                    records.push_back(
                        sim.record(id, cfg.noise_std, adi::derive_seed(seed, {static_cast<std::uint64_t>(id)})));
                char name[32];
                std::snprintf(name, sizeof name, "cycle%02zu", c + 1);
                adi::save_cycle_directory(records, root / "baselines" / spec.id / name);
                ++written;
            }
        }
        for (std::size_t i = 0; i < cfg.cases.size(); ++i) {
            const auto& spec = cfg.cases[i];
            const adi::CycleSimulator sim(adi::apply_damage(healthy, spec.damage), cfg.excitation);
            const std::uint64_t seed = adi::case_seed(cfg, i);
            std::vector<adi::TimeSeriesRecord> records;
            for (adi::TransducerId id : sim.model().transducer_ids())
                records.push_back(
                    sim.record(id, cfg.noise_std, adi::derive_seed(seed, {static_cast<std::uint64_t>(id)})));
            adi::save_cycle_directory(records, root / "cases" / spec.label);
            ++written;
        }
        std::cout << "wrote " << written << " cycles under " << root.string() << "\n";
    });

    // baseline
    std::vector<std::string> baseline_dirs;
    std::string baseline_id = "baseline";
    auto* baseline = app.add_subcommand("baseline", "Build a baseline file from recorded reference cycles");
    baseline->add_option("cycles", baseline_dirs, "Cycle directories (one recording per actuator)")->required();
    baseline->add_option("--id", baseline_id, "Baseline identifier");
    baseline->callback([&] {
        if (g.out.empty()) throw adi::ConfigError("baseline needs --out FILE");
        const adi::ScenarioConfig cfg = scenario(g);
        std::vector<adi::SignatureSet> sets;
        for (const auto& d : baseline_dirs) sets.push_back(signatures_from_dir(d, cfg.spectral));
        adi::BaselineDocument doc{adi::accumulate_baseline(sets, cfg.floor, baseline_id), cfg.spectral};
        adi::save_baseline(doc, g.out);
        std::cout << "baseline '" << baseline_id << "' from " << sets.size() << " cycles, "
                  << doc.baseline.pairs.size() << " pairs, " << doc.baseline.freqs_hz.size() << " bins -> " << g.out
                  << "\n";
    });

    // interrogate
    std::string baseline_path;
    std::vector<std::string> case_dirs;
    double threshold = adi::kDefaultThreshold;
    std::size_t window_bins = adi::kDefaultWindowBins;
    std::vector<double> band;
    auto* interrogate = app.add_subcommand("interrogate", "Score recorded cycles against a baseline");
    interrogate->add_option("--baseline", baseline_path, "Baseline file")->required();
    interrogate->add_option("cycles", case_dirs, "Cycle directories to diagnose")->required();
    interrogate->add_option("--threshold", threshold, "Detection threshold on the damage index");
    interrogate->add_option("--window-bins", window_bins, "Odd moving-average width in bins");
    interrogate->add_option("--band", band, "CAD band: LOW_HZ HIGH_HZ")->expected(2);
    interrogate->callback([&] {
        const adi::BaselineDocument doc = adi::load_baseline(baseline_path);
        const adi::ScenarioConfig cfg = scenario(g);
        const auto positions = cfg.model().transducer_positions();
        adi::InterrogationParams params{window_bins, parse_band(band)};
        adi::DiagnosisReport report;
        report.threshold = threshold;
        for (const auto& d : case_dirs) {
            const adi::SignatureSet set = signatures_from_dir(d, spectral_of(doc, g));
            const adi::DamageIndexVector div = adi::interrogate(doc.baseline, set, params);
            report.rows.push_back(adi::make_report_row(label_of(d), div, threshold, positions, cfg.localization));
        }
        if (!g.out.empty()) adi::save_report(report, g.out);
        std::cout << adi::render_report_text(report);
    });

    // report
    std::string report_in, di_table;
    auto* report = app.add_subcommand("report", "Render a diagnosis report as a text table and structured file");
    report->add_option("--in", report_in, "Report file (JSON)");
    report->add_option("--di-table", di_table, "Prepared DI table (CSV: label,DI #1,...) evaluated at --threshold");
    report->add_option("--threshold", threshold, "Detection threshold for --di-table");
    report->callback([&] {
        if (report_in.empty() == di_table.empty()) throw adi::ConfigError("report needs exactly one of --in or --di-table");
        const adi::DiagnosisReport r = report_in.empty()
                                           ? adi::report_from_di_table(adi::read_file(di_table), threshold, di_table)
                                           : adi::load_report(report_in);
        if (!g.out.empty()) {
            if (fs::path(g.out).extension() == ".txt")
                adi::write_file_atomic(g.out, adi::render_report_text(r));
            else
                adi::save_report(r, g.out);
        }
        std::cout << adi::render_report_text(r);
    });

    // export-deviation
    std::string pair_text, recordings_dir;
    auto* export_dev = app.add_subcommand("export-deviation", "Write per-bin normalized deviations for one pair");
    export_dev->add_option("--baseline", baseline_path, "Baseline file")->required();
    export_dev->add_option("--recordings", recordings_dir, "Cycle directory")->required();
    export_dev->add_option("--pair", pair_text, "ACTUATOR,SENSOR")->required();
    export_dev->add_option("--window-bins", window_bins, "Odd moving-average width in bins");
    export_dev->callback([&] {
        if (g.out.empty()) throw adi::ConfigError("export-deviation needs --out FILE");
        const adi::BaselineDocument doc = adi::load_baseline(baseline_path);
        const adi::SignatureSet set = signatures_from_dir(recordings_dir, spectral_of(doc, g));
        adi::export_deviation(doc.baseline, set, parse_pair(pair_text), window_bins, g.out);
        std::cout << "wrote " << g.out << "\n";
    });

    // roc
    std::string healthy_path, damaged_path;
    double false_alarm_cost = 1.0, miss_cost = 1.0;
    auto* roc = app.add_subcommand("roc", "Sweep detection thresholds and pick the minimum-cost one");
    roc->add_option("--healthy", healthy_path, "Healthy DI maxima (one per line) or a report file")->required();
    roc->add_option("--damaged", damaged_path, "Damaged DI maxima (one per line) or a report file")->required();
    roc->add_option("--false-alarm-cost", false_alarm_cost, "Cost weight of a false alarm");
    roc->add_option("--miss-cost", miss_cost, "Cost weight of a missed detection");
    roc->callback([&] {
        if (g.out.empty()) throw adi::ConfigError("roc needs --out FILE");
        const auto healthy = load_maxima(healthy_path);
        const auto damaged = load_maxima(damaged_path);
        const auto cal = adi::roc_sweep(healthy, damaged, false_alarm_cost, miss_cost, g.out);
        std::ostringstream os;
        os.precision(17);
        os << "threshold " << cal.threshold << " cost " << cal.cost
           << (cal.zero_cost_interval ? " (classes separate)" : "") << "\n";
        std::cout << os.str();
    });

    // run
    auto* run = app.add_subcommand("run", "Run a whole scenario in memory and print the diagnosis table");
    run->callback([&] {
        const adi::DiagnosisReport r = adi::run_scenario(scenario(g));
        if (!g.out.empty()) adi::save_report(r, g.out);
        std::cout << adi::render_report_text(r);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    } catch (const adi::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        switch (e.kind()) {
            case adi::ErrorKind::configuration: return kExitConfig;
            case adi::ErrorKind::data: return kExitData;
            case adi::ErrorKind::numerical: return kExitNumerical;
        }
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    }
    return 0;
}
