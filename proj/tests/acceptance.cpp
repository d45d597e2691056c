// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "adi/baseline.hpp"
#include "adi/errors.hpp"
#include "adi/interrogation.hpp"
#include "adi/io.hpp"
#include "adi/report.hpp"
#include "adi/scenario.hpp"
#include "adi/simulation.hpp"
#include "adi/structure.hpp"

using namespace adi;
namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kSeed = 20240901;
constexpr double kNoise = 0.05;
constexpr std::size_t kBaselineCycles = 13;

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, double a) {
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

struct Bench {
    ScenarioConfig cfg = default_scenario();
    StructureModel healthy = cfg.model();
    Baseline baseline;
    std::map<TransducerId, double> positions = healthy.transducer_positions();
    double transducer_pitch_m = 0.0;

    Bench() {
        const CycleSimulator sim(healthy, cfg.excitation);
        std::vector<SignatureSet> sets(kBaselineCycles);
        for (std::size_t c = 0; c < kBaselineCycles; ++c)
            sets[c] = sim.cycle(cfg.spectral, kNoise, derive_seed(kSeed, {1, c}));
        baseline = accumulate_baseline(sets, cfg.floor, "healthy");
        transducer_pitch_m = positions.at(2) - positions.at(1);
    }

    DamageIndexVector probe(const StructureModel& model, std::uint64_t seed) const {
        const CycleSimulator sim(model, cfg.excitation, Execution::serial);
        return interrogate(baseline, sim.cycle(cfg.spectral, kNoise, seed, {}, Execution::serial), cfg.interrogation,
                           Execution::serial);
    }
};

// 1 -----------------------------------------------------------------------------
Outcome figure7_replay() {
    struct Row {
        std::vector<double> di;
        bool detected;
        int location;  // 0: none
    };
    const std::vector<Row> rows{
        {{0.7, 0.7, 0.7, 0.7}, false, 0},     {{1.0, 1.0, 0.9, 0.9}, false, 0},     {{2.8, 2.7, 2.3, 2.4}, true, 1},
        {{4.1, 3.9, 3.6, 3.6}, true, 1},      {{19.1, 13.4, 12.7, 11.4}, true, 1},  {{22.8, 17.1, 16.2, 14.0}, true, 1},
        {{24.6, 21.7, 19.3, 16.4}, true, 1},  {{35.2, 56.4, 36.6, 43.9}, true, 2},  {{8.6, 10.4, 9.7, 6.8}, true, 2},
        {{11.3, 15.6, 13.3, 10.1}, true, 2},  {{28.1, 54.3, 34.5, 40.5}, true, 2},
    };
    int mismatches = 0;
    for (const auto& r : rows) {
        DamageIndexVector d;
        for (std::size_t i = 0; i < r.di.size(); ++i) d.di[static_cast<TransducerId>(i + 1)] = r.di[i];
        const Diagnosis dx = detect(d, kDefaultThreshold);
        if (dx.detected != r.detected) ++mismatches;
        if (dx.location_argmax.value_or(0) != r.location) ++mismatches;
    }
    return {mismatches == 0, std::to_string(mismatches) + " discrepancies over 11 cases (22 decisions)"};
}

// 2 -----------------------------------------------------------------------------
Outcome null_statistics(const Bench& bench) {
    constexpr std::size_t kTrials = 200;
    std::vector<DamageIndexVector> out(kTrials);
    for_each_index(Execution::parallel, kTrials,
                   [&](std::size_t t) { out[t] = bench.probe(bench.healthy, derive_seed(kSeed, {2, t})); });
    double sum = 0.0;
    std::size_t count = 0, clean = 0;
    for (const auto& d : out) {
        bool any = false;
        for (const auto& [id, v] : d.di) {
            sum += v;
            ++count;
            any = any || v > 2.0;
        }
        if (!any) ++clean;
    }
    const double mean = sum / static_cast<double>(count);
    const bool pass = mean >= 0.70 && mean <= 0.90 && clean >= 195;
    return {pass, fmt("mean DI %.4f (need [0.70, 0.90]); ", mean) + std::to_string(clean) +
                      "/200 cycles with every DI <= 2.0 (need >= 195)"};
}

// 3 -----------------------------------------------------------------------------
// Long band-limited random records; the noiseless check is bias-limited (long
// segments), the noisy check variance-limited (more averages).
double max_rel_mag_error(const TransferFunction& est, const TransferFunction& ref, std::size_t& bins,
                         double* phase_err = nullptr) {
    double worst = 0.0;
    for (std::size_t k = 0; k < est.size(); ++k) {
        if (est.coherence[k] < 0.99) continue;
        ++bins;
        worst = std::max(worst, std::abs(est.magnitude[k] / ref.magnitude[k] - 1.0));
        if (phase_err)
            *phase_err = std::max(*phase_err, std::abs(wrap_phase(est.phase_rad[k] - ref.phase_rad[k])));
    }
    return worst;
}

Outcome estimator_oracle(const Bench& bench) {
    const StructureModel& m = bench.healthy;
    ExcitationConfig exc = bench.cfg.excitation;
    exc.kind = ExcitationKind::band_limited_random;
    exc.duration_s = 64.0;
    SpectralParams clean_sp = bench.cfg.spectral, noisy_sp = bench.cfg.spectral;
    clean_sp.segment_length = 32768;
    noisy_sp.segment_length = 16384;
    const CycleSimulator sim(m, exc);
    double clean_mag = 0.0, clean_phase = 0.0, noisy_mag = 0.0;
    std::size_t bins = 0, noisy_bins = 0;
    for (TransducerId a : m.transducer_ids()) {
        const TimeSeriesRecord clean = sim.record(a, 0.0, derive_seed(kSeed, {3, 0}));
        const TimeSeriesRecord noisy = sim.record(a, kNoise, derive_seed(kSeed, {3, 1}));
        for (TransducerId s : m.transducer_ids()) {
            if (s == a) continue;
            const TransferFunction est = estimate_transfer_function(clean, s, clean_sp);
            const TransferFunction ref = analytic_frf(m, m.node_of(a), m.node_of(s), est.freqs_hz);
            clean_mag = std::max(clean_mag, max_rel_mag_error(est, ref, bins, &clean_phase));
            const TransferFunction est_n = estimate_transfer_function(noisy, s, noisy_sp);
            const TransferFunction ref_n = analytic_frf(m, m.node_of(a), m.node_of(s), est_n.freqs_hz);
            noisy_mag = std::max(noisy_mag, max_rel_mag_error(est_n, ref_n, noisy_bins));
        }
    }
    const bool pass = bins > 0 && noisy_bins > 0 && clean_mag <= 0.01 && clean_phase <= 0.02 && noisy_mag <= 0.05;
    return {pass, "noiseless: max |mag err| " + fmt("%.2e", clean_mag) + ", max |phase err| " +
                      fmt("%.2e rad", clean_phase) + " over " + std::to_string(bins) +
                      " bins with coherence >= 0.99; 5% noise: max |mag err| " + fmt("%.2e", noisy_mag) + " over " +
                      std::to_string(noisy_bins) + " bins"};
}

// 4 and 5 share one set of seeded damage trials ---------------------------------
struct DamageTrial {
    TransducerId nearest = 0;
    std::size_t site = 0;
    std::array<DamageIndexVector, 3> di;  // severities 0.05, 0.15, 0.30
};

std::vector<DamageTrial> damage_trials(const Bench& bench) {
    constexpr std::size_t kTrials = 100;
    const std::array<double, 3> severities{0.05, 0.15, 0.30};
    std::mt19937_64 rng(derive_seed(kSeed, {4}));
    std::uniform_int_distribution<int> pick_transducer(1, 4), pick_offset(-1, 1);
    std::vector<DamageTrial> trials(kTrials);
    for (auto& t : trials) {
        t.nearest = pick_transducer(rng);
        t.site = static_cast<std::size_t>(static_cast<long>(bench.healthy.node_of(t.nearest)) + pick_offset(rng));
    }
    for_each_index(Execution::parallel, kTrials * 3, [&](std::size_t job) {
        DamageTrial& t = trials[job / 3];
        const std::size_t s = job % 3;
        t.di[s] = bench.probe(apply_damage(bench.healthy, DamageSpec{t.site, severities[s]}),
                              derive_seed(kSeed, {5, job / 3, s}));
    });
    return trials;
}

Outcome severity_monotonicity(const std::vector<DamageTrial>& trials) {
    std::size_t ok = 0;
    for (const auto& t : trials) {
        bool mono = true;
        for (const auto& [id, v] : t.di[0].di) mono = mono && v < t.di[1].di.at(id) && t.di[1].di.at(id) < t.di[2].di.at(id);
        if (mono) ++ok;
    }
    return {ok >= 95, std::to_string(ok) + "/100 trials strictly increasing at every transducer (need >= 95)"};
}

Outcome localization(const Bench& bench, const std::vector<DamageTrial>& trials) {
    std::size_t total = 0, argmax_ok = 0, centroid_ok = 0;
    const WeightedLocalizationParams params = bench.cfg.localization;
    for (const auto& t : trials) {
        const double true_pos = static_cast<double>(t.site) * bench.healthy.pitch_m;
        for (std::size_t s : {1u, 2u}) {
            ++total;
            if (localize_argmax(t.di[s]) == t.nearest) ++argmax_ok;
            try {
                const double x = localize_weighted(t.di[s], bench.positions, params);
                if (std::abs(x - true_pos) <= bench.transducer_pitch_m) ++centroid_ok;
            } catch (const LocalizationUndefinedError&) {
            }
        }
    }
    const double fa = static_cast<double>(argmax_ok) / static_cast<double>(total);
    const double fc = static_cast<double>(centroid_ok) / static_cast<double>(total);
    return {fa >= 0.90 && fc >= 0.80,
            "argmax at nearest transducer " + std::to_string(argmax_ok) + "/" + std::to_string(total) +
                " (need >= 90%); centroid within one transducer pitch (" + fmt("%.2f m", bench.transducer_pitch_m) +
                ") " + std::to_string(centroid_ok) + "/" + std::to_string(total) + " (need >= 80%)"};
}

// 6 -----------------------------------------------------------------------------
Outcome detection_performance() {
    const ScenarioConfig cfg = default_scenario();
    const DiagnosisReport report = run_scenario(cfg);
    std::vector<double> healthy, damaged;
    for (std::size_t i = 0; i < cfg.cases.size(); ++i) {
        const double m = max_di_per_row(report)[i];
        (cfg.cases[i].damage.empty() ? healthy : damaged).push_back(m);
    }
    const ThresholdCalibration cal = calibrate_threshold(healthy, damaged);
    std::size_t hits = 0, false_alarms = 0;
    for (double v : damaged) hits += v >= cal.threshold;
    for (double v : healthy) false_alarms += v >= cal.threshold;
    const double pd = static_cast<double>(hits) / static_cast<double>(damaged.size());
    const double far = static_cast<double>(false_alarms) / static_cast<double>(healthy.size());
    return {pd == 1.0 && far == 0.0 && healthy.size() == 2 && damaged.size() == 9,
            fmt("calibrated threshold %.3f: ", cal.threshold) + fmt("PD %.2f, ", pd) + fmt("FAR %.2f over ", far) +
                std::to_string(healthy.size()) + " healthy + " + std::to_string(damaged.size()) + " damaged cases"};
}

// 7 -----------------------------------------------------------------------------
Outcome invariants(const Bench& bench) {
    std::vector<std::string> failed;
    const auto check = [&](bool ok, const char* name) {
        if (!ok) failed.push_back(name);
    };

    // Reciprocity.
    {
        const StructureModel damaged = apply_damage(bench.healthy, DamageSpec{21, 0.3});
        std::vector<double> freqs;
        for (int k = 1; k <= 256; ++k) freqs.push_back(8.0 * k);
        double worst = 0.0;
        for (TransducerId a : damaged.transducer_ids())
            for (TransducerId s : damaged.transducer_ids()) {
                const auto h1 = analytic_frf(damaged, damaged.node_of(a), damaged.node_of(s), freqs);
                const auto h2 = analytic_frf(damaged, damaged.node_of(s), damaged.node_of(a), freqs);
                for (std::size_t k = 0; k < freqs.size(); ++k)
                    worst = std::max({worst, std::abs(h1.magnitude[k] / h2.magnitude[k] - 1.0),
                                      std::abs(wrap_phase(h1.phase_rad[k] - h2.phase_rad[k]))});
            }
        check(worst <= 1e-10, "reciprocity");
    }

    const SignatureSet probe = CycleSimulator(apply_damage(bench.healthy, DamageSpec{16, 0.15}), bench.cfg.excitation)
                                   .cycle(bench.cfg.spectral, kNoise, derive_seed(kSeed, {7, 1}));
    const DamageIndexVector ref = interrogate(bench.baseline, probe, bench.cfg.interrogation);

    // Phase-wrap invariance: adding whole turns to every phase leaves every DI unchanged.
    {
        SignatureSet turned = probe;
        int turn = 1;
        for (auto& [key, tf] : turned.pairs)
            for (auto& p : tf.phase_rad) p += 2.0 * std::numbers::pi * ((turn++ % 7) - 3);
        const DamageIndexVector d = interrogate(bench.baseline, turned, bench.cfg.interrogation);
        double worst = 0.0;
        for (const auto& [id, v] : ref.di) worst = std::max(worst, std::abs(d.di.at(id) - v) / std::max(1.0, v));
        check(worst <= 1e-12, "phase-wrap invariance");
    }

    // Scale invariance of the diagnosis: a common gain on baseline and probe changes nothing.
    {
        const double gain = 37.5;
        const auto scaled = [&](SignatureSet s) {
            for (auto& [key, tf] : s.pairs)
                for (auto& m : tf.magnitude) m *= gain;
            return s;
        };
        const CycleSimulator sim(bench.healthy, bench.cfg.excitation);
        std::vector<SignatureSet> sets, scaled_sets;
        for (std::size_t c = 0; c < 5; ++c) {
            sets.push_back(sim.cycle(bench.cfg.spectral, kNoise, derive_seed(kSeed, {7, 2, c})));
            scaled_sets.push_back(scaled(sets.back()));
        }
        const Baseline b1 = accumulate_baseline(sets), b2 = accumulate_baseline(scaled_sets);
        const DamageIndexVector d1 = interrogate(b1, probe), d2 = interrogate(b2, scaled(probe));
        bool same = true;
        for (const auto& [id, v] : d1.di) same = same && std::abs(d2.di.at(id) - v) <= 1e-9 * std::max(1.0, v);
        const Diagnosis x1 = detect(d1, 2.0), x2 = detect(d2, 2.0);
        same = same && x1.detected == x2.detected && x1.location_argmax == x2.location_argmax;
        check(same, "scale invariance");

        // Baseline permutation invariance.
        std::vector<SignatureSet> shuffled = sets;
        std::reverse(shuffled.begin(), shuffled.end());
        std::swap(shuffled[0], shuffled[2]);
        const Baseline b3 = accumulate_baseline(shuffled);
        double worst = 0.0;
        for (const auto& [key, st] : b1.pairs) {
            const auto& o = b3.at(key);
            for (std::size_t k = 0; k < b1.freqs_hz.size(); ++k)
                worst = std::max({worst, std::abs(o.mag_mean[k] - st.mag_mean[k]) / st.mag_mean[k],
                                  std::abs(o.mag_std[k] - st.mag_std[k]) / st.mag_std[k],
                                  std::abs(wrap_phase(o.phase_mean_rad[k] - st.phase_mean_rad[k])),
                                  std::abs(o.phase_std_rad[k] - st.phase_std_rad[k]) / st.phase_std_rad[k]});
        }
        check(worst <= 1e-12, "baseline permutation invariance");

        // CAD identity and constant offsets.
        // The phase offset stays below pi at every bin so wrapping cannot shorten it.
        double max_phase_std = 0.0;
        for (const auto& [key, st] : b1.pairs)
            for (double v : st.phase_std_rad) max_phase_std = std::max(max_phase_std, v);
        const double z_phase = std::min(4.0, 0.9 * std::numbers::pi / max_phase_std);
        SignatureSet at_mean = sets[0], offset = sets[0];
        for (auto& [key, tf] : at_mean.pairs) {
            tf.magnitude = b1.at(key).mag_mean;
            tf.phase_rad = b1.at(key).phase_mean_rad;
        }
        for (auto& [key, tf] : offset.pairs) {
            const auto& st = b1.at(key);
            for (std::size_t k = 0; k < tf.size(); ++k) {
                tf.magnitude[k] = st.mag_mean[k] + 2.0 * st.mag_std[k];
                tf.phase_rad[k] = wrap_phase(st.phase_mean_rad[k] + z_phase * st.phase_std_rad[k]);
            }
        }
        bool cad_ok = true;
        for (const auto& [id, v] : interrogate(b1, at_mean).di) cad_ok = cad_ok && std::abs(v) <= 1e-9;
        for (const auto& c : interrogate(b1, offset).per_pair_cads)
            cad_ok = cad_ok && std::abs(c.cad_mag - 2.0) <= 1e-9 && std::abs(c.cad_phase - z_phase) <= 1e-9;
        check(cad_ok, "CAD identity/constant");
    }

    std::string detail = "reciprocity, phase-wrap, scale, permutation, CAD identity/constant: ";
    if (failed.empty()) return {true, detail + "all hold"};
    for (const auto& f : failed) detail += f + " FAILED; ";
    return {false, detail};
}

// 8 -----------------------------------------------------------------------------
Outcome round_trips(const Bench& bench) {
    const fs::path dir = fs::temp_directory_path() / ("adi_acceptance_" + std::to_string(kSeed));
    fs::remove_all(dir);
    fs::create_directories(dir);
    std::vector<std::string> failed;
    const auto check = [&](bool ok, const std::string& name) {
        if (!ok) failed.push_back(name);
    };
    const auto parse_line = [](const std::function<void()>& f) -> long {
        try {
            f();
        } catch (const ParseError& e) {
            return static_cast<long>(e.line());
        } catch (...) {
            return -2;
        }
        return -1;
    };
    const auto write = [](const fs::path& p, const std::string& s) { std::ofstream(p, std::ios::binary) << s; };

    const CycleSimulator sim(bench.healthy, bench.cfg.excitation);
    TimeSeriesRecord rec = sim.record(3, kNoise, derive_seed(kSeed, {8}));
    rec.extra_metadata["rig"] = "{\"bench\":2}";
    save_recording(rec, dir / "rec");
    check(load_recording(dir / "rec") == rec, "recording");

    const BaselineDocument doc{bench.baseline, bench.cfg.spectral};
    save_baseline(doc, dir / "baseline.json");
    check(load_baseline(dir / "baseline.json") == doc, "baseline");

    DiagnosisReport report;
    report.rows.push_back(make_report_row("probe", interrogate(bench.baseline, sim.cycle(bench.cfg.spectral, kNoise, 9)),
                                          2.0, bench.positions));
    save_report(report, dir / "report.json");
    check(load_report(dir / "report.json") == report, "report");

    // Malformed inputs.
    std::string csv = read_file(dir / "rec.csv");
    const std::size_t third = csv.find('\n', csv.find('\n', csv.find('\n') + 1) + 1);
    write(dir / "rec.csv", csv.substr(0, third) + ",9" + csv.substr(third));
    check(parse_line([&] { load_recording(dir / "rec"); }) == 3, "ragged recording row");
    write(dir / "rec.csv", "t,excitation,ch1,ch7\n" + csv.substr(csv.find('\n') + 1));
    check(parse_line([&] { load_recording(dir / "rec"); }) == 1, "unknown channel");
    write(dir / "bad.json", "{\n\"format\": \"adi-baseline\",\n\"version\": 1,\n\"id\": }\n");
    check(parse_line([&] { load_baseline(dir / "bad.json"); }) == 4, "malformed baseline JSON");
    write(dir / "bad.json", "{\"format\": \"adi-baseline\", \"version\": 1}");
    check(parse_line([&] { load_baseline(dir / "bad.json"); }) == 0, "baseline missing field");
    std::string v2 = read_file(dir / "baseline.json");
    v2.replace(v2.find("\"version\":1"), 11, "\"version\":2");
    write(dir / "bad.json", v2);
    bool version_rejected = false;
    try {
        load_baseline(dir / "bad.json");
    } catch (const UnsupportedVersionError&) {
        version_rejected = true;
    }
    check(version_rejected, "unsupported version");
    check(parse_line([] { report_from_di_table("label,DI #1,DI #2\na,1.0,2.0\nb,x,1.0\n", 2.0); }) == 3,
          "DI table bad number");

    fs::remove_all(dir);
    std::string detail = "recording, baseline, report bit-exact; malformed inputs raise line-numbered parse errors: ";
    if (failed.empty()) return {true, detail + "all hold"};
    for (const auto& f : failed) detail += f + " FAILED; ";
    return {false, detail};
}

}  // namespace

int main() {
    const auto t0 = std::chrono::steady_clock::now();
    bool all = true;
    const auto report = [&](int n, const char* name, const Outcome& o) {
        std::printf("[%s] criterion %d (%s): %s\n", o.pass ? "PASS" : "FAIL", n, name, o.detail.c_str());
        std::fflush(stdout);
        all = all && o.pass;
    };
    const auto guarded = [](const std::function<Outcome()>& f) -> Outcome {
        try {
            return f();
        } catch (const std::exception& e) {
            return {false, std::string("error: ") + e.what()};
        }
    };

    report(1, "decision replay", guarded(figure7_replay));
    const Bench bench;
    report(2, "null statistics", guarded([&] { return null_statistics(bench); }));
    report(3, "estimator oracle", guarded([&] { return estimator_oracle(bench); }));
    std::vector<DamageTrial> trials;
    const Outcome trials_ok = guarded([&] {
        trials = damage_trials(bench);
        return Outcome{true, ""};
    });
    report(4, "severity monotonicity", trials_ok.pass ? guarded([&] { return severity_monotonicity(trials); }) : trials_ok);
    report(5, "localization", trials_ok.pass ? guarded([&] { return localization(bench, trials); }) : trials_ok);
    report(6, "detection performance", guarded(detection_performance));
    report(7, "invariants", guarded([&] { return invariants(bench); }));
    report(8, "round trips", guarded([&] { return round_trips(bench); }));

    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s in %.1f s\n", all ? "all criteria pass" : "some criteria FAIL", secs);
    return all ? 0 : 1;
}
