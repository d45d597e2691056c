#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "adi/baseline.hpp"
#include "adi/execution.hpp"
#include "adi/interrogation.hpp"
#include "adi/report.hpp"
#include "adi/spectral.hpp"
#include "adi/structure.hpp"

namespace adi {

/// A reference state: the damage present while its cycles are collected.
struct BaselineSpec {
    std::string id;
    std::size_t cycles = 13;
    std::vector<DamageSpec> damage;
};

struct CaseSpec {
    std::string label;
    std::string baseline_id;
    std::vector<DamageSpec> damage;
};

struct ScenarioConfig {
    ChainParams chain;
    std::map<TransducerId, std::size_t> transducer_nodes;  // empty: evenly spaced default
    ExcitationConfig excitation;
    SpectralParams spectral;
    FloorParams floor;
    InterrogationParams interrogation;
    WeightedLocalizationParams localization;
    double threshold = kDefaultThreshold;
    double noise_std = 0.05;
    std::uint64_t seed = 1;
    std::vector<BaselineSpec> baselines;
    std::vector<CaseSpec> cases;

    StructureModel model() const;
    void validate() const;
};

/// Two healthy cases, three severities at site 1, the site-1 large state with
/// three severities at site 2, and the same three site-2 cases measured against a
/// baseline that already contains the site-1 damage.
ScenarioConfig default_scenario();

ScenarioConfig scenario_from_json(const std::string& text, const std::string& source = "<scenario>");
std::string scenario_to_json(const ScenarioConfig& config);
ScenarioConfig load_scenario(const std::filesystem::path& path);

/// Seed of cycle `cycle` of the baseline at position `baseline_index`.
std::uint64_t baseline_cycle_seed(const ScenarioConfig& config, std::size_t baseline_index, std::size_t cycle);
/// Seed of the interrogation cycle of case `case_index`.
std::uint64_t case_seed(const ScenarioConfig& config, std::size_t case_index);

/// Collects the signature sets for one baseline spec.
std::vector<SignatureSet> collect_baseline_sets(const ScenarioConfig& config, std::size_t baseline_index,
                                                Execution exec = Execution::parallel);

/// Builds every baseline, interrogates every case against its reference and
/// tabulates the result. Rows follow the configured case order. Deterministic
/// for a given config; errors carry the case label.
DiagnosisReport run_scenario(const ScenarioConfig& config, Execution exec = Execution::parallel);

}  // namespace adi
