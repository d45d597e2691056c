#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "adi/execution.hpp"
#include "adi/spectral.hpp"

namespace adi {

/// Transfer functions for every directed pair of one interrogation cycle, all on
/// one frequency grid.
struct SignatureSet {
    std::string label;
    std::map<PairKey, TransferFunction> pairs;

    const std::vector<double>& freqs_hz() const;
    /// Checks the shared grid and that every actuator reaches every other transducer.
    void validate() const;

    bool operator==(const SignatureSet&) const = default;
};

/// Standard-deviation floors. Magnitude: max(relative * per-pair median of
/// mag_mean, absolute). Phase: a fixed radian floor.
struct FloorParams {
    double mag_relative = 1e-6;
    double mag_absolute = 1e-12;
    double phase_rad = 1e-3;

    bool operator==(const FloorParams&) const = default;
};

struct PairStatistics {
    std::vector<double> mag_mean;
    std::vector<double> mag_std;
    std::vector<double> phase_mean_rad;
    std::vector<double> phase_std_rad;

    bool operator==(const PairStatistics&) const = default;
};

struct Baseline {
    std::string id;
    std::size_t n_datasets = 0;
    FloorParams floor;
    std::vector<double> freqs_hz;
    std::map<PairKey, PairStatistics> pairs;

    const PairStatistics& at(const PairKey& pair) const;
    void validate() const;

    bool operator==(const Baseline&) const = default;
};

inline constexpr std::size_t kMinBaselineDatasets = 3;

/// Per-pair, per-bin statistics over reference-state signature sets: sample mean
/// and Bessel-corrected std of magnitude, circular mean of phase with the sample
/// std of the wrapped deviations about it. The result does not depend on the
/// order of `sets`.
Baseline accumulate_baseline(std::span<const SignatureSet> sets, const FloorParams& floor = {},
                             std::string id = "baseline", Execution exec = Execution::parallel);

struct CompatibilityReport {
    std::vector<std::string> issues;

    bool ok() const { return issues.empty(); }
    std::string summary() const;
};

CompatibilityReport validate_signature_compatibility(const Baseline& baseline, const SignatureSet& set);

}  // namespace adi
