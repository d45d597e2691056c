#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "adi/baseline.hpp"
#include "adi/execution.hpp"
#include "adi/spectral.hpp"

namespace adi {

/// Signed per-bin deviation from the baseline in standard-deviation units.
struct DeviationSpectrum {
    PairKey pair;
    std::vector<double> freqs_hz;
    std::vector<double> z_mag;
    std::vector<double> z_phase;
};

/// Centered moving mean of |z| for both channels.
struct SmoothedDeviation {
    PairKey pair;
    std::size_t window_bins = 1;
    std::vector<double> freqs_hz;
    std::vector<double> mag;
    std::vector<double> phase;
};

struct FrequencyBand {
    double low_hz = 0.0;
    double high_hz = 0.0;

    bool operator==(const FrequencyBand&) const = default;
};

/// Cumulative average delta of one pair.
struct CadResult {
    PairKey pair;
    double cad_mag = 0.0;
    double cad_phase = 0.0;
    FrequencyBand band;
    std::size_t window_bins = 1;
    std::size_t bins_used = 0;

    bool operator==(const CadResult&) const = default;
};

struct DamageIndexVector {
    std::map<TransducerId, double> di;
    std::vector<CadResult> per_pair_cads;
    std::string baseline_id;
    std::string timestamp;  // caller-supplied; left empty for reproducible output

    bool operator==(const DamageIndexVector&) const = default;
};

struct Diagnosis {
    bool detected = false;
    double threshold = 0.0;
    DamageIndexVector di_vector;
    std::optional<TransducerId> location_argmax;
    std::optional<double> location_estimate;
};

inline constexpr std::size_t kDefaultWindowBins = 9;
inline constexpr double kDefaultThreshold = 2.0;
inline constexpr std::size_t kMinCadBins = 8;

DeviationSpectrum normalized_deviation(const TransferFunction& tf, const Baseline& baseline);

/// window_bins must be odd and no larger than the spectrum; edge bins average
/// over the part of the window that exists.
SmoothedDeviation windowed_average(const DeviationSpectrum& dev, std::size_t window_bins);

/// Mean of the smoothed absolute deviations over the in-band bins (inclusive).
CadResult cumulative_average_delta(const SmoothedDeviation& smoothed, const FrequencyBand& band);

/// DI_i = mean over sensors s != i of (cad_mag + cad_phase) / 2. Self-pairs are ignored.
DamageIndexVector damage_index(std::span<const CadResult> cads);

/// detected iff max DI >= threshold; the argmax (lowest id on ties) is filled
/// in only when detected.
Diagnosis detect(const DamageIndexVector& div, double threshold);

TransducerId localize_argmax(const DamageIndexVector& div);

struct WeightedLocalizationParams {
    double null_level = 0.8;
    double exponent = 2.0;
};

/// Centroid of transducer positions weighted by max(DI - null_level, 0)^exponent.
/// Throws LocalizationUndefinedError when fewer than two weights are positive.
double localize_weighted(const DamageIndexVector& div, const std::map<TransducerId, double>& positions,
                         const WeightedLocalizationParams& params = {});

struct RocRow {
    double threshold = 0.0;
    double pd = 0.0;
    double far = 0.0;
    double cost = 0.0;

    bool operator==(const RocRow&) const = default;
};

struct ThresholdCalibration {
    double threshold = 0.0;
    double cost = 0.0;
    bool zero_cost_interval = false;
    std::vector<RocRow> table;
};

/// Sweeps every distinct sample value as a threshold (detect when DI >= t) and
/// returns the one minimizing false_alarm_cost * FAR + miss_cost * (1 - PD). If
/// the classes separate, returns the midpoint of the zero-cost interval
/// (max healthy, min damaged].
ThresholdCalibration calibrate_threshold(std::span<const double> healthy_max_di, std::span<const double> damaged_max_di,
                                         double false_alarm_cost = 1.0, double miss_cost = 1.0);

struct InterrogationParams {
    std::size_t window_bins = kDefaultWindowBins;
    std::optional<FrequencyBand> band;  // full baseline grid when unset
};

/// Full cycle: deviation, smoothing and CAD for every baseline pair, then DI.
DamageIndexVector interrogate(const Baseline& baseline, const SignatureSet& set, const InterrogationParams& params = {},
                              Execution exec = Execution::parallel);

}  // namespace adi
