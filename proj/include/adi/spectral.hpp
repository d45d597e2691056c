#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace adi {

using TransducerId = int;

/// Directed actuator -> sensor pair.
struct PairKey {
    TransducerId actuator = 0;
    TransducerId sensor = 0;

    auto operator<=>(const PairKey&) const = default;
};

std::string to_string(const PairKey& pair);

enum class ExcitationKind { linear_chirp, band_limited_random };

std::string to_string(ExcitationKind kind);
ExcitationKind parse_excitation_kind(const std::string& text);

struct ExcitationConfig {
    ExcitationKind kind = ExcitationKind::linear_chirp;
    double band_low_hz = 100.0;
    double band_high_hz = 2000.0;
    double amplitude = 1.0;
    double duration_s = 6.0;
    double sample_rate_hz = 8192.0;

    /// Throws ConfigError naming the first violated bound.
    void validate() const;
    std::size_t sample_count() const;

    bool operator==(const ExcitationConfig&) const = default;
};

/// One actuation run: the drive signal and every recorded sensor channel.
struct TimeSeriesRecord {
    TransducerId actuator_id = 0;
    double sample_rate_hz = 0.0;
    std::vector<TransducerId> transducer_ids;
    std::vector<double> excitation;
    std::map<TransducerId, std::vector<double>> responses;

    // Provenance carried through the recording file.
    std::optional<ExcitationConfig> excitation_config;
    std::optional<std::uint64_t> seed;
    std::map<std::string, std::string> extra_metadata;  // key -> JSON text

    std::size_t length() const { return excitation.size(); }
    void validate() const;

    bool operator==(const TimeSeriesRecord&) const = default;
};

enum class WindowKind { hann, rectangular };

std::string to_string(WindowKind kind);
WindowKind parse_window_kind(const std::string& text);

struct SpectralParams {
    std::size_t segment_length = 1024;
    double overlap_fraction = 0.5;
    WindowKind window = WindowKind::hann;
    double band_low_hz = 100.0;
    double band_high_hz = 2000.0;

    void validate(double sample_rate_hz) const;
    std::size_t hop() const;

    bool operator==(const SpectralParams&) const = default;
};

struct TransferFunction {
    TransducerId actuator_id = 0;
    TransducerId sensor_id = 0;
    std::vector<double> freqs_hz;
    std::vector<double> magnitude;
    std::vector<double> phase_rad;
    std::vector<double> coherence;

    std::size_t size() const { return freqs_hz.size(); }
    PairKey pair() const { return {actuator_id, sensor_id}; }

    bool operator==(const TransferFunction&) const = default;
};

/// Maps an angle onto (-pi, pi]; -pi itself maps to +pi. Throws DomainError on
/// non-finite input.
double wrap_phase(double angle_rad);

/// Broadband drive signal. Chirps ignore the seed; band-limited random noise is
/// a pure function of (config, seed).
std::vector<double> generate_excitation(const ExcitationConfig& config, std::uint64_t seed);

/// Welch-averaged H1 estimate (S_xy / S_xx) of the excitation -> sensor_id path,
/// restricted to the analysis band. Bins whose S_xx falls below 1e-12 of the
/// in-band maximum are dropped.
TransferFunction estimate_transfer_function(const TimeSeriesRecord& record, TransducerId sensor_id,
                                            const SpectralParams& params);

}  // namespace adi
