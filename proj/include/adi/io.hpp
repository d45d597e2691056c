#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "adi/baseline.hpp"
#include "adi/interrogation.hpp"
#include "adi/spectral.hpp"

namespace adi {

inline constexpr int kRecordingFormatVersion = 1;
inline constexpr int kBaselineFormatVersion = 1;
inline constexpr int kReportFormatVersion = 1;

/// Replaces `path` with `content` via a temporary file and rename.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);
std::string read_file(const std::filesystem::path& path);

// -- recordings ---------------------------------------------------------------
// A recording is two files sharing a stem: `<stem>.meta.json` (sample rate,
// actuator, transducer ids, excitation, seed, plus any unknown keys, which are
// carried through untouched) and `<stem>.csv` with header
// `t,excitation,ch<id>,...` and every sample printed with 17 significant digits.

struct RecordingPaths {
    std::filesystem::path metadata;
    std::filesystem::path samples;
};

RecordingPaths recording_paths(const std::filesystem::path& stem);
void save_recording(const TimeSeriesRecord& record, const std::filesystem::path& stem);
TimeSeriesRecord load_recording(const std::filesystem::path& stem);

/// All recordings (`*.meta.json`) in a directory, ordered by actuator id.
std::vector<TimeSeriesRecord> load_cycle_directory(const std::filesystem::path& dir);
void save_cycle_directory(const std::vector<TimeSeriesRecord>& records, const std::filesystem::path& dir);

// -- baselines ----------------------------------------------------------------

struct BaselineDocument {
    Baseline baseline;
    std::optional<SpectralParams> spectral;  // settings the signatures were estimated with

    bool operator==(const BaselineDocument&) const = default;
};

std::string baseline_to_json(const BaselineDocument& doc);
BaselineDocument baseline_from_json(const std::string& text, const std::string& source = "<baseline>");
void save_baseline(const BaselineDocument& doc, const std::filesystem::path& path);
BaselineDocument load_baseline(const std::filesystem::path& path);

// -- tables -------------------------------------------------------------------

std::string format_double(double v);  // %.17g
double parse_double(const std::string& text, const std::string& source, std::size_t line);

/// Plot-ready deviation table: freq_hz, z_mag, z_phase, smoothed_mag, smoothed_phase.
std::string deviation_table_csv(const DeviationSpectrum& dev, const SmoothedDeviation& smoothed);
void export_deviation(const Baseline& baseline, const SignatureSet& set, const PairKey& pair, std::size_t window_bins,
                      const std::filesystem::path& path);

std::string roc_table_csv(const ThresholdCalibration& calibration);
/// Calibrates the threshold from per-run DI maxima and writes the ROC table.
ThresholdCalibration roc_sweep(std::span<const double> healthy_max_di, std::span<const double> damaged_max_di,
                               double false_alarm_cost, double miss_cost, const std::filesystem::path& path);

/// Reads one number per line; blank lines and lines starting with '#' are skipped.
std::vector<double> load_value_list(const std::filesystem::path& path);

}  // namespace adi
