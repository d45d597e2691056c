#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "adi/interrogation.hpp"

namespace adi {

/// One case in the tabulated diagnosis: DI per transducer, the detection verdict,
/// the argmax transducer, and the refined position when it is defined.
struct ReportRow {
    std::string label;
    std::string baseline_id;
    std::map<TransducerId, double> di;
    bool detected = false;
    std::optional<TransducerId> location_argmax;
    std::optional<double> location_estimate_m;

    bool operator==(const ReportRow&) const = default;
};

struct DiagnosisReport {
    double threshold = kDefaultThreshold;
    std::vector<ReportRow> rows;

    bool operator==(const DiagnosisReport&) const = default;
};

/// Builds a row from a DI vector: detect(), then weighted localization when
/// detected, falling back to the argmax transducer's position if the centroid is
/// undefined. Pass no positions to skip the refined estimate.
ReportRow make_report_row(std::string label, const DamageIndexVector& div, double threshold,
                          const std::map<TransducerId, double>& positions = {},
                          const WeightedLocalizationParams& localization = {});

/// Aligned text table; DIs rendered with two decimals.
std::string render_report_text(const DiagnosisReport& report);

std::string report_to_json(const DiagnosisReport& report);
DiagnosisReport report_from_json(const std::string& text, const std::string& source = "<report>");
void save_report(const DiagnosisReport& report, const std::filesystem::path& path);
DiagnosisReport load_report(const std::filesystem::path& path);

/// Prepared DI table: header `label,DI #1,...` (or `label,di1,...`), one case per
/// row. Each row is re-evaluated against the threshold, bypassing simulation.
DiagnosisReport report_from_di_table(const std::string& csv, double threshold, const std::string& source = "<di-table>");

/// Largest DI of each row, the per-run statistic used for threshold calibration.
std::vector<double> max_di_per_row(const DiagnosisReport& report);

}  // namespace adi
