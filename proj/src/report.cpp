#include "adi/report.hpp"

#include <algorithm>
#include <cstdio>
#include <set>
#include <sstream>

#include "adi/errors.hpp"
#include "adi/io.hpp"
#include "json_util.hpp"

namespace adi {

using detail::json;

ReportRow make_report_row(std::string label, const DamageIndexVector& div, double threshold,
                          const std::map<TransducerId, double>& positions,
                          const WeightedLocalizationParams& localization) {
    const Diagnosis d = detect(div, threshold);
    ReportRow row;
    row.label = std::move(label);
    row.baseline_id = div.baseline_id;
    row.di = div.di;
    row.detected = d.detected;
    row.location_argmax = d.location_argmax;
    if (d.detected && !positions.empty()) {
        try {
            row.location_estimate_m = localize_weighted(div, positions, localization);
        } catch (const LocalizationUndefinedError&) {
            const auto it = positions.find(*d.location_argmax);
            if (it != positions.end()) row.location_estimate_m = it->second;
        }
    }
    return row;
}

namespace {

std::string fixed(double v, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    return buf;
}

std::string pad(const std::string& s, std::size_t width, bool right_align) {
    if (s.size() >= width) return s;
    const std::string fill(width - s.size(), ' ');
    return right_align ? fill + s : s + fill;
}

}  // namespace

std::string render_report_text(const DiagnosisReport& report) {
    std::set<TransducerId> ids;
    for (const auto& r : report.rows)
        for (const auto& [id, v] : r.di) ids.insert(id);

    std::vector<std::string> header{"Case", "Baseline"};
    for (TransducerId id : ids) header.push_back("DI #" + std::to_string(id));
    header.insert(header.end(), {"Damage Detected?", "Location Identified", "Location (m)"});

    std::vector<std::vector<std::string>> cells;
    for (const auto& r : report.rows) {
        std::vector<std::string> line{r.label, r.baseline_id};
        for (TransducerId id : ids) {
            const auto it = r.di.find(id);
            line.push_back(it == r.di.end() ? "-" : fixed(it->second, 2));
        }
        line.push_back(r.detected ? "Yes" : "No");
        line.push_back(r.location_argmax ? std::to_string(*r.location_argmax) : "-");
        line.push_back(r.location_estimate_m ? fixed(*r.location_estimate_m, 3) : "-");
        cells.push_back(std::move(line));
    }

    std::vector<std::size_t> width(header.size());
    for (std::size_t c = 0; c < header.size(); ++c) {
        width[c] = header[c].size();
        for (const auto& line : cells) width[c] = std::max(width[c], line[c].size());
    }
    const auto emit = [&](const std::vector<std::string>& line) {
        std::string s;
        for (std::size_t c = 0; c < line.size(); ++c) {
            if (c > 0) s += "  ";
            s += pad(line[c], width[c], c >= 2);
        }
        while (!s.empty() && s.back() == ' ') s.pop_back();
        return s + '\n';
    };
    std::string out = "Detection threshold: " + fixed(report.threshold, 2) + '\n';
    out += emit(header);
    for (const auto& line : cells) out += emit(line);
    return out;
}

std::string report_to_json(const DiagnosisReport& report) {
    json j;
    j["format"] = "adi-report";
    j["version"] = kReportFormatVersion;
    j["threshold"] = report.threshold;
    json rows = json::array();
    for (const auto& r : report.rows) {
        json di = json::object();
        for (const auto& [id, v] : r.di) di[std::to_string(id)] = v;
        json row{{"label", r.label}, {"baseline_id", r.baseline_id}, {"di", di}, {"detected", r.detected}};
        row["location_argmax"] = r.location_argmax ? json(*r.location_argmax) : json(nullptr);
        row["location_estimate_m"] = r.location_estimate_m ? json(*r.location_estimate_m) : json(nullptr);
        rows.push_back(std::move(row));
    }
    j["rows"] = std::move(rows);
    return j.dump(2) + "\n";
}

DiagnosisReport report_from_json(const std::string& text, const std::string& src) {
    const json j = detail::parse_json(text, src);
    if (detail::require_as<std::string>(j, "format", src) != "adi-report")
        throw ParseError(src, 0, "not an adi-report file");
    const int version = detail::require_as<int>(j, "version", src);
    if (version != kReportFormatVersion)
        throw UnsupportedVersionError(src + ": unsupported adi-report version " + std::to_string(version));
    DiagnosisReport report;
    report.threshold = detail::require_as<double>(j, "threshold", src);
    const json& rows = detail::require(j, "rows", src);
    if (!rows.is_array()) throw ParseError(src, 0, "field 'rows' must be an array");
    for (const json& r : rows) {
        ReportRow row;
        row.label = detail::require_as<std::string>(r, "label", src);
        row.baseline_id = detail::require_as<std::string>(r, "baseline_id", src);
        const json& di = detail::require(r, "di", src);
        if (!di.is_object()) throw ParseError(src, 0, "field 'di' must be an object");
        for (const auto& [key, value] : di.items()) {
            int id = 0;
            try {
                std::size_t used = 0;
                id = std::stoi(key, &used);
                if (used != key.size()) throw std::invalid_argument(key);
            } catch (const std::exception&) {
                throw ParseError(src, 0, "transducer key '" + key + "' is not an integer");
            }
            row.di[id] = detail::get_as<double>(value, "di", src);
        }
        row.detected = detail::require_as<bool>(r, "detected", src);
        const json& arg = detail::require(r, "location_argmax", src);
        if (!arg.is_null()) row.location_argmax = detail::get_as<int>(arg, "location_argmax", src);
        const json& est = detail::require(r, "location_estimate_m", src);
        if (!est.is_null()) row.location_estimate_m = detail::get_as<double>(est, "location_estimate_m", src);
        report.rows.push_back(std::move(row));
    }
    return report;
}

void save_report(const DiagnosisReport& report, const std::filesystem::path& path) {
    write_file_atomic(path, report_to_json(report));
}

DiagnosisReport load_report(const std::filesystem::path& path) {
    return report_from_json(read_file(path), path.string());
}

DiagnosisReport report_from_di_table(const std::string& csv, double threshold, const std::string& src) {
    std::istringstream in(csv);
    std::string line;
    std::size_t lineno = 0;
    std::vector<TransducerId> ids;
    DiagnosisReport report;
    report.threshold = threshold;
    std::set<std::string> labels;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (ids.empty()) {
            if (cells.size() < 2 || cells[0] != "label") throw ParseError(src, lineno, "header must start with 'label'");
            for (std::size_t c = 1; c < cells.size(); ++c) {
                std::string h = cells[c];
                std::string digits;
                for (char ch : h)
                    if (ch >= '0' && ch <= '9') digits += ch;
                if (digits.empty() || digits.size() > 9)
                    throw ParseError(src, lineno, "column '" + h + "' names no transducer");
                ids.push_back(std::stoi(digits));
            }
            continue;
        }
        if (cells.size() != ids.size() + 1)
            throw ParseError(src, lineno,
                             "expected " + std::to_string(ids.size() + 1) + " columns, found " + std::to_string(cells.size()));
        if (!labels.insert(cells[0]).second) throw ParseError(src, lineno, "duplicate case label '" + cells[0] + "'");
        DamageIndexVector div;
        for (std::size_t c = 0; c < ids.size(); ++c) div.di[ids[c]] = parse_double(cells[c + 1], src, lineno);
        report.rows.push_back(make_report_row(cells[0], div, threshold));
    }
    if (ids.empty()) throw ParseError(src, 1, "missing header row");
    return report;
}

std::vector<double> max_di_per_row(const DiagnosisReport& report) {
    std::vector<double> out;
    for (const auto& r : report.rows) {
        if (r.di.empty()) throw DataError("report row '" + r.label + "' has no DI values");
        double m = r.di.begin()->second;
        for (const auto& [id, v] : r.di) m = std::max(m, v);
        out.push_back(m);
    }
    return out;
}

}  // namespace adi
