#include "adi/io.hpp"

#include <unistd.h>

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "adi/errors.hpp"
#include "json_util.hpp"

namespace adi {

namespace fs = std::filesystem;
using detail::json;

void write_file_atomic(const fs::path& path, const std::string& content) {
    std::error_code ec;
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path(), ec);
        if (ec) throw DataError("cannot create " + path.parent_path().string() + ": " + ec.message());
    }
    fs::path tmp = path;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw DataError("cannot write " + tmp.string());
        out << content;
        out.flush();
        if (!out) throw DataError("write failed for " + tmp.string());
    }
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp);
        throw DataError("cannot replace " + path.string() + ": " + ec.message());
    }
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_double(const std::string& text, const std::string& source, std::size_t line) {
    double v = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    while (first < last && *first == ' ') ++first;
    while (last > first && (last[-1] == ' ' || last[-1] == '\r')) --last;
    if (first < last && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || first == last)
        throw ParseError(source, line, "not a number: '" + text + "'");
    return v;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::string line;
    std::istringstream ss(text);
    while (std::getline(ss, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(line);
    }
    return lines;
}

json excitation_to_json(const ExcitationConfig& c) {
    return json{{"kind", to_string(c.kind)},         {"band_low_hz", c.band_low_hz},
                {"band_high_hz", c.band_high_hz},    {"amplitude", c.amplitude},
                {"duration_s", c.duration_s},        {"sample_rate_hz", c.sample_rate_hz}};
}

ExcitationConfig excitation_from_json(const json& j, const std::string& src) {
    ExcitationConfig c;
    try {
        c.kind = parse_excitation_kind(detail::require_as<std::string>(j, "kind", src));
    } catch (const ConfigError& e) {
        throw ParseError(src, 0, e.what());
    }
    c.band_low_hz = detail::require_as<double>(j, "band_low_hz", src);
    c.band_high_hz = detail::require_as<double>(j, "band_high_hz", src);
    c.amplitude = detail::require_as<double>(j, "amplitude", src);
    c.duration_s = detail::require_as<double>(j, "duration_s", src);
    c.sample_rate_hz = detail::require_as<double>(j, "sample_rate_hz", src);
    return c;
}

json spectral_to_json(const SpectralParams& p) {
    return json{{"segment_length", p.segment_length},
                {"overlap_fraction", p.overlap_fraction},
                {"window", to_string(p.window)},
                {"band_low_hz", p.band_low_hz},
                {"band_high_hz", p.band_high_hz}};
}

SpectralParams spectral_from_json(const json& j, const std::string& src) {
    SpectralParams p;
    p.segment_length = detail::require_as<std::size_t>(j, "segment_length", src);
    p.overlap_fraction = detail::require_as<double>(j, "overlap_fraction", src);
    try {
        p.window = parse_window_kind(detail::require_as<std::string>(j, "window", src));
    } catch (const ConfigError& e) {
        throw ParseError(src, 0, e.what());
    }
    p.band_low_hz = detail::require_as<double>(j, "band_low_hz", src);
    p.band_high_hz = detail::require_as<double>(j, "band_high_hz", src);
    return p;
}

const std::set<std::string> kRecordingKeys = {"format",         "version",    "sample_rate_hz", "actuator_id",
                                              "transducer_ids", "excitation", "seed"};

void check_version(const json& j, const char* format, int supported, const std::string& src) {
    const auto fmt = detail::require_as<std::string>(j, "format", src);
    if (fmt != format) throw ParseError(src, 0, "expected format '" + std::string(format) + "', found '" + fmt + "'");
    const int version = detail::require_as<int>(j, "version", src);
    if (version != supported)
        throw UnsupportedVersionError(src + ": unsupported " + format + " version " + std::to_string(version) +
                                      " (this build reads version " + std::to_string(supported) + ")");
}

}  // namespace

// -- recordings ---------------------------------------------------------------

RecordingPaths recording_paths(const fs::path& stem) {
    fs::path meta = stem, samples = stem;
    meta += ".meta.json";
    samples += ".csv";
    return {meta, samples};
}

void save_recording(const TimeSeriesRecord& record, const fs::path& stem) {
    record.validate();
    json meta;
    meta["format"] = "adi-recording";
    meta["version"] = kRecordingFormatVersion;
    meta["sample_rate_hz"] = record.sample_rate_hz;
    meta["actuator_id"] = record.actuator_id;
    meta["transducer_ids"] = record.transducer_ids;
    if (record.excitation_config) meta["excitation"] = excitation_to_json(*record.excitation_config);
    if (record.seed) meta["seed"] = *record.seed;
    for (const auto& [key, text] : record.extra_metadata) {
        if (kRecordingKeys.contains(key)) throw DataError("extra metadata key '" + key + "' shadows a reserved field");
        meta[key] = json::parse(text);
    }

    std::string csv = "t,excitation";
    for (const auto& [id, samples] : record.responses) csv += ",ch" + std::to_string(id);
    csv += '\n';
    for (std::size_t i = 0; i < record.length(); ++i) {
        csv += format_double(static_cast<double>(i) / record.sample_rate_hz);
        csv += ',';
        csv += format_double(record.excitation[i]);
        for (const auto& [id, samples] : record.responses) {
            csv += ',';
            csv += format_double(samples[i]);
        }
        csv += '\n';
    }
    const RecordingPaths paths = recording_paths(stem);
    write_file_atomic(paths.samples, csv);
    write_file_atomic(paths.metadata, meta.dump(2) + "\n");
}

TimeSeriesRecord load_recording(const fs::path& stem) {
    const RecordingPaths paths = recording_paths(stem);
    const std::string meta_src = paths.metadata.string();
    const std::string meta_text = read_file(paths.metadata);
    const json meta = detail::parse_json(meta_text, meta_src);
    check_version(meta, "adi-recording", kRecordingFormatVersion, meta_src);

    TimeSeriesRecord rec;
    rec.sample_rate_hz = detail::require_as<double>(meta, "sample_rate_hz", meta_src);
    rec.actuator_id = detail::require_as<int>(meta, "actuator_id", meta_src);
    rec.transducer_ids = detail::require_as<std::vector<int>>(meta, "transducer_ids", meta_src);
    if (meta.contains("excitation")) rec.excitation_config = excitation_from_json(meta["excitation"], meta_src);
    if (meta.contains("seed")) rec.seed = detail::require_as<std::uint64_t>(meta, "seed", meta_src);
    for (const auto& [key, value] : meta.items())
        if (!kRecordingKeys.contains(key)) rec.extra_metadata[key] = value.dump();

    const std::string csv_src = paths.samples.string();
    const std::vector<std::string> lines = split_lines(read_file(paths.samples));
    if (lines.empty()) throw ParseError(csv_src, 1, "missing header row");
    const std::vector<std::string> header = split_csv_line(lines[0]);
    if (header.size() < 2 || header[0] != "t" || header[1] != "excitation")
        throw ParseError(csv_src, 1, "header must start with 't,excitation'");
    const std::set<int> known(rec.transducer_ids.begin(), rec.transducer_ids.end());
    std::vector<int> channel_ids;
    for (std::size_t c = 2; c < header.size(); ++c) {
        const std::string& h = header[c];
        int id = 0;
        const auto [ptr, ec] = std::from_chars(h.data() + std::min<std::size_t>(2, h.size()), h.data() + h.size(), id);
        if (h.rfind("ch", 0) != 0 || ec != std::errc() || ptr != h.data() + h.size())
            throw ParseError(csv_src, 1, "malformed channel column '" + h + "'");
        if (!known.contains(id)) throw ParseError(csv_src, 1, "unknown channel id " + std::to_string(id));
        if (std::find(channel_ids.begin(), channel_ids.end(), id) != channel_ids.end())
            throw ParseError(csv_src, 1, "duplicate channel id " + std::to_string(id));
        channel_ids.push_back(id);
    }

    std::vector<std::vector<double>> channels(channel_ids.size());
    for (std::size_t li = 1; li < lines.size(); ++li) {
        if (lines[li].empty() && li + 1 == lines.size()) break;
        const std::vector<std::string> cells = split_csv_line(lines[li]);
        if (cells.size() != header.size())
            throw ParseError(csv_src, li + 1,
                             "expected " + std::to_string(header.size()) + " columns, found " + std::to_string(cells.size()));
        rec.excitation.push_back(parse_double(cells[1], csv_src, li + 1));
        for (std::size_t c = 0; c < channel_ids.size(); ++c) channels[c].push_back(parse_double(cells[c + 2], csv_src, li + 1));
    }
    for (std::size_t c = 0; c < channel_ids.size(); ++c) rec.responses.emplace(channel_ids[c], std::move(channels[c]));
    try {
        rec.validate();
    } catch (const DataError& e) {
        throw ParseError(meta_src, 0, e.what());
    }
    return rec;
}

std::vector<TimeSeriesRecord> load_cycle_directory(const fs::path& dir) {
    if (!fs::is_directory(dir)) throw DataError("not a directory: " + dir.string());
    std::vector<fs::path> stems;
    for (const auto& entry : fs::directory_iterator(dir)) {
        const std::string name = entry.path().filename().string();
        const std::string suffix = ".meta.json";
        if (name.size() > suffix.size() && name.compare(name.size() - suffix.size(), suffix.size(), suffix) == 0)
            stems.push_back(dir / name.substr(0, name.size() - suffix.size()));
    }
    if (stems.empty()) throw DataError("no recordings in " + dir.string());
    std::vector<TimeSeriesRecord> records;
    for (const auto& s : stems) records.push_back(load_recording(s));
    std::sort(records.begin(), records.end(),
              [](const TimeSeriesRecord& a, const TimeSeriesRecord& b) { return a.actuator_id < b.actuator_id; });
    return records;
}

void save_cycle_directory(const std::vector<TimeSeriesRecord>& records, const fs::path& dir) {
    fs::create_directories(dir);
    for (const auto& r : records) save_recording(r, dir / ("act" + std::to_string(r.actuator_id)));
}

// -- baselines ----------------------------------------------------------------

std::string baseline_to_json(const BaselineDocument& doc) {
    const Baseline& b = doc.baseline;
    json j;
    j["format"] = "adi-baseline";
    j["version"] = kBaselineFormatVersion;
    j["id"] = b.id;
    j["n_datasets"] = b.n_datasets;
    j["floor"] = {{"mag_relative", b.floor.mag_relative},
                  {"mag_absolute", b.floor.mag_absolute},
                  {"phase_rad", b.floor.phase_rad}};
    if (doc.spectral) j["spectral"] = spectral_to_json(*doc.spectral);
    j["freqs_hz"] = b.freqs_hz;
    json pairs = json::array();
    for (const auto& [key, st] : b.pairs) {
        pairs.push_back({{"actuator", key.actuator},
                         {"sensor", key.sensor},
                         {"mag_mean", st.mag_mean},
                         {"mag_std", st.mag_std},
                         {"phase_mean_rad", st.phase_mean_rad},
                         {"phase_std_rad", st.phase_std_rad}});
    }
    j["pairs"] = std::move(pairs);
    return j.dump() + "\n";
}

BaselineDocument baseline_from_json(const std::string& text, const std::string& src) {
    const json j = detail::parse_json(text, src);
    check_version(j, "adi-baseline", kBaselineFormatVersion, src);
    BaselineDocument doc;
    Baseline& b = doc.baseline;
    b.id = detail::require_as<std::string>(j, "id", src);
    b.n_datasets = detail::require_as<std::size_t>(j, "n_datasets", src);
    const json& floor = detail::require(j, "floor", src);
    b.floor.mag_relative = detail::require_as<double>(floor, "mag_relative", src);
    b.floor.mag_absolute = detail::require_as<double>(floor, "mag_absolute", src);
    b.floor.phase_rad = detail::require_as<double>(floor, "phase_rad", src);
    if (j.contains("spectral")) doc.spectral = spectral_from_json(j["spectral"], src);
    b.freqs_hz = detail::require_as<std::vector<double>>(j, "freqs_hz", src);
    const json& pairs = detail::require(j, "pairs", src);
    if (!pairs.is_array()) throw ParseError(src, 0, "field 'pairs' must be an array");
    for (const json& p : pairs) {
        PairKey key{detail::require_as<int>(p, "actuator", src), detail::require_as<int>(p, "sensor", src)};
        PairStatistics st;
        st.mag_mean = detail::require_as<std::vector<double>>(p, "mag_mean", src);
        st.mag_std = detail::require_as<std::vector<double>>(p, "mag_std", src);
        st.phase_mean_rad = detail::require_as<std::vector<double>>(p, "phase_mean_rad", src);
        st.phase_std_rad = detail::require_as<std::vector<double>>(p, "phase_std_rad", src);
        if (!b.pairs.emplace(key, std::move(st)).second)
            throw ParseError(src, 0, "duplicate pair " + to_string(key));
    }
    b.validate();
    return doc;
}

void save_baseline(const BaselineDocument& doc, const fs::path& path) {
    doc.baseline.validate();
    write_file_atomic(path, baseline_to_json(doc));
}

BaselineDocument load_baseline(const fs::path& path) { return baseline_from_json(read_file(path), path.string()); }

// -- tables -------------------------------------------------------------------

std::string deviation_table_csv(const DeviationSpectrum& dev, const SmoothedDeviation& smoothed) {
    std::string out = "freq_hz,z_mag,z_phase,smoothed_mag,smoothed_phase\n";
    for (std::size_t k = 0; k < dev.freqs_hz.size(); ++k) {
        out += format_double(dev.freqs_hz[k]) + ',' + format_double(dev.z_mag[k]) + ',' + format_double(dev.z_phase[k]) +
               ',' + format_double(smoothed.mag[k]) + ',' + format_double(smoothed.phase[k]) + '\n';
    }
    return out;
}

void export_deviation(const Baseline& baseline, const SignatureSet& set, const PairKey& pair, std::size_t window_bins,
                      const fs::path& path) {
    const auto it = set.pairs.find(pair);
    if (it == set.pairs.end()) throw LookupError("signature set has no pair " + to_string(pair));
    const DeviationSpectrum dev = normalized_deviation(it->second, baseline);
    write_file_atomic(path, deviation_table_csv(dev, windowed_average(dev, window_bins)));
}

std::string roc_table_csv(const ThresholdCalibration& calibration) {
    std::string out = "threshold,pd,far,cost\n";
    for (const RocRow& r : calibration.table)
        out += format_double(r.threshold) + ',' + format_double(r.pd) + ',' + format_double(r.far) + ',' +
               format_double(r.cost) + '\n';
    return out;
}

ThresholdCalibration roc_sweep(std::span<const double> healthy_max_di, std::span<const double> damaged_max_di,
                               double false_alarm_cost, double miss_cost, const fs::path& path) {
    ThresholdCalibration cal = calibrate_threshold(healthy_max_di, damaged_max_di, false_alarm_cost, miss_cost);
    write_file_atomic(path, roc_table_csv(cal));
    return cal;
}

std::vector<double> load_value_list(const fs::path& path) {
    const std::string src = path.string();
    std::vector<double> values;
    const auto lines = split_lines(read_file(path));
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const std::string& l = lines[i];
        const auto first = l.find_first_not_of(" \t");
        if (first == std::string::npos || l[first] == '#') continue;
        values.push_back(parse_double(l.substr(first), src, i + 1));
    }
    return values;
}

}  // namespace adi
