#include "adi/interrogation.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "adi/errors.hpp"

namespace adi {

namespace {
std::string num(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}
}  // namespace

DeviationSpectrum normalized_deviation(const TransferFunction& tf, const Baseline& baseline) {
    const PairStatistics& st = baseline.at(tf.pair());
    if (tf.freqs_hz != baseline.freqs_hz)
        throw DataError("pair " + to_string(tf.pair()) + ": frequency grid differs from baseline '" + baseline.id + "'");
    const std::size_t n = tf.size();
    DeviationSpectrum dev;
    dev.pair = tf.pair();
    dev.freqs_hz = tf.freqs_hz;
    dev.z_mag.resize(n);
    dev.z_phase.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        dev.z_mag[k] = (tf.magnitude[k] - st.mag_mean[k]) / st.mag_std[k];
        dev.z_phase[k] = wrap_phase(tf.phase_rad[k] - st.phase_mean_rad[k]) / st.phase_std_rad[k];
    }
    return dev;
}

SmoothedDeviation windowed_average(const DeviationSpectrum& dev, std::size_t window_bins) {
    const std::size_t n = dev.z_mag.size();
    if (window_bins == 0 || window_bins % 2 == 0)
        throw ConfigError("window_bins must be a positive odd integer (got " + std::to_string(window_bins) + ")");
    if (window_bins > n)
        throw ConfigError("window_bins " + std::to_string(window_bins) + " exceeds the " + std::to_string(n) +
                          " available bins");
    const std::size_t half = window_bins / 2;
    SmoothedDeviation out;
    out.pair = dev.pair;
    out.window_bins = window_bins;
    out.freqs_hz = dev.freqs_hz;
    out.mag.resize(n);
    out.phase.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t lo = k >= half ? k - half : 0;
        const std::size_t hi = std::min(n - 1, k + half);
        double sm = 0.0, sp = 0.0;
        for (std::size_t j = lo; j <= hi; ++j) {
            sm += std::abs(dev.z_mag[j]);
            sp += std::abs(dev.z_phase[j]);
        }
        const double count = static_cast<double>(hi - lo + 1);
        out.mag[k] = sm / count;
        out.phase[k] = sp / count;
    }
    return out;
}

CadResult cumulative_average_delta(const SmoothedDeviation& smoothed, const FrequencyBand& band) {
    double sm = 0.0, sp = 0.0;
    std::size_t used = 0;
    for (std::size_t k = 0; k < smoothed.freqs_hz.size(); ++k) {
        const double f = smoothed.freqs_hz[k];
        if (f < band.low_hz || f > band.high_hz) continue;
        sm += smoothed.mag[k];
        sp += smoothed.phase[k];
        ++used;
    }
    if (used < kMinCadBins)
        throw ConfigError("band [" + num(band.low_hz) + ", " + num(band.high_hz) + "] Hz covers " +
                          std::to_string(used) + " bins; need at least " + std::to_string(kMinCadBins));
    CadResult r;
    r.pair = smoothed.pair;
    r.cad_mag = sm / static_cast<double>(used);
    r.cad_phase = sp / static_cast<double>(used);
    r.band = band;
    r.window_bins = smoothed.window_bins;
    r.bins_used = used;
    return r;
}

DamageIndexVector damage_index(std::span<const CadResult> cads) {
    std::map<PairKey, const CadResult*> by_pair;
    std::set<TransducerId> ids, actuators;
    for (const CadResult& c : cads) {
        if (!by_pair.emplace(c.pair, &c).second) throw DataError("duplicate CAD for pair " + to_string(c.pair));
        ids.insert(c.pair.actuator);
        ids.insert(c.pair.sensor);
        if (c.pair.actuator != c.pair.sensor) actuators.insert(c.pair.actuator);
    }
    if (actuators.empty()) throw DataError("damage_index: no actuator/sensor pairs");

    DamageIndexVector out;
    for (TransducerId a : actuators) {
        double sum = 0.0;
        std::size_t count = 0;
        for (TransducerId s : ids) {
            if (s == a) continue;
            const auto it = by_pair.find({a, s});
            if (it == by_pair.end()) throw DataError("damage_index: missing CAD for pair " + to_string(PairKey{a, s}));
            sum += 0.5 * (it->second->cad_mag + it->second->cad_phase);
            ++count;
        }
        out.di[a] = sum / static_cast<double>(count);
    }
    for (const CadResult& c : cads)
        if (c.pair.actuator != c.pair.sensor) out.per_pair_cads.push_back(c);
    std::sort(out.per_pair_cads.begin(), out.per_pair_cads.end(),
              [](const CadResult& x, const CadResult& y) { return x.pair < y.pair; });
    return out;
}

TransducerId localize_argmax(const DamageIndexVector& div) {
    if (div.di.empty()) throw DataError("localize_argmax: empty damage-index vector");
    // Map iteration is ascending by id and the comparison is strict, so ties keep the lowest id.
    auto best = div.di.begin();
    for (auto it = div.di.begin(); it != div.di.end(); ++it)
        if (it->second > best->second) best = it;
    return best->first;
}

Diagnosis detect(const DamageIndexVector& div, double threshold) {
    if (!(threshold > 0.0)) throw ConfigError("detection threshold must be > 0 (got " + num(threshold) + ")");
    if (div.di.empty()) throw DataError("detect: empty damage-index vector");
    Diagnosis d;
    d.threshold = threshold;
    d.di_vector = div;
    const TransducerId top = localize_argmax(div);
    d.detected = div.di.at(top) >= threshold;
    if (d.detected) d.location_argmax = top;
    return d;
}

double localize_weighted(const DamageIndexVector& div, const std::map<TransducerId, double>& positions,
                         const WeightedLocalizationParams& params) {
    if (!(params.exponent > 0.0)) throw ConfigError("localization exponent must be > 0");
    double wsum = 0.0, xsum = 0.0;
    std::size_t positive = 0;
    for (const auto& [id, value] : div.di) {
        const double excess = value - params.null_level;
        if (!(excess > 0.0)) continue;
        const auto pos = positions.find(id);
        if (pos == positions.end()) throw LookupError("no position for transducer " + std::to_string(id));
        const double w = std::pow(excess, params.exponent);
        wsum += w;
        xsum += w * pos->second;
        ++positive;
    }
    if (positive < 2)
        throw LocalizationUndefinedError("weighted localization needs at least two transducers above the null level " +
                                         num(params.null_level) + " (found " + std::to_string(positive) + ")");
    return xsum / wsum;
}

ThresholdCalibration calibrate_threshold(std::span<const double> healthy_max_di, std::span<const double> damaged_max_di,
                                         double false_alarm_cost, double miss_cost) {
    if (healthy_max_di.empty() || damaged_max_di.empty())
        throw InsufficientDataError("threshold calibration needs at least one healthy and one damaged sample");
    if (!(false_alarm_cost > 0.0) || !(miss_cost > 0.0)) throw ConfigError("calibration costs must be > 0");
    for (double v : healthy_max_di)
        if (!std::isfinite(v)) throw DataError("non-finite healthy DI sample");
    for (double v : damaged_max_di)
        if (!std::isfinite(v)) throw DataError("non-finite damaged DI sample");

    std::vector<double> candidates(healthy_max_di.begin(), healthy_max_di.end());
    candidates.insert(candidates.end(), damaged_max_di.begin(), damaged_max_di.end());
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

    const auto fraction_at_or_above = [](std::span<const double> xs, double t) {
        const auto hits = std::count_if(xs.begin(), xs.end(), [t](double v) { return v >= t; });
        return static_cast<double>(hits) / static_cast<double>(xs.size());
    };

    ThresholdCalibration out;
    for (double t : candidates) {
        RocRow row;
        row.threshold = t;
        row.pd = fraction_at_or_above(damaged_max_di, t);
        row.far = fraction_at_or_above(healthy_max_di, t);
        row.cost = false_alarm_cost * row.far + miss_cost * (1.0 - row.pd);
        out.table.push_back(row);
    }

    const double max_healthy = *std::max_element(healthy_max_di.begin(), healthy_max_di.end());
    const double min_damaged = *std::min_element(damaged_max_di.begin(), damaged_max_di.end());
    if (max_healthy < min_damaged) {
        out.zero_cost_interval = true;
        out.threshold = 0.5 * (max_healthy + min_damaged);
        out.cost = 0.0;
        return out;
    }
    const auto best = std::min_element(out.table.begin(), out.table.end(),
                                       [](const RocRow& a, const RocRow& b) { return a.cost < b.cost; });
    out.threshold = best->threshold;
    out.cost = best->cost;
    return out;
}

DamageIndexVector interrogate(const Baseline& baseline, const SignatureSet& set, const InterrogationParams& params,
                              Execution exec) {
    const CompatibilityReport compat = validate_signature_compatibility(baseline, set);
    if (!compat.ok())
        throw DataError("signature set '" + set.label + "' is incompatible with baseline '" + baseline.id +
                        "': " + compat.summary());
    if (baseline.freqs_hz.empty()) throw DataError("baseline '" + baseline.id + "' has an empty grid");
    const FrequencyBand band = params.band.value_or(FrequencyBand{baseline.freqs_hz.front(), baseline.freqs_hz.back()});

    std::vector<PairKey> keys;
    for (const auto& [key, st] : baseline.pairs)
        if (key.actuator != key.sensor) keys.push_back(key);
    std::vector<CadResult> cads(keys.size());
    for_each_index(exec, keys.size(), [&](std::size_t p) {
        const DeviationSpectrum dev = normalized_deviation(set.pairs.at(keys[p]), baseline);
        cads[p] = cumulative_average_delta(windowed_average(dev, params.window_bins), band);
    });

    DamageIndexVector div = damage_index(cads);
    div.baseline_id = baseline.id;
    return div;
}

}  // namespace adi
