#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <numbers>
#include <set>
#include <sstream>

#include "adi/errors.hpp"
#include "adi/spectral.hpp"
#include "fft.hpp"

namespace adi {

namespace {
std::string num(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

std::vector<double> make_window(WindowKind kind, std::size_t n) {
    std::vector<double> w(n, 1.0);
    if (kind == WindowKind::hann) {
        // Periodic Hann, the usual choice for spectral averaging.
        for (std::size_t i = 0; i < n; ++i)
            w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n));
    }
    return w;
}
}  // namespace

std::string to_string(const PairKey& pair) {
    return "(" + std::to_string(pair.actuator) + ", " + std::to_string(pair.sensor) + ")";
}

std::string to_string(WindowKind kind) {
    return kind == WindowKind::hann ? "hann" : "rectangular";
}

WindowKind parse_window_kind(const std::string& text) {
    if (text == "hann") return WindowKind::hann;
    if (text == "rectangular") return WindowKind::rectangular;
    throw ConfigError("unknown window '" + text + "'");
}

double wrap_phase(double angle_rad) {
    if (!std::isfinite(angle_rad)) throw DomainError("wrap_phase: non-finite angle");
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double r = std::remainder(angle_rad, two_pi);  // [-pi, pi]
    if (r <= -std::numbers::pi) r += two_pi;
    return r;
}

void SpectralParams::validate(double sample_rate_hz) const {
    if (segment_length < 64 || !std::has_single_bit(segment_length))
        throw ConfigError("spectral: segment_length must be a power of two >= 64 (got " +
                          std::to_string(segment_length) + ")");
    if (!(overlap_fraction >= 0.0 && overlap_fraction < 1.0))
        throw ConfigError("spectral: overlap_fraction must be in [0, 1) (got " + num(overlap_fraction) + ")");
    if (!(band_low_hz >= 0.0 && band_low_hz < band_high_hz))
        throw ConfigError("spectral: analysis band must satisfy 0 <= low < high (got " + num(band_low_hz) + ", " +
                          num(band_high_hz) + ")");
    if (!(band_high_hz <= sample_rate_hz / 2.0))
        throw ConfigError("spectral: band_high_hz " + num(band_high_hz) + " exceeds Nyquist " +
                          num(sample_rate_hz / 2.0));
}

std::size_t SpectralParams::hop() const {
    const auto overlap = static_cast<std::size_t>(std::llround(static_cast<double>(segment_length) * overlap_fraction));
    return std::max<std::size_t>(1, segment_length - std::min(overlap, segment_length - 1));
}

void TimeSeriesRecord::validate() const {
    if (!(sample_rate_hz > 0.0) || !std::isfinite(sample_rate_hz))
        throw DataError("record: sample_rate_hz must be > 0");
    const std::set<TransducerId> ids(transducer_ids.begin(), transducer_ids.end());
    if (ids.size() != transducer_ids.size()) throw DataError("record: duplicate transducer ids");
    if (!ids.contains(actuator_id))
        throw DataError("record: actuator " + std::to_string(actuator_id) + " is not in the transducer set");
    for (const auto& [id, samples] : responses) {
        if (!ids.contains(id))
            throw DataError("record: response channel " + std::to_string(id) + " is not in the transducer set");
        if (samples.size() != excitation.size())
            throw DataError("record: channel " + std::to_string(id) + " has " + std::to_string(samples.size()) +
                            " samples, excitation has " + std::to_string(excitation.size()));
    }
}

TransferFunction estimate_transfer_function(const TimeSeriesRecord& record, TransducerId sensor_id,
                                            const SpectralParams& params) {
    record.validate();
    params.validate(record.sample_rate_hz);
    const auto it = record.responses.find(sensor_id);
    if (it == record.responses.end())
        throw LookupError("record for actuator " + std::to_string(record.actuator_id) + " has no channel " +
                          std::to_string(sensor_id));
    const std::vector<double>& x = record.excitation;
    const std::vector<double>& y = it->second;
    const std::size_t len = params.segment_length;
    if (x.size() < 2 * len)
        throw DataError("record has " + std::to_string(x.size()) + " samples; need at least 2 * segment_length = " +
                        std::to_string(2 * len));

    const double fs = record.sample_rate_hz;
    const double df = fs / static_cast<double>(len);
    std::size_t k_lo = static_cast<std::size_t>(std::ceil(params.band_low_hz / df));
    std::size_t k_hi = std::min(static_cast<std::size_t>(std::floor(params.band_high_hz / df)), len / 2);
    if (k_lo > k_hi) throw ConfigError("spectral: analysis band contains no frequency bins");

    const std::vector<double> window = make_window(params.window, len);
    detail::RealFft fft(len);
    const std::size_t nbins = fft.spectrum_size();
    std::vector<double> sxx(nbins, 0.0), syy(nbins, 0.0);
    std::vector<std::complex<double>> sxy(nbins, 0.0);
    std::vector<double> seg(len);
    std::vector<std::complex<double>> xf(nbins), yf(nbins);

    const std::size_t hop = params.hop();
    for (std::size_t start = 0; start + len <= x.size(); start += hop) {
        for (std::size_t i = 0; i < len; ++i) seg[i] = window[i] * x[start + i];
        fft.forward(seg, xf);
        for (std::size_t i = 0; i < len; ++i) seg[i] = window[i] * y[start + i];
        fft.forward(seg, yf);
        for (std::size_t k = k_lo; k <= k_hi; ++k) {
            sxx[k] += std::norm(xf[k]);
            syy[k] += std::norm(yf[k]);
            sxy[k] += std::conj(xf[k]) * yf[k];
        }
    }

    double sxx_max = 0.0;
    for (std::size_t k = k_lo; k <= k_hi; ++k) sxx_max = std::max(sxx_max, sxx[k]);
    if (!(sxx_max > 0.0))
        throw EstimationError("no excitation power in the analysis band for pair " +
                              to_string(PairKey{record.actuator_id, sensor_id}));
    const double floor = 1e-12 * sxx_max;

    TransferFunction tf;
    tf.actuator_id = record.actuator_id;
    tf.sensor_id = sensor_id;
    for (std::size_t k = k_lo; k <= k_hi; ++k) {
        if (sxx[k] < floor) continue;
        const std::complex<double> h = sxy[k] / sxx[k];
        double coh = 0.0;
        if (syy[k] > 0.0) coh = std::min(1.0, std::norm(sxy[k]) / (sxx[k] * syy[k]));
        tf.freqs_hz.push_back(static_cast<double>(k) * df);
        tf.magnitude.push_back(std::abs(h));
        tf.phase_rad.push_back(wrap_phase(std::arg(h)));
        tf.coherence.push_back(coh);
    }
    return tf;
}

}  // namespace adi
