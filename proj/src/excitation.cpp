#include <cmath>
#include <numbers>
#include <random>
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
}  // namespace

std::string to_string(ExcitationKind kind) {
    switch (kind) {
        case ExcitationKind::linear_chirp: return "linear-chirp";
        case ExcitationKind::band_limited_random: return "band-limited-random";
    }
    return "unknown";
}

ExcitationKind parse_excitation_kind(const std::string& text) {
    if (text == "linear-chirp") return ExcitationKind::linear_chirp;
    if (text == "band-limited-random") return ExcitationKind::band_limited_random;
    throw ConfigError("unknown excitation kind '" + text + "'");
}

void ExcitationConfig::validate() const {
    if (!(sample_rate_hz > 0.0) || !std::isfinite(sample_rate_hz))
        throw ConfigError("excitation: sample_rate_hz must be > 0 (got " + num(sample_rate_hz) + ")");
    if (!(band_low_hz > 0.0))
        throw ConfigError("excitation: band_low_hz must be > 0 (got " + num(band_low_hz) + ")");
    if (!(band_low_hz < band_high_hz))
        throw ConfigError("excitation: band_low_hz must be < band_high_hz (got " + num(band_low_hz) +
                          " >= " + num(band_high_hz) + ")");
    if (!(band_high_hz < sample_rate_hz / 2.0))
        throw ConfigError("excitation: band_high_hz must be < sample_rate_hz/2 (got " + num(band_high_hz) +
                          ", Nyquist " + num(sample_rate_hz / 2.0) + ")");
    if (!(duration_s > 0.0) || !std::isfinite(duration_s))
        throw ConfigError("excitation: duration_s must be > 0 (got " + num(duration_s) + ")");
    if (!(amplitude > 0.0) || !std::isfinite(amplitude))
        throw ConfigError("excitation: amplitude must be > 0 (got " + num(amplitude) + ")");
    if (sample_count() < 2) throw ConfigError("excitation: duration_s * sample_rate_hz rounds below 2 samples");
}

std::size_t ExcitationConfig::sample_count() const {
    return static_cast<std::size_t>(std::llround(duration_s * sample_rate_hz));
}

std::vector<double> generate_excitation(const ExcitationConfig& config, std::uint64_t seed) {
    config.validate();
    const std::size_t n = config.sample_count();
    std::vector<double> x(n);
    const double fs = config.sample_rate_hz;

    if (config.kind == ExcitationKind::linear_chirp) {
        // phase(t) = 2 pi (f0 t + (f1 - f0) t^2 / (2 T)); d(phase)/dt / 2 pi = f0 at t = 0.
        const double f0 = config.band_low_hz;
        const double sweep_rate = (config.band_high_hz - f0) / config.duration_s;
        for (std::size_t i = 0; i < n; ++i) {
            const double t = static_cast<double>(i) / fs;
            x[i] = config.amplitude * std::sin(2.0 * std::numbers::pi * (f0 * t + 0.5 * sweep_rate * t * t));
        }
        return x;
    }

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (auto& v : x) v = normal(rng);

    // Brick-wall band limit in the frequency domain; DC is always outside the band,
    // so the result is zero-mean.
    detail::RealFft fft(n);
    std::vector<std::complex<double>> spectrum(fft.spectrum_size());
    fft.forward(x, spectrum);
    for (std::size_t k = 0; k < spectrum.size(); ++k) {
        const double f = static_cast<double>(k) * fs / static_cast<double>(n);
        if (f < config.band_low_hz || f > config.band_high_hz) spectrum[k] = 0.0;
    }
    fft.inverse(spectrum, x);

    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(n);
    double power = 0.0;
    for (auto& v : x) {
        v -= mean;
        power += v * v;
    }
    const double rms = std::sqrt(power / static_cast<double>(n));
    if (rms == 0.0) throw ConfigError("excitation: band contains no FFT bins for this duration");
    // Same RMS as a sine of the given amplitude.
    const double scale = config.amplitude / (std::numbers::sqrt2 * rms);
    for (auto& v : x) v *= scale;
    return x;
}

}  // namespace adi
