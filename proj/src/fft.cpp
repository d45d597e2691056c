#include "fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <mutex>
#include <new>
#include <stdexcept>

namespace adi::detail {

namespace {
// FFTW's planner is not thread-safe; execution on distinct plans is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}
}  // namespace

RealFft::RealFft(std::size_t n) : n_(n) {
    if (n == 0) throw std::invalid_argument("RealFft: zero length");
    std::lock_guard lock(planner_mutex());
    real_ = fftw_alloc_real(n);
    auto* spectrum = fftw_alloc_complex(n / 2 + 1);
    spectrum_ = spectrum;
    if (real_ == nullptr || spectrum == nullptr) {
        fftw_free(real_);
        fftw_free(spectrum);
        throw std::bad_alloc();
    }
    const int len = static_cast<int>(n);
    forward_plan_ = fftw_plan_dft_r2c_1d(len, real_, spectrum, FFTW_ESTIMATE);
    inverse_plan_ = fftw_plan_dft_c2r_1d(len, spectrum, real_, FFTW_ESTIMATE);
}

RealFft::~RealFft() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
    fftw_destroy_plan(static_cast<fftw_plan>(inverse_plan_));
    fftw_free(real_);
    fftw_free(spectrum_);
}

void RealFft::forward(std::span<const double> in, std::span<std::complex<double>> out) {
    if (in.size() != n_ || out.size() != spectrum_size())
        throw std::invalid_argument("RealFft::forward: size mismatch");
    std::copy(in.begin(), in.end(), real_);
    fftw_execute(static_cast<fftw_plan>(forward_plan_));
    const auto* spec = static_cast<const fftw_complex*>(spectrum_);
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = {spec[k][0], spec[k][1]};
}

void RealFft::inverse(std::span<const std::complex<double>> in, std::span<double> out) {
    if (in.size() != spectrum_size() || out.size() != n_)
        throw std::invalid_argument("RealFft::inverse: size mismatch");
    auto* spec = static_cast<fftw_complex*>(spectrum_);
    for (std::size_t k = 0; k < in.size(); ++k) {
        spec[k][0] = in[k].real();
        spec[k][1] = in[k].imag();
    }
    fftw_execute(static_cast<fftw_plan>(inverse_plan_));
    const double scale = 1.0 / static_cast<double>(n_);
    for (std::size_t i = 0; i < n_; ++i) out[i] = real_[i] * scale;
}

}  // namespace adi::detail
