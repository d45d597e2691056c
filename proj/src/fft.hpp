#pragma once

#include <complex>
#include <cstddef>
#include <span>

namespace adi::detail {

/// Real-input FFT of fixed length backed by FFTW. Each instance owns its plans
/// and buffers, so separate instances may run concurrently.
class RealFft {
public:
    explicit RealFft(std::size_t n);
    ~RealFft();
    RealFft(const RealFft&) = delete;
    RealFft& operator=(const RealFft&) = delete;

    std::size_t size() const { return n_; }
    std::size_t spectrum_size() const { return n_ / 2 + 1; }

    /// Unnormalized forward transform: out[k] = sum_n in[n] e^{-2 pi i k n / N}.
    void forward(std::span<const double> in, std::span<std::complex<double>> out);
    /// Inverse transform scaled by 1/N, so inverse(forward(x)) == x.
    void inverse(std::span<const std::complex<double>> in, std::span<double> out);

private:
    std::size_t n_;
    double* real_ = nullptr;
    void* spectrum_ = nullptr;
    void* forward_plan_ = nullptr;
    void* inverse_plan_ = nullptr;
};

}  // namespace adi::detail
