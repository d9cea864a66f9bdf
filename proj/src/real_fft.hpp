#pragma once

#include <complex>
#include <cstddef>
#include <mutex>
#include <span>
#include <vector>

#include <fftw3.h>

namespace gcf::detail {

/// Real-to-half-complex FFT of fixed length. Plans are built once under a
/// global lock (the FFTW planner is not reentrant); execution uses the
/// new-array interface and is safe from any thread.
class RealFft {
 public:
  explicit RealFft(std::size_t n) : n_(n) {
    std::lock_guard<std::mutex> lock(planner_mutex());
    auto* r = fftw_alloc_real(n);
    auto* c = fftw_alloc_complex(n / 2 + 1);
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    forward_ = fftw_plan_dft_r2c_1d(static_cast<int>(n), r, c, flags);
    inverse_ = fftw_plan_dft_c2r_1d(static_cast<int>(n), c, r, flags);
    fftw_free(r);
    fftw_free(c);
  }
  ~RealFft() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(forward_);
    fftw_destroy_plan(inverse_);
  }
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  std::size_t size() const noexcept { return n_; }
  std::size_t spectrum_size() const noexcept { return n_ / 2 + 1; }

  /// out[k] = sum_j in[j] exp(-2 pi i j k / n), k = 0..n/2.
  void forward(const double* in, std::complex<double>* out) const {
    std::vector<double> tmp(in, in + n_);
    fftw_execute_dft_r2c(forward_, tmp.data(), reinterpret_cast<fftw_complex*>(out));
  }

  /// out[j] = sum_k in[k] exp(2 pi i j k / n) over the Hermitian extension
  /// (unnormalised).
  void inverse(const std::complex<double>* in, double* out) const {
    std::vector<std::complex<double>> tmp(in, in + spectrum_size());
    fftw_execute_dft_c2r(inverse_, reinterpret_cast<fftw_complex*>(tmp.data()), out);
  }

 private:
  static std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
  }

  std::size_t n_;
  fftw_plan forward_ = nullptr;
  fftw_plan inverse_ = nullptr;
};

}  // namespace gcf::detail
