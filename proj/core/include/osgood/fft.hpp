#pragma once

#include <complex>
#include <span>
#include <vector>

namespace osgood::fft {

using cplx = std::complex<double>;

/// Normalised forward transform of a d-dimensional n^d array (row-major):
/// out[k] = n^-d sum_x in[x] exp(-2 pi i k.x / n), so in[x] = sum_k out[k] exp(+...).
std::vector<cplx> forward(std::span<const double> values, int d, int n);
std::vector<cplx> forward(std::span<const cplx> values, int d, int n);

/// Unnormalised inverse: out[x] = sum_k in[k] exp(2 pi i k.x / n).
std::vector<cplx> inverse(std::span<const cplx> coeffs, int d, int n);
/// Real part of inverse().
std::vector<double> inverse_real(std::span<const cplx> coeffs, int d, int n);

/// Signed frequency of index j on an n-point axis: j for j < n/2, j - n otherwise.
inline int signed_freq(int j, int n) { return j < n / 2 ? j : j - n; }

/// Reusable real-to-complex / complex-to-real plans for an n x n grid.
/// Spectra use the half layout n x (n/2 + 1) and the same normalisation as forward().
class RealPlan2D {
 public:
  explicit RealPlan2D(int n);
  ~RealPlan2D();
  RealPlan2D(const RealPlan2D&) = delete;
  RealPlan2D& operator=(const RealPlan2D&) = delete;

  [[nodiscard]] int n() const { return n_; }
  [[nodiscard]] int half() const { return n_ / 2 + 1; }

  void forward(std::span<const double> in, std::span<cplx> out);
  void inverse(std::span<const cplx> in, std::span<double> out);

 private:
  int n_;
  double* real_buf_ = nullptr;
  void* cplx_buf_ = nullptr;
  void* plan_fwd_ = nullptr;
  void* plan_inv_ = nullptr;
};

}  // namespace osgood::fft
