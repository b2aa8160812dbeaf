#pragma once

#include <complex>
#include <cstddef>
#include <filesystem>
#include <functional>
#include <memory>
#include <span>
#include <vector>

namespace osgood {

/// Real scalar field on the periodic grid of the torus [0, L)^d, n points per
/// axis, stored row-major with axis 0 slowest. Point i sits at x_k = i_k L / n.
/// Immutable; the spectrum is computed on first use.
class GridField {
 public:
  using cplx = std::complex<double>;

  GridField(int d, int n, double L, std::vector<double> values);

  static GridField zeros(int d, int n, double L = 1.0);
  static GridField from_function(int d, int n, double L,
                                 const std::function<double(std::span<const double>)>& f);
  /// Real part of the inverse of normalised Fourier coefficients.
  static GridField from_spectrum(int d, int n, double L, std::span<const cplx> coeffs);

  [[nodiscard]] int d() const { return d_; }
  [[nodiscard]] int n() const { return n_; }
  [[nodiscard]] double L() const { return L_; }
  [[nodiscard]] double spacing() const { return L_ / n_; }
  [[nodiscard]] double cell_volume() const;
  [[nodiscard]] std::size_t size() const { return values_.size(); }
  [[nodiscard]] const std::vector<double>& values() const { return values_; }
  [[nodiscard]] double operator[](std::size_t i) const { return values_[i]; }

  /// Normalised Fourier coefficients f^(k), f = sum_k f^(k) exp(2 pi i k.x / L).
  [[nodiscard]] const std::vector<cplx>& spectrum() const;

  [[nodiscard]] std::vector<int> multi_index(std::size_t flat) const;
  [[nodiscard]] std::size_t flat_index(std::span<const int> idx) const;
  [[nodiscard]] std::vector<double> position(std::size_t flat) const;

  [[nodiscard]] double mean() const;
  [[nodiscard]] double max_abs() const;
  /// |mean| <= 1e-12 max|f| (or the field vanishes).
  [[nodiscard]] bool is_mean_zero() const;
  /// (int |f|^2 dx)^{1/2} over the torus.
  [[nodiscard]] double l2_norm() const;

  [[nodiscard]] GridField operator+(const GridField& other) const;
  [[nodiscard]] GridField operator-(const GridField& other) const;
  [[nodiscard]] GridField scaled(double a) const;
  /// g(x) = f(x + m L / n) for an integer offset m.
  [[nodiscard]] GridField shifted(std::span<const int> offset) const;

  /// Flat binary: int32 d, int32 n, float64 L, then row-major float64 values.
  void save_binary(const std::filesystem::path& path) const;
  static GridField load_binary(const std::filesystem::path& path);
  /// One row per point: coordinates then value.
  void write_csv(const std::filesystem::path& path) const;

 private:
  void check_compatible(const GridField& other) const;

  int d_;
  int n_;
  double L_;
  std::vector<double> values_;
  struct SpectrumCache;
  std::shared_ptr<SpectrumCache> cache_;
};

}  // namespace osgood
