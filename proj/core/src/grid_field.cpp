#include "osgood/grid_field.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <mutex>

#include "osgood/errors.hpp"
#include "osgood/fft.hpp"

namespace osgood {

struct GridField::SpectrumCache {
  std::once_flag once;
  std::vector<cplx> coeffs;
};

namespace {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

std::size_t total_points(int d, int n) {
  std::size_t total = 1;
  for (int k = 0; k < d; ++k) total *= static_cast<std::size_t>(n);
  return total;
}

}  // namespace

GridField::GridField(int d, int n, double L, std::vector<double> values)
    : d_(d), n_(n), L_(L), values_(std::move(values)),
      cache_(std::make_shared<SpectrumCache>()) {
  if (d < 1 || d > 3) throw ParameterError("GridField: d must be 1, 2 or 3");
  if (!is_power_of_two(n) || n < 2) throw ParameterError("GridField: n must be a power of two");
  if (!(L > 0.0)) throw ParameterError("GridField: L must be positive");
  if (values_.size() != total_points(d, n))
    throw ParameterError("GridField: value count does not match n^d");
}

GridField GridField::zeros(int d, int n, double L) {
  return GridField(d, n, L, std::vector<double>(total_points(d, n), 0.0));
}

GridField GridField::from_function(int d, int n, double L,
                                   const std::function<double(std::span<const double>)>& f) {
  GridField g = zeros(d, n, L);
  for (std::size_t i = 0; i < g.values_.size(); ++i) {
    const std::vector<double> x = g.position(i);
    g.values_[i] = f(x);
  }
  return g;
}

GridField GridField::from_spectrum(int d, int n, double L, std::span<const cplx> coeffs) {
  return GridField(d, n, L, fft::inverse_real(coeffs, d, n));
}

double GridField::cell_volume() const { return std::pow(spacing(), d_); }

const std::vector<GridField::cplx>& GridField::spectrum() const {
  std::call_once(cache_->once, [&] { cache_->coeffs = fft::forward(values_, d_, n_); });
  return cache_->coeffs;
}

std::vector<int> GridField::multi_index(std::size_t flat) const {
  std::vector<int> idx(static_cast<std::size_t>(d_));
  for (int k = d_ - 1; k >= 0; --k) {
    idx[static_cast<std::size_t>(k)] = static_cast<int>(flat % static_cast<std::size_t>(n_));
    flat /= static_cast<std::size_t>(n_);
  }
  return idx;
}

std::size_t GridField::flat_index(std::span<const int> idx) const {
  std::size_t flat = 0;
  for (int k = 0; k < d_; ++k) {
    int i = idx[static_cast<std::size_t>(k)] % n_;
    if (i < 0) i += n_;
    flat = flat * static_cast<std::size_t>(n_) + static_cast<std::size_t>(i);
  }
  return flat;
}

std::vector<double> GridField::position(std::size_t flat) const {
  const std::vector<int> idx = multi_index(flat);
  std::vector<double> x(idx.size());
  for (std::size_t k = 0; k < idx.size(); ++k) x[k] = idx[k] * spacing();
  return x;
}

double GridField::mean() const {
  double s = 0.0;
  for (double v : values_) s += v;
  return s / static_cast<double>(values_.size());
}

double GridField::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

bool GridField::is_mean_zero() const { return std::abs(mean()) <= 1e-12 * max_abs(); }

double GridField::l2_norm() const {
  double s = 0.0;
  for (double v : values_) s += v * v;
  return std::sqrt(s * cell_volume());
}

void GridField::check_compatible(const GridField& other) const {
  if (other.d_ != d_ || other.n_ != n_ || other.L_ != L_)
    throw ParameterError("GridField: incompatible grids");
}

GridField GridField::operator+(const GridField& other) const {
  check_compatible(other);
  std::vector<double> v(values_);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] += other.values_[i];
  return GridField(d_, n_, L_, std::move(v));
}

GridField GridField::operator-(const GridField& other) const {
  check_compatible(other);
  std::vector<double> v(values_);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] -= other.values_[i];
  return GridField(d_, n_, L_, std::move(v));
}

GridField GridField::scaled(double a) const {
  std::vector<double> v(values_);
  for (double& x : v) x *= a;
  return GridField(d_, n_, L_, std::move(v));
}

GridField GridField::shifted(std::span<const int> offset) const {
  if (offset.size() != static_cast<std::size_t>(d_))
    throw ParameterError("GridField::shifted: offset dimension mismatch");
  std::vector<double> v(values_.size());
  std::vector<int> src(static_cast<std::size_t>(d_));
  for (std::size_t i = 0; i < v.size(); ++i) {
    const std::vector<int> idx = multi_index(i);
    for (std::size_t k = 0; k < idx.size(); ++k) src[k] = idx[k] + offset[k];
    v[i] = values_[flat_index(src)];
  }
  return GridField(d_, n_, L_, std::move(v));
}

void GridField::save_binary(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("GridField: cannot open " + path.string());
  const auto d = static_cast<std::int32_t>(d_);
  const auto n = static_cast<std::int32_t>(n_);
  out.write(reinterpret_cast<const char*>(&d), sizeof d);
  out.write(reinterpret_cast<const char*>(&n), sizeof n);
  out.write(reinterpret_cast<const char*>(&L_), sizeof L_);
  out.write(reinterpret_cast<const char*>(values_.data()),
            static_cast<std::streamsize>(values_.size() * sizeof(double)));
  if (!out) throw std::runtime_error("GridField: write failed for " + path.string());
}

GridField GridField::load_binary(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("GridField: cannot open " + path.string());
  std::int32_t d = 0;
  std::int32_t n = 0;
  double L = 0.0;
  in.read(reinterpret_cast<char*>(&d), sizeof d);
  in.read(reinterpret_cast<char*>(&n), sizeof n);
  in.read(reinterpret_cast<char*>(&L), sizeof L);
  if (!in || d < 1 || d > 3 || n < 2 || n > (1 << 14))
    throw std::runtime_error("GridField: bad header in " + path.string());
  std::vector<double> values(total_points(d, n));
  in.read(reinterpret_cast<char*>(values.data()),
          static_cast<std::streamsize>(values.size() * sizeof(double)));
  if (!in) throw std::runtime_error("GridField: truncated data in " + path.string());
  return GridField(d, n, L, std::move(values));
}

void GridField::write_csv(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("GridField: cannot open " + path.string());
  static const char* names[] = {"x", "y", "z"};
  for (int k = 0; k < d_; ++k) out << names[k] << ',';
  out << "value\n";
  out.precision(17);
  for (std::size_t i = 0; i < values_.size(); ++i) {
    for (double c : position(i)) out << c << ',';
    out << values_[i] << '\n';
  }
}

}  // namespace osgood
