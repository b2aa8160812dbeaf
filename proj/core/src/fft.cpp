#include "osgood/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>

namespace osgood::fft {

namespace {

// FFTW's planner is not thread-safe; plans are created once and shared.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct PlanCache {
  std::map<std::tuple<int, int, int>, fftw_plan> plans;
  ~PlanCache() {
    for (auto& [key, plan] : plans) fftw_destroy_plan(plan);
  }
};

fftw_plan c2c_plan(int d, int n, int sign) {
  static PlanCache cache;
  std::lock_guard lock(planner_mutex());
  const auto key = std::make_tuple(d, n, sign);
  auto it = cache.plans.find(key);
  if (it != cache.plans.end()) return it->second;
  std::size_t total = 1;
  std::vector<int> dims(static_cast<std::size_t>(d), n);
  for (int k = 0; k < d; ++k) total *= static_cast<std::size_t>(n);
  auto* a = fftw_alloc_complex(total);
  auto* b = fftw_alloc_complex(total);
  fftw_plan plan = fftw_plan_dft(d, dims.data(), a, b, sign, FFTW_ESTIMATE);
  fftw_free(a);
  fftw_free(b);
  if (plan == nullptr) throw std::runtime_error("fft: planning failed");
  cache.plans.emplace(key, plan);
  return plan;
}

std::size_t checked_size(std::size_t got, int d, int n) {
  if (d < 1 || n < 1) throw std::invalid_argument("fft: bad shape");
  std::size_t total = 1;
  for (int k = 0; k < d; ++k) total *= static_cast<std::size_t>(n);
  if (got != total) throw std::invalid_argument("fft: size does not match n^d");
  return total;
}

std::vector<cplx> run_c2c(const cplx* src, std::size_t total, int d, int n, int sign,
                          double scale) {
  fftw_plan plan = c2c_plan(d, n, sign);
  auto* in = fftw_alloc_complex(total);
  auto* out = fftw_alloc_complex(total);
  std::memcpy(in, src, total * sizeof(cplx));
  fftw_execute_dft(plan, in, out);
  std::vector<cplx> result(total);
  for (std::size_t i = 0; i < total; ++i) result[i] = cplx(out[i][0], out[i][1]) * scale;
  fftw_free(in);
  fftw_free(out);
  return result;
}

}  // namespace

std::vector<cplx> forward(std::span<const double> values, int d, int n) {
  const std::size_t total = checked_size(values.size(), d, n);
  std::vector<cplx> tmp(values.begin(), values.end());
  return run_c2c(tmp.data(), total, d, n, FFTW_FORWARD, 1.0 / static_cast<double>(total));
}

std::vector<cplx> forward(std::span<const cplx> values, int d, int n) {
  const std::size_t total = checked_size(values.size(), d, n);
  return run_c2c(values.data(), total, d, n, FFTW_FORWARD, 1.0 / static_cast<double>(total));
}

std::vector<cplx> inverse(std::span<const cplx> coeffs, int d, int n) {
  const std::size_t total = checked_size(coeffs.size(), d, n);
  return run_c2c(coeffs.data(), total, d, n, FFTW_BACKWARD, 1.0);
}

std::vector<double> inverse_real(std::span<const cplx> coeffs, int d, int n) {
  const std::vector<cplx> c = inverse(coeffs, d, n);
  std::vector<double> out(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) out[i] = c[i].real();
  return out;
}

RealPlan2D::RealPlan2D(int n) : n_(n) {
  if (n < 2 || (n % 2) != 0) throw std::invalid_argument("RealPlan2D: n must be even");
  const std::size_t nr = static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
  const std::size_t nc = static_cast<std::size_t>(n) * static_cast<std::size_t>(half());
  real_buf_ = fftw_alloc_real(nr);
  auto* cbuf = fftw_alloc_complex(nc);
  cplx_buf_ = cbuf;
  std::lock_guard lock(planner_mutex());
  plan_fwd_ = fftw_plan_dft_r2c_2d(n, n, real_buf_, cbuf, FFTW_ESTIMATE);
  plan_inv_ = fftw_plan_dft_c2r_2d(n, n, cbuf, real_buf_, FFTW_ESTIMATE);
  if (plan_fwd_ == nullptr || plan_inv_ == nullptr)
    throw std::runtime_error("RealPlan2D: planning failed");
}

RealPlan2D::~RealPlan2D() {
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_));
  fftw_destroy_plan(static_cast<fftw_plan>(plan_inv_));
  fftw_free(real_buf_);
  fftw_free(cplx_buf_);
}

void RealPlan2D::forward(std::span<const double> in, std::span<cplx> out) {
  const std::size_t nr = static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_);
  const std::size_t nc = static_cast<std::size_t>(n_) * static_cast<std::size_t>(half());
  if (in.size() != nr || out.size() != nc) throw std::invalid_argument("RealPlan2D: size");
  std::memcpy(real_buf_, in.data(), nr * sizeof(double));
  fftw_execute(static_cast<fftw_plan>(plan_fwd_));
  auto* c = static_cast<fftw_complex*>(cplx_buf_);
  const double scale = 1.0 / static_cast<double>(nr);
  for (std::size_t i = 0; i < nc; ++i) out[i] = cplx(c[i][0], c[i][1]) * scale;
}

void RealPlan2D::inverse(std::span<const cplx> in, std::span<double> out) {
  const std::size_t nr = static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_);
  const std::size_t nc = static_cast<std::size_t>(n_) * static_cast<std::size_t>(half());
  if (out.size() != nr || in.size() != nc) throw std::invalid_argument("RealPlan2D: size");
  // c2r destroys its input, so copy into the plan buffer every time
  std::memcpy(cplx_buf_, in.data(), nc * sizeof(cplx));
  fftw_execute(static_cast<fftw_plan>(plan_inv_));
  std::memcpy(out.data(), real_buf_, nr * sizeof(double));
}

}  // namespace osgood::fft
