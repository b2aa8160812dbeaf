#include "osgood/interp.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <tuple>

#include "osgood/errors.hpp"
#include "osgood/fft.hpp"
#include "osgood/numerics.hpp"

namespace osgood {

namespace {

using cplx = std::complex<double>;
using Multiplier = std::vector<cplx>;

double smooth_step(double u) {
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / u);
  const double b = std::exp(-1.0 / (1.0 - u));
  return a / (a + b);
}

double mode_length(const GridField& f, std::size_t flat) {
  double m2 = 0.0;
  for (int j : f.multi_index(flat)) {
    const double m = fft::signed_freq(j, f.n());
    m2 += m * m;
  }
  return 2.0 * std::numbers::pi * std::sqrt(m2) / f.L();
}

}  // namespace

FrequencySplitReport frequency_split_value(const GridField& f) {
  if (!f.is_mean_zero()) throw MeanNonzeroError("frequency_split_value: field must be mean-zero");
  const auto& fh = f.spectrum();
  std::vector<double> weighted;
  std::vector<double> plain;
  std::vector<double> negative;
  for (std::size_t i = 0; i < fh.size(); ++i) {
    const double xi = mode_length(f, i);
    if (xi == 0.0) continue;
    const double p = std::norm(fh[i]);
    weighted.push_back(p / std::log(2.0 + xi));
    plain.push_back(p);
    negative.push_back(p / (xi * xi));
  }
  const double vol = std::pow(f.L(), f.d());
  FrequencySplitReport rep;
  rep.value = vol * numerics::pairwise_sum(weighted);
  const double l2 = vol * numerics::pairwise_sum(plain);
  const double hm1 = vol * numerics::pairwise_sum(negative);
  if (l2 == 0.0) return rep;
  rep.nu = std::sqrt(l2 / hm1);
  rep.bound = l2 / std::log(2.0 + l2 / hm1);
  rep.implied_C = rep.value / rep.bound;
  return rep;
}

double annular_profile(double r) {
  return smooth_step((r - 1.0 / 3.0) * 6.0) * smooth_step((5.0 / 6.0 - r) * 6.0);
}

std::shared_ptr<const Multiplier> mollifier_multiplier(const GridField& f, double delta) {
  static std::mutex mutex;
  static std::map<std::tuple<int, int, double, double>, std::shared_ptr<const Multiplier>> cache;
  const auto key = std::make_tuple(f.d(), f.n(), f.L(), delta);
  {
    std::lock_guard lock(mutex);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  std::vector<double> kernel(f.size(), 0.0);
  std::vector<double> values;
  for (std::size_t i = 0; i < kernel.size(); ++i) {
    double m2 = 0.0;
    for (int j : f.multi_index(i)) {
      const double m = fft::signed_freq(j, f.n());
      m2 += m * m;
    }
    kernel[i] = annular_profile(std::sqrt(m2) * f.spacing() / delta);
    if (kernel[i] != 0.0) values.push_back(kernel[i]);
  }
  const double total = numerics::pairwise_sum(values);
  if (!(total > 0.0)) throw ParameterError("mollifier: kernel vanishes on this grid");
  for (double& k : kernel) k /= total;
  Multiplier mult = fft::forward(kernel, f.d(), f.n());
  const double count = static_cast<double>(f.size());
  for (cplx& c : mult) c *= count;
  auto shared = std::make_shared<const Multiplier>(std::move(mult));
  std::lock_guard lock(mutex);
  return cache.emplace(key, shared).first->second;
}

MollifierReport mollifier_remainder(const GridField& f, double delta) {
  if (!(delta < 1.0) || !(delta >= 3.0 * f.spacing()))
    throw ParameterError("mollifier_remainder: delta must be in [3 h, 1)");
  if (5.0 * delta / 6.0 >= 0.5 * f.L())
    throw ParameterError("mollifier_remainder: mollifier support exceeds half the torus");
  const auto mult = mollifier_multiplier(f, delta);
  const auto& fh = f.spectrum();
  std::vector<double> terms(fh.size());
  for (std::size_t i = 0; i < fh.size(); ++i) terms[i] = std::norm(fh[i] * (1.0 - (*mult)[i]));
  MollifierReport rep;
  rep.remainder_sq = std::pow(f.L(), f.d()) * numerics::pairwise_sum(terms);
  rep.shell_functional =
      besov_functional(f, [](double) { return 1.0; }, delta, delta / 3.0);
  rep.ratio = rep.shell_functional > 0.0 ? rep.remainder_sq / rep.shell_functional : 0.0;
  return rep;
}

InterpReport interpolation_sides(const GridField& f, const RadialFn& mu, double eps) {
  if (!(eps > 0.0 && eps <= 1.0)) throw ParameterError("interpolation_sides: eps in (0, 1]");
  const FrequencySplitReport split = frequency_split_value(f);
  InterpReport rep;
  const double l2 = f.l2_norm();
  rep.lhs = l2 * l2;
  if (rep.lhs == 0.0) return rep;
  rep.term_besov = mu(eps) * besov_functional(f, mu, 1.0);
  rep.term_log = std::abs(std::log(eps)) * (split.bound > 0.0 ? split.bound : 0.0);
  rep.implied_C = rep.lhs / (rep.term_besov + rep.term_log);
  return rep;
}

EpsilonChoice choose_epsilon(double dist_sq, double rate_value, double gamma) {
  if (!(gamma < 0.0)) throw ParameterError("choose_epsilon: gamma must be negative");
  if (!(dist_sq >= 0.0)) throw ParameterError("choose_epsilon: dist_sq must be >= 0");
  if (!(rate_value > 0.0)) throw ParameterError("choose_epsilon: rate_value must be positive");
  EpsilonChoice c;
  c.log_base = std::log(2.0 + dist_sq / rate_value);
  c.log_epsilon = gamma * c.log_base;
  c.epsilon = std::exp(c.log_epsilon);
  return c;
}

double inverse_log_squared_modulus(double r) {
  if (!(r > 0.0)) throw DomainError("inverse_log_squared_modulus: r must be positive");
  if (r >= std::exp(-1.0)) return 1.0;
  const double l = std::log(r);
  return 1.0 / (l * l);
}

}  // namespace osgood
