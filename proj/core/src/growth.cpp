#include "osgood/growth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "osgood/errors.hpp"
#include "osgood/numerics.hpp"

namespace osgood {
namespace {

constexpr double kBaseValue = 0.1;     // Theta(1) for the below-junction line
constexpr double kJunctionValue = 0.5;  // log_m at the junction
constexpr double kFdStep = 1e-5;        // relative central-difference step

// C_m = m + log_m(M_m + 2) with M_m = e_{m-1}(1).
double iterated_log_constant(int m) {
  const double big_m = numerics::iterated_exp_raw(m - 1, 1.0);
  double term = 0.0;
  if (std::isfinite(big_m) && m <= 4) {
    term = numerics::iterated_log_raw(m, big_m + 2.0);
  }
  // For m >= 5, log_m(e_{m-1}(1) + 2) = log(1 + tiny) rounds to zero.
  return static_cast<double>(m) + term;
}

double table_value(const std::vector<std::pair<double, double>>& t, double x) {
  if (t.size() == 1) return t.front().second;
  auto hi = std::upper_bound(t.begin(), t.end(), x,
                             [](double v, const auto& p) { return v < p.first; });
  if (hi == t.begin()) hi = t.begin() + 1;
  if (hi == t.end()) hi = t.end() - 1;
  const auto lo = hi - 1;
  const double w = (x - lo->first) / (hi->first - lo->first);
  return lo->second + w * (hi->second - lo->second);
}

}  // namespace

GrowthFunction GrowthFunction::iterated_log(int m) {
  if (m < 1) throw ParameterError("iterated_log growth requires m >= 1");
  GrowthFunction g;
  g.kind_ = GrowthKind::iterated_log;
  g.m_ = m;
  g.threshold_M_ = numerics::iterated_exp_raw(m - 1, 1.0);
  g.constant_C_ = iterated_log_constant(m);
  g.junction_ = numerics::iterated_exp_raw(m, kJunctionValue);
  g.label_ = "log" + std::to_string(m);
  return g;
}

GrowthFunction GrowthFunction::custom(std::function<double(double)> value, double threshold_M,
                                      double constant_C, std::string label) {
  if (!value) throw ParameterError("custom growth requires a callable");
  if (!(threshold_M > 1.0) || !(constant_C > 0.0)) {
    throw ParameterError("custom growth requires threshold_M > 1 and C > 0");
  }
  GrowthFunction g;
  g.kind_ = GrowthKind::custom;
  g.threshold_M_ = threshold_M;
  g.constant_C_ = constant_C;
  g.fn_ = std::move(value);
  g.label_ = std::move(label);
  return g;
}

GrowthFunction GrowthFunction::from_table(std::vector<std::pair<double, double>> table,
                                          double threshold_M, double constant_C) {
  if (table.size() < 2) throw ParameterError("growth table needs at least two points");
  std::sort(table.begin(), table.end());
  for (std::size_t i = 1; i < table.size(); ++i) {
    if (!(table[i].first > table[i - 1].first)) {
      throw ParameterError("growth table abscissae must be distinct");
    }
    if (!(table[i].second >= table[i - 1].second)) {
      throw ParameterError("growth table must be nondecreasing");
    }
  }
  if (!(table.front().second > 0.0)) throw ParameterError("growth table values must be positive");
  auto shared = table;
  GrowthFunction g = custom([t = std::move(shared)](double x) { return table_value(t, x); },
                            threshold_M, constant_C, "table");
  g.table_ = std::move(table);
  return g;
}

double GrowthFunction::operator()(double x) const {
  if (kind_ == GrowthKind::custom) return fn_(x);
  if (x >= junction_) return numerics::iterated_log_raw(m_, x);
  return kBaseValue + (x - 1.0) * (kJunctionValue - kBaseValue) / (junction_ - 1.0);
}

double GrowthFunction::value_of_product(double x, double y) const {
  if (kind_ == GrowthKind::iterated_log) {
    const double log_xy = std::log(x) + std::log(y);
    if (log_xy >= std::log(junction_)) return numerics::iterated_log_raw(m_ - 1, log_xy);
  }
  return (*this)(x * y);
}

double GrowthFunction::x_times_derivative(double x) const {
  if (kind_ == GrowthKind::iterated_log) {
    if (x <= junction_) return x * (kJunctionValue - kBaseValue) / (junction_ - 1.0);
    double denom = 1.0;
    double lj = x;
    for (int j = 1; j < m_; ++j) {
      lj = std::log(lj);
      denom *= lj;
    }
    return 1.0 / denom;
  }
  const double h = x * kFdStep;
  const double lo = std::max(1.0, x - h);
  return x * (fn_(x + h) - fn_(lo)) / (x + h - lo);
}

double eval_growth(const GrowthFunction& g, double x) {
  if (!(x >= 1.0)) {
    std::ostringstream msg;
    msg << "growth function evaluated at x = " << x << " < 1";
    throw DomainError(msg.str());
  }
  return g(x);
}

double eval_growth_derivative(const GrowthFunction& g, double x) {
  if (g.kind() == GrowthKind::iterated_log) {
    if (!(x > g.junction())) {
      std::ostringstream msg;
      msg << "closed-form derivative of log_" << g.order() << " needs x > " << g.junction();
      throw DomainError(msg.str());
    }
  } else if (!(x > 1.0)) {
    throw DomainError("growth derivative needs x > 1");
  }
  return g.x_times_derivative(x) / x;
}

AdmissibilityReport verify_admissibility(const GrowthFunction& g, std::span<const double> xs,
                                         std::span<const double> ys) {
  const auto below = [&](double v) { return !(v > g.threshold_M()); };
  if (std::any_of(xs.begin(), xs.end(), below) || std::any_of(ys.begin(), ys.end(), below)) {
    throw DomainError("verify_admissibility: grid points must exceed threshold_M");
  }
  AdmissibilityReport rep;
  rep.max_subadd_defect = -std::numeric_limits<double>::infinity();
  rep.max_deriv_ratio = -std::numeric_limits<double>::infinity();
  for (double x : xs) {
    for (double y : ys) {
      rep.max_subadd_defect =
          std::max(rep.max_subadd_defect, g.value_of_product(x, y) - g(x) - g(y));
    }
  }
  const auto ratio = [&](double x) { return g.x_times_derivative(x) / g(x); };
  for (double x : xs) rep.max_deriv_ratio = std::max(rep.max_deriv_ratio, ratio(x));
  for (double y : ys) rep.max_deriv_ratio = std::max(rep.max_deriv_ratio, ratio(y));
  rep.pass = rep.max_subadd_defect <= g.constant_C() && rep.max_deriv_ratio <= g.constant_C();
  return rep;
}

double iterated_log_exp(int m, double x, IterDirection direction) {
  if (m < 1) throw ParameterError("iterated_log_exp requires m >= 1");
  if (direction == IterDirection::log) {
    const double floor = numerics::iterated_exp_raw(m - 1, 0.0);
    if (!(x > floor)) {
      std::ostringstream msg;
      msg << "log_" << m << " is undefined at x = " << x << " (needs x > " << floor << ")";
      throw DomainError(msg.str());
    }
    return numerics::iterated_log_raw(m, x);
  }
  const double out = numerics::iterated_exp_raw(m, x);
  if (!std::isfinite(out)) {
    std::ostringstream msg;
    msg << "e_" << m << "(" << x << ") overflows";
    throw RangeError(msg.str());
  }
  return out;
}

double log_growth_constant(const GrowthFunction& g, std::span<const double> xs) {
  double c = 0.0;
  for (double x : xs) c = std::max(c, eval_growth(g, x) / (std::log(x) + 1.0));
  return c;
}

}  // namespace osgood
