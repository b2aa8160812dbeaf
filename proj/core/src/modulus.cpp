#include "osgood/modulus.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <utility>

#include "osgood/errors.hpp"
#include "osgood/numerics.hpp"

namespace osgood {

namespace {

constexpr double kMaxS = 744.0;   // exp(-744) is the smallest subnormal scale
constexpr double kMinS = -700.0;  // exp(700) stays finite
constexpr double kBisectWidth = 1e-12;
const double kAssocCut = std::exp(-2.0);

double piece_integral(const Modulus& phi, double a, double b) {
  if (a == b) return 0.0;
  if (phi.kind() == ModulusKind::lipschitz) return b - a;
  return numerics::integrate_piecewise([&](double s) { return phi.r_over_phi(s); }, a, b)
      .value;
}

double s_lower(const Modulus& phi) {
  return std::isinf(phi.domain_max()) ? kMinS : -std::log(phi.domain_max());
}

double M_of_s(const Modulus& phi, double s) {
  return piece_integral(phi, -std::log(phi.cutoff()), s);
}

// Finds s with M(exp(-s)) = target, starting from a point s0. M is increasing
// in s. Every evaluation integrates from the cutoff on the same partition as
// R_of, so quadrature error is common to both and cancels in R^-1(R(z)).
double solve_s(const Modulus& phi, double s0, double target) {
  double lo = s0, hi = s0;
  double step = 1.0;
  if (target >= M_of_s(phi, s0)) {
    for (;;) {
      hi = std::min(lo + step, kMaxS);
      if (M_of_s(phi, hi) >= target) break;
      if (hi >= kMaxS) throw BracketError("R_inverse: target beyond the range of R near 0");
      lo = hi;
      step *= 2.0;
    }
  } else {
    const double floor_s = s_lower(phi);
    for (;;) {
      lo = std::max(hi - step, floor_s);
      if (M_of_s(phi, lo) <= target) break;
      if (lo <= floor_s) throw BracketError("R_inverse: target beyond the range of R");
      hi = lo;
      step *= 2.0;
    }
  }
  while (hi - lo > kBisectWidth) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (M_of_s(phi, mid) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

void check_point(const Modulus& phi, double z, const char* what) {
  if (!(z > 0.0) || z > phi.domain_max())
    throw DomainError(std::string(what) + ": argument outside (0, " +
                      std::to_string(phi.domain_max()) + "]");
}

}  // namespace

Modulus Modulus::lipschitz() {
  Modulus m;
  m.kind_ = ModulusKind::lipschitz;
  m.cutoff_ = 1.0;
  m.domain_max_ = std::numeric_limits<double>::infinity();
  m.label_ = "lipschitz";
  return m;
}

Modulus Modulus::log_lipschitz() {
  Modulus m = log_n(1);
  m.kind_ = ModulusKind::log_lipschitz;
  m.label_ = "log_lipschitz";
  return m;
}

Modulus Modulus::log_n(int n) {
  if (n < 1) throw ParameterError("log_n modulus: n must be >= 1");
  const double top = numerics::iterated_exp_raw(n, 1.0);
  if (!std::isfinite(top)) throw ParameterError("log_n modulus: cutoff underflows for this n");
  Modulus m;
  m.kind_ = ModulusKind::log_n_lipschitz;
  m.n_ = n;
  m.cutoff_ = 1.0 / top;
  m.domain_max_ = m.cutoff_;
  m.label_ = "log_" + std::to_string(n) + "_lipschitz";
  return m;
}

Modulus Modulus::power(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ParameterError("power modulus: alpha in (0, 1)");
  Modulus m;
  m.kind_ = ModulusKind::power;
  m.alpha_ = alpha;
  m.cutoff_ = 1.0;
  m.domain_max_ = std::numeric_limits<double>::infinity();
  m.osgood_ = false;
  m.label_ = "power";
  return m;
}

Modulus Modulus::associated(GrowthFunction theta) {
  Modulus m;
  m.kind_ = ModulusKind::associated;
  m.cutoff_ = kAssocCut;
  m.domain_max_ = std::numeric_limits<double>::infinity();
  m.label_ = "associated_" + theta.label();
  m.theta_ = std::move(theta);
  return m;
}

Modulus Modulus::custom(std::function<double(double)> phi, double cutoff, double domain_max,
                        bool osgood, std::string label) {
  if (!phi) throw ParameterError("custom modulus: empty function");
  if (!(cutoff > 0.0) || !(domain_max >= cutoff))
    throw ParameterError("custom modulus: need 0 < cutoff <= domain_max");
  Modulus m;
  m.kind_ = ModulusKind::custom;
  m.cutoff_ = cutoff;
  m.domain_max_ = domain_max;
  m.osgood_ = osgood;
  m.label_ = std::move(label);
  m.fn_ = std::move(phi);
  return m;
}

bool Modulus::has_closed_form() const {
  switch (kind_) {
    case ModulusKind::lipschitz:
    case ModulusKind::log_lipschitz:
    case ModulusKind::log_n_lipschitz:
    case ModulusKind::power:
      return true;
    case ModulusKind::associated:
      return theta_->kind() == GrowthKind::iterated_log && theta_->order() == 1;
    case ModulusKind::custom:
      return false;
  }
  return false;
}

double Modulus::operator()(double r) const {
  switch (kind_) {
    case ModulusKind::lipschitz:
      return r;
    case ModulusKind::log_lipschitz:
    case ModulusKind::log_n_lipschitz: {
      double prod = r;
      double l = 1.0 / r;
      for (int j = 0; j < n_; ++j) {
        l = std::log(l);
        prod *= l;
      }
      return prod;
    }
    case ModulusKind::power:
      return (1.0 - alpha_) * std::pow(r, alpha_);
    case ModulusKind::associated:
      return associated_modulus(*theta_, r);
    case ModulusKind::custom:
      return fn_(r);
  }
  return 0.0;
}

double Modulus::r_over_phi(double s) const {
  switch (kind_) {
    case ModulusKind::lipschitz:
      return 1.0;
    case ModulusKind::log_lipschitz:
    case ModulusKind::log_n_lipschitz: {
      double prod = 1.0;
      double l = s;
      for (int j = 0; j < n_; ++j) {
        prod *= l;
        l = std::log(l);
      }
      return 1.0 / prod;
    }
    case ModulusKind::power:
      return std::exp(-(1.0 - alpha_) * s) / (1.0 - alpha_);
    case ModulusKind::associated: {
      const GrowthFunction& th = *theta_;
      if (s >= 2.0) return 1.0 / ((1.0 + s) * th(1.0 + s));
      return std::exp(2.0 - s) / (3.0 * th(3.0));
    }
    case ModulusKind::custom: {
      const double r = std::exp(-s);
      return r / fn_(r);
    }
  }
  return 0.0;
}

double eval_modulus(const Modulus& phi, double r) {
  check_point(phi, r, "eval_modulus");
  return phi(r);
}

double osgood_M(const Modulus& phi, double z) {
  check_point(phi, z, "osgood_M");
  return M_of_s(phi, -std::log(z));
}

double R_of(const Modulus& phi, double z) { return std::exp(-osgood_M(phi, z)); }

double R_inverse(const Modulus& phi, double y) {
  if (!(y > 0.0) || !std::isfinite(y)) throw DomainError("R_inverse: y must be positive");
  const double s = solve_s(phi, -std::log(phi.cutoff()), -std::log(y));
  return std::exp(-s);
}

std::optional<double> closed_form_R(const Modulus& phi, double z) {
  if (!(z > 0.0) || z > phi.domain_max()) return std::nullopt;
  switch (phi.kind()) {
    case ModulusKind::lipschitz:
      return z;
    case ModulusKind::log_lipschitz:
    case ModulusKind::log_n_lipschitz:
      return 1.0 / numerics::iterated_log_raw(phi.order(), 1.0 / z);
    case ModulusKind::power: {
      const double q = 1.0 - phi.alpha();
      return std::exp((std::pow(z, q) - 1.0) / (q * q));
    }
    case ModulusKind::associated: {
      if (!phi.has_closed_form()) return std::nullopt;
      const double s = -std::log(z);
      if (s >= 2.0)
        return std::exp(-(std::log(std::log1p(s)) - std::log(std::log(3.0))));
      return std::exp((z - kAssocCut) / (3.0 * kAssocCut * std::log(3.0)));
    }
    case ModulusKind::custom:
      return std::nullopt;
  }
  return std::nullopt;
}

std::optional<double> closed_form_R_inverse(const Modulus& phi, double y) {
  if (!(y > 0.0)) return std::nullopt;
  switch (phi.kind()) {
    case ModulusKind::lipschitz:
      return y;
    case ModulusKind::log_lipschitz:
    case ModulusKind::log_n_lipschitz:
      if (y > 1.0) return std::nullopt;
      return 1.0 / numerics::iterated_exp_raw(phi.order(), 1.0 / y);
    case ModulusKind::power: {
      const double q = 1.0 - phi.alpha();
      const double base = 1.0 + q * q * std::log(y);
      if (!(base > 0.0)) return std::nullopt;
      return std::pow(base, 1.0 / q);
    }
    case ModulusKind::associated: {
      if (!phi.has_closed_form()) return std::nullopt;
      const double M = -std::log(y);
      if (M >= 0.0) return std::exp(-std::expm1(std::exp(M) * std::log(3.0)));
      return kAssocCut - M * 3.0 * kAssocCut * std::log(3.0);
    }
    case ModulusKind::custom:
      return std::nullopt;
  }
  return std::nullopt;
}

double propagated_modulus(const Modulus& phi, PropagationContext ctx, double r) {
  if (!(ctx.J >= 0.0)) throw ParameterError("propagated_modulus: J must be >= 0");
  check_point(phi, r, "propagated_modulus");
  if (ctx.J == 0.0) return r;
  const double s_r = -std::log(r);
  const double m_r = M_of_s(phi, s_r);
  try {
    return std::exp(-solve_s(phi, s_r, m_r - ctx.J));
  } catch (const BracketError&) {
    throw RangeError("propagated_modulus: e^J R(r) exceeds the range of R on the modulus domain");
  }
}

double associated_modulus(const GrowthFunction& theta, double r) {
  if (!(r > 0.0)) throw DomainError("associated_modulus: r must be positive");
  if (r < kAssocCut) {
    const double L = 1.0 - std::log(r);
    return r * L * theta(L);
  }
  return kAssocCut * 3.0 * theta(3.0);
}

double log_mu_omega(int n, double t, double rate, double C1, double C2, double r) {
  if (n < 1) throw ParameterError("mu_omega: n must be >= 1");
  if (!(t >= 0.0) || !(rate >= 0.0)) throw ParameterError("mu_omega: t and rate must be >= 0");
  if (!(C1 > 0.0) || !(C2 > 0.0)) throw ParameterError("mu_omega: C1, C2 must be positive");
  if (!(r > 0.0)) throw DomainError("mu_omega: r must be positive");
  const double c = std::exp(-t * rate);
  if (n == 1) return std::log(C1) + c * std::log(r / C2);
  // log(C2/r) computed without forming the quotient
  double y = std::log(C2) - std::log(r);
  for (int j = 1; j < n - 1; ++j) {
    if (!(y > 0.0)) throw DomainError("mu_omega: iterated log undefined");
    y = std::log(y);
  }
  if (!(y > 0.0)) throw DomainError("mu_omega: iterated log must be positive");
  const double w = std::pow(y, c);
  return std::log(C1) - numerics::iterated_exp_raw(n - 2, w);
}

double mu_omega(int n, double t, double rate, double C1, double C2, double r) {
  return std::exp(log_mu_omega(n, t, rate, C1, C2, r));
}

AsymptoticReport asymptotic_compare(int n, double J, double alpha, double a,
                                    std::span<const double> r_grid) {
  if (n < 2) throw ParameterError("asymptotic_compare: n must be >= 2");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw ParameterError("asymptotic_compare: alpha in (0, 1]");
  if (!(a >= 1.0)) throw ParameterError("asymptotic_compare: a must be >= 1");
  const double top = std::exp(-std::numbers::e);
  AsymptoticReport rep;
  for (std::size_t i = 0; i < r_grid.size(); ++i) {
    const double r = r_grid[i];
    if (!(r > 0.0 && r < top)) throw DomainError("asymptotic_compare: r outside (0, e^-e)");
    if (i > 0 && !(r < r_grid[i - 1]))
      throw ParameterError("asymptotic_compare: grid must be decreasing");
    const double lmu = log_mu_omega(n, 1.0, J, 1.0, 1.0, r);
    const double lh = lmu - alpha * std::log(r);
    const double ll = lmu + a * std::log(-std::log(r));
    rep.r.push_back(r);
    rep.log_holder_ratio.push_back(lh);
    rep.log_log_ratio.push_back(ll);
    rep.holder_ratio.push_back(std::exp(lh));
    rep.log_ratio.push_back(std::exp(ll));
  }
  const std::size_t start = r_grid.size() / 2;
  rep.holder_increasing_on_tail = true;
  rep.log_decreasing_on_tail = true;
  for (std::size_t i = start + 1; i < rep.r.size(); ++i) {
    if (!(rep.log_holder_ratio[i] > rep.log_holder_ratio[i - 1]))
      rep.holder_increasing_on_tail = false;
    if (!(rep.log_log_ratio[i] < rep.log_log_ratio[i - 1])) rep.log_decreasing_on_tail = false;
  }
  return rep;
}

}  // namespace osgood
