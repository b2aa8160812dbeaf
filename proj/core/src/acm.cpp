#include "osgood/acm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "osgood/errors.hpp"
#include "osgood/numerics.hpp"

namespace osgood {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kBumpRadius = 0.45;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double log_add(double a, double b) {
  if (a == -kInf) return b;
  if (b == -kInf) return a;
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

struct Accumulated {
  std::vector<double> log_sums;
  int first_over = 0;
};

Accumulated accumulate(const std::vector<double>& log_terms) {
  Accumulated acc;
  const double log_threshold = std::log(kDivergenceThreshold);
  double running = -kInf;
  for (std::size_t i = 0; i < log_terms.size(); ++i) {
    running = log_add(running, log_terms[i]);
    acc.log_sums.push_back(running);
    if (acc.first_over == 0 && running > log_threshold) acc.first_over = static_cast<int>(i) + 1;
  }
  return acc;
}

bool converged(const std::vector<double>& log_terms, const std::vector<double>& log_sums) {
  if (log_terms.size() < 2) return false;
  return log_terms.back() - log_sums.back() < std::log(1e-12);
}

// C-infinity bump on (-r, r), equal to 1 at 0.
double bump(double x) {
  const double u = x / kBumpRadius;
  if (std::abs(u) >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - u * u));
}

double bump_derivative(double x) {
  const double u = x / kBumpRadius;
  if (std::abs(u) >= 1.0) return 0.0;
  const double w = 1.0 - u * u;
  return bump(x) * (-2.0 * u / kBumpRadius) / (w * w);
}

}  // namespace

std::vector<double> CellFamily::center(int n) const {
  std::vector<double> q(static_cast<std::size_t>(d), 0.0);
  q[0] = center_x.at(static_cast<std::size_t>(n - 1));
  return q;
}

CellFamily make_cells(const GrowthFunction& theta, int N, int d, double sigma) {
  if (N < 1) throw ParameterError("make_cells: N must be >= 1");
  if (d < 2) throw ParameterError("make_cells: d must be >= 2");
  if (!(sigma > 0.0)) throw ParameterError("make_cells: sigma must be positive");
  if (N > 700) throw ParameterError("make_cells: N too large for double exponents");
  CellFamily cells;
  cells.theta = theta;
  cells.N = N;
  cells.d = d;
  cells.sigma = sigma;
  const bool weighted = sigma >= 0.5 * d;
  for (int n = 1; n <= N; ++n) {
    const double L = std::exp(static_cast<double>(n));
    const double log_inv_tau = static_cast<double>(n) + std::log(theta(L));
    const double log_gamma = weighted ? -sigma * L : 0.0;
    cells.log_inv_lambda.push_back(L);
    cells.log_inv_tau.push_back(log_inv_tau);
    cells.log_gamma.push_back(log_gamma);
    cells.lambda.push_back(std::exp(-L));
    cells.tau.push_back(std::exp(-log_inv_tau));
    cells.gamma.push_back(std::exp(log_gamma));
  }
  // q_n = 3 sum_{k > n} lambda_k + 2 lambda_n
  for (int i = 0; i < N; ++i) {
    double tail_over = 0.0;
    double tail = 0.0;
    for (int k = i + 1; k < N; ++k) {
      tail_over += std::exp(cells.log_inv_lambda[i] - cells.log_inv_lambda[k]);
      tail += cells.lambda[k];
    }
    cells.center_over_lambda.push_back(3.0 * tail_over + 2.0);
    cells.center_x.push_back(3.0 * tail + 2.0 * cells.lambda[i]);
  }
  return cells;
}

PackingReport check_packing(const CellFamily& cells) {
  PackingReport rep;
  rep.disjoint = true;
  rep.min_gap_over_lambda = kInf;
  for (int i = 0; i < cells.N; ++i) {
    rep.sum_lambda += cells.lambda[i];
    for (int j = i + 1; j < cells.N; ++j) {
      // cube j lies left of cube i; measure in units of lambda_i
      const double ratio = std::exp(cells.log_inv_lambda[i] - cells.log_inv_lambda[j]);
      const double left_i = cells.center_over_lambda[i] - 0.5;
      const double right_j = cells.center_over_lambda[j] * ratio + 0.5 * ratio;
      const double gap = left_i - right_j;
      if (!(gap > 0.0)) rep.disjoint = false;
      if (j == i + 1) rep.min_gap_over_lambda = std::min(rep.min_gap_over_lambda, gap);
    }
  }
  rep.contained = true;
  for (int i = 0; i < cells.N; ++i) {
    const double half = 0.5 * cells.lambda[i];
    const double lo = cells.lambda[i] * (cells.center_over_lambda[i] - 0.5);
    const double hi = cells.center_x[i] + half;
    if (lo < -0.5 || hi > 0.5 || half > 0.5) rep.contained = false;
  }
  return rep;
}

std::string to_string(SeriesKind kind) {
  switch (kind) {
    case SeriesKind::sum_lambda: return "sum_lambda";
    case SeriesKind::grad_lp: return "grad_lp";
    case SeriesKind::init_sobolev: return "init_sobolev";
    case SeriesKind::blowup: return "blowup";
  }
  return "unknown";
}

std::string to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::bounded_by: return "bounded_by";
    case Verdict::diverging: return "diverging";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "unknown";
}

SeriesReport series_condition(const CellFamily& cells, const SeriesQuery& q) {
  SeriesReport rep;
  const double d = cells.d;
  rep.bound = kInf;
  switch (q.kind) {
    case SeriesKind::sum_lambda:
      for (int i = 0; i < cells.N; ++i) rep.log_terms.push_back(-cells.log_inv_lambda[i]);
      rep.bound = 1.0;
      break;
    case SeriesKind::grad_lp:
      if (!(q.p >= 1.0)) throw ParameterError("series_condition: p must be >= 1");
      for (int i = 0; i < cells.N; ++i)
        rep.log_terms.push_back(-(d / q.p) * cells.log_inv_lambda[i] + cells.log_inv_tau[i]);
      rep.bound = q.bound_constant * q.p * eval_growth(cells.theta, q.p);
      break;
    case SeriesKind::init_sobolev:
      for (int i = 0; i < cells.N; ++i)
        rep.log_terms.push_back(cells.log_gamma[i] -
                                (0.5 * d - cells.sigma) * cells.log_inv_lambda[i]);
      break;
    case SeriesKind::blowup: {
      if (!(q.s > 0.0 && q.s < 1.0)) throw ParameterError("series_condition: s in (0, 1)");
      if (!(q.t > 0.0) || !(q.c > 0.0)) throw ParameterError("series_condition: t, c > 0");
      for (int i = 0; i < cells.N; ++i) {
        const double L = cells.log_inv_lambda[i];
        const double inv_tau = std::exp(cells.log_inv_tau[i]);
        rep.log_terms.push_back((2.0 * q.s - d) * L + 2.0 * q.s * q.c * q.t * inv_tau);
        rep.display_log_terms.push_back((2.0 * q.s - d) * L + inv_tau);
      }
      break;
    }
  }

  const Accumulated acc = accumulate(rep.log_terms);
  rep.log_partial_sums = acc.log_sums;
  rep.first_divergent_n = acc.first_over;
  for (double ls : rep.log_partial_sums) rep.partial_sums.push_back(std::exp(ls));

  if (acc.first_over > 0) {
    rep.verdict = Verdict::diverging;
  } else if (q.kind != SeriesKind::blowup && converged(rep.log_terms, rep.log_partial_sums) &&
             rep.partial_sums.back() <= rep.bound) {
    rep.verdict = Verdict::bounded_by;
  } else {
    rep.verdict = Verdict::inconclusive;
  }

  if (q.kind == SeriesKind::blowup) {
    const Accumulated disp = accumulate(rep.display_log_terms);
    rep.display_log_partial_sums = disp.log_sums;
    rep.display_first_divergent_n = disp.first_over;
    rep.display_verdict = disp.first_over > 0 ? Verdict::diverging : Verdict::inconclusive;
  }
  return rep;
}

double fit_grad_lp_constant(const CellFamily& cells, std::span<const double> ps) {
  double best = 0.0;
  for (double p : ps) {
    SeriesQuery q;
    q.kind = SeriesKind::grad_lp;
    q.p = p;
    const SeriesReport rep = series_condition(cells, q);
    best = std::max(best, rep.partial_sums.back() / (p * eval_growth(cells.theta, p)));
  }
  return best;
}

double condition2_F(const GrowthFunction& theta, double p, int d, double x) {
  return x * theta(x) * std::exp(-(static_cast<double>(d) / p) * x);
}

Condition2Report condition2_bound(const GrowthFunction& theta, double p, int d) {
  if (!(p >= 1.0)) throw ParameterError("condition2_bound: p must be >= 1");
  if (d < 1) throw ParameterError("condition2_bound: d must be >= 1");
  Condition2Report rep;
  if (!std::isfinite(p)) {
    rep.integrable = false;
    rep.xbar_bound = kInf;
    rep.F_max_bound = kInf;
    rep.integral_bound = kInf;
    rep.total_bound = kInf;
    rep.series_sum = kInf;
    return rep;
  }
  const double e = std::numbers::e;
  rep.xbar_bound = (theta.constant_C() + 1.0) * p / d;
  const double hi = std::max(e + 1.0, 10.0 * rep.xbar_bound);
  auto F = [&](double x) { return condition2_F(theta, p, d, x); };
  rep.y_star = numerics::golden_section_max(F, e, hi);
  rep.F_max_bound = F(rep.y_star);
  rep.F_max_ratio = rep.F_max_bound / (p * eval_growth(theta, p));
  const double rate = static_cast<double>(d) / p;
  numerics::QuadratureOptions opts;
  opts.rel_tol = 1e-12;
  opts.abs_tol = 1e-14;
  // z = e + w / rate puts the decay scale at 1 for every p
  rep.integral_bound =
      numerics::integrate([&](double w) { return theta(e + w / rate) * std::exp(-w); }, 0.0,
                          kInf, opts)
          .value *
      std::exp(-rate * e) / rate;
  rep.total_bound = rep.integral_bound + 2.0 * rep.F_max_bound;
  double sum = 0.0;
  for (int n = 1; n <= 50; ++n) {
    const double x = std::exp(static_cast<double>(n));
    sum += std::exp(static_cast<double>(n) + std::log(theta(x)) - rate * x);
  }
  rep.series_sum = sum;
  rep.series_within_bound = sum <= rep.total_bound + 1e-9;
  return rep;
}

int condition2_derivative_sign_changes(const GrowthFunction& theta, double p, int d,
                                       double x_lo, double x_hi, int points) {
  if (points < 3) throw ParameterError("condition2_derivative_sign_changes: need >= 3 points");
  const double rate = static_cast<double>(d) / p;
  auto logG = [&](double x) { return x + std::log(theta(std::exp(x))) - rate * std::exp(x); };
  const double h = (x_hi - x_lo) / (points - 1);
  int changes = 0;
  int last_sign = 0;
  double prev = logG(x_lo);
  for (int i = 1; i < points; ++i) {
    const double cur = logG(x_lo + i * h);
    const double diff = cur - prev;
    const int sign = diff > 0.0 ? 1 : (diff < 0.0 ? -1 : 0);
    if (sign != 0) {
      if (last_sign != 0 && sign != last_sign) ++changes;
      last_sign = sign;
    }
    prev = cur;
  }
  return changes;
}

CellNormBounds cell_norm_bounds(const CellFamily& cells, int n, double p, double sigma,
                                double s, double t, double c, double Cs, double C) {
  if (n < 1 || n > cells.N) throw std::out_of_range("cell_norm_bounds: cell index out of range");
  if (!(p >= 1.0)) throw ParameterError("cell_norm_bounds: p must be >= 1");
  if (!(s > 0.0)) throw ParameterError("cell_norm_bounds: s must be positive");
  const auto i = static_cast<std::size_t>(n - 1);
  const double L = cells.log_inv_lambda[i];
  const double d = cells.d;
  CellNormBounds b;
  b.grad_lp_bound = std::exp(-(d / p) * L + cells.log_inv_tau[i]);
  b.init_hsigma_bound = std::exp(-(0.5 * d - sigma) * L);
  const double inv_tau = std::exp(cells.log_inv_tau[i]);
  b.hs_lower_bound =
      std::exp(-(d - 2.0 * s) * L) * (Cs * Cs * std::exp(2.0 * s * c * t * inv_tau) - C / s);
  return b;
}

std::vector<double> surrogate_mixer(double t, std::span<const double> xi) {
  const std::size_t d = xi.size();
  std::vector<double> v(d, 0.0);
  if (d < 2) return v;
  double rest = 1.0;
  for (std::size_t i = 2; i < d; ++i) rest *= bump(xi[i]);
  if (rest == 0.0) return v;
  const double b1 = bump(xi[0]);
  const double b2 = bump(xi[1]);
  if (b1 == 0.0 || b2 == 0.0) return v;
  const double ct = std::cos(std::numbers::pi * t);
  const double wa = ct * ct;  // weight of the horizontal shear
  const double wb = 1.0 - wa;
  const double S = wa * std::cos(kTwoPi * xi[1]) + wb * std::cos(kTwoPi * xi[0]);
  const double dS1 = -kTwoPi * wb * std::sin(kTwoPi * xi[0]);
  const double dS2 = -kTwoPi * wa * std::sin(kTwoPi * xi[1]);
  const double P = b1 * b2 * rest;
  const double dP1 = bump_derivative(xi[0]) * b2 * rest;
  const double dP2 = b1 * bump_derivative(xi[1]) * rest;
  // stream function psi = P S / (2 pi); v = (d2 psi, -d1 psi, 0, ...)
  v[0] = (dP2 * S + P * dS2) / kTwoPi;
  v[1] = -(dP1 * S + P * dS1) / kTwoPi;
  return v;
}

std::vector<double> surrogate_velocity(const CellFamily& cells, std::span<const double> x,
                                       double t) {
  if (x.size() != static_cast<std::size_t>(cells.d))
    throw ParameterError("surrogate_velocity: dimension mismatch");
  std::vector<double> u(x.size(), 0.0);
  std::vector<double> xi(x.size());
  for (int i = 0; i < cells.N; ++i) {
    const double lam = cells.lambda[i];
    if (lam == 0.0) break;
    bool inside = true;
    for (std::size_t k = 0; k < x.size(); ++k) {
      const double q = k == 0 ? cells.center_x[i] : 0.0;
      xi[k] = (x[k] - q) / lam;
      if (std::abs(xi[k]) >= 0.5) inside = false;
    }
    if (!inside) continue;
    const double amp = std::exp(-cells.log_inv_lambda[i] + cells.log_inv_tau[i]);
    const std::vector<double> v = surrogate_mixer(t * std::exp(cells.log_inv_tau[i]), xi);
    for (std::size_t k = 0; k < x.size(); ++k) u[k] += amp * v[k];
  }
  return u;
}

}  // namespace osgood
