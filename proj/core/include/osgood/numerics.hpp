#pragma once

#include <functional>
#include <span>
#include <utility>
#include <vector>

namespace osgood::numerics {

struct QuadratureOptions {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  unsigned max_depth = 30;
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
};

/// Adaptive Gauss-Kronrod (15-point) on [a, b]; either bound may be infinite.
/// Throws QuadratureError when the error estimate exceeds
/// max(abs_tol, rel_tol * |value|).
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           const QuadratureOptions& opts = {});

/// Same as integrate() but over consecutive unit-length pieces of [a, b];
/// used for long smooth intervals where a single adaptive pass would waste depth.
QuadratureResult integrate_piecewise(const std::function<double(double)>& f, double a,
                                     double b, double piece = 1.0,
                                     const QuadratureOptions& opts = {});

/// Root of an increasing function g on [lo, hi] with g(lo) <= target <= g(hi),
/// by bisection down to the given bracket width.
double bisect_increasing(const std::function<double(double)>& g, double target, double lo,
                         double hi, double width = 1e-12);

/// Argmax of a unimodal function on [a, b] by golden-section search.
double golden_section_max(const std::function<double(double)>& f, double a, double b,
                          double tol = 1e-10);

/// n points spaced evenly in log between a and b (inclusive), a, b > 0.
std::vector<double> log_spaced(double a, double b, int n);

/// Least-squares slope and intercept of y on x.
std::pair<double, double> linear_fit(const std::vector<double>& x, const std::vector<double>& y);

/// Sum by recursive halving; the result depends only on the input order.
double pairwise_sum(std::span<const double> xs);

/// log_m x, m-fold natural logarithm (m = 0 is the identity). No domain checks.
double iterated_log_raw(int m, double x);
/// e_m x, m-fold exponential (inverse of iterated_log_raw). May overflow to inf.
double iterated_exp_raw(int m, double x);

}  // namespace osgood::numerics
