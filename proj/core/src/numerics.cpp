#include "osgood/numerics.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <limits>
#include <sstream>

#include "osgood/errors.hpp"

namespace osgood::numerics {

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           const QuadratureOptions& opts) {
  if (a == b) return {};
  double error = 0.0;
  double l1 = 0.0;
  double value = 0.0;
  if (std::isfinite(a) && std::isfinite(b)) {
    // Boost compares an unscaled error estimate against a scaled tolerance, which
    // never converges on very short intervals; integrate over [0, 1] instead.
    const double width = b - a;
    const auto unit = [&](double u) { return f(a + width * u); };
    value = width * boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
                        unit, 0.0, 1.0, opts.max_depth, opts.rel_tol, &error, &l1);
    error *= std::abs(width);
  } else {
    value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
        f, a, b, opts.max_depth, opts.rel_tol, &error, &l1);
  }
  const double allowed = std::max(opts.abs_tol, opts.rel_tol * std::abs(value));
  if (!std::isfinite(value) || error > allowed) {
    std::ostringstream msg;
    msg << "quadrature did not converge on [" << a << ", " << b << "]: value=" << value
        << " error=" << error << " allowed=" << allowed;
    throw QuadratureError(msg.str());
  }
  return {value, error};
}

QuadratureResult integrate_piecewise(const std::function<double(double)>& f, double a,
                                     double b, double piece, const QuadratureOptions& opts) {
  if (a == b) return {};
  const double sign = b > a ? 1.0 : -1.0;
  double lo = std::min(a, b);
  const double hi = std::max(a, b);
  QuadratureResult total;
  double width = piece;
  while (lo < hi) {
    const double next = std::min(hi, lo + width);
    const QuadratureResult part = integrate(f, lo, next, opts);
    total.value += part.value;
    total.error += part.error;
    lo = next;
    // Integrands here decay or vary slowly in log coordinates; widen pieces
    // geometrically so long intervals stay cheap.
    width *= 1.5;
  }
  total.value *= sign;
  return total;
}

double bisect_increasing(const std::function<double(double)>& g, double target, double lo,
                         double hi, double width) {
  if (!(lo <= hi)) throw BracketError("bisect_increasing: empty bracket");
  double glo = g(lo) - target;
  double ghi = g(hi) - target;
  if (glo > 0.0 || ghi < 0.0) {
    std::ostringstream msg;
    msg << "bisect_increasing: target " << target << " not bracketed by [" << lo << ", "
        << hi << "]";
    throw BracketError(msg.str());
  }
  if (glo == 0.0) return lo;
  if (ghi == 0.0) return hi;
  while (hi - lo > width) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double gm = g(mid) - target;
    if (gm == 0.0) return mid;
    if (gm < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double golden_section_max(const std::function<double(double)>& f, double a, double b,
                          double tol) {
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (std::abs(b - a) > tol * (1.0 + std::abs(a) + std::abs(b))) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

std::vector<double> log_spaced(double a, double b, int n) {
  if (!(a > 0.0 && b > 0.0) || n < 1) throw ParameterError("log_spaced: need a, b > 0, n >= 1");
  std::vector<double> out(static_cast<std::size_t>(n));
  if (n == 1) {
    out[0] = a;
    return out;
  }
  const double la = std::log(a);
  const double lb = std::log(b);
  for (int i = 0; i < n; ++i) {
    out[static_cast<std::size_t>(i)] = std::exp(la + (lb - la) * i / (n - 1));
  }
  out.front() = a;
  out.back() = b;
  return out;
}

std::pair<double, double> linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw ParameterError("linear_fit: need >= 2 pairs");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n;
  const double my = sy / n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw ParameterError("linear_fit: degenerate abscissae");
  const double slope = sxy / sxx;
  return {slope, my - slope * mx};
}

double iterated_log_raw(int m, double x) {
  for (int j = 0; j < m; ++j) x = std::log(x);
  return x;
}

double iterated_exp_raw(int m, double x) {
  for (int j = 0; j < m; ++j) x = std::exp(x);
  return x;
}

double pairwise_sum(std::span<const double> xs) {
  if (xs.size() <= 8) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s;
  }
  const std::size_t mid = xs.size() / 2;
  return pairwise_sum(xs.first(mid)) + pairwise_sum(xs.subspan(mid));
}

}  // namespace osgood::numerics
