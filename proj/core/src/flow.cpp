#include "osgood/flow.hpp"

#include <algorithm>
#include <boost/numeric/odeint/stepper/runge_kutta_dopri5.hpp>
#include <cmath>
#include <exception>
#include <fstream>
#include <limits>
#include <numbers>
#include <thread>

#include "osgood/errors.hpp"
#include "osgood/fft.hpp"
#include "osgood/rng.hpp"

namespace osgood {

namespace odeint = boost::numeric::odeint;

namespace {

constexpr double kMinStep = 1e-14;
// Local error target as a fraction of the requested tolerance, so the
// accumulated global error stays within a small multiple of tol.
constexpr double kInternalFraction = 0.05;

Vec truncated(Vec v, int d) {
  for (int k = d; k < 3; ++k) v[static_cast<std::size_t>(k)] = 0.0;
  return v;
}

double distance(const Vec& a, const Vec& b, int d) {
  double s = 0.0;
  for (int k = 0; k < d; ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
  return std::sqrt(s);
}

template <class Fn>
void parallel_for(std::size_t count, int threads, Fn&& fn) {
  const std::size_t workers =
      std::max<std::size_t>(1, std::min<std::size_t>(static_cast<std::size_t>(threads), count));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < count; i += workers) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

struct SparseMode {
  std::array<double, 3> freq{};
  std::complex<double> coeff;
};

// Nonzero modes of a well-resolved band-limited field, or empty.
std::vector<SparseMode> band_limited_modes(const GridField& f) {
  const auto& spec = f.spectrum();
  double peak = 0.0;
  for (const auto& c : spec) peak = std::max(peak, std::abs(c));
  std::vector<SparseMode> modes;
  if (peak == 0.0) return modes;
  for (std::size_t i = 0; i < spec.size(); ++i) {
    if (std::abs(spec[i]) <= 1e-13 * peak) continue;
    const std::vector<int> idx = f.multi_index(i);
    SparseMode m;
    m.coeff = spec[i];
    for (std::size_t k = 0; k < idx.size(); ++k) {
      const int fr = fft::signed_freq(idx[k], f.n());
      if (std::abs(fr) > f.n() / 4) return {};
      m.freq[k] = fr;
    }
    modes.push_back(m);
    if (modes.size() > 512) return {};
  }
  return modes;
}

double eval_modes(const std::vector<SparseMode>& modes, const GridField& f, const Vec& x) {
  const double w = 2.0 * std::numbers::pi / f.L();
  double s = 0.0;
  for (const auto& m : modes) {
    double phase = 0.0;
    for (int k = 0; k < f.d(); ++k) phase += m.freq[k] * x[k];
    phase *= w;
    s += m.coeff.real() * std::cos(phase) - m.coeff.imag() * std::sin(phase);
  }
  return s;
}

}  // namespace

VelocityField zero_field(int d) {
  VelocityField u;
  u.d = d;
  u.eval = [](double, const Vec&) { return Vec{0.0, 0.0, 0.0}; };
  return u;
}

VelocityField rotation_field(double cx, double cy) {
  VelocityField u;
  u.d = 2;
  u.eval = [cx, cy](double, const Vec& x) { return Vec{-(x[1] - cy), x[0] - cx, 0.0}; };
  u.modulus = Modulus::lipschitz();
  u.declared_seminorm = 1.0;
  return u;
}

VelocityField shear_field(double amplitude, double L) {
  VelocityField u;
  u.d = 2;
  const double w = 2.0 * std::numbers::pi / L;
  u.eval = [amplitude, w](double, const Vec& x) {
    return Vec{amplitude * std::sin(w * x[1]), 0.0, 0.0};
  };
  u.modulus = Modulus::lipschitz();
  u.declared_seminorm = std::abs(amplitude) * w;
  u.box_hi = {L, L, L};
  return u;
}

VelocityField log_lipschitz_1d() {
  VelocityField u;
  u.d = 1;
  u.eval = [](double, const Vec& x) {
    const double v = x[0] > 0.0 && x[0] < 1.0 ? -x[0] * std::log(x[0]) : 0.0;
    return Vec{v, 0.0, 0.0};
  };
  u.modulus = Modulus::log_lipschitz();
  u.declared_seminorm = 1.0;
  u.box_lo = {0.0, 0.0, 0.0};
  u.box_hi = {std::exp(-1.0), 0.0, 0.0};
  return u;
}

Vec FlowTrace::at(double t) const {
  if (times.empty()) throw ParameterError("FlowTrace::at: empty trace");
  if (t <= times.front()) return positions.front();
  if (t >= times.back()) return positions.back();
  const auto it = std::upper_bound(times.begin(), times.end(), t);
  const std::size_t i = static_cast<std::size_t>(it - times.begin()) - 1;
  const double h = times[i + 1] - times[i];
  const double s = (t - times[i]) / h;
  const double h00 = (1 + 2 * s) * (1 - s) * (1 - s);
  const double h10 = s * (1 - s) * (1 - s);
  const double h01 = s * s * (3 - 2 * s);
  const double h11 = s * s * (s - 1);
  Vec out{};
  for (int k = 0; k < 3; ++k)
    out[k] = h00 * positions[i][k] + h10 * h * velocities[i][k] + h01 * positions[i + 1][k] +
             h11 * h * velocities[i + 1][k];
  return out;
}

void FlowTrace::write_csv(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("FlowTrace: cannot open " + path.string());
  out << "t";
  for (int k = 1; k <= d; ++k) out << ",x" << k;
  out << ",err\n";
  out.precision(17);
  for (std::size_t i = 0; i < times.size(); ++i) {
    out << times[i];
    for (int k = 0; k < d; ++k) out << ',' << positions[i][k];
    out << ',' << errors[i] << '\n';
  }
}

namespace {

// Adaptive Dormand-Prince driver over the first `dim` components of `x`.
// `on_accept(t, x, dxdt, abs_err)` is called after every accepted step.
template <class State, class System, class OnAccept>
void adaptive_run(System&& sys, State x, int dim, double t1, double tol, OnAccept&& on_accept) {
  State dxdt{};
  double t = 0.0;
  sys(x, dxdt, t);
  if (t1 == 0.0) return;
  odeint::runge_kutta_dopri5<State> stepper;
  const double local_tol = kInternalFraction * tol;
  double dt = std::min(t1, 1e-2);
  State xn{}, dxdtn{}, xerr{};
  while (t < t1) {
    const double remaining = t1 - t;
    if (remaining <= 1e-15 * std::max(1.0, t1)) break;
    const bool last = dt >= remaining;
    const double h = last ? remaining : dt;
    stepper.do_step(sys, x, dxdt, t, xn, dxdtn, h, xerr);
    // Error relative to the state size: near a non-Lipschitz point the flow map
    // amplifies absolute errors by the inverse of the distance to it.
    double size = std::numeric_limits<double>::min();
    double abs_err = 0.0;
    bool finite = true;
    for (int k = 0; k < dim; ++k) {
      size = std::max({size, std::abs(x[k]), std::abs(xn[k])});
      abs_err = std::max(abs_err, std::abs(xerr[k]));
      finite = finite && std::isfinite(xn[k]) && std::isfinite(xerr[k]);
    }
    double err = abs_err / (local_tol * size);
    if (!finite || !std::isfinite(err)) err = 1e10;
    if (err <= 1.0) {
      t = last ? t1 : t + h;
      x = xn;
      dxdt = dxdtn;
      on_accept(t, x, dxdt, abs_err);
      const double grow = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
      dt = h * grow;
    } else {
      dt = h * std::max(0.1, 0.9 * std::pow(err, -0.2));
      if (dt < kMinStep)
        throw StepUnderflowError("integrate_flow: step size fell below 1e-14 at t = " +
                                 std::to_string(t));
    }
  }
}

void check_flow_args(const VelocityField& u, double t1, double tol) {
  if (!(tol > 0.0)) throw ParameterError("integrate_flow: tol must be positive");
  if (!(t1 >= 0.0)) throw ParameterError("integrate_flow: t1 must be >= 0");
  if (!u.eval) throw ParameterError("integrate_flow: velocity field has no evaluator");
}

// Back-to-label images of two points, integrated as one system so both share
// a step sequence and their difference is resolved consistently.
std::pair<Vec, Vec> back_to_label_pair(const VelocityField& u, const Vec& x, const Vec& y,
                                       double t, double tol) {
  check_flow_args(u, t, tol);
  using Pair6 = std::array<double, 6>;
  const int d = u.d;
  auto sys = [&](const Pair6& z, Pair6& dz, double s) {
    Vec a{}, b{};
    for (int k = 0; k < d; ++k) {
      a[k] = z[k];
      b[k] = z[3 + k];
    }
    const Vec va = u(t - s, a);
    const Vec vb = u(t - s, b);
    dz.fill(0.0);
    for (int k = 0; k < d; ++k) {
      dz[k] = -va[k];
      dz[3 + k] = -vb[k];
    }
  };
  Pair6 z{};
  for (int k = 0; k < d; ++k) {
    z[k] = x[k];
    z[3 + k] = y[k];
  }
  Pair6 last = z;
  adaptive_run(sys, z, 6, t, tol, [&](double, const Pair6& zs, const Pair6&, double) { last = zs; });
  Vec a{}, b{};
  for (int k = 0; k < d; ++k) {
    a[k] = last[k];
    b[k] = last[3 + k];
  }
  return {a, b};
}

}  // namespace

FlowTrace integrate_flow(const VelocityField& u, const Vec& x0, double t1, double tol) {
  check_flow_args(u, t1, tol);
  const int d = u.d;
  auto sys = [&](const Vec& x, Vec& dxdt, double t) { dxdt = truncated(u(t, x), d); };

  FlowTrace trace;
  trace.d = d;
  const Vec x = truncated(x0, d);
  trace.times.push_back(0.0);
  trace.positions.push_back(x);
  trace.velocities.push_back(truncated(u(0.0, x), d));
  trace.errors.push_back(0.0);
  adaptive_run(sys, x, d, t1, tol, [&](double t, const Vec& xs, const Vec& vs, double err) {
    trace.times.push_back(t);
    trace.positions.push_back(xs);
    trace.velocities.push_back(vs);
    trace.errors.push_back(err);
    trace.accumulated_error += err;
  });
  return trace;
}

Vec back_to_label(const VelocityField& u, const Vec& x, double t, double tol) {
  VelocityField reversed = u;
  reversed.eval = [&u, t](double s, const Vec& y) {
    Vec v = u(t - s, y);
    for (double& c : v) c = -c;
    return v;
  };
  return integrate_flow(reversed, x, t, tol).final_position();
}

double interpolate_spectral(const GridField& f, const Vec& x) {
  const auto& spec = f.spectrum();
  const double w = 2.0 * std::numbers::pi / f.L();
  double s = 0.0;
  for (std::size_t i = 0; i < spec.size(); ++i) {
    const std::vector<int> idx = f.multi_index(i);
    double phase = 0.0;
    for (std::size_t k = 0; k < idx.size(); ++k) phase += fft::signed_freq(idx[k], f.n()) * x[k];
    phase *= w;
    s += spec[i].real() * std::cos(phase) - spec[i].imag() * std::sin(phase);
  }
  return s;
}

double interpolate_cubic(const GridField& f, const Vec& x) {
  const int d = f.d();
  const int n = f.n();
  std::array<int, 3> base{};
  std::array<std::array<double, 4>, 3> w{};
  for (int k = 0; k < d; ++k) {
    const double p = x[k] / f.spacing();
    const double fl = std::floor(p);
    const double s = p - fl;
    base[k] = static_cast<int>(fl);
    // Catmull-Rom weights for nodes base-1 .. base+2
    w[k] = {(-s + 2 * s * s - s * s * s) / 2, (2 - 5 * s * s + 3 * s * s * s) / 2,
            (s + 4 * s * s - 3 * s * s * s) / 2, (-s * s + s * s * s) / 2};
  }
  auto wrap = [n](int i) { return ((i % n) + n) % n; };
  std::vector<int> idx(static_cast<std::size_t>(d));
  double value = 0.0;
  int combos = 1;
  for (int k = 0; k < d; ++k) combos *= 4;
  for (int c = 0; c < combos; ++c) {
    double weight = 1.0;
    int rest = c;
    for (int k = 0; k < d; ++k) {
      const int o = rest % 4;
      rest /= 4;
      idx[k] = wrap(base[k] - 1 + o);
      weight *= w[k][o];
    }
    value += weight * f[f.flat_index(idx)];
  }
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (int c = 0; c < (1 << d); ++c) {
    for (int k = 0; k < d; ++k) idx[k] = wrap(base[k] + ((c >> k) & 1));
    const double v = f[f.flat_index(idx)];
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return std::clamp(value, lo, hi);
}

GridField transport_solve(const VelocityField& u, const GridField& theta0, double t,
                          const TransportOptions& opts) {
  if (u.d != theta0.d()) throw ParameterError("transport_solve: dimension mismatch");
  if (!(t >= 0.0)) throw ParameterError("transport_solve: t must be >= 0");
  if (t == 0.0) return theta0;
  const std::vector<SparseMode> modes =
      opts.force_cubic ? std::vector<SparseMode>{} : band_limited_modes(theta0);
  std::vector<double> out(theta0.size());
  parallel_for(out.size(), opts.threads, [&](std::size_t i) {
    const std::vector<double> p = theta0.position(i);
    Vec x{};
    for (std::size_t k = 0; k < p.size(); ++k) x[k] = p[k];
    const Vec y = back_to_label(u, x, t, opts.tol);
    if (y == x) {
      out[i] = theta0[i];
      return;
    }
    out[i] = modes.empty() ? interpolate_cubic(theta0, y) : eval_modes(modes, theta0, y);
  });
  return GridField(theta0.d(), theta0.n(), theta0.L(), std::move(out));
}

std::vector<PairSample> stratified_pairs(const VelocityField& u, int pairs, std::uint64_t seed,
                                         double r_max) {
  const int d = u.d;
  double diag = 0.0;
  for (int k = 0; k < d; ++k) diag += (u.box_hi[k] - u.box_lo[k]) * (u.box_hi[k] - u.box_lo[k]);
  diag = std::sqrt(diag);
  if (!(r_max > 0.0)) r_max = 0.5 * diag;
  r_max = std::min(r_max, 0.5 * diag);
  constexpr double r_min = 1e-8;
  const int levels = std::max(1, static_cast<int>(std::ceil(std::log2(r_max / r_min))));
  CounterRng rng(seed, 0x5a17);
  auto inside = [&](const Vec& p) {
    for (int k = 0; k < d; ++k)
      if (p[k] <= u.box_lo[k] || p[k] >= u.box_hi[k]) return false;
    return true;
  };
  std::vector<PairSample> out;
  out.reserve(static_cast<std::size_t>(std::max(pairs, 0)));
  for (int i = 0; i < pairs; ++i) {
    const int level = i % levels;
    const double r = std::max(r_min, r_max * std::ldexp(0.5 + 0.5 * rng.uniform(), -level));
    for (int attempt = 0; attempt < 1000; ++attempt) {
      Vec x{}, dir{};
      for (int k = 0; k < d; ++k) x[k] = rng.uniform(u.box_lo[k], u.box_hi[k]);
      double norm = 0.0;
      for (int k = 0; k < d; ++k) {
        dir[k] = d == 1 ? (rng.uniform() < 0.5 ? -1.0 : 1.0) : rng.normal();
        norm += dir[k] * dir[k];
      }
      norm = std::sqrt(norm);
      if (norm == 0.0) continue;
      Vec y{};
      for (int k = 0; k < d; ++k) y[k] = x[k] + r * dir[k] / norm;
      if (!inside(x) || !inside(y)) continue;
      out.push_back({x, y, distance(x, y, d)});
      break;
    }
  }
  return out;
}

double empirical_seminorm(const VelocityField& u, const Modulus& phi, double t, int pairs,
                          std::uint64_t seed) {
  double best = 0.0;
  for (const PairSample& p : stratified_pairs(u, pairs, seed, phi.domain_max())) {
    if (!(p.r > 0.0) || p.r > phi.domain_max()) continue;
    const double du = distance(u(t, p.x), u(t, p.y), u.d);
    best = std::max(best, du / phi(p.r));
  }
  return best;
}

SeparationReport separation_audit(const VelocityField& u, const Modulus& phi, double J, double t,
                                  int pairs, double tol, std::uint64_t seed) {
  SeparationReport rep;
  rep.max_violation = -std::numeric_limits<double>::infinity();
  // Largest distance whose bound stays inside the range of R.
  double r_max = phi.domain_max();
  if (std::isfinite(r_max) && J > 0.0) {
    try {
      const double R_top = R_of(phi, r_max);
      if (std::isfinite(R_top)) r_max = R_inverse(phi, R_top * std::exp(-J)) * (1.0 - 1e-9);
    } catch (const DomainError&) {
      // R undefined at the domain edge: keep the full domain
    } catch (const RangeError&) {
    }
  }
  for (const PairSample& p : stratified_pairs(u, pairs, seed, r_max)) {
    if (!(p.r > 0.0) || p.r > phi.domain_max()) continue;
    double rhs = 0.0;
    try {
      rhs = propagated_modulus(phi, PropagationContext{J}, p.r);
    } catch (const RangeError&) {
      continue;  // bound leaves the modulus domain: vacuous
    }
    const auto [bx, by] = back_to_label_pair(u, p.x, p.y, t, tol);
    const double lhs = distance(bx, by, u.d);
    ++rep.pairs;
    rep.max_violation = std::max(rep.max_violation, lhs / rhs - 1.0);
    // Floating-point floor: each label carries rounding proportional to its size.
    double size = 0.0;
    for (int k = 0; k < u.d; ++k) size = std::max({size, std::abs(bx[k]), std::abs(by[k])});
    const double floor = 1e3 * std::numeric_limits<double>::epsilon() * size;
    if (lhs > rhs * (1.0 + 10.0 * tol) + floor) ++rep.violations;
  }
  rep.pass = rep.pairs > 0 && rep.violations == 0;
  return rep;
}

double back_to_label_jacobian(const VelocityField& u, const Vec& x, double t, double tol,
                              double h) {
  const int d = u.d;
  double J[3][3] = {};
  for (int j = 0; j < d; ++j) {
    Vec xp = x, xm = x;
    xp[j] += h;
    xm[j] -= h;
    const Vec fp = back_to_label(u, xp, t, tol);
    const Vec fm = back_to_label(u, xm, t, tol);
    for (int i = 0; i < d; ++i) J[i][j] = (fp[i] - fm[i]) / (2.0 * h);
  }
  if (d == 1) return J[0][0];
  if (d == 2) return J[0][0] * J[1][1] - J[0][1] * J[1][0];
  return J[0][0] * (J[1][1] * J[2][2] - J[1][2] * J[2][1]) -
         J[0][1] * (J[1][0] * J[2][2] - J[1][2] * J[2][0]) +
         J[0][2] * (J[1][0] * J[2][1] - J[1][1] * J[2][0]);
}

}  // namespace osgood
