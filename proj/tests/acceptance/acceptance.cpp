// Acceptance suite: one PASS/FAIL line per criterion.
//
//   osgood-acceptance                 run every criterion
//   osgood-acceptance --criterion 4   run one (repeatable)
//
// Exit status 0 iff every selected criterion passes.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <limits>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "osgood/acm.hpp"
#include "osgood/errors.hpp"
#include "osgood/euler.hpp"
#include "osgood/fields.hpp"
#include "osgood/flow.hpp"
#include "osgood/growth.hpp"
#include "osgood/interp.hpp"
#include "osgood/modulus.hpp"
#include "osgood/rng.hpp"

using namespace osgood;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << "[failed: " << what << "] ";
    }
  }
};

double rel_err(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

std::vector<double> log_spaced(double lo, double hi, int count) {
  std::vector<double> out(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i)
    out[static_cast<std::size_t>(i)] =
        std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * i / (count - 1));
  return out;
}

// Least-squares slope of y on x.
double slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

std::vector<Modulus> oracle_kinds() {
  return {Modulus::lipschitz(), Modulus::log_lipschitz(), Modulus::log_n(2), Modulus::log_n(3),
          Modulus::power(0.5)};
}

// 1. R and R^-1 by quadrature and bisection against closed forms.
void modulus_oracles(Outcome& out) {
  double worst_R = 0.0, worst_inv = 0.0;
  for (const Modulus& phi : oracle_kinds()) {
    for (double r : log_spaced(1e-12, phi.cutoff() / 2.0, 100)) {
      const double closed = *closed_form_R(phi, r);
      worst_R = std::max(worst_R, rel_err(R_of(phi, r), closed));
      worst_inv = std::max(worst_inv, rel_err(R_inverse(phi, closed), *closed_form_R_inverse(phi, closed)));
    }
  }
  out.detail << "max rel err R " << worst_R << ", R^-1 " << worst_inv << " (limit 1e-6); ";
  out.require(worst_R <= 1e-6 && worst_inv <= 1e-6, "relative error");
}

// 2. R(mu_t(r)) = e^J R(r), wherever e^J R(r) lies in the range of R.
void fixed_point_law(Outcome& out) {
  double worst = 0.0;
  int outside = 0;
  std::ostringstream empty;
  for (double J : {0.0, 0.5, 1.0, 2.0}) {
    int checked = 0;
    for (const Modulus& phi : oracle_kinds()) {
      int here = 0;
      for (double r : log_spaced(1e-12, phi.cutoff() / 2.0, 100)) {
        double mu_t = 0.0;
        try {
          mu_t = propagated_modulus(phi, {J}, r);
        } catch (const RangeError&) {
          ++outside;
          continue;
        }
        worst = std::max(worst, rel_err(R_of(phi, mu_t), std::exp(J) * R_of(phi, r)));
        ++here;
      }
      if (here == 0) empty << " " << phi.label() << "@J=" << J;
      checked += here;
    }
    out.detail << "J=" << J << ": " << checked << " points; ";
    out.require(checked >= 100, "too few admissible points at J = " + std::to_string(J));
  }
  out.detail << outside << " points beyond the range of R (none left for" << empty.str()
             << "); max rel err " << worst << " (limit 1e-8); ";
  out.require(worst <= 1e-8, "relative error");
}

// 3. Cell-cascade series.
void acm_series(Outcome& out) {
  const GrowthFunction theta = GrowthFunction::iterated_log(1);

  const CellFamily cells50 = make_cells(theta, 50, 2, 0.5);
  const std::vector<double> ps{1, 2, 4, 8, 16, 32};
  const double C = fit_grad_lp_constant(cells50, ps);
  bool bounded = std::isfinite(C);
  for (double p : ps) {
    SeriesQuery q;
    q.kind = SeriesKind::grad_lp;
    q.p = p;
    q.bound_constant = C;
    bounded = bounded && series_condition(cells50, q).verdict == Verdict::bounded_by;
  }
  out.detail << "gradient series: fitted C " << C << (bounded ? " bounds" : " fails") << " all p; ";
  out.require(bounded, "gradient series bound");

  const CellFamily cells8 = make_cells(theta, 8, 2, 0.5);
  int diverging = 0, display_diverging = 0;
  std::ostringstream misses;
  for (double s : {0.25, 0.5, 0.75}) {
    for (double t : {0.05, 0.1, 1.0}) {
      SeriesQuery q;
      q.kind = SeriesKind::blowup;
      q.s = s;
      q.t = t;
      q.c = 1.0;
      const SeriesReport rep = series_condition(cells8, q);
      if (rep.first_divergent_n > 0) {
        ++diverging;
      } else {
        misses << " (" << s << "," << t << "): max log partial sum "
               << rep.log_partial_sums.back() << " < log 1e12 = " << std::log(kDivergenceThreshold) << ";";
      }
      if (rep.display_first_divergent_n > 0) ++display_diverging;
    }
  }
  out.detail << "blow-up exceeds 1e12 within N = 8 for " << diverging << "/9 (s,t)"
             << misses.str() << " simplified series: " << display_diverging << "/9; ";
  out.require(diverging == 9, "blow-up partial sums");

  double worst_gap = -std::numeric_limits<double>::infinity();
  for (double p : {3.0, 10.0, 30.0}) {
    const Condition2Report rep = condition2_bound(theta, p, 2);
    worst_gap = std::max(worst_gap, rep.series_sum - rep.total_bound);
    out.require(rep.series_sum <= rep.total_bound + 1e-9, "integral test at p = " + std::to_string(p));
  }
  out.detail << "integral test: max (sum - bound) " << worst_gap << " (slack 1e-9); ";
}

// 4. Flow of u(x) = x log(1/x).
void flow_separation(Outcome& out) {
  const double tol = 1e-10;
  const VelocityField u = log_lipschitz_1d();
  double worst_traj = 0.0;
  for (double s : {0.1, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 27.0}) {
    const double x0 = std::exp(-s);
    const double exact = std::exp(-std::exp(-1.0) * s);
    worst_traj = std::max(worst_traj, std::abs(integrate_flow(u, {x0}, 1.0, tol).final_position()[0] - exact));
  }
  CounterRng rng(4, 0xF10);
  double worst_rt = 0.0;
  for (int k = 0; k < 100; ++k) {
    const double x = rng.uniform(1e-6, 1.0 - 1e-6);
    const double y = integrate_flow(u, {x}, 1.0, tol).final_position()[0];
    worst_rt = std::max(worst_rt, std::abs(back_to_label(u, {y}, 1.0, tol)[0] - x));
  }
  const SeparationReport sep =
      separation_audit(u, *u.modulus, u.declared_seminorm * 1.0, 1.0, 1000, tol, 4);
  out.detail << "trajectory err " << worst_traj << " (limit 1e-9), round trip " << worst_rt
             << " (limit 2e-9), separation " << sep.violations << " violations over " << sep.pairs
             << " pairs; ";
  out.require(worst_traj <= 10 * tol, "trajectory error");
  out.require(worst_rt <= 20 * tol, "round trip");
  out.require(sep.pass && sep.violations == 0 && sep.pairs >= 1000, "separation audit");
}

int wrap(int i, int n) { return ((i % n) + n) % n; }

// Direct double sum over grid offsets and points.
double brute_besov(const GridField& f, const RadialFn& w, double h_max) {
  const int n = f.n();
  const double h = f.spacing();
  const double vol = f.cell_volume();
  double total = 0.0;
  for (int a = -n / 2; a < n / 2; ++a) {
    for (int b = -n / 2; b < n / 2; ++b) {
      const double len = std::hypot(a, b) * h;
      if (len == 0.0 || len > h_max) continue;
      double diff = 0.0;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          const double v = f[static_cast<std::size_t>(wrap(i + a, n)) * n + wrap(j + b, n)] -
                           f[static_cast<std::size_t>(i) * n + j];
          diff += v * v;
        }
      total += vol * vol * diff / (len * len * w(len));
    }
  }
  return total;
}

// 5. Spectral-shift functional against the direct sum; Lusin-Fubini identity.
void besov_equivalence(Outcome& out) {
  const std::vector<RadialFn> weights{[](double) { return 1.0; }, [](double r) { return r; },
                                      [](double r) { return std::sqrt(r); },
                                      inverse_log_squared_modulus};
  double worst = 0.0, worst_lusin = 0.0;
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    CounterRng rng(seed, 5);
    const GridField f = random_band_limited(2, 32, 1.0, 2 + static_cast<int>(seed) * 2, rng);
    for (const RadialFn& w : weights)
      worst = std::max(worst, rel_err(besov_functional(f, w, 1.0), brute_besov(f, w, 1.0)));
    for (double s : {0.25, 0.5, 0.9}) {
      const GridField D = lusin_Ds(f, s, 1.0);
      const double lhs = D.l2_norm() * D.l2_norm();
      worst_lusin = std::max(worst_lusin,
                             rel_err(lhs, brute_besov(f, [s](double r) { return std::pow(r, 2 * s); }, 1.0)));
    }
  }
  out.detail << "max rel err functional " << worst << ", Lusin identity " << worst_lusin
             << " (limit 1e-10); ";
  out.require(worst <= 1e-10, "functional equivalence");
  out.require(worst_lusin <= 1e-10, "Lusin identity");
}

// 6. Log-interpolation inequality with one constant; epsilon identity.
void interpolation_audit(Outcome& out) {
  const std::vector<RadialFn> mus{[](double r) { return r; }, [](double r) { return std::sqrt(r); },
                                  inverse_log_squared_modulus};
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (int i = 0; i < 50; ++i) {
    CounterRng rng(6, 0x1000 + static_cast<std::uint64_t>(i));
    const int kmax = 1 + static_cast<int>(rng.next_u64() % 8);
    const GridField f = random_band_limited(2, 32, 1.0, kmax, rng);
    for (const RadialFn& mu : mus)
      for (double eps : {0.25, 1.0 / 16, 1.0 / 64}) {
        const double c = interpolation_sides(f, mu, eps).implied_C;
        lo = std::min(lo, c);
        hi = std::max(hi, c);
      }
  }
  const double ratio = hi / lo;
  out.detail << "implied C in [" << lo << ", " << hi << "], ratio " << ratio << " (limit 1e3); ";
  out.require(lo > 0.0 && std::isfinite(hi) && ratio <= 1e3, "uniform constant");

  double worst_ulps = 0.0;
  const double ulp = std::numeric_limits<double>::epsilon();
  for (double q : {0.0, 1e-12, 1e-3, 0.5, 1.0, 7.0, 1e6, 1e30})
    for (double gamma : {-1e-3, -0.1, -0.5, -1.0, -3.0}) {
      const EpsilonChoice c = choose_epsilon(q, 1.0, gamma);
      const double identity = std::abs(c.log_epsilon) / c.log_base;
      worst_ulps = std::max(worst_ulps, std::abs(identity - std::abs(gamma)) / (ulp * std::abs(gamma)));
    }
  out.detail << "epsilon identity off by at most " << worst_ulps << " ulp (limit 2); ";
  out.require(worst_ulps <= 2.0, "epsilon identity");
}

GridField from_xy(int n, const std::function<double(double, double)>& fn) {
  return GridField::from_function(2, n, 1.0, [&](std::span<const double> x) { return fn(x[0], x[1]); });
}

GridField unsteady(int n) {
  return from_xy(n, [](double x, double y) {
    return std::cos(kTwoPi * x) * std::cos(kTwoPi * y) + 0.6 * std::sin(kTwoPi * 2 * x) +
           0.3 * std::cos(kTwoPi * (x + 2 * y));
  });
}

double max_diff(const GridField& a, const GridField& b) { return (a - b).max_abs(); }

// 7. Biot-Savart, conservation at n = 256, temporal order.
void euler_solver(Outcome& out) {
  double bs = 0.0;
  for (int n : {32, 256}) {
    const auto [u1, v1] = biot_savart(from_xy(n, [](double x, double) { return std::cos(kTwoPi * x); }));
    bs = std::max(bs, u1.max_abs());
    bs = std::max(bs, max_diff(v1, from_xy(n, [](double x, double) { return std::sin(kTwoPi * x) / kTwoPi; })));
    const auto [u2, v2] = biot_savart(from_xy(n, [](double, double y) { return std::cos(kTwoPi * y); }));
    bs = std::max(bs, max_diff(u2, from_xy(n, [](double, double y) { return -std::sin(kTwoPi * y) / kTwoPi; })));
    bs = std::max(bs, v2.max_abs());
  }
  out.detail << "Biot-Savart err " << bs << " (limit 1e-12); ";
  out.require(bs <= 1e-12, "Biot-Savart closed form");

  EulerSolver solver(256);
  CounterRng rng(7);
  double drift = 0.0;
  for (const GridField& w0 : {random_band_limited(2, 256, 1.0, 6, rng), unsteady(256)}) {
    EulerState s = solver.make_state(w0, 0.0025);
    const double e0 = solver.energy(s), z0 = solver.enstrophy(s);
    solver.advance(s, 1.0);
    drift = std::max({drift, std::abs(solver.energy(s) / e0 - 1), std::abs(solver.enstrophy(s) / z0 - 1)});
  }
  out.detail << "energy/enstrophy drift " << drift << " (limit 1e-6); ";
  out.require(drift <= 1e-6, "conservation");

  EulerSolver small(64);
  const GridField w0 = unsteady(64);
  auto run = [&](double dt) {
    EulerState s = small.make_state(w0, dt);
    small.advance(s, 0.2);
    return small.vorticity(s);
  };
  const GridField a = run(0.02), b = run(0.01), c = run(0.005);
  const double order = std::log2(max_diff(a, b) / max_diff(b, c));
  out.detail << "observed order " << order << " (limit >= 3.7); ";
  out.require(order >= 3.7, "temporal order");
}

// Smooth non-radial background shared by both runs, so the twin runs evolve.
GridField background(int n) {
  return from_xy(n, [](double x, double y) {
    return 0.5 * std::cos(kTwoPi * x) * std::cos(kTwoPi * y) + 0.3 * std::sin(kTwoPi * (x + y));
  });
}

// 8. Stability shape of the Euler twin runs.
void stability_shape(Outcome& out) {
  const int n = 256;
  const double dt = 0.005;
  const GridField bg = background(n);

  // Yudovich: mollified patches, offsets over four decades.
  StabilityParams q;
  q.order = 1;
  q.output_interval = 0.5;
  ProfileParams patch;
  patch.kind = ProfileKind::patch_mollified;
  patch.radius = 0.1;
  patch.smoothing = 0.02;
  const GridField base = make_initial_vorticity(patch, n) + bg;
  const std::vector<double> offsets = log_spaced(1e-6, 1e-2, 9);
  std::vector<StabilityRecord> runs;
  for (double o : offsets) {
    ProfileParams shifted = patch;
    shifted.cx += o;
    runs.push_back(stability_experiment(base, make_initial_vorticity(shifted, n) + bg, 1.0, dt, q));
  }
  const double C = fit_stability_constant(runs, q);
  for (std::size_t k : {std::size_t{1}, std::size_t{2}}) {  // t = 0.5, 1
    std::vector<double> log_delta, log_dist, log_bound;
    for (const StabilityRecord& r : runs) {
      log_delta.push_back(std::log(r.initial_velocity_dist_sq));
      log_dist.push_back(std::log(r.vorticity_dist_sq[k]));
      log_bound.push_back(std::log(C * r.bound_rhs[k] / q.C));
    }
    const double measured = slope(log_delta, log_dist);
    const double predicted = slope(log_delta, log_bound);
    out.detail << "n=1 t=" << runs.front().times[k] << ": slope " << measured << " vs bound exponent "
               << predicted << " (within 20%); ";
    out.require(std::abs(measured / predicted - 1.0) <= 0.2, "Yudovich slope at t = " + std::to_string(runs.front().times[k]));
  }

  // n = 2: log-singular cores, bound constant fitted at t = 0.
  StabilityParams q2 = q;
  q2.order = 2;
  q2.output_interval = 0.1;
  ProfileParams core;
  core.kind = ProfileKind::log_singular;
  core.radius = 0.08;
  core.order = 2;
  const GridField base2 = make_initial_vorticity(core, n) + bg;
  std::vector<StabilityRecord> runs2, initial;
  for (double o : log_spaced(1e-5, 1e-2, 4)) {
    ProfileParams shifted = core;
    shifted.cx += o;
    runs2.push_back(stability_experiment(base2, make_initial_vorticity(shifted, n) + bg, 1.0, dt, q2));
    StabilityRecord first = runs2.back();
    for (auto* v : {&first.times, &first.vorticity_dist_sq, &first.bound_rhs}) v->resize(1);
    initial.push_back(first);
  }
  const double C0 = fit_stability_constant(initial, q2);
  double worst = 0.0;
  for (const StabilityRecord& r : runs2)
    for (std::size_t i = 0; i < r.times.size(); ++i)
      worst = std::max(worst, r.vorticity_dist_sq[i] / (C0 * r.bound_rhs[i] / q2.C));
  out.detail << "n=2: max distance / fitted bound " << worst << " over all outputs (limit 1); ";
  out.require(worst <= 1.0, "n = 2 bound");
}

// 9. Weighted functional of transported data against C |g|^2 A(u).
void transported_functional(Outcome& out) {
  const int n = 64;
  const RadialFn mu0 = [](double r) { return std::sqrt(r); };
  struct Case {
    const char* name;
    VelocityField u;
    GridField theta0;
  };
  CounterRng rng(9);
  std::vector<Case> cases;
  cases.push_back({"shear", shear_field(1.0, 1.0), random_band_limited(2, n, 1.0, 4, rng)});
  cases.push_back({"rotation", rotation_field(0.5, 0.5), from_xy(n, [](double x, double y) {
                     const double r2 = (x - 0.56) * (x - 0.56) + (y - 0.5) * (y - 0.5);
                     return std::exp(-r2 / (2 * 0.04 * 0.04));
                   })});
  const double g_sq = 1.0;  // constant witness g = 1 on the unit torus
  for (const Case& c : cases) {
    const Modulus phi = *c.u.modulus;
    double C0 = 0.0, worst = 0.0, least = 1.0;
    for (int k = 0; k <= 10; ++k) {
      const double t = 0.1 * k;
      const double J = c.u.declared_seminorm * t;
      const RadialFn weight = [&](double r) { return mu0(propagated_modulus(phi, {J}, r)); };
      const GridField theta_t = k == 0 ? c.theta0 : transport_solve(c.u, c.theta0, t, {1e-10});
      const AofUReport A = A_of_u(weight);
      const double C = besov_functional(theta_t, weight, 1.0) / (g_sq * A.value);
      if (k == 0) C0 = C;
      worst = std::max(worst, C / C0);
      least = std::min(least, C / C0);
    }
    out.detail << c.name << ": C(t)/C(0) in [" << least << ", " << worst << "] (upper limit 2); ";
    out.require(worst <= 2.0, std::string(c.name) + " constant drift");
  }
}

struct Criterion {
  int id;
  const char* title;
  double budget_s;  // 0: no runtime limit
  void (*check)(Outcome&);
};

const Criterion kCriteria[] = {
    {1, "modulus calculus oracle equivalence", 10, modulus_oracles},
    {2, "fixed-point law", 0, fixed_point_law},
    {3, "cell-cascade series", 30, acm_series},
    {4, "flow separation", 60, flow_separation},
    {5, "Besov functional brute-force equivalence", 0, besov_equivalence},
    {6, "interpolation lemma audit", 120, interpolation_audit},
    {7, "Euler solver", 0, euler_solver},
    {8, "stability shape", 1800, stability_shape},
    {9, "transported functional end-to-end", 0, transported_functional},
};

}  // namespace

int main(int argc, char** argv) {
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--criterion" && i + 1 < argc) {
      selected.insert(std::atoi(argv[++i]));
    } else {
      std::fprintf(stderr, "usage: %s [--criterion N]...\n", argv[0]);
      return 2;
    }
  }
  bool all_pass = true;
  for (const Criterion& c : kCriteria) {
    if (!selected.empty() && !selected.count(c.id)) continue;
    Outcome out;
    out.detail.precision(4);
    const auto start = std::chrono::steady_clock::now();
    try {
      c.check(out);
    } catch (const std::exception& e) {
      out.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    out.detail << "runtime " << secs << " s";
    if (c.budget_s > 0) {
      out.detail << " (limit " << c.budget_s << " s)";
      out.require(secs < c.budget_s, "runtime");
    }
    std::printf("criterion %d %s  %s: %s\n", c.id, out.pass ? "PASS" : "FAIL", c.title,
                out.detail.str().c_str());
    std::fflush(stdout);
    all_pass = all_pass && out.pass;
  }
  return all_pass ? 0 : 1;
}
