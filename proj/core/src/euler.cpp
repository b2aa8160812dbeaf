#include "osgood/euler.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "osgood/errors.hpp"
#include "osgood/interp.hpp"
#include "osgood/modulus.hpp"
#include "osgood/numerics.hpp"

namespace osgood {

namespace {

using cplx = std::complex<double>;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
const cplx kI(0.0, 1.0);

void require_2d(const GridField& f, const char* what) {
  if (f.d() != 2) throw ParameterError(std::string(what) + ": field must be two-dimensional");
}

// Derivative multiplier along one axis; Nyquist dropped to keep fields real.
double wave(int j, int n, double L) {
  if (2 * j == n) return 0.0;
  return kTwoPi * fft::signed_freq(j, n) / L;
}

double periodic_offset(double a, double b, double L) {
  double d = std::fmod(a - b, L);
  if (d > 0.5 * L) d -= L;
  if (d < -0.5 * L) d += L;
  return d;
}

double smooth_step(double u) {
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / u);
  const double b = std::exp(-1.0 / (1.0 - u));
  return a / (a + b);
}

}  // namespace

std::pair<GridField, GridField> biot_savart(const GridField& omega) {
  require_2d(omega, "biot_savart");
  if (!omega.is_mean_zero()) throw MeanNonzeroError("biot_savart: vorticity must be mean-zero");
  const int n = omega.n();
  const auto& wh = omega.spectrum();
  std::vector<cplx> uh(wh.size()), vh(wh.size());
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const std::size_t idx = static_cast<std::size_t>(i) * n + j;
      const double kx = wave(i, n, omega.L());
      const double ky = wave(j, n, omega.L());
      const double k2 = kx * kx + ky * ky;
      if (k2 == 0.0) continue;
      uh[idx] = kI * ky * wh[idx] / k2;
      vh[idx] = -kI * kx * wh[idx] / k2;
    }
  }
  return {GridField::from_spectrum(2, n, omega.L(), uh),
          GridField::from_spectrum(2, n, omega.L(), vh)};
}

namespace {

GridField combine_derivatives(const GridField& a, const GridField& b, double sa_x, double sa_y,
                              double sb_x, double sb_y) {
  const int n = a.n();
  const auto& ah = a.spectrum();
  const auto& bh = b.spectrum();
  std::vector<cplx> out(ah.size());
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const std::size_t idx = static_cast<std::size_t>(i) * n + j;
      const double kx = wave(i, n, a.L());
      const double ky = wave(j, n, a.L());
      out[idx] = kI * ((sa_x * kx + sa_y * ky) * ah[idx] + (sb_x * kx + sb_y * ky) * bh[idx]);
    }
  }
  return GridField::from_spectrum(2, n, a.L(), out);
}

}  // namespace

GridField spectral_curl(const GridField& u, const GridField& v) {
  require_2d(u, "spectral_curl");
  return combine_derivatives(u, v, 0.0, -1.0, 1.0, 0.0);
}

GridField spectral_divergence(const GridField& u, const GridField& v) {
  require_2d(u, "spectral_divergence");
  return combine_derivatives(u, v, 1.0, 0.0, 0.0, 1.0);
}

EulerSolver::EulerSolver(int n, double L)
    : n_(n), L_(L), half_(n / 2 + 1), cutoff_(n / 3),
      plan_(std::make_unique<fft::RealPlan2D>(n)) {
  if (n < 4 || (n & (n - 1)) != 0) throw ParameterError("EulerSolver: n must be a power of two");
  if (!(L > 0.0)) throw ParameterError("EulerSolver: L must be positive");
  const std::size_t nc = static_cast<std::size_t>(n) * half_;
  const std::size_t nr = static_cast<std::size_t>(n) * n;
  for (auto* v : {&uh_, &vh_, &wxh_, &wyh_, &nh_}) v->assign(nc, cplx{});
  for (auto* v : {&u_, &v_, &wx_, &wy_, &prod_}) v->assign(nr, 0.0);
}

double EulerSolver::kx(int row) const { return wave(row, n_, L_); }
double EulerSolver::ky(int col) const { return wave(col, n_, L_); }

bool EulerSolver::in_mask(int row, int col) const {
  return std::abs(fft::signed_freq(row, n_)) <= cutoff_ && col <= cutoff_;
}

EulerState EulerSolver::make_state(const GridField& omega, double dt) const {
  require_2d(omega, "EulerSolver::make_state");
  if (omega.n() != n_ || omega.L() != L_) throw ParameterError("EulerSolver: grid mismatch");
  if (!omega.is_mean_zero()) throw MeanNonzeroError("EulerSolver: vorticity must be mean-zero");
  if (!(dt > 0.0)) throw ParameterError("EulerSolver: dt must be positive");
  EulerState s;
  s.n = n_;
  s.L = L_;
  s.dt = dt;
  s.omega_hat.assign(static_cast<std::size_t>(n_) * half_, cplx{});
  plan_->forward(omega.values(), s.omega_hat);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < half_; ++j)
      if (!in_mask(i, j) || (i == 0 && j == 0))
        s.omega_hat[static_cast<std::size_t>(i) * half_ + j] = 0.0;
  return s;
}

GridField EulerSolver::vorticity(const EulerState& s) const {
  std::vector<double> w(static_cast<std::size_t>(n_) * n_);
  plan_->inverse(s.omega_hat, w);
  return GridField(2, n_, L_, std::move(w));
}

std::pair<GridField, GridField> EulerSolver::velocity(const EulerState& s) const {
  const std::size_t nc = s.omega_hat.size();
  std::vector<cplx> uh(nc), vh(nc);
  for (int i = 0; i < n_; ++i) {
    for (int j = 0; j < half_; ++j) {
      const std::size_t idx = static_cast<std::size_t>(i) * half_ + j;
      const double k2 = kx(i) * kx(i) + ky(j) * ky(j);
      if (k2 == 0.0) continue;
      uh[idx] = kI * ky(j) * s.omega_hat[idx] / k2;
      vh[idx] = -kI * kx(i) * s.omega_hat[idx] / k2;
    }
  }
  std::vector<double> u(static_cast<std::size_t>(n_) * n_), v(u.size());
  plan_->inverse(uh, u);
  plan_->inverse(vh, v);
  return {GridField(2, n_, L_, std::move(u)), GridField(2, n_, L_, std::move(v))};
}

void EulerSolver::rhs(const std::vector<cplx>& w, std::vector<cplx>& out, double* max_speed) {
  for (int i = 0; i < n_; ++i) {
    const double ax = kx(i);
    for (int j = 0; j < half_; ++j) {
      const std::size_t idx = static_cast<std::size_t>(i) * half_ + j;
      const double ay = ky(j);
      const double k2 = ax * ax + ay * ay;
      const cplx wk = w[idx];
      if (k2 == 0.0) {
        uh_[idx] = vh_[idx] = wxh_[idx] = wyh_[idx] = 0.0;
        continue;
      }
      uh_[idx] = kI * ay * wk / k2;
      vh_[idx] = -kI * ax * wk / k2;
      wxh_[idx] = kI * ax * wk;
      wyh_[idx] = kI * ay * wk;
    }
  }
  plan_->inverse(uh_, u_);
  plan_->inverse(vh_, v_);
  plan_->inverse(wxh_, wx_);
  plan_->inverse(wyh_, wy_);
  double vmax = 0.0;
  for (std::size_t p = 0; p < prod_.size(); ++p) {
    prod_[p] = u_[p] * wx_[p] + v_[p] * wy_[p];
    vmax = std::max(vmax, u_[p] * u_[p] + v_[p] * v_[p]);
  }
  if (max_speed != nullptr) *max_speed = std::sqrt(vmax);
  plan_->forward(prod_, nh_);
  for (int i = 0; i < n_; ++i) {
    for (int j = 0; j < half_; ++j) {
      const std::size_t idx = static_cast<std::size_t>(i) * half_ + j;
      out[idx] = (in_mask(i, j) && !(i == 0 && j == 0)) ? -nh_[idx] : cplx{};
    }
  }
}

void EulerSolver::step(EulerState& s) {
  if (s.n != n_ || s.L != L_) throw ParameterError("EulerSolver::step: grid mismatch");
  const double dt = s.dt;
  const std::size_t nc = s.omega_hat.size();
  std::vector<cplx> k1(nc), k2(nc), k3(nc), k4(nc), tmp(nc);
  double speed = 0.0;
  rhs(s.omega_hat, k1, &speed);
  const double h = L_ / n_;
  if (speed > 0.0 && dt > 0.5 * h / speed)
    throw CflError("EulerSolver::step: dt " + std::to_string(dt) + " exceeds CFL limit " +
                   std::to_string(0.5 * h / speed));
  for (std::size_t i = 0; i < nc; ++i) tmp[i] = s.omega_hat[i] + 0.5 * dt * k1[i];
  rhs(tmp, k2, nullptr);
  for (std::size_t i = 0; i < nc; ++i) tmp[i] = s.omega_hat[i] + 0.5 * dt * k2[i];
  rhs(tmp, k3, nullptr);
  for (std::size_t i = 0; i < nc; ++i) tmp[i] = s.omega_hat[i] + dt * k3[i];
  rhs(tmp, k4, nullptr);
  for (std::size_t i = 0; i < nc; ++i)
    s.omega_hat[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  s.t += dt;
}

void EulerSolver::advance(EulerState& s, double t_end) {
  const double nominal = s.dt;
  while (t_end - s.t > 1e-12 * std::max(1.0, t_end)) {
    const double remaining = t_end - s.t;
    if (remaining < nominal * (1.0 + 1e-9)) {
      s.dt = remaining;
      step(s);
      s.t = t_end;
    } else {
      step(s);
    }
    s.dt = nominal;
  }
}

double EulerSolver::weighted_sum(const std::vector<cplx>& w, bool inverse_laplacian) const {
  std::vector<double> terms;
  terms.reserve(w.size());
  for (int i = 0; i < n_; ++i) {
    for (int j = 0; j < half_; ++j) {
      const std::size_t idx = static_cast<std::size_t>(i) * half_ + j;
      const double mult = (j == 0 || 2 * j == n_) ? 1.0 : 2.0;
      double val = std::norm(w[idx]);
      if (inverse_laplacian) {
        const double k2 = kx(i) * kx(i) + ky(j) * ky(j);
        if (k2 == 0.0) continue;
        val /= k2;
      }
      terms.push_back(mult * val);
    }
  }
  return L_ * L_ * numerics::pairwise_sum(terms);
}

double EulerSolver::energy(const EulerState& s) const {
  return 0.5 * weighted_sum(s.omega_hat, true);
}

double EulerSolver::enstrophy(const EulerState& s) const {
  return 0.5 * weighted_sum(s.omega_hat, false);
}

double EulerSolver::max_speed(const EulerState& s) const {
  const auto [u, v] = velocity(s);
  double m = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) m = std::max(m, std::hypot(u[i], v[i]));
  return m;
}

double EulerSolver::velocity_dist_sq(const EulerState& a, const EulerState& b) const {
  std::vector<cplx> diff(a.omega_hat.size());
  for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = a.omega_hat[i] - b.omega_hat[i];
  return weighted_sum(diff, true);
}

double EulerSolver::vorticity_dist_sq(const EulerState& a, const EulerState& b) const {
  std::vector<cplx> diff(a.omega_hat.size());
  for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = a.omega_hat[i] - b.omega_hat[i];
  return weighted_sum(diff, false);
}

EulerState step(const EulerState& state) {
  EulerSolver solver(state.n, state.L);
  EulerState next = state;
  solver.step(next);
  return next;
}

GridField make_initial_vorticity(const ProfileParams& p, int n, double L) {
  if (!(p.radius > 0.0)) throw ParameterError("make_initial_vorticity: radius must be positive");
  if (!(p.amplitude > 0.0)) throw ParameterError("make_initial_vorticity: amplitude must be positive");
  double core_extent = 0.0;
  switch (p.kind) {
    case ProfileKind::smooth_blob:
      core_extent = 2.0 * p.radius;
      break;
    case ProfileKind::patch_mollified:
      if (!(p.smoothing > 0.0)) throw ParameterError("make_initial_vorticity: smoothing must be positive");
      core_extent = p.radius + p.smoothing;
      break;
    case ProfileKind::log_singular:
      if (p.order < 2 || p.order > 4) throw ParameterError("make_initial_vorticity: order in [2, 4]");
      if (p.depth < 1 || p.depth > 40) throw ParameterError("make_initial_vorticity: depth in [1, 40]");
      if (!(std::ldexp(1.0, -p.depth) < p.radius))
        throw ParameterError("make_initial_vorticity: truncation radius must be below the core radius");
      core_extent = 2.0 * p.radius;
      break;
  }
  // compensation ring supported in (core_extent, 2.5 core_extent)
  const double ring_scale = 3.0 * core_extent;
  if (2.5 * core_extent >= 0.5 * L) throw ParameterError("make_initial_vorticity: profile too wide for the torus");

  const double cx = p.cx * L;
  const double cy = p.cy * L;
  const double floor_r = std::ldexp(1.0, -p.depth);
  const double top = numerics::iterated_exp_raw(p.order, 1.0);
  auto core = [&](double r) {
    switch (p.kind) {
      case ProfileKind::smooth_blob:
        return p.amplitude * std::exp(-0.5 * r * r / (p.radius * p.radius));
      case ProfileKind::patch_mollified:
        return p.amplitude * smooth_step((p.radius - r) / p.smoothing + 0.5);
      case ProfileKind::log_singular: {
        if (r >= 2.0 * p.radius) return 0.0;
        const double arg = top * p.radius / std::max(r, floor_r);
        return p.amplitude * numerics::iterated_log_raw(p.order, arg) *
               smooth_step((2.0 * p.radius - r) / p.radius);
      }
    }
    return 0.0;
  };

  const std::size_t total = static_cast<std::size_t>(n) * n;
  std::vector<double> c(total), ring(total);
  const double h = L / n;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double dx = periodic_offset(i * h, cx, L);
      const double dy = periodic_offset(j * h, cy, L);
      const double r = std::hypot(dx, dy);
      const std::size_t idx = static_cast<std::size_t>(i) * n + j;
      c[idx] = core(r);
      ring[idx] = annular_profile(r / ring_scale);
    }
  }
  const double core_sum = numerics::pairwise_sum(c);
  const double ring_sum = numerics::pairwise_sum(ring);
  if (!(ring_sum > 0.0)) throw ParameterError("make_initial_vorticity: grid too coarse for the ring");
  const double beta = core_sum / ring_sum;
  std::vector<double> w(total);
  for (std::size_t k = 0; k < total; ++k) w[k] = c[k] - beta * ring[k];
  const double residual = numerics::pairwise_sum(w) / static_cast<double>(total);
  for (double& x : w) x -= residual;
  return GridField(2, n, L, std::move(w));
}

double theta_n(int n, double p) {
  if (n < 1) throw ParameterError("theta_n: n must be >= 1");
  double prod = 1.0;
  double l = p;
  for (int j = 1; j < n; ++j) {
    if (!(l > 1.0)) break;
    l = std::log(l);
    prod *= std::max(1.0, l);
  }
  return prod;
}

YNormReport y_norm(const GridField& f, int n) {
  YNormReport rep;
  const double vol = f.cell_volume();
  const double scale = f.max_abs();
  for (double p = 2.0; p <= 64.0; p *= 2.0) {
    double norm = 0.0;
    if (scale > 0.0) {
      std::vector<double> terms(f.size());
      for (std::size_t i = 0; i < f.size(); ++i) terms[i] = std::pow(std::abs(f[i]) / scale, p);
      norm = scale * std::pow(vol * numerics::pairwise_sum(terms), 1.0 / p);
    }
    rep.p.push_back(p);
    rep.lp_norm.push_back(norm);
    rep.ratio.push_back(norm / theta_n(n, p));
    rep.y_norm = std::max(rep.y_norm, rep.ratio.back());
  }
  return rep;
}

double stability_bound(const StabilityParams& q, double rate, double W, double delta, double t) {
  if (!(q.gamma < 0.0)) throw ParameterError("stability_bound: gamma must be negative");
  if (!(delta >= 0.0)) throw ParameterError("stability_bound: delta must be >= 0");
  if (delta == 0.0) return 0.0;
  const double log_mu_delta = log_mu_omega(q.order, t, rate, q.C1, q.C2, delta);
  // log(2 + 2W / mu(delta)) without overflowing the quotient
  const double log_ratio = std::log(2.0 * W) - log_mu_delta;
  const double log_base = log_ratio > 700.0 ? log_ratio + std::log1p(2.0 * std::exp(-log_ratio))
                                            : std::log(2.0 + std::exp(log_ratio));
  const double eps = std::exp(q.gamma * log_base);
  return q.C * std::exp(q.s * log_mu_omega(q.order, t, rate, q.C1, q.C2, eps));
}

StabilityRecord stability_experiment(const GridField& omega01, const GridField& omega02, double T,
                                     double dt, const StabilityParams& q) {
  require_2d(omega01, "stability_experiment");
  if (omega01.n() != omega02.n() || omega01.L() != omega02.L() || omega02.d() != 2)
    throw ParameterError("stability_experiment: grids differ");
  if (!(T >= 0.0)) throw ParameterError("stability_experiment: T must be >= 0");
  if (!(q.output_interval > 0.0)) throw ParameterError("stability_experiment: output_interval must be positive");
  if (!(q.s > 0.0 && q.s <= 1.0)) throw ParameterError("stability_experiment: s in (0, 1]");
  EulerSolver solver(omega01.n(), omega01.L());
  EulerState a = solver.make_state(omega01, dt);
  EulerState b = solver.make_state(omega02, dt);

  StabilityRecord rec;
  const double l1 = omega01.l2_norm();
  const double l2 = omega02.l2_norm();
  rec.max_initial_l2_sq = std::max(l1 * l1, l2 * l2);
  rec.rate = q.M * std::max(y_norm(omega01, q.order).y_norm, y_norm(omega02, q.order).y_norm);
  rec.initial_velocity_dist_sq = solver.velocity_dist_sq(a, b);

  auto record = [&] {
    const double t = a.t;
    rec.times.push_back(t);
    rec.vorticity_dist_sq.push_back(solver.vorticity_dist_sq(a, b));
    rec.velocity_dist_sq.push_back(solver.velocity_dist_sq(a, b));
    const double delta = rec.initial_velocity_dist_sq;
    rec.velocity_bound.push_back(delta > 0.0 ? mu_omega(q.order, t, rec.rate, q.C1, q.C2, delta)
                                             : 0.0);
    rec.bound_rhs.push_back(stability_bound(q, rec.rate, rec.max_initial_l2_sq, delta, t));
    rec.energy1.push_back(solver.energy(a));
    rec.energy2.push_back(solver.energy(b));
    rec.enstrophy1.push_back(solver.enstrophy(a));
    rec.enstrophy2.push_back(solver.enstrophy(b));
  };
  record();
  const int outputs = static_cast<int>(std::floor(T / q.output_interval + 1e-9));
  for (int k = 1; k <= outputs; ++k) {
    const double target = k * q.output_interval;
    solver.advance(a, target);
    solver.advance(b, target);
    record();
  }
  if (T - a.t > 1e-12 * std::max(1.0, T)) {
    solver.advance(a, T);
    solver.advance(b, T);
    record();
  }
  return rec;
}

double fit_stability_constant(const std::vector<StabilityRecord>& runs,
                              const StabilityParams& q) {
  double best = 0.0;
  for (const StabilityRecord& r : runs) {
    for (std::size_t i = 0; i < r.times.size(); ++i) {
      const double unit = r.bound_rhs[i] / q.C;
      if (r.vorticity_dist_sq[i] == 0.0) continue;
      if (!(unit > 0.0)) return std::numeric_limits<double>::infinity();
      best = std::max(best, r.vorticity_dist_sq[i] / unit);
    }
  }
  return best;
}

}  // namespace osgood
