#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <vector>

#include "osgood/grid_field.hpp"
#include "osgood/modulus.hpp"

namespace osgood {

/// Point or velocity in up to three dimensions; unused trailing components are 0.
using Vec = std::array<double, 3>;
using Evaluator = std::function<Vec(double t, const Vec& x)>;

struct VelocityField {
  int d = 2;
  Evaluator eval;
  std::optional<Modulus> modulus;
  double declared_seminorm = 0.0;
  /// Sampling box for audits.
  Vec box_lo{0.0, 0.0, 0.0};
  Vec box_hi{1.0, 1.0, 1.0};

  [[nodiscard]] Vec operator()(double t, const Vec& x) const { return eval(t, x); }
};

VelocityField zero_field(int d);
/// u(x, y) = (-(y - c_y), x - c_x): rigid rotation about c.
VelocityField rotation_field(double cx = 0.0, double cy = 0.0);
/// u(x, y) = (amplitude sin(2 pi y / L), 0).
VelocityField shear_field(double amplitude = 1.0, double L = 1.0);
/// 1D u(x) = x log(1/x) on (0, 1), zero elsewhere; flow x(t) = exp(-e^{-t} log(1/x0)).
VelocityField log_lipschitz_1d();

struct FlowTrace {
  int d = 2;
  std::vector<double> times;
  std::vector<Vec> positions;
  std::vector<Vec> velocities;
  std::vector<double> errors;  // per-step local error estimates
  double accumulated_error = 0.0;

  [[nodiscard]] const Vec& final_position() const { return positions.back(); }
  /// Cubic Hermite dense output at t in [times.front(), times.back()].
  [[nodiscard]] Vec at(double t) const;
  void write_csv(const std::filesystem::path& path) const;
};

/// Adaptive Dormand-Prince 5(4) trajectory from x0 over [0, t1]. Each accepted
/// step has local error below tol (absolute + relative). StepUnderflowError
/// when the step falls below 1e-14.
FlowTrace integrate_flow(const VelocityField& u, const Vec& x0, double t1, double tol);

/// phi^{-1}(x, t): integrates s -> -u(t - s, .) from x over [0, t].
Vec back_to_label(const VelocityField& u, const Vec& x, double t, double tol);

struct TransportOptions {
  double tol = 1e-8;
  int threads = 1;
  /// Force the clamped cubic path even for band-limited data.
  bool force_cubic = false;
};

/// theta(x, t) = theta0(phi^{-1}(x, t)) at every grid node. Positions wrap
/// periodically. Band-limited data is evaluated spectrally, everything else
/// with clamped tensor Catmull-Rom interpolation.
GridField transport_solve(const VelocityField& u, const GridField& theta0, double t,
                          const TransportOptions& opts = {});

/// Interpolated value of a periodic grid field at an arbitrary point.
double interpolate_cubic(const GridField& f, const Vec& x);
/// Exact trigonometric interpolant at an arbitrary point.
double interpolate_spectral(const GridField& f, const Vec& x);

struct PairSample {
  Vec x{};
  Vec y{};
  double r = 0.0;
};

/// Pairs in the field's box whose separations cycle through dyadic scales
/// from half the box diagonal down to 1e-8.
std::vector<PairSample> stratified_pairs(const VelocityField& u, int pairs, std::uint64_t seed,
                                         double r_max = 0.0);

/// Max over stratified pairs of |u(x,t) - u(y,t)| / phi(|x - y|); a lower bound.
double empirical_seminorm(const VelocityField& u, const Modulus& phi, double t, int pairs,
                          std::uint64_t seed = 1);

struct SeparationReport {
  double max_violation = 0.0;  // max of LHS / RHS - 1
  int pairs = 0;
  int violations = 0;
  bool pass = false;
};

/// Checks |phi^{-1}(x,t) - phi^{-1}(y,t)| <= R^{-1}(e^J R(|x - y|)) on stratified pairs,
/// up to a rounding floor of 1e3 ulps of the label size. Separations are drawn
/// below the largest distance whose bound stays inside the range of R.
SeparationReport separation_audit(const VelocityField& u, const Modulus& phi, double J, double t,
                                  int pairs, double tol, std::uint64_t seed = 1);

/// det D(phi^{-1}(., t)) at x by central differences of step h.
double back_to_label_jacobian(const VelocityField& u, const Vec& x, double t, double tol,
                              double h = 1e-4);

}  // namespace osgood
