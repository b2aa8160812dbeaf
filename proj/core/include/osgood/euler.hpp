#pragma once

#include <complex>
#include <memory>
#include <utility>
#include <vector>

#include "osgood/fft.hpp"
#include "osgood/grid_field.hpp"

namespace osgood {

/// u = grad^perp Delta^{-1} omega on the 2D torus: u^ = i k_y w^ / |k|^2,
/// v^ = -i k_x w^ / |k|^2. MeanNonzeroError for a field with nonzero mean.
std::pair<GridField, GridField> biot_savart(const GridField& omega);

/// Spectral curl and divergence of a velocity pair (diagnostics).
GridField spectral_curl(const GridField& u, const GridField& v);
GridField spectral_divergence(const GridField& u, const GridField& v);

/// Vorticity in the half-spectrum layout of an n x n real transform:
/// row i has x-frequency signed_freq(i, n), column j has y-frequency j.
struct EulerState {
  int n = 0;
  double L = 1.0;
  double t = 0.0;
  double dt = 0.0;
  std::vector<std::complex<double>> omega_hat;
};

/// Pseudo-spectral solver for omega_t + u . grad omega = 0 with RK4 in time and
/// the 2/3 rule (|m_x|, |m_y| <= n/3) applied to every nonlinear product.
class EulerSolver {
 public:
  explicit EulerSolver(int n, double L = 1.0);

  [[nodiscard]] int n() const { return n_; }
  [[nodiscard]] double L() const { return L_; }

  /// Projects omega onto the dealiased modes. MeanNonzeroError unless mean-zero.
  [[nodiscard]] EulerState make_state(const GridField& omega, double dt) const;
  [[nodiscard]] GridField vorticity(const EulerState& s) const;
  [[nodiscard]] std::pair<GridField, GridField> velocity(const EulerState& s) const;

  /// One RK4 step of size s.dt. CflError when dt > 0.5 h / max|u|.
  void step(EulerState& s);
  /// Steps until s.t reaches t_end (the last step is shortened if needed).
  void advance(EulerState& s, double t_end);

  [[nodiscard]] double energy(const EulerState& s) const;      // (1/2) ||u||^2
  [[nodiscard]] double enstrophy(const EulerState& s) const;   // (1/2) ||omega||^2
  [[nodiscard]] double max_speed(const EulerState& s) const;
  /// ||u1 - u2||^2 and ||omega1 - omega2||^2 over the torus.
  [[nodiscard]] double velocity_dist_sq(const EulerState& a, const EulerState& b) const;
  [[nodiscard]] double vorticity_dist_sq(const EulerState& a, const EulerState& b) const;

  [[nodiscard]] bool in_mask(int row, int col) const;

 private:
  void rhs(const std::vector<std::complex<double>>& w, std::vector<std::complex<double>>& out,
           double* max_speed);
  [[nodiscard]] double kx(int row) const;
  [[nodiscard]] double ky(int col) const;
  [[nodiscard]] double weighted_sum(const std::vector<std::complex<double>>& w,
                                    bool inverse_laplacian) const;

  int n_;
  double L_;
  int half_;
  int cutoff_;
  std::unique_ptr<fft::RealPlan2D> plan_;
  std::vector<std::complex<double>> uh_, vh_, wxh_, wyh_, nh_;
  std::vector<double> u_, v_, wx_, wy_, prod_;
};

/// Convenience: one step with a solver built for the state's grid.
EulerState step(const EulerState& state);

enum class ProfileKind { smooth_blob, patch_mollified, log_singular };

struct ProfileParams {
  ProfileKind kind = ProfileKind::smooth_blob;
  double amplitude = 1.0;
  double radius = 0.05;     // blob width / patch radius / singular core radius r0
  double smoothing = 0.01;  // patch edge width
  double cx = 0.5;          // centre, in units of L
  double cy = 0.5;
  int order = 2;            // n of log_singular
  int depth = 8;            // truncation radius 2^-depth
};

/// Mean-zero initial vorticity on an n x n grid of side L. A smooth negative
/// ring outside the core cancels the mean.
GridField make_initial_vorticity(const ProfileParams& params, int n, double L = 1.0);

/// Theta_n(p) = prod_{j < n} max(1, log_j p); identically 1 for n = 1.
double theta_n(int n, double p);

struct YNormReport {
  std::vector<double> p;
  std::vector<double> lp_norm;
  std::vector<double> ratio;  // ||f||_p / Theta_n(p)
  double y_norm = 0.0;        // max ratio
};

/// Empirical Y_{Theta_n} norm over p in {2, 4, ..., 64}.
YNormReport y_norm(const GridField& f, int n);

struct StabilityParams {
  int order = 1;  // n of Theta_n
  double s = 0.5;
  double C = 1.0;
  double C1 = 1.0;
  double C2 = 1.0;
  double M = 1.0;
  double gamma = -0.5;  // default -1/(2C)
  double output_interval = 0.1;
};

struct StabilityRecord {
  std::vector<double> times;
  std::vector<double> vorticity_dist_sq;
  std::vector<double> velocity_dist_sq;
  std::vector<double> velocity_bound;  // mu(||u01 - u02||^2), the velocity estimate
  std::vector<double> bound_rhs;       // C (mu((2 + 2 W / mu(delta))^gamma))^s
  std::vector<double> energy1, energy2, enstrophy1, enstrophy2;
  double initial_velocity_dist_sq = 0.0;
  double max_initial_l2_sq = 0.0;  // W
  double rate = 0.0;               // M max_i ||omega_0i||_Y
};

/// Right-hand side of the stability bound at time t for initial velocity
/// distance delta (squared norm), with prefactor C.
double stability_bound(const StabilityParams& params, double rate, double W, double delta,
                       double t);

/// Evolves both runs to T with fixed dt, recording at multiples of output_interval.
StabilityRecord stability_experiment(const GridField& omega01, const GridField& omega02,
                                     double T, double dt, const StabilityParams& params);

/// Smallest prefactor C with vorticity_dist_sq <= bound at every record of every run
/// (gamma and the remaining constants held fixed).
double fit_stability_constant(const std::vector<StabilityRecord>& runs,
                              const StabilityParams& params);

}  // namespace osgood
