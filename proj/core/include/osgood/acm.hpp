#pragma once

#include <span>
#include <string>
#include <vector>

#include "osgood/growth.hpp"

namespace osgood {

/// Cell cascade for the loss-of-regularity construction.
///
/// Cell n (1-based) has side lambda_n = exp(-e^n), time scale
/// tau_n = 1 / (e^n Theta(e^n)) and weight gamma_n. The side underflows
/// double precision from n = 7 on, so every quantity is also kept as a log.
struct CellFamily {
  GrowthFunction theta = GrowthFunction::iterated_log(1);
  int N = 0;
  int d = 2;
  double sigma = 0.5;

  std::vector<double> log_inv_lambda;  // e^n
  std::vector<double> log_inv_tau;     // n + log Theta(e^n)
  std::vector<double> log_gamma;
  std::vector<double> lambda;
  std::vector<double> tau;
  std::vector<double> gamma;
  /// First coordinate of each center; the others are 0.
  std::vector<double> center_x;
  /// center_x[n] / lambda[n], finite even when both underflow.
  std::vector<double> center_over_lambda;

  [[nodiscard]] std::vector<double> center(int n) const;
};

CellFamily make_cells(const GrowthFunction& theta, int N, int d, double sigma);

struct PackingReport {
  bool disjoint = false;
  bool contained = false;        // inside [-1/2, 1/2]^d
  double sum_lambda = 0.0;
  double min_gap_over_lambda = 0.0;  // smallest gap between neighbours, in units of the larger side
};

/// Checks disjointness and containment exactly, comparing neighbours in the
/// frame of the larger cube so underflowed sides are still resolved.
PackingReport check_packing(const CellFamily& cells);

enum class SeriesKind { sum_lambda, grad_lp, init_sobolev, blowup };
enum class Verdict { bounded_by, diverging, inconclusive };

std::string to_string(SeriesKind kind);
std::string to_string(Verdict verdict);

struct SeriesQuery {
  SeriesKind kind = SeriesKind::sum_lambda;
  double p = 2.0;
  double s = 0.5;
  double t = 0.1;
  double c = 1.0;
  double bound_constant = 1.0;  // C in C p Theta(p)
};

inline constexpr double kDivergenceThreshold = 1e12;

struct SeriesReport {
  std::vector<double> log_terms;
  std::vector<double> log_partial_sums;
  std::vector<double> partial_sums;  // may be inf
  double bound = 0.0;                // inf when the condition has no explicit bound
  Verdict verdict = Verdict::inconclusive;
  int first_divergent_n = 0;  // first n with partial sum > threshold, 0 if none

  // blowup only: the simplified lower-bound series where the exponent is
  // (2s - d) L + L Theta(L), L = log(1/lambda_n)
  std::vector<double> display_log_terms;
  std::vector<double> display_log_partial_sums;
  Verdict display_verdict = Verdict::inconclusive;
  int display_first_divergent_n = 0;
};

SeriesReport series_condition(const CellFamily& cells, const SeriesQuery& query);

/// Smallest C with sum_n lambda_n^{d/p} / tau_n <= C p Theta(p) for all given p.
double fit_grad_lp_constant(const CellFamily& cells, std::span<const double> ps);

struct Condition2Report {
  double xbar_bound = 0.0;      // (C + 1) p / d
  double y_star = 0.0;          // maximiser of F on [e, max(e + 1, 10 xbar)]
  double F_max_bound = 0.0;     // F(y_star)
  double F_max_ratio = 0.0;     // F_max / (p Theta(p))
  double integral_bound = 0.0;  // int_e^inf Theta(z) exp(-d z / p) dz
  double total_bound = 0.0;     // integral + 2 F_max
  double series_sum = 0.0;      // sum_{n <= 50} F(e^n)
  bool series_within_bound = false;
  bool integrable = true;
};

/// F(x) = x Theta(x) exp(-(d/p) x).
double condition2_F(const GrowthFunction& theta, double p, int d, double x);

Condition2Report condition2_bound(const GrowthFunction& theta, double p, int d);

/// Sign changes of d/dx F(e^x) on a uniform grid of [x_lo, x_hi].
int condition2_derivative_sign_changes(const GrowthFunction& theta, double p, int d,
                                       double x_lo, double x_hi, int points);

struct CellNormBounds {
  double grad_lp_bound = 0.0;     // lambda_n^{d/p} / tau_n
  double init_hsigma_bound = 0.0; // lambda_n^{d/2 - sigma}
  double hs_lower_bound = 0.0;    // lambda_n^{d-2s} (Cs^2 exp(2 s c t / tau_n) - C / s)
};

/// Throws std::out_of_range unless 1 <= n <= N.
CellNormBounds cell_norm_bounds(const CellFamily& cells, int n, double p, double sigma,
                                double s, double t, double c, double Cs, double C);

/// Divergence-free alternating-shear mixer on the unit cube centred at 0,
/// period 1 in time, vanishing outside [-0.45, 0.45]^d and at the origin.
std::vector<double> surrogate_mixer(double t, std::span<const double> xi);

/// sum_n (lambda_n / tau_n) v(t / tau_n, (x - q_n) / lambda_n).
std::vector<double> surrogate_velocity(const CellFamily& cells, std::span<const double> x,
                                       double t);

}  // namespace osgood
