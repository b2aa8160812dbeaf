#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "osgood/grid_field.hpp"
#include "osgood/rng.hpp"

namespace osgood {

using RadialFn = std::function<double(double)>;

/// (sum_k |k|^{2s} |f^(k)|^2)^{1/2} L^{d/2}, |k| = 2 pi |m| / L, skipping k = 0
/// unless s = 0. MeanNonzeroError for s < 0 on a field with nonzero mean.
double spectral_norm(const GridField& f, double s);

/// Periodic distance |m| L / n of the minimal representative of a grid offset.
double offset_length(const GridField& f, std::span<const int> offset);

/// Grid offsets m != 0 (components in [-n/2, n/2)) with |h| <= h_max.
std::vector<std::vector<int>> offsets_within(const GridField& f, double h_max);

/// ||f(. + h) - f||^2_{L^2} for every grid offset, via the autocorrelation
/// (exact for grid shifts). Indexed like the field.
std::vector<double> shift_differences(const GridField& f);

/// sum_{0 < |h| <= h_max} vol ||f(. + h) - f||^2 / (|h|^d w(|h|)); offsets
/// shorter than h_min are skipped.
double besov_functional(const GridField& f, const RadialFn& weight, double h_max,
                        double h_min = 0.0);

/// D_s f(x) = (sum_{0 < |h| <= h_max} vol |f(x + h) - f(x)|^2 / |h|^{d + 2s})^{1/2}.
GridField lusin_Ds(const GridField& f, double s, double h_max);

struct LusinAudit {
  double fitted_C = 0.0;  // max |f(x)-f(y)| / (|x-y|^s (D(x) + D(y)))
  int pairs = 0;
};

/// Samples random distinct grid-point pairs and fits the pointwise Lusin constant.
LusinAudit lusin_pointwise_audit(const GridField& f, const GridField& Ds, double s, int pairs,
                                 std::uint64_t seed);

struct WitnessReport {
  double max_ratio_0 = 0.0;  // max |f0(x) - f0(y)| / (2 mu0(|x - y|))
  double max_ratio_t = 0.0;  // max |ft(x) - ft(y)| / (2 mu0(mu_t(|x - y|)))
  int pairs = 0;
  int violations = 0;
  bool witness_ok = false;
};

/// Constant-witness audit of the propagated modulus. Uses every pair of grid
/// points when pairs >= N(N-1)/2, otherwise a seeded sample.
WitnessReport empirical_modulus_witness(const GridField& f0, const GridField& ft,
                                        const RadialFn& mu0, const RadialFn& mu_t, int pairs,
                                        std::uint64_t seed);

struct AofUReport {
  double value = 0.0;         // int_0^1 mu(r) / r dr (inf when divergent)
  double partial_k40 = 0.0;   // int_{2^-40}^1
  bool divergent = false;
};

/// int_0^1 mu(r)/r dr in s = log(1/r). Divergence is flagged when the dyadic
/// increments have not settled by k = 40 and k d_k is not decaying.
AofUReport A_of_u(const RadialFn& mu, double tol = 1e-10);

/// 2 int_0^inf r |{|f| > r}| dr from level-set counts on a K-level midpoint grid.
double layer_cake_l2_squared(const GridField& f, int levels = 4096);

/// Random real field with Fourier support in 0 < |m|_inf <= kmax, unit L2 norm.
GridField random_band_limited(int d, int n, double L, int kmax, CounterRng& rng);

}  // namespace osgood
