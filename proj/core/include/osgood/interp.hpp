#pragma once

#include <memory>
#include <vector>

#include "osgood/fields.hpp"
#include "osgood/grid_field.hpp"

namespace osgood {

struct FrequencySplitReport {
  double value = 0.0;      // sum_k |f^(k)|^2 / log(2 + |xi|), times L^d
  double nu = 0.0;         // ||f|| / ||f||_{H^-1}
  double bound = 0.0;      // ||f||^2 / log(2 + nu^2)
  double implied_C = 0.0;  // value / bound
};

/// Log-weighted frequency sum of a mean-zero field (MeanNonzeroError otherwise).
FrequencySplitReport frequency_split_value(const GridField& f);

/// C-infinity radial profile equal to 1 on [1/2, 2/3] and supported in (1/3, 5/6).
double annular_profile(double r);

/// Discrete annular mollifier of width delta on the field grid, normalised to
/// unit sum, as normalised Fourier coefficients times the point count (so the
/// multiplier of mode k is returned directly). Cached per grid and delta.
std::shared_ptr<const std::vector<std::complex<double>>> mollifier_multiplier(const GridField& f,
                                                                               double delta);

struct MollifierReport {
  double remainder_sq = 0.0;      // ||f - f * psi_delta||^2
  double shell_functional = 0.0;  // int_{delta/3 <= |h| <= delta} int |f(x+h) - f(x)|^2 / |h|^d
  double ratio = 0.0;             // remainder_sq / shell_functional (0 when both vanish)
};

/// ParameterError unless 3 grid spacings <= delta and the mollifier support fits
/// in half the torus.
MollifierReport mollifier_remainder(const GridField& f, double delta);

struct InterpReport {
  double lhs = 0.0;
  double term_besov = 0.0;
  double term_log = 0.0;
  double implied_C = 0.0;
};

/// Both sides of the log-interpolation inequality for a mean-zero field and an
/// increasing modulus mu on (0, 1].
InterpReport interpolation_sides(const GridField& f, const RadialFn& mu, double eps);

struct EpsilonChoice {
  double epsilon = 0.0;
  double log_epsilon = 0.0;  // gamma log(2 + q), formed without exp/log round trip
  double log_base = 0.0;     // log(2 + q)
};

/// epsilon = (2 + dist_sq / rate_value)^gamma. ParameterError unless gamma < 0,
/// dist_sq >= 0 and rate_value > 0.
EpsilonChoice choose_epsilon(double dist_sq, double rate_value, double gamma);

/// 1 / log(1/r)^2 below 1/e and 1 from 1/e on.
double inverse_log_squared_modulus(double r);

}  // namespace osgood
