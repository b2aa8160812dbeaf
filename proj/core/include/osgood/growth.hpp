#pragma once

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace osgood {

enum class GrowthKind { iterated_log, custom };

/// An admissible growth function: increasing, unbounded, with
///   value(xy) <= value(x) + value(y) + C   for x, y >= M, and
///   x value'(x) <= C value(x)              for x > M.
///
/// iterated_log(m) is log_m x above the junction e_m(1/2) (where log_m = 1/2)
/// and the straight line from (1, 0.1) to that junction below it.
class GrowthFunction {
 public:
  static GrowthFunction iterated_log(int m);
  /// Arbitrary evaluable function on [1, inf); derivative by central differences.
  static GrowthFunction custom(std::function<double(double)> value, double threshold_M,
                               double constant_C, std::string label = "custom");
  /// Piecewise-linear interpolation of (x, value) pairs sorted by x, extended
  /// linearly past both ends.
  static GrowthFunction from_table(std::vector<std::pair<double, double>> table,
                                   double threshold_M, double constant_C);

  [[nodiscard]] GrowthKind kind() const { return kind_; }
  /// Order m of iterated_log(m); 0 for custom.
  [[nodiscard]] int order() const { return m_; }
  [[nodiscard]] double threshold_M() const { return threshold_M_; }
  [[nodiscard]] double constant_C() const { return constant_C_; }
  /// Start of the closed-form branch (iterated_log only; 1 for custom).
  [[nodiscard]] double junction() const { return junction_; }
  [[nodiscard]] const std::string& label() const { return label_; }
  [[nodiscard]] const std::vector<std::pair<double, double>>& table() const { return table_; }

  /// Value without domain checks; callers guarantee x >= 1.
  [[nodiscard]] double operator()(double x) const;
  /// value(x * y) computed without forming the product when the closed form allows.
  [[nodiscard]] double value_of_product(double x, double y) const;
  /// x * value'(x), evaluated stably for very large x.
  [[nodiscard]] double x_times_derivative(double x) const;

 private:
  GrowthKind kind_ = GrowthKind::custom;
  int m_ = 0;
  double threshold_M_ = 1.0;
  double constant_C_ = 1.0;
  double junction_ = 1.0;
  std::string label_;
  std::function<double(double)> fn_;
  std::vector<std::pair<double, double>> table_;
};

/// Theta(x) for x >= 1; DomainError below 1.
double eval_growth(const GrowthFunction& g, double x);

/// Theta'(x). For iterated_log(m) only where the closed form holds
/// (x > junction); DomainError otherwise.
double eval_growth_derivative(const GrowthFunction& g, double x);

struct AdmissibilityReport {
  double max_subadd_defect = 0.0;  // max over pairs of Theta(xy) - Theta(x) - Theta(y)
  double max_deriv_ratio = 0.0;    // max of x Theta'(x) / Theta(x)
  bool pass = false;               // both <= C
};

/// Audits both admissibility conditions on the grid pairs xs x ys.
/// All points must exceed threshold_M (DomainError otherwise).
AdmissibilityReport verify_admissibility(const GrowthFunction& g, std::span<const double> xs,
                                         std::span<const double> ys);

enum class IterDirection { log, exp };

/// log_m x or e_m x. DomainError outside the recursive domain of log_m
/// (x <= e_{m-1}(0)); RangeError when e_m overflows.
double iterated_log_exp(int m, double x, IterDirection direction);

/// Smallest C' with Theta(x) <= C'(log x + 1) on the sample points.
double log_growth_constant(const GrowthFunction& g, std::span<const double> xs);

}  // namespace osgood
