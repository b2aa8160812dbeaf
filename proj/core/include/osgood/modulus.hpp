#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "osgood/growth.hpp"

namespace osgood {

enum class ModulusKind { lipschitz, log_lipschitz, log_n_lipschitz, power, associated, custom };

/// A modulus of continuity phi on (0, domain_max), normalised so the Osgood
/// integral M(z) = int_z^m dr / phi(r) vanishes at the cutoff m.
///
/// Cutoffs keep every closed-form antiderivative on one branch:
///   lipschitz m = 1, log_lipschitz m = 1/e, log_n m = 1/e_n(1),
///   power m = 1, associated m = e^-2.
/// Kinds whose phi is defined on all of (0, inf) (lipschitz, power,
/// associated) extend M, R and R^-1 past m.
class Modulus {
 public:
  static Modulus lipschitz();
  static Modulus log_lipschitz();
  /// z log(1/z) log_2(1/z) ... log_n(1/z); n = 1 is log_lipschitz.
  static Modulus log_n(int n);
  /// (1 - alpha) z^alpha, alpha in (0, 1). Not Osgood.
  static Modulus power(double alpha);
  /// phi_Theta for an admissible growth function.
  static Modulus associated(GrowthFunction theta);
  static Modulus custom(std::function<double(double)> phi, double cutoff, double domain_max,
                        bool osgood, std::string label = "custom");

  [[nodiscard]] ModulusKind kind() const { return kind_; }
  [[nodiscard]] int order() const { return n_; }
  [[nodiscard]] double alpha() const { return alpha_; }
  [[nodiscard]] const std::optional<GrowthFunction>& growth() const { return theta_; }
  [[nodiscard]] double cutoff() const { return cutoff_; }
  [[nodiscard]] double domain_max() const { return domain_max_; }
  [[nodiscard]] bool is_osgood() const { return osgood_; }
  [[nodiscard]] const std::string& label() const { return label_; }
  [[nodiscard]] bool has_closed_form() const;

  /// phi(r) without domain checks.
  [[nodiscard]] double operator()(double r) const;
  /// r / phi(r) at r = exp(-s): the Osgood integrand in log coordinates.
  [[nodiscard]] double r_over_phi(double s) const;

 private:
  ModulusKind kind_ = ModulusKind::custom;
  int n_ = 0;
  double alpha_ = 0.0;
  double cutoff_ = 1.0;
  double domain_max_ = 1.0;
  bool osgood_ = true;
  std::string label_;
  std::optional<GrowthFunction> theta_;
  std::function<double(double)> fn_;
};

/// Accumulated seminorm J = int_0^t [u(s)]_phi ds.
struct PropagationContext {
  double J = 0.0;
};

double eval_modulus(const Modulus& phi, double r);

/// M(z) = int_z^m dr / phi(r) by adaptive quadrature (negative for z > m).
double osgood_M(const Modulus& phi, double z);
/// R(z) = exp(-M(z)).
double R_of(const Modulus& phi, double z);
/// Solves R(z) = y by bracketing and bisection in log z.
double R_inverse(const Modulus& phi, double y);

/// Closed-form R / R^-1 when the kind has one.
std::optional<double> closed_form_R(const Modulus& phi, double z);
std::optional<double> closed_form_R_inverse(const Modulus& phi, double y);

/// mu_{[u]_phi, t}(r) = R^-1(e^J R(r)). RangeError when e^J R(r) exceeds
/// the range of R on the modulus domain.
double propagated_modulus(const Modulus& phi, PropagationContext ctx, double r);

/// phi_Theta(r): r log(e/r) Theta(log(e/r)) below e^-2, constant e^-2 3 Theta(3)
/// from e^-2 on (the two branches agree at e^-2).
double associated_modulus(const GrowthFunction& theta, double r);

/// C1 / e_{n-1}((log_{n-1}(C2/r))^{1/exp(t rate)}); power law C1 (r/C2)^{exp(-t rate)}
/// for n = 1. DomainError when log_{n-1}(C2/r) <= 0.
double mu_omega(int n, double t, double rate, double C1, double C2, double r);
/// log of mu_omega, finite even where mu_omega underflows.
double log_mu_omega(int n, double t, double rate, double C1, double C2, double r);

struct AsymptoticReport {
  std::vector<double> r;
  std::vector<double> holder_ratio;      // mu(r) / r^alpha
  std::vector<double> log_ratio;         // mu(r) (log 1/r)^a
  std::vector<double> log_holder_ratio;  // logs of the above (never overflow)
  std::vector<double> log_log_ratio;
  bool holder_increasing_on_tail = false;
  bool log_decreasing_on_tail = false;
};

/// Compares mu_{n,t}(r) = 1 / e_{n-1}((log_{n-1}(1/r))^{1/e^J}) with Holder
/// and logarithmic moduli along a decreasing grid in (0, e^-e). The tail is
/// the second half of the grid.
AsymptoticReport asymptotic_compare(int n, double J, double alpha, double a,
                                    std::span<const double> r_grid);

}  // namespace osgood
