#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "catch2/catch_amalgamated.hpp"
#include "generators.hpp"
#include "osgood/errors.hpp"
#include "osgood/modulus.hpp"
#include "osgood/numerics.hpp"

using namespace osgood;
using Catch::Approx;

namespace {
constexpr double e = std::numbers::e;

std::vector<Modulus> closed_form_kinds() {
  return {Modulus::lipschitz(), Modulus::log_lipschitz(), Modulus::log_n(2), Modulus::log_n(3),
          Modulus::power(0.5), Modulus::power(0.2)};
}

std::vector<Modulus> all_kinds() {
  auto v = closed_form_kinds();
  v.push_back(Modulus::associated(GrowthFunction::iterated_log(1)));
  v.push_back(Modulus::associated(GrowthFunction::iterated_log(2)));
  v.push_back(Modulus::custom([](double r) { return r * (1.0 + std::log(1.0 / r)); }, 0.5, 0.5,
                              true, "r(1+log 1/r)"));
  return v;
}
}  // namespace

TEST_CASE("eval_modulus catalogue", "[modulus]") {
  CHECK(eval_modulus(Modulus::lipschitz(), 0.5) == 0.5);
  CHECK(eval_modulus(Modulus::log_lipschitz(), 1.0 / e) == Approx(1.0 / e).epsilon(1e-15));
  const auto assoc = Modulus::associated(GrowthFunction::iterated_log(1));
  CHECK(eval_modulus(assoc, std::exp(-2.0)) == Approx(0.446043).epsilon(1e-6));
  CHECK(eval_modulus(assoc, std::exp(-2.0)) == Approx(3.0 * std::exp(-2.0) * std::log(3.0)));
  CHECK(eval_modulus(Modulus::power(0.5), 0.25) == Approx(0.25));
  CHECK_THROWS_AS(eval_modulus(Modulus::lipschitz(), 0.0), DomainError);
  CHECK_THROWS_AS(eval_modulus(Modulus::log_lipschitz(), 0.5), DomainError);
  CHECK_FALSE(Modulus::power(0.5).is_osgood());
  CHECK(Modulus::log_n(2).is_osgood());
}

TEST_CASE("osgood_M catalogue", "[modulus]") {
  CHECK(osgood_M(Modulus::lipschitz(), 0.1) == Approx(std::log(10.0)).epsilon(1e-12));
  CHECK(osgood_M(Modulus::log_lipschitz(), std::exp(-e)) == Approx(1.0).epsilon(1e-10));
  // int_{1/4}^1 dr / (r^{1/2} / 2) = 4 (1 - 1/2)
  CHECK(osgood_M(Modulus::power(0.5), 0.25) == Approx(2.0).epsilon(1e-10));
  CHECK(osgood_M(Modulus::log_n(2), Modulus::log_n(2).cutoff()) == Approx(0.0).margin(1e-15));
}

TEST_CASE("osgood_M matches an independent quadrature in r", "[modulus][property]") {
  testing::for_all(
      60, 29, [](CounterRng& rng) { return rng.uniform(0.05, 0.95); },
      [](double frac) {
        for (const auto& phi : all_kinds()) {
          const double z = frac * phi.cutoff();
          const auto ref = numerics::integrate([&](double r) { return 1.0 / phi(r); }, z, phi.cutoff());
          INFO(phi.label() << " z=" << z);
          CHECK(osgood_M(phi, z) == Approx(ref.value).epsilon(1e-9));
        }
      });
}

TEST_CASE("R and R inverse catalogue", "[modulus]") {
  CHECK(R_of(Modulus::log_lipschitz(), std::exp(-e)) == Approx(1.0 / e).epsilon(1e-10));
  CHECK(R_of(Modulus::lipschitz(), 0.3) == Approx(0.3).epsilon(1e-12));
  CHECK(R_inverse(Modulus::lipschitz(), 0.3) == Approx(0.3).epsilon(1e-10));
  CHECK(R_of(Modulus::log_n(2), std::exp(-std::exp(e))) == Approx(1.0 / e).epsilon(1e-6));
  CHECK(*closed_form_R(Modulus::log_n(2), std::exp(-std::exp(e))) == Approx(1.0 / e).epsilon(1e-14));
  CHECK_THROWS_AS(R_inverse(Modulus::log_lipschitz(), 2.0), BracketError);
}

TEST_CASE("R inverse undoes R on log-spaced grids", "[modulus][property]") {
  for (const auto& phi : all_kinds()) {
    for (double z : numerics::log_spaced(1e-12, 0.5 * phi.cutoff(), 40)) {
      INFO(phi.label() << " z=" << z);
      // dz / z = (phi(z) / z) dR / R: a flat R cannot resolve z below that
      const double conditioned = 1e3 * std::numeric_limits<double>::epsilon() * phi(z) / z;
      CHECK(R_inverse(phi, R_of(phi, z)) == Approx(z).epsilon(std::max(1e-8, conditioned)));
    }
  }
}

TEST_CASE("closed forms match the quadrature pipeline", "[modulus][property]") {
  for (const auto& phi : closed_form_kinds()) {
    REQUIRE(phi.has_closed_form());
    for (double z : numerics::log_spaced(1e-12, 0.5 * phi.cutoff(), 30)) {
      INFO(phi.label() << " z=" << z);
      const double R = R_of(phi, z);
      CHECK(*closed_form_R(phi, z) == Approx(R).epsilon(1e-6));
      CHECK(*closed_form_R_inverse(phi, R) == Approx(R_inverse(phi, R)).epsilon(1e-6));
    }
  }
}

TEST_CASE("propagated_modulus catalogue", "[modulus]") {
  CHECK(propagated_modulus(Modulus::lipschitz(), {0.0}, 0.3) == 0.3);
  CHECK(propagated_modulus(Modulus::log_lipschitz(), {std::log(2.0)}, 1.0 / 16.0) ==
        Approx(0.25).epsilon(1e-9));
  // ((1 - a)^2 J + r^{1 - a})^{1 / (1 - a)} at a = 1/2, J = 1, r = 1/4
  CHECK(propagated_modulus(Modulus::power(0.5), {1.0}, 0.25) == Approx(0.5625).epsilon(1e-9));
  CHECK(propagated_modulus(Modulus::lipschitz(), {1.0}, 0.2) == Approx(0.2 * e).epsilon(1e-9));
  CHECK_THROWS_AS(propagated_modulus(Modulus::log_lipschitz(), {5.0}, 0.3), RangeError);
  CHECK_THROWS_AS(propagated_modulus(Modulus::lipschitz(), {-1.0}, 0.3), ParameterError);
}

TEST_CASE("power modulus does not vanish as r -> 0 once J > 0", "[modulus]") {
  const auto phi = Modulus::power(0.5);
  const double floor = std::pow(0.25 * 1.0, 2.0);
  CHECK(propagated_modulus(phi, {1.0}, 1e-12) == Approx(floor).epsilon(1e-5));
}

TEST_CASE("fixed-point law and identity at J = 0", "[modulus][property]") {
  for (const auto& phi : all_kinds()) {
    for (double r : numerics::log_spaced(1e-10, 0.5 * phi.cutoff(), 15)) {
      INFO(phi.label() << " r=" << r);
      CHECK(propagated_modulus(phi, {0.0}, r) == r);
      for (double J : {0.5, 1.0, 2.0}) {
        double mu = 0.0;
        try {
          mu = propagated_modulus(phi, {J}, r);
        } catch (const RangeError&) {
          continue;
        }
        CHECK(R_of(phi, mu) == Approx(std::exp(J) * R_of(phi, r)).epsilon(1e-8));
      }
    }
  }
}

TEST_CASE("propagated_modulus is monotone in r and J", "[modulus][property]") {
  testing::for_all(
      100, 31,
      [](CounterRng& rng) {
        return std::make_tuple(testing::log_uniform(rng, 1e-12, 1e-4), rng.uniform(0.0, 1.0),
                               testing::log_uniform(rng, 1.01, 10.0), rng.uniform(0.0, 0.5));
      },
      [](const auto& c) {
        const auto [r, J, fr, dJ] = c;
        const auto phi = Modulus::log_lipschitz();
        const double base = propagated_modulus(phi, {J}, r);
        CHECK(propagated_modulus(phi, {J}, r * fr) >= base);
        CHECK(propagated_modulus(phi, {J + dJ}, r) >= base);
      });
}

TEST_CASE("associated modulus values and Osgood divergence", "[modulus]") {
  const auto log1 = GrowthFunction::iterated_log(1);
  CHECK(associated_modulus(log1, std::exp(-2.0)) == Approx(0.446043).epsilon(1e-6));
  CHECK(associated_modulus(log1, std::exp(-9.0)) ==
        Approx(10.0 * std::log(10.0) * std::exp(-9.0)).epsilon(1e-14));
  CHECK(associated_modulus(log1, std::exp(-9.0)) == Approx(2.84161e-3).epsilon(1e-5));
  CHECK(associated_modulus(log1, 0.5) == Approx(3.0 * std::exp(-2.0) * std::log(3.0)));

  double prev = 0.0;
  for (double r : numerics::log_spaced(1e-300, std::exp(-2.0) * 0.999, 200)) {
    const double v = associated_modulus(log1, r);
    CHECK(v > prev);
    prev = v;
  }

  for (int m = 1; m <= 2; ++m) {
    const auto phi = Modulus::associated(GrowthFunction::iterated_log(m));
    double last = 0.0;
    for (int k = 3; k <= 40; ++k) {
      const double Mk = osgood_M(phi, std::ldexp(1.0, -k));
      CHECK(Mk > last);
      last = Mk;
    }
    // log log log(1/z) growth for log_1: increments shrink but the sum is unbounded
    CHECK(osgood_M(phi, 1e-300) > last);
  }
}

TEST_CASE("mu_omega catalogue", "[modulus]") {
  CHECK(mu_omega(1, 0.0, 1.0, 1.0, 1.0, 0.1) == Approx(0.1).epsilon(1e-15));
  CHECK(mu_omega(1, std::log(2.0), 1.0, 1.0, 1.0, 0.01) == Approx(0.1).epsilon(1e-14));
  // 1 / e_1((log_1(e^e))^1) = e^-e
  CHECK(mu_omega(2, 0.0, 1.0, 1.0, 1.0, std::exp(-e)) == Approx(std::exp(-e)).epsilon(1e-14));
  CHECK(mu_omega(3, 0.0, 1.0, 1.0, 1.0, 1e-30) == Approx(1e-30).epsilon(1e-10));
  CHECK_THROWS_AS(mu_omega(2, 0.0, 1.0, 1.0, 1.0, 2.0), DomainError);
  CHECK(log_mu_omega(2, 5.0, 1.0, 1.0, 1.0, 1e-300) ==
        Approx(-std::pow(std::log(1e300), std::exp(-5.0))).epsilon(1e-12));
}

TEST_CASE("mu_omega is nondecreasing in r and t", "[modulus][property]") {
  testing::for_all(
      100, 37,
      [](CounterRng& rng) {
        return std::make_tuple(testing::uniform_int(rng, 1, 3), testing::log_uniform(rng, 1e-200, 1e-20),
                               rng.uniform(0.0, 2.0));
      },
      [](const auto& c) {
        const auto [n, r, t] = c;
        const double base = log_mu_omega(n, t, 1.0, 1.0, 1.0, r);
        CHECK(log_mu_omega(n, t, 1.0, 1.0, 1.0, 2.0 * r) >= base);
        CHECK(log_mu_omega(n, t + 0.1, 1.0, 1.0, 1.0, r) >= base);
      });
}

TEST_CASE("asymptotic comparison with Holder and log moduli", "[modulus]") {
  std::vector<double> grid;
  for (int k = 2; k <= 6; ++k) grid.push_back(std::exp(-std::exp(static_cast<double>(k))));
  const double J = std::log(2.0);
  const auto holder = asymptotic_compare(2, J, 1.0, 1.0, grid);
  CHECK(holder.holder_increasing_on_tail);
  CHECK(holder.log_decreasing_on_tail);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    CHECK(holder.log_holder_ratio[i] > holder.log_holder_ratio[i - 1]);
    CHECK(holder.log_log_ratio[i] < holder.log_log_ratio[i - 1]);
  }
  // mu = exp(-(e^k)^{1/2}) against r = exp(-e^k)
  CHECK(holder.log_holder_ratio[0] == Approx(std::exp(2.0) - std::exp(1.0)).epsilon(1e-12));

  const auto trivial = asymptotic_compare(2, 0.0, 1.0, 1.0, grid);
  for (double v : trivial.log_holder_ratio) CHECK(v == Approx(0.0).margin(1e-9));

  const std::vector<double> bad{0.5};
  CHECK_THROWS_AS(asymptotic_compare(2, J, 1.0, 1.0, bad), DomainError);
}
