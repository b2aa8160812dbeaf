#include <cmath>
#include <numbers>
#include <vector>

#include "catch2/catch_amalgamated.hpp"
#include "generators.hpp"
#include "osgood/errors.hpp"
#include "osgood/growth.hpp"
#include "osgood/numerics.hpp"

using namespace osgood;
using Catch::Approx;

namespace {
constexpr double e = std::numbers::e;
}

TEST_CASE("eval_growth catalogue values", "[growth]") {
  const auto log1 = GrowthFunction::iterated_log(1);
  const auto log2 = GrowthFunction::iterated_log(2);
  CHECK(eval_growth(log1, e) == Approx(1.0).epsilon(1e-15));
  CHECK(eval_growth(log2, std::exp(e)) == Approx(1.0).epsilon(1e-15));
  CHECK(eval_growth(log1, 10.0) == Approx(2.302585092994046).epsilon(1e-15));
  CHECK_THROWS_AS(eval_growth(log1, 0.5), DomainError);
}

TEST_CASE("below-junction extension is positive, increasing and continuous", "[growth]") {
  for (int m = 1; m <= 3; ++m) {
    const auto g = GrowthFunction::iterated_log(m);
    CHECK(g(1.0) == Approx(0.1));
    const double j = g.junction();
    CHECK(g(j) == Approx(0.5).epsilon(1e-12));
    CHECK(g(j * (1 - 1e-12)) == Approx(0.5).epsilon(1e-9));
    double prev = 0.0;
    for (double x : numerics::log_spaced(1.0, 1e6, 400)) {
      const double v = g(x);
      CHECK(v > 0.0);
      CHECK(v >= prev);
      prev = v;
    }
    CHECK(g(std::exp(std::exp(std::exp(3.0)))) == Approx(numerics::iterated_log_raw(m, std::exp(std::exp(std::exp(3.0))))));
  }
}

TEST_CASE("eval_growth_derivative closed forms", "[growth]") {
  const auto log1 = GrowthFunction::iterated_log(1);
  const auto log2 = GrowthFunction::iterated_log(2);
  CHECK(eval_growth_derivative(log1, 10.0) == Approx(0.1).epsilon(1e-14));
  CHECK(eval_growth_derivative(log2, std::exp(e)) == Approx(std::exp(-(e + 1.0))).epsilon(1e-13));
  CHECK(eval_growth_derivative(log1, 2.0) == Approx(0.5).epsilon(1e-14));
  CHECK_THROWS_AS(eval_growth_derivative(log2, 2.0), DomainError);
}

TEST_CASE("derivative agrees with central differences", "[growth][property]") {
  testing::for_all(
      100, 3, [](CounterRng& rng) { return testing::log_uniform(rng, 200.0, 1e12); },
      [](double x) {
        for (int m = 1; m <= 3; ++m) {
          const auto g = GrowthFunction::iterated_log(m);
          const double h = x * 1e-5;
          const double fd = (g(x + h) - g(x - h)) / (2.0 * h);
          CHECK(eval_growth_derivative(g, x) == Approx(fd).epsilon(1e-6));
        }
      });
}

TEST_CASE("verify_admissibility catalogue", "[growth]") {
  const std::vector<double> xs{e * e, e * e * e, e * e * e * e};
  const auto r1 = verify_admissibility(GrowthFunction::iterated_log(1), xs, xs);
  CHECK(r1.pass);
  CHECK(r1.max_subadd_defect <= 1e-14);

  // log log(xy) - log log x - log log y at x = e^{e^a}, y = e^{e^b} is log(e^a + e^b) - a - b
  const std::vector<double> as{1.0, 2.0, 3.0};
  double defect = -1e300;
  for (double a : as)
    for (double b : as) defect = std::max(defect, std::log(std::exp(a) + std::exp(b)) - a - b);
  std::vector<double> grid;
  for (double a : as) grid.push_back(std::exp(std::exp(a)));
  const auto g2 = GrowthFunction::iterated_log(2);
  const auto r2 = verify_admissibility(g2, grid, grid);
  CHECK(r2.pass);
  CHECK(r2.max_subadd_defect == Approx(defect).epsilon(1e-12));
  // x Theta'(x) / Theta(x) = 1 / (log x log log x), largest at the smallest point
  CHECK(r2.max_deriv_ratio == Approx(1.0 / e).epsilon(1e-12));

  const auto identity = GrowthFunction::custom([](double x) { return x; }, 2.0, 1.0, "identity");
  const std::vector<double> big{10.0, 100.0};
  CHECK_FALSE(verify_admissibility(identity, big, big).pass);
  const std::vector<double> low{0.5};
  CHECK_THROWS_AS(verify_admissibility(g2, low, low), DomainError);
}

TEST_CASE("admissibility holds on random log-spaced grids above e_m(2)", "[growth][property]") {
  testing::for_all(
      40, 19,
      [](CounterRng& rng) {
        const int m = testing::uniform_int(rng, 1, 2);
        const double lo = std::log(numerics::iterated_exp_raw(m, 2.0)) * (1.0 + rng.uniform());
        const double hi = std::min(690.0, lo * testing::log_uniform(rng, 1.5, 50.0));
        return std::make_pair(m, numerics::log_spaced(std::exp(lo), std::exp(hi), 12));
      },
      [](const auto& c) {
        const auto g = GrowthFunction::iterated_log(c.first);
        CHECK(verify_admissibility(g, c.second, c.second).pass);
      });
}

TEST_CASE("iterated_log_exp values and inverse property", "[growth]") {
  CHECK(iterated_log_exp(2, std::exp(e), IterDirection::log) == Approx(1.0).epsilon(1e-15));
  CHECK(iterated_log_exp(2, 1.0, IterDirection::exp) == Approx(15.15426224147926).epsilon(1e-14));
  CHECK(iterated_log_exp(3, std::exp(std::exp(e)), IterDirection::log) == Approx(1.0).epsilon(1e-14));
  CHECK_THROWS_AS(iterated_log_exp(2, 1.0, IterDirection::log), DomainError);
  CHECK_THROWS_AS(iterated_log_exp(3, 10.0, IterDirection::exp), RangeError);

  testing::for_all(
      200, 23,
      [](CounterRng& rng) {
        const int m = testing::uniform_int(rng, 1, 3);
        const double lo = numerics::iterated_exp_raw(m - 1, 0.0);
        return std::make_pair(m, lo + testing::log_uniform(rng, 1e-3, 1e3));
      },
      [](const auto& c) {
        const double y = iterated_log_exp(c.first, c.second, IterDirection::log);
        CHECK(iterated_log_exp(c.first, y, IterDirection::exp) == Approx(c.second).epsilon(1e-10));
      });
}

TEST_CASE("Theta grows at most like a logarithm", "[growth]") {
  const auto grid = numerics::log_spaced(1.0, 1e300, 500);
  for (int m = 1; m <= 3; ++m) {
    const double c = log_growth_constant(GrowthFunction::iterated_log(m), grid);
    CHECK(std::isfinite(c));
    CHECK(c <= 1.0 + 1e-12);
  }
}

TEST_CASE("table growth interpolates linearly", "[growth]") {
  const auto g = GrowthFunction::from_table({{1.0, 1.0}, {3.0, 2.0}, {7.0, 4.0}}, 2.0, 1.0);
  CHECK(g(2.0) == Approx(1.5));
  CHECK(g(5.0) == Approx(3.0));
  CHECK(g(9.0) == Approx(5.0));
}
