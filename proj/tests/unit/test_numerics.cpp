#include <cmath>
#include <limits>
#include <numbers>
#include <set>
#include <vector>

#include "catch2/catch_amalgamated.hpp"
#include "generators.hpp"
#include "osgood/errors.hpp"
#include "osgood/numerics.hpp"
#include "osgood/rng.hpp"

using namespace osgood;
using Catch::Approx;

TEST_CASE("integrate handles finite and infinite ranges", "[numerics]") {
  const auto r1 = numerics::integrate([](double x) { return std::sin(x); }, 0.0, std::numbers::pi);
  CHECK(r1.value == Approx(2.0).epsilon(1e-12));
  const auto r2 = numerics::integrate([](double x) { return std::exp(-x * x); },
                                      -std::numeric_limits<double>::infinity(),
                                      std::numeric_limits<double>::infinity());
  CHECK(r2.value == Approx(std::sqrt(std::numbers::pi)).epsilon(1e-10));
  const auto r3 = numerics::integrate_piecewise([](double x) { return 1.0 / (1.0 + x * x); },
                                                0.0, 40.0);
  CHECK(r3.value == Approx(std::atan(40.0)).epsilon(1e-11));
}

TEST_CASE("bisection and golden section find known points", "[numerics]") {
  const double root = numerics::bisect_increasing([](double x) { return x * x * x; }, 8.0, 0.0, 5.0);
  CHECK(root == Approx(2.0).margin(1e-11));
  const double arg = numerics::golden_section_max([](double x) { return -(x - 0.3) * (x - 0.3); },
                                                  -1.0, 2.0);
  CHECK(arg == Approx(0.3).margin(1e-8));
}

TEST_CASE("log_spaced endpoints and ratios", "[numerics]") {
  const auto xs = numerics::log_spaced(1e-12, 1.0, 13);
  REQUIRE(xs.size() == 13);
  CHECK(xs.front() == Approx(1e-12));
  CHECK(xs.back() == Approx(1.0));
  for (std::size_t i = 1; i < xs.size(); ++i) CHECK(xs[i] / xs[i - 1] == Approx(10.0));
}

TEST_CASE("linear_fit recovers an exact line", "[numerics]") {
  std::vector<double> x{0, 1, 2, 3, 4}, y;
  for (double v : x) y.push_back(3.0 * v - 1.5);
  const auto [slope, intercept] = numerics::linear_fit(x, y);
  CHECK(slope == Approx(3.0));
  CHECK(intercept == Approx(-1.5));
}

TEST_CASE("pairwise_sum matches exact integer sums", "[numerics][property]") {
  testing::for_all(
      50, 7,
      [](CounterRng& rng) {
        std::vector<double> v(testing::uniform_int(rng, 0, 3000));
        for (double& x : v) x = static_cast<double>(testing::uniform_int(rng, -1000, 1000));
        return v;
      },
      [](const std::vector<double>& v) {
        long long exact = 0;
        for (double x : v) exact += static_cast<long long>(x);
        CHECK(numerics::pairwise_sum(v) == static_cast<double>(exact));
      });
}

TEST_CASE("iterated log and exp are inverse", "[numerics][property]") {
  testing::for_all(
      200, 11, [](CounterRng& rng) { return rng.uniform(0.1, 1.5); },
      [](double x) {
        for (int m = 0; m <= 3; ++m) {
          CHECK(numerics::iterated_log_raw(m, numerics::iterated_exp_raw(m, x)) ==
                Approx(x).epsilon(1e-10));
        }
      });
}

TEST_CASE("counter rng is a pure function of seed, stream and counter", "[rng]") {
  CounterRng a(42, 3);
  CounterRng b(42, 3);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
  CHECK(CounterRng(42, 3).at(17) == a.at(17));
  CHECK(CounterRng(42, 4).at(0) != CounterRng(42, 3).at(0));
  CHECK(CounterRng(43, 3).at(0) != CounterRng(42, 3).at(0));
  CHECK(a.split(1).at(0) != a.split(2).at(0));
}

TEST_CASE("counter rng moments", "[rng]") {
  CounterRng rng(5);
  constexpr int n = 200000;
  double su = 0.0, sn = 0.0, sn2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    su += u;
    const double z = rng.normal();
    sn += z;
    sn2 += z * z;
  }
  CHECK(su / n == Approx(0.5).margin(0.005));
  CHECK(sn / n == Approx(0.0).margin(0.01));
  CHECK(sn2 / n == Approx(1.0).margin(0.02));
}
