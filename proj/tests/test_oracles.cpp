// Frozen oracle values. Each literal was produced by the oracle it is checked
// against and cross-checked with 30-digit arithmetic.
#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <random>

#include "oracles.hpp"

namespace {

constexpr double kEMinus1 = 1.7182818284590452;
constexpr double kSurvivalPrimaryAt1 = 0.17937407873401718;
constexpr double kSurvivalJointAt1 = 0.095330794596883438;
constexpr double kDiscountY1 = 0.63212055882855768;
constexpr double kDiscountY20 = 0.99999999793884638;
constexpr double kPureDecayMeanH10 = 0.99995460007023752;

}  // namespace

TEST_CASE("quadrature oracle reproduces the frozen integrals") {
  CHECK(oracle::integrate([](double v) { return std::exp(v); }, 0, 1) ==
        doctest::Approx(kEMinus1).epsilon(1e-14));
  CHECK(oracle::integrate([](double v) { return v; }, 0, 2) ==
        doctest::Approx(2.0).epsilon(1e-14));
  CHECK(oracle::integrate([](double v) { return std::exp(-v); }, 0, 10) ==
        doctest::Approx(kPureDecayMeanH10).epsilon(1e-13));
  CHECK(oracle::integrate([](double) { return 1.0; }, 3, 3) == 0.0);
}

TEST_CASE("survival oracle") {
  auto phi = [](double x) { return std::exp(x); };
  CHECK(oracle::interevent_survival(phi, 0, 1, 0, 1, 1) ==
        doctest::Approx(kSurvivalPrimaryAt1).epsilon(1e-12));
  CHECK(oracle::interevent_survival(phi, 0, 1, 1, 1, 1) ==
        doctest::Approx(kSurvivalJointAt1).epsilon(1e-12));
}

TEST_CASE("secondary discount oracle") {
  CHECK(oracle::secondary_discount(1, 1) ==
        doctest::Approx(kDiscountY1).epsilon(1e-11));
  CHECK(oracle::secondary_discount(20, 1) ==
        doctest::Approx(kDiscountY20).epsilon(1e-11));
  CHECK(oracle::secondary_discount(2, 3) ==
        doctest::Approx(3 * (1 - std::exp(-2.0 / 3))).epsilon(1e-11));
}

TEST_CASE("bisection oracle inverts the primary hazard at e - 1") {
  const double t = oracle::bisect(
      [](double s) { return std::expm1(s) - kEMinus1; }, 0.0, 5.0);
  CHECK(t == doctest::Approx(1.0).epsilon(1e-14));
  CHECK_THROWS(oracle::bisect([](double s) { return s + 1; }, 0, 1));
}

TEST_CASE("brute-force KS on small samples") {
  CHECK(oracle::ks_brute({1, 2, 3}, {1, 2, 3}) == 0.0);
  CHECK(oracle::ks_brute({1, 2}, {3, 4}) == 1.0);
  CHECK(oracle::ks_brute({1, 3}, {2, 4}) == doctest::Approx(0.5));
}
