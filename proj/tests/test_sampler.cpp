#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "helpers.hpp"
#include "oracles.hpp"
#include "quakesim/sampler.hpp"
#include "quakesim/stats.hpp"

using namespace quakesim;

namespace {

double empirical_survival(const std::vector<double>& sample, double t) {
  double above = 0;
  for (double v : sample) above += v > t;
  return above / static_cast<double>(sample.size());
}

// Binomial SE at the oracle value, so the band does not depend on noise.
double binomial_band(double p, std::size_t n) {
  return 4.0 * std::sqrt(p * (1 - p) / static_cast<double>(n)) + 1e-12;
}

}  // namespace

TEST_CASE("primary inversion examples") {
  CHECK(primary_time_from_exp(ExponentialPhi{1}, 0, 1, std::exp(1.0) - 1) ==
        doctest::Approx(1.0).epsilon(1e-14));
  CHECK(primary_time_from_exp(ExponentialPhi{1}, 0, 1, 1e-300) > 0);
  CHECK(primary_time_from_exp(ExponentialPhi{1}, 0, 1, 1e-300) < 1e-290);
  CHECK(primary_time_from_exp(ThresholdLinearPhi{0, 1}, 0, 1, 2) ==
        doctest::Approx(2.0));
}

TEST_CASE("primary inversion agrees with root finding on the quadrature hazard") {
  const PhiSpec phis[] = {ExponentialPhi{1.0}, ExponentialPhi{2.5},
                          ThresholdLinearPhi{0.0, 1.0},
                          ThresholdLinearPhi{1.5, 0.4}};
  for (const PhiSpec& phi : phis) {
    auto f = [&](double s) { return phi_eval(phi, s); };
    for (double x : {-2.0, 0.0, 0.8}) {
      for (double e : {0.01, 0.5, 1.0, 3.0}) {
        const double c = 1.3;
        auto g = [&](double t) { return oracle::primary_hazard(f, x, c, t) - e; };
        double hi = 0.5;
        while (g(hi) < 0) hi *= 2;
        const double root = oracle::bisect(g, 0.0, hi);
        CAPTURE(x);
        CAPTURE(e);
        CHECK(primary_time_from_exp(phi, x, c, e) ==
              doctest::Approx(root).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("primary inversion is monotone in e and in x") {
  for (double x : {-700.0, -20.0, 0.0, 30.0, 600.0}) {
    double prev = 0.0;
    for (double e = 1e-6; e < 100; e *= 1.7) {
      const double t = primary_time_from_exp(ExponentialPhi{1}, x, 1, e);
      CHECK(std::isfinite(t));
      CHECK(t > prev);
      prev = t;
    }
  }
  double prev = INFINITY;
  for (double x = -30; x <= 30; x += 1.5) {
    const double t = primary_time_from_exp(ExponentialPhi{1}, x, 1, 0.7);
    CHECK(t <= prev);
    prev = t;
  }
}

TEST_CASE("primary clock survival matches quadrature on a grid") {
  Rng rng = Rng::stream(101, 0);
  const std::size_t n = 1000000;
  std::vector<double> sample(n);
  for (double& v : sample) v = sample_primary_time(ExponentialPhi{1}, 0, 1, rng);
  auto phi = [](double s) { return std::exp(s); };
  const double s1 = empirical_survival(sample, 1.0);
  CHECK(std::abs(s1 - std::exp(-(std::exp(1.0) - 1))) <= 0.002);
  for (int i = 1; i <= 20; ++i) {
    const double t = 0.1 * i;
    const double exact = oracle::interevent_survival(phi, 0, 1, 0, 1, t);
    CAPTURE(t);
    CHECK(std::abs(empirical_survival(sample, t) - exact) <=
          binomial_band(exact, n));
  }
}

TEST_CASE("secondary clock") {
  Rng rng = Rng::stream(102, 0);
  CHECK_FALSE(sample_secondary_time(0.0, 2.0, rng).is_finite());
  CHECK_FALSE(secondary_time_from_log_uniform(1.0, 1.0, -1.0).is_finite());
  CHECK(secondary_time_from_log_uniform(1.0, 1.0, -0.5).is_finite());

  const std::size_t n = 1000000;
  std::size_t infinite = 0;
  double discount = 0.0;
  std::vector<double> sample(n);
  for (double& v : sample) {
    const ClockOutcome o = sample_secondary_time(1.0, 1.0, rng);
    v = o.time();
    if (!o.is_finite()) ++infinite;
    if (o.is_finite()) CHECK_UNARY(o.time() > 0);
    discount += o.is_finite() ? -std::expm1(-o.time()) : 1.0;
  }
  CHECK(std::abs(static_cast<double>(infinite) / n - std::exp(-1.0)) <= 0.002);
  CHECK(std::abs(discount / n - (1 - std::exp(-1.0))) <= 0.005);
  for (int i = 1; i <= 20; ++i) {
    const double t = 0.25 * i;
    const double exact = std::exp(-(1 - std::exp(-t)));
    CHECK(std::abs(empirical_survival(sample, t) - exact) <=
          binomial_band(exact, n));
  }
}

TEST_CASE("joint inter-event time") {
  const ModelParams p = testing_support::reference_params();
  Rng a = Rng::stream(103, 0);
  Rng b = Rng::stream(103, 1);
  const std::size_t n = 1000000;
  std::vector<double> joint(n), primary(n);
  for (std::size_t i = 0; i < n; ++i) {
    const ClockOutcome o = sample_interevent(p, {0, 0}, a);
    CHECK_UNARY(o.is_finite());
    joint[i] = o.time();
    primary[i] = sample_primary_time(p.phi, 0, p.c, b);
  }
  CHECK(ks_statistic(joint, primary) <= 0.003);

  Rng c = Rng::stream(103, 2);
  std::vector<double> with_y(n);
  for (double& v : with_y) v = sample_interevent(p, {0, 1}, c).time();
  auto phi = [](double s) { return std::exp(s); };
  CHECK(std::abs(empirical_survival(with_y, 1.0) - 0.0953) <= 0.002);
  for (int i = 1; i <= 20; ++i) {
    const double t = 0.08 * i;
    const double exact = oracle::interevent_survival(phi, 0, 1, 1, 1, t);
    CHECK(std::abs(empirical_survival(with_y, t) - exact) <=
          binomial_band(exact, n));
  }
}

TEST_CASE("inter-event mean vanishes as y grows") {
  const ModelParams p = testing_support::reference_params();
  double prev = INFINITY;
  for (double y : {10.0, 1e2, 1e3, 1e4}) {
    Rng rng = Rng::stream(104, static_cast<std::uint64_t>(y));
    double sum = 0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) sum += sample_interevent(p, {0, y}, rng).time();
    CHECK(sum / n < prev);
    prev = sum / n;
  }
  CHECK(prev < 1e-3);
}

TEST_CASE("truncated draws") {
  ModelParams p = testing_support::reference_params();
  Rng rng = Rng::stream(105, 0);
  for (int i = 0; i < 1000; ++i) {
    CHECK(sample_interevent_truncated(p, {0.0, 1.0}, 5.0, -10.0, rng)
              .is_real_event);
  }
  p.phi = ThresholdLinearPhi{0.0, 1.0};
  int phantom = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const TruncatedDraw d =
        sample_interevent_truncated(p, {-100.0, 0.0}, 5.0, -50.0, rng);
    if (!d.is_real_event) {
      ++phantom;
      CHECK(d.t_tilde == 5.0);
    }
  }
  CHECK(static_cast<double>(phantom) / n >= 0.999);
}

TEST_CASE("stochastic orderings hold pathwise under common random numbers") {
  // Same Exp(1) level: larger x fires no later; larger y fires no later.
  Rng rng = Rng::stream(106, 0);
  for (int i = 0; i < 10000; ++i) {
    const double e = rng.exponential();
    const double lu = std::log(rng.uniform_open());
    const double t0 = primary_time_from_exp(ExponentialPhi{1}, 0, 1, e);
    const double t2 = primary_time_from_exp(ExponentialPhi{1}, 2, 1, e);
    CHECK(t0 >= t2);
    CHECK(0 + t0 <= 2 + t2);
    CHECK(secondary_time_from_log_uniform(1, 1, lu).time() >=
          secondary_time_from_log_uniform(5, 1, lu).time());
  }
}
