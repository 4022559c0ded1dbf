#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <limits>
#include <vector>

#include "oracles.hpp"
#include "quakesim/parallel.hpp"
#include "quakesim/random.hpp"
#include "quakesim/stats.hpp"

using namespace quakesim;

TEST_CASE("mean and standard error") {
  const std::vector<double> v{1, 2, 3, 4};
  const MeanEstimate m = mean_and_se(v);
  CHECK(m.mean == 2.5);
  CHECK(m.se == doctest::Approx(std::sqrt(5.0 / 3.0 / 4.0)));
  CHECK(m.n == 4);
  CHECK(mean_and_se(std::vector<double>{7}).se == 0.0);
}

TEST_CASE("KS statistic matches the brute-force oracle") {
  for (int trial = 0; trial < 20; ++trial) {
    Rng rng = Rng::stream(500, trial);
    std::vector<double> a(37 + trial), b(53);
    for (double& v : a) v = std::floor(rng.exponential() * 4) / 4;  // ties
    for (double& v : b) v = std::floor(rng.exponential() * 5) / 5;
    CHECK(ks_statistic(a, b) == doctest::Approx(oracle::ks_brute(a, b)));
    CHECK(ks_statistic(a, b) == doctest::Approx(ks_statistic(b, a)));
    CHECK(ks_one_sided(a, b) >= 0);
    CHECK(std::max(ks_one_sided(a, b), ks_one_sided(b, a)) ==
          doctest::Approx(ks_statistic(a, b)));
  }
}

TEST_CASE("KS handles infinite entries") {
  const double inf = std::numeric_limits<double>::infinity();
  CHECK(ks_statistic(std::vector<double>{1, inf}, std::vector<double>{1, 2}) ==
        doctest::Approx(0.5));
  CHECK(ks_statistic(std::vector<double>{inf, inf},
                     std::vector<double>{inf, inf}) == 0.0);
}

TEST_CASE("KS critical values") {
  CHECK(ks_critical_value(0.05, 100, 100) ==
        doctest::Approx(1.3581015157406195 * std::sqrt(2.0 / 100)).epsilon(1e-6));
  CHECK(ks_one_sided_critical_value(0.01, 1000, 1000) ==
        doctest::Approx(std::sqrt(-std::log(0.01) / 2 * 2.0 / 1000)));
}

TEST_CASE("quantiles") {
  CHECK(median({3, 1, 2}) == 2.0);
  CHECK(median({1, 2, 3, 4}) == 2.5);
  CHECK(quantile({0, 10}, 0.25) == 2.5);
}

TEST_CASE("stream seeds are distinct and stable") {
  CHECK(stream_seed(1, 0) != stream_seed(1, 1));
  CHECK(stream_seed(1, 0) != stream_seed(2, 0));
  CHECK(stream_seed(42, 7) == stream_seed(42, 7));
  Rng r = Rng::stream(1, 0);
  for (int i = 0; i < 10000; ++i) {
    const double u = r.uniform_open();
    CHECK_UNARY(u > 0.0 && u < 1.0);
  }
}

TEST_CASE("replica results do not depend on the thread count") {
  auto fn = [](std::size_t i) {
    Rng r = Rng::stream(77, i);
    double s = 0;
    for (int k = 0; k < 100; ++k) s += r.exponential();
    return s;
  };
  const auto one = run_replicas(50, 1, fn);
  const auto eight = run_replicas(50, 8, fn);
  CHECK(one == eight);
  CHECK_THROWS(run_replicas(10, 4, [](std::size_t i) -> int {
    if (i == 6) throw std::runtime_error("boom");
    return 0;
  }));
}

TEST_CASE("standard error does not overflow near the top of the double range") {
  const std::vector<double> v{-1e300, -3e300, 0.0, 2.0, -1e300};
  const std::vector<double> scaled{-1, -3, 0.0, 2e-300, -1};
  const MeanEstimate big = mean_and_se(v);
  const MeanEstimate small = mean_and_se(scaled);
  CHECK(std::isfinite(big.se));
  CHECK(big.mean == doctest::Approx(small.mean * 1e300));
  CHECK(big.se == doctest::Approx(small.se * 1e300));
}
