#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "helpers.hpp"
#include "quakesim/chain.hpp"
#include "quakesim/stats.hpp"
#include "quakesim/thinning.hpp"

using namespace quakesim;

TEST_CASE("pure decay: mean count and probability of no events") {
  // k = 0 turns off self-excitation; phi is zero everywhere reachable.
  const ModelParams p = testing_support::pure_decay_params(0.0, 1.0);
  const int runs = 10000;
  std::vector<double> counts(runs);
  int empty = 0;
  for (int i = 0; i < runs; ++i) {
    Rng rng = Rng::stream(300, i);
    const EventLog log = simulate_thinning(p, {0, 1}, 10.0, std::nullopt, rng);
    counts[i] = static_cast<double>(log.event_count());
    empty += log.records.empty();
  }
  const MeanEstimate m = mean_and_se(counts);
  CHECK(std::abs(m.mean - (1 - std::exp(-10.0))) <= 3 * m.se);
  const double p0 = static_cast<double>(empty) / runs;
  const double se0 = std::sqrt(p0 * (1 - p0) / runs);
  // P(no events on [0, 10]) = exp(-(1 - e^{-10})); the infinite-horizon value
  // e^{-1} differs by less than 2e-5.
  CHECK(std::abs(p0 - std::exp(-1.0)) <= 3 * se0 + 2e-5);
}

TEST_CASE("thinning never exceeds its dominating bound") {
  const ModelParams p = testing_support::reference_params();
  Rng rng = Rng::stream(301, 0);
  ThinningStats stats;
  CHECK_NOTHROW(simulate_thinning(p, {2.0, 5.0}, 200.0, std::nullopt, rng,
                                  kDefaultSaturationCap, &stats));
  CHECK(stats.accepted <= stats.proposals);
  CHECK(stats.accepted > 0);
}

TEST_CASE("thinning records satisfy the per-record algebra") {
  const ModelParams p = testing_support::reference_params();
  Rng rng = Rng::stream(302, 0);
  const EventLog log = simulate_thinning(p, {0, 0}, 300.0, 0.05, rng);
  State prev = log.initial;
  double t = 0;
  for (const EventRecord& r : log.records) {
    const State before = flow(p, prev, r.t - t);
    CHECK(r.x == doctest::Approx(before.x - r.z).epsilon(1e-9));
    CHECK(r.y == doctest::Approx(before.y + p.k).epsilon(1e-9));
    prev = {r.x, r.y};
    t = r.t;
  }
  CHECK(log.horizon == 300.0);
}

TEST_CASE("thinning and inversion agree in distribution") {
  const ModelParams p = testing_support::reference_params();
  const int reps = 100;
  std::vector<double> n_chain, n_thin, gaps_chain, gaps_thin;
  for (int i = 0; i < reps; ++i) {
    Rng a = Rng::stream(303, 2 * i);
    Rng b = Rng::stream(303, 2 * i + 1);
    const EventLog lc = simulate(p, {0, 0}, StopRule::Horizon(500), a);
    const EventLog lt = simulate_thinning(p, {0, 0}, 500, std::nullopt, b);
    n_chain.push_back(static_cast<double>(lc.event_count()));
    n_thin.push_back(static_cast<double>(lt.event_count()));
    for (const auto& r : lc.records) gaps_chain.push_back(r.dt);
    for (const auto& r : lt.records) gaps_thin.push_back(r.dt);
  }
  const MeanEstimate mc = mean_and_se(n_chain);
  const MeanEstimate mt = mean_and_se(n_thin);
  CHECK(std::abs(mc.mean - mt.mean) <=
        3 * std::sqrt(mc.se * mc.se + mt.se * mt.se));
  CHECK(ks_statistic(gaps_chain, gaps_thin) <=
        ks_critical_value(0.001, gaps_chain.size(), gaps_thin.size()));
}
