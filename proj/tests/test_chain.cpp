#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "helpers.hpp"
#include "oracles.hpp"
#include "quakesim/analysis.hpp"
#include "quakesim/chain.hpp"

using namespace quakesim;

TEST_CASE("transition arithmetic") {
  const ModelParams p = testing_support::reference_params();
  const Transition t = apply_transition(p, {0, 0}, 1.0, 2.0, EventKind::Event);
  CHECK(t.post.x == -1.0);
  CHECK(t.post.y == 0.5);
  CHECK(t.lambda_pre == doctest::Approx(std::exp(1.0)));
  const Transition ph = apply_transition(p, {0, 1}, 1.0, 2.0, EventKind::Phantom);
  CHECK(ph.z == 0.0);
  CHECK(ph.post.x == 1.0);
  CHECK(ph.post.y == doctest::Approx(std::exp(-1.0)));
}

TEST_CASE("empty event budget") {
  Rng rng(1);
  const EventLog log = simulate(testing_support::reference_params(), {0, 0},
                                StopRule::MaxEvents(0), rng);
  CHECK(log.records.empty());
  CHECK(log.horizon == 0.0);
  CHECK(log.terminated == Termination::EventBudget);
}

TEST_CASE("stop rule validation") {
  CHECK_THROWS_AS(validate(StopRule{}), std::invalid_argument);
  CHECK_THROWS_AS(validate(StopRule::Horizon(-1)), std::invalid_argument);
  CHECK_NOTHROW(validate(StopRule::Either(10, 5.0)));
}

TEST_CASE("every record satisfies the per-record algebra") {
  const ModelParams p = testing_support::reference_params();
  Rng rng = Rng::stream(7, 0);
  const EventLog log = simulate(p, {0.5, 2.0}, StopRule::MaxEvents(5000), rng);
  REQUIRE(log.records.size() == 5000);
  CHECK(log.terminated == Termination::EventBudget);
  State prev = log.initial;
  double t = 0.0;
  for (const EventRecord& r : log.records) {
    CHECK(r.dt > 0);
    CHECK(r.t == doctest::Approx(t + r.dt).epsilon(1e-13));
    CHECK(r.z > 0);
    const State before = flow(p, prev, r.dt);
    CHECK(r.x == doctest::Approx(before.x - r.z).epsilon(1e-12));
    CHECK(r.y == doctest::Approx(before.y + p.k).epsilon(1e-12));
    CHECK(r.lambda_pre ==
          doctest::Approx(std::exp(before.x) + before.y).epsilon(1e-12));
    CHECK(r.kind == EventKind::Event);
    prev = {r.x, r.y};
    t = r.t;
  }
  for (std::size_t i = 0; i < log.records.size(); ++i) {
    CHECK(log.records[i].n == i + 1);
  }
}

TEST_CASE("simulation is reproducible") {
  const ModelParams p = testing_support::reference_params();
  Rng a = Rng::stream(99, 3);
  Rng b = Rng::stream(99, 3);
  const EventLog la = simulate(p, {0, 0}, StopRule::Horizon(500), a);
  const EventLog lb = simulate(p, {0, 0}, StopRule::Horizon(500), b);
  REQUIRE(la.records.size() == lb.records.size());
  for (std::size_t i = 0; i < la.records.size(); ++i) {
    CHECK(la.records[i].t == lb.records[i].t);
    CHECK(la.records[i].x == lb.records[i].x);
    CHECK(la.records[i].y == lb.records[i].y);
  }
}

TEST_CASE("horizon stop does not record an overshooting event") {
  const ModelParams p = testing_support::reference_params();
  Rng rng = Rng::stream(5, 0);
  const EventLog log = simulate(p, {0, 0}, StopRule::Horizon(50), rng);
  CHECK(log.horizon == 50.0);
  CHECK(log.terminated == Termination::HorizonReached);
  CHECK(log.records.back().t <= 50.0);
}

TEST_CASE("streaming sink sees every record") {
  const ModelParams p = testing_support::reference_params();
  Rng rng = Rng::stream(8, 0);
  std::uint64_t seen = 0;
  SimulationOptions opt;
  opt.keep_records = false;
  opt.sink = [&](const EventRecord& r) { CHECK(r.n == ++seen); };
  const EventLog log = simulate(p, {0, 0}, StopRule::Horizon(100), rng,
                                std::nullopt, opt);
  CHECK(log.records.empty());
  CHECK(log.dropped_records == seen);
  CHECK(seen > 10);
}

TEST_CASE("saturation stops a supercritical run") {
  ModelParams p = testing_support::reference_params();
  p.k = 2.0;
  Rng rng = Rng::stream(9, 0);
  SimulationOptions opt;
  opt.saturation_cap = 1e6;
  const EventLog log = simulate(p, {0, 0}, StopRule::Horizon(1e4), rng,
                                std::nullopt, opt);
  CHECK(log.terminated == Termination::Saturation);
  CHECK(log.horizon < 1e4);
}

TEST_CASE("integral examples") {
  EventLog log;
  log.params = testing_support::reference_params();
  log.initial = {0, 1};
  log.horizon = std::log(2.0);
  CHECK(integrated_y(log) == doctest::Approx(0.5));
  log.initial = {0, 0};
  log.horizon = 1.0;
  CHECK(integrated_phi_x(log) == doctest::Approx(std::exp(1.0) - 1));
  CHECK(integrated_y(log) == 0.0);
  log.horizon = 0.0;
  CHECK(integrated_phi_x(log) == 0.0);
}

TEST_CASE("segment integrals match quadrature of the reconstructed path") {
  const ModelParams p = testing_support::reference_params();
  Rng rng = Rng::stream(10, 0);
  const EventLog log = simulate(p, {-1.0, 0.7}, StopRule::Horizon(30), rng);
  double qy = 0.0, qphi = 0.0;
  for_each_segment(log, [&](double start, double length, const State& s) {
    CHECK(state_at(log, start + 0.5 * length).x ==
          doctest::Approx(s.x + p.c * 0.5 * length));
    qy += oracle::integrate(
        [&](double u) { return s.y * std::exp(-p.alpha * u); }, 0, length);
    qphi += oracle::integrate([&](double u) { return std::exp(s.x + p.c * u); },
                              0, length);
  });
  CHECK(integrated_y(log) == doctest::Approx(qy).epsilon(1e-10));
  CHECK(integrated_phi_x(log) == doctest::Approx(qphi).epsilon(1e-10));
}

TEST_CASE("window totals add up to the whole-run integrals") {
  const ModelParams p = testing_support::reference_params();
  Rng rng = Rng::stream(11, 0);
  const EventLog log = simulate(p, {0, 0}, StopRule::Horizon(1000), rng);
  const auto w = window_totals(log, 0, 1000, 7);
  double ev = 0, iy = 0, iphi = 0;
  for (const auto& x : w) {
    ev += x.events;
    iy += x.integral_y;
    iphi += x.integral_phi;
  }
  CHECK(ev == static_cast<double>(log.event_count()));
  CHECK(iy == doctest::Approx(integrated_y(log)).epsilon(1e-10));
  CHECK(iphi == doctest::Approx(integrated_phi_x(log)).epsilon(1e-10));
  CHECK_THROWS(window_totals(log, 5, 5, 3));
}

TEST_CASE("truncated chain emits phantoms far below x1") {
  ModelParams p = testing_support::reference_params();
  p.phi = ThresholdLinearPhi{0.0, 1.0};
  FosterConfig f;
  f.v0 = 2.0;
  f.x1 = -50.0;
  Rng rng = Rng::stream(12, 0);
  const EventLog log =
      simulate(p, {-100.0, 0.0}, StopRule::Horizon(20), rng, f);
  REQUIRE_FALSE(log.records.empty());
  for (const EventRecord& r : log.records) {
    CHECK(r.kind == EventKind::Phantom);
    CHECK(r.dt == 2.0);
    CHECK(r.z == 0.0);
  }
  CHECK(log.event_count() == 0);
}

TEST_CASE("long-run rate and aftershock share on the reference config") {
  const ModelParams p = testing_support::reference_params();
  Rng rng = Rng::stream(42, 0);
  const EventLog log = simulate(p, {0, 0}, StopRule::Horizon(1e5), rng);
  const SummaryStats s = estimate_rates(log);
  CHECK(std::abs(s.rate_hat - 0.5) <= 3 * s.rate_se);
  CHECK(std::abs(s.lambda2_hat - 0.25) <= 3 * s.lambda2_se);
  CHECK(std::abs(s.lambda1_hat - 0.25) <= 3 * s.lambda1_se);
}
