#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "quakesim/analysis.hpp"
#include "quakesim/chain.hpp"
#include "quakesim/cli.hpp"
#include "quakesim/config.hpp"
#include "quakesim/model.hpp"
#include "quakesim/sampler.hpp"
#include "quakesim/stats.hpp"

namespace quakesim {

namespace {

ModelParams reference() {
  ModelParams p;
  p.c = 1.0;
  p.k = 0.5;
  p.alpha = 1.0;
  p.phi = ExponentialPhi{1.0};
  p.z = ExponentialZ{2.0};
  return p;
}

bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

struct Check {
  std::string name;
  std::function<bool()> run;
};

std::vector<Check> checks() {
  std::vector<Check> out;
  out.push_back({"phi exp(0) = 1", [] {
                   return phi_eval(ExponentialPhi{1.0}, 0.0) == 1.0;
                 }});
  out.push_back({"phi threshold below theta = 0", [] {
                   return phi_eval(ThresholdLinearPhi{0.0, 1.0}, -1.0) == 0.0;
                 }});
  out.push_back({"phi exp(ln 2) = 2", [] {
                   return near(phi_eval(ExponentialPhi{1.0}, std::log(2.0)), 2.0,
                               1e-15);
                 }});
  out.push_back({"intensity is additive", [] {
                   ModelParams p = reference();
                   const bool a = intensity(p, {0, 0}).value == 1.0;
                   const bool b = intensity(p, {0, 0.5}).value == 1.5;
                   p.phi = ThresholdLinearPhi{0.0, 1.0};
                   return a && b && intensity(p, {2, 3}).value == 5.0;
                 }});
  out.push_back({"primary hazard integrals", [] {
                   const bool a = near(cumulative_hazard_primary(
                                           ExponentialPhi{1.0}, 0, 1, 1),
                                       std::exp(1.0) - 1.0, 1e-12);
                   const bool b = cumulative_hazard_primary(
                                      ExponentialPhi{1.0}, 0, 1, 0) == 0.0;
                   const bool c = near(cumulative_hazard_primary(
                                           ThresholdLinearPhi{0, 1}, 0, 1, 2),
                                       2.0, 1e-12);
                   return a && b && c;
                 }});
  out.push_back({"deterministic Z", [] {
                   Rng rng(1);
                   return z_sample(DeterministicZ{2.0}, rng) == 2.0;
                 }});
  out.push_back({"Z sample means", [] {
                   Rng rng = Rng::stream(7, 0);
                   double se = 0, su = 0;
                   const int n = 1000000;
                   for (int i = 0; i < n; ++i) {
                     se += z_sample(ExponentialZ{2.0}, rng);
                     su += z_sample(UniformZ{1.0, 3.0}, rng);
                   }
                   return near(se / n, 2.0, 0.01) && near(su / n, 2.0, 0.01);
                 }});
  out.push_back({"primary inversion at e - 1", [] {
                   return near(primary_time_from_exp(ExponentialPhi{1.0}, 0, 1,
                                                     std::exp(1.0) - 1.0),
                               1.0, 1e-12);
                 }});
  out.push_back({"secondary clock with y = 0 is infinite", [] {
                   Rng rng(3);
                   return !sample_secondary_time(0.0, 1.0, rng).is_finite();
                 }});
  out.push_back({"secondary clock atom", [] {
                   Rng rng = Rng::stream(11, 0);
                   const int n = 1000000;
                   int inf = 0;
                   for (int i = 0; i < n; ++i) {
                     inf += !sample_secondary_time(1.0, 1.0, rng).is_finite();
                   }
                   return near(static_cast<double>(inf) / n, std::exp(-1.0),
                               0.002);
                 }});
  out.push_back({"inter-event survival at t = 1", [] {
                   Rng rng = Rng::stream(13, 0);
                   ModelParams p = reference();
                   const int n = 1000000;
                   int above = 0;
                   for (int i = 0; i < n; ++i) {
                     above += sample_interevent(p, {0, 1}, rng).time() > 1.0;
                   }
                   const double expect = std::exp(-(std::exp(1.0) - 1.0)) *
                                         std::exp(-(1.0 - std::exp(-1.0)));
                   return near(static_cast<double>(above) / n, expect, 0.002);
                 }});
  out.push_back({"transition arithmetic", [] {
                   const Transition t = apply_transition(
                       reference(), {0, 0}, 1.0, 2.0, EventKind::Event);
                   return t.post.x == -1.0 && near(t.post.y, 0.5, 1e-15);
                 }});
  out.push_back({"flow", [] {
                   ModelParams p = reference();
                   const State a = flow(p, {0, 1}, 0.0);
                   const State b = flow(p, {0, 1}, std::log(2.0));
                   return a == State{0, 1} && near(b.x, std::log(2.0), 1e-15) &&
                          near(b.y, 0.5, 1e-15);
                 }});
  out.push_back({"empty event budget", [] {
                   Rng rng(5);
                   const EventLog log =
                       simulate(reference(), {0, 0}, StopRule::MaxEvents(0), rng);
                   return log.records.empty() && log.horizon == 0.0;
                 }});
  out.push_back({"regime classification", [] {
                   ModelParams p = reference();
                   const bool a = regime(p) == Regime::Subcritical;
                   p.k = 1.0;
                   const bool b = regime(p) == Regime::Critical;
                   p.k = 2.0;
                   return a && b && regime(p) == Regime::Supercritical;
                 }});
  out.push_back({"theoretical rates", [] {
                   ModelParams p = reference();
                   const bool a = theoretical_rate(p) == 0.5;
                   p.c = 3.0;
                   p.z = DeterministicZ{1.0};
                   const bool b = theoretical_rate(p) == 3.0;
                   p.c = 2.0;
                   p.z = UniformZ{1.0, 3.0};
                   return a && b && theoretical_rate(p) == 1.0;
                 }});
  out.push_back({"empty log has insufficient data", [] {
                   EventLog log;
                   log.params = reference();
                   try {
                     estimate_rates(log);
                   } catch (const std::invalid_argument&) {
                     return true;
                   }
                   return false;
                 }});
  out.push_back({"discount closed forms", [] {
                   return near(secondary_discount_mean(1, 1),
                               1.0 - std::exp(-1.0), 1e-15) &&
                          near(secondary_discount_mean(20, 1), 1.0, 1e-8);
                 }});
  out.push_back({"weights r = (1, 10, 100) rejected", [] {
                   try {
                     foster_params(reference(), 1, 10, 100);
                   } catch (const std::invalid_argument&) {
                     return true;
                   }
                   return false;
                 }});
  out.push_back({"config schema", [] {
                   const std::string ok =
                       R"({"model":{"c":1,"k":0.5,"alpha":1,"phi":{"kind":"exp","scale":1},)"
                       R"("z":{"kind":"exponential","mean":2}},"initial":{"x":0,"y":0},)"
                       R"("seed":42,"stop":{"horizon":1e5},"replications":1,"burn_in_fraction":0.1})";
                   parse_config(ok);
                   std::string bad = ok;
                   bad.replace(bad.find("\"alpha\":1"), 9, "\"alpha\":-1");
                   try {
                     parse_config(bad);
                     return false;
                   } catch (const ConfigError& e) {
                     return e.errors().size() == 1 &&
                            e.errors()[0].path == "$.model.alpha";
                   }
                 }});
  return out;
}

}  // namespace

int run_selftest(std::ostream& out) {
  int failed = 0;
  for (const Check& c : checks()) {
    bool ok = false;
    try {
      ok = c.run();
    } catch (const std::exception& e) {
      out << "  exception: " << e.what() << "\n";
    }
    out << (ok ? "PASS " : "FAIL ") << c.name << "\n";
    failed += !ok;
  }
  out << (failed == 0 ? "selftest: all checks passed"
                      : "selftest: " + std::to_string(failed) + " failed")
      << "\n";
  return failed == 0 ? kExitOk : kExitSelftest;
}

}  // namespace quakesim
