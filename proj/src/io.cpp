#include "quakesim/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <vector>

namespace quakesim {

using nlohmann::json;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_event_csv_header(std::ostream& out) { out << kEventCsvHeader << '\n'; }

void write_event_csv_row(std::ostream& out, const EventRecord& r) {
  out << r.n << ',' << format_double(r.t) << ',' << format_double(r.dt) << ','
      << to_string(r.kind) << ',' << format_double(r.x) << ','
      << format_double(r.y) << ',' << format_double(r.z) << ','
      << format_double(r.lambda_pre) << '\n';
}

void write_event_csv(std::ostream& out, const EventLog& log) {
  write_event_csv_header(out);
  for (const EventRecord& r : log.records) write_event_csv_row(out, r);
}

ParsedEventRow parse_event_csv_row(const std::string& line) {
  ParsedEventRow out;
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (fields.size() != 8) {
    out.error = "expected 8 fields, got " + std::to_string(fields.size());
    return out;
  }
  auto number = [&](const std::string& s, double& dst) {
    char* end = nullptr;
    dst = std::strtod(s.c_str(), &end);
    return end && *end == '\0' && !s.empty();
  };
  EventRecord& r = out.record;
  char* end = nullptr;
  r.n = std::strtoull(fields[0].c_str(), &end, 10);
  bool ok = end && *end == '\0';
  ok = ok && number(fields[1], r.t) && number(fields[2], r.dt);
  if (fields[3] == "event") {
    r.kind = EventKind::Event;
  } else if (fields[3] == "phantom") {
    r.kind = EventKind::Phantom;
  } else {
    ok = false;
  }
  ok = ok && number(fields[4], r.x) && number(fields[5], r.y) &&
       number(fields[6], r.z) && number(fields[7], r.lambda_pre);
  out.ok = ok;
  if (!ok) out.error = "malformed row: " + line;
  return out;
}

json to_json(const EventRecord& r) {
  return {{"n", r.n},        {"t", r.t}, {"dt", r.dt},
          {"kind", std::string(to_string(r.kind))},
          {"x", r.x},        {"y", r.y}, {"z", r.z},
          {"lambda_pre", r.lambda_pre}};
}

json to_json(const SummaryStats& s) {
  json out = {
      {"rate_hat", s.rate_hat},
      {"rate_se", s.rate_se},
      {"rate_ci95", s.rate_ci()},
      {"rate_theory", s.rate_theory ? json(*s.rate_theory) : json(nullptr)},
      {"lambda1_hat", s.lambda1_hat},
      {"lambda1_se", s.lambda1_se},
      {"lambda2_hat", s.lambda2_hat},
      {"lambda2_se", s.lambda2_se},
      {"mean_y_hat", s.lambda2_hat},
      {"mean_y_ci95", SummaryStats::kZ95 * s.lambda2_se},
      {"balance_residual", s.balance_residual},
      {"balance_se", s.balance_se},
      {"y_share", s.y_share},
      {"y_share_se", s.y_share_se},
      {"regime", std::string(to_string(s.regime))},
      {"burn_in_fraction", s.burn_in_fraction},
      {"window", {s.window_start, s.window_end}},
      {"batches", s.batches},
      {"events_in_window", s.events_in_window},
      {"diagnostics", s.diagnostics},
      {"warnings", s.warnings},
  };
  return out;
}

json to_json(const FosterConfig& f) {
  return {{"r1", f.r1},       {"r2", f.r2}, {"r3", f.r3},
          {"gamma", f.gamma}, {"x0", f.x0}, {"y0", f.y0},
          {"v0", f.v0},       {"x1", f.x1}, {"delta", f.delta}};
}

json to_json(const ConstraintReport& report) {
  json checks = json::array();
  for (const ConstraintCheck& c : report.checks) {
    checks.push_back({{"name", c.name},
                      {"relation", c.relation},
                      {"method", c.method},
                      {"lhs", c.lhs},
                      {"rhs", c.rhs},
                      {"margin", c.margin},
                      {"pass", c.pass}});
  }
  return {{"pass", report.pass()}, {"checks", std::move(checks)}};
}

json to_json(const DriftEstimate& d) {
  return {{"x", d.state.x},   {"y", d.state.y},     {"mean", d.mean},
          {"se", d.se},       {"ci_upper", d.ci_upper},
          {"outside_v", d.outside_v}, {"n", d.n}};
}

json to_json(const ReturnTimeStats& s) {
  return {{"initial", {s.initial.x, s.initial.y}},
          {"replications", s.steps.size()},
          {"exhausted", s.exhausted},
          {"mean", s.mean},
          {"se", s.se},
          {"median", s.median},
          {"max", s.max}};
}

json to_json(const ConvergenceReport& report) {
  json rows = json::array();
  for (const ConvergenceRow& r : report.rows) {
    rows.push_back({{"t", r.t},
                    {"ks_x", r.ks_x},
                    {"ks_y", r.ks_y},
                    {"critical", r.critical},
                    {"pass", r.pass}});
  }
  return {{"alpha_level", report.alpha_level},
          {"replications", report.replications},
          {"rows", std::move(rows)},
          {"warnings", report.warnings}};
}

json to_json(const DominanceReport& r) {
  return {{"ordering", std::string(to_string(r.family))},
          {"low", r.low},
          {"high", r.high},
          {"n", r.n},
          {"violation", r.violation},
          {"separation", r.separation},
          {"band", r.band},
          {"pass", r.pass}};
}

json to_json(const LemmaReport& report) {
  json rows = json::array();
  for (const LemmaRow& r : report.rows) {
    rows.push_back({{"y", r.y},
                    {"mc", r.mc},
                    {"se", r.se},
                    {"exact", r.exact},
                    {"within", r.within}});
  }
  return {{"alpha", report.alpha},
          {"rows", std::move(rows)},
          {"limit_ok", report.limit_ok},
          {"pass", report.pass()}};
}

json to_json(const ProbeReport& r) {
  return {{"regime", std::string(to_string(r.regime))},
          {"time_reached", r.time_reached},
          {"events", r.events},
          {"quartile_rates", r.quartile_rates},
          {"terminated", std::string(to_string(r.terminated))},
          {"saturated", r.saturated},
          {"strictly_increasing", r.strictly_increasing},
          {"explosive", r.explosive}};
}

json to_json(const DyingOutReport& r) {
  return {{"horizons", r.horizons},
          {"medians", r.medians},
          {"runs", r.runs},
          {"budget_hits", r.budget_hits},
          {"stabilized", r.stabilized}};
}

}  // namespace quakesim
