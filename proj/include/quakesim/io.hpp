#ifndef QUAKESIM_IO_HPP
#define QUAKESIM_IO_HPP

#include <ostream>
#include <string>

#include <json.hpp>

#include "quakesim/analysis.hpp"
#include "quakesim/chain.hpp"
#include "quakesim/foster_config.hpp"

namespace quakesim {

inline constexpr const char* kEventCsvHeader = "n,t,dt,kind,x,y,z,lambda_pre";

/// %.17g: enough digits to round-trip every double.
std::string format_double(double v);

void write_event_csv_header(std::ostream& out);
void write_event_csv_row(std::ostream& out, const EventRecord& record);
void write_event_csv(std::ostream& out, const EventLog& log);

struct ParsedEventRow {
  EventRecord record;
  bool ok = false;
  std::string error;
};

/// Parses one data row of the event CSV.
ParsedEventRow parse_event_csv_row(const std::string& line);

nlohmann::json to_json(const EventRecord& record);
nlohmann::json to_json(const SummaryStats& stats);
nlohmann::json to_json(const FosterConfig& config);
nlohmann::json to_json(const ConstraintReport& report);
nlohmann::json to_json(const DriftEstimate& drift);
nlohmann::json to_json(const ReturnTimeStats& stats);
nlohmann::json to_json(const ConvergenceReport& report);
nlohmann::json to_json(const DominanceReport& report);
nlohmann::json to_json(const LemmaReport& report);
nlohmann::json to_json(const ProbeReport& report);
nlohmann::json to_json(const DyingOutReport& report);

}  // namespace quakesim

#endif  // QUAKESIM_IO_HPP
