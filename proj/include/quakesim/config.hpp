#ifndef QUAKESIM_CONFIG_HPP
#define QUAKESIM_CONFIG_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "quakesim/chain.hpp"
#include "quakesim/model.hpp"

namespace quakesim {

struct RunConfig {
  ModelParams model;
  State initial;
  std::uint64_t seed = 0;
  StopRule stop = StopRule::Horizon(1.0);
  std::uint64_t replications = 1;
  double burn_in_fraction = 0.1;
  double saturation_cap = kDefaultSaturationCap;
  std::optional<std::string> events_path;
  std::optional<std::string> summary_path;
  std::optional<std::array<double, 3>> foster_weights;
};

struct FieldError {
  std::string path;  ///< JSON path, e.g. "$.model.alpha"
  std::string message;
};

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<FieldError> errors);
  const std::vector<FieldError>& errors() const { return errors_; }

 private:
  std::vector<FieldError> errors_;
};

/// Parses and validates a run configuration. Throws ConfigError listing every
/// malformed, missing, unknown or out-of-range field.
RunConfig parse_config(std::string_view text);
RunConfig parse_config_json(const nlohmann::json& doc);

nlohmann::json to_json(const RunConfig& config);
nlohmann::json to_json(const ModelParams& params);

}  // namespace quakesim

#endif  // QUAKESIM_CONFIG_HPP
