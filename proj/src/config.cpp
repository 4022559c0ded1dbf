#include "quakesim/config.hpp"

#include <cmath>
#include <functional>
#include <set>

namespace quakesim {

using nlohmann::json;

namespace {

std::string join_errors(const std::vector<FieldError>& errors) {
  std::string out = "invalid config:";
  for (const FieldError& e : errors) out += "\n  " + e.path + ": " + e.message;
  return out;
}

// Reads the members of one JSON object, recording every problem under its
// JSON path instead of stopping at the first one.
class ObjectReader {
 public:
  ObjectReader(const json& node, std::string path,
               std::vector<FieldError>& errors)
      : node_(node), path_(std::move(path)), errors_(errors) {
    if (!node_.is_object()) {
      fail(path_, "must be an object");
      valid_ = false;
    }
  }

  bool valid() const { return valid_; }
  std::string child(std::string_view key) const {
    return path_ + "." + std::string(key);
  }

  const json* get(std::string_view key, bool required) {
    if (!valid_) return nullptr;
    const std::string k(key);
    known_.insert(k);
    auto it = node_.find(k);
    if (it == node_.end()) {
      if (required) fail(child(key), "missing key");
      return nullptr;
    }
    return &*it;
  }

  std::optional<double> number(
      std::string_view key, bool required,
      const std::function<bool(double)>& ok = nullptr,
      std::string_view requirement = {}) {
    const json* v = get(key, required);
    if (!v) return std::nullopt;
    if (!v->is_number()) {
      fail(child(key), "must be a number");
      return std::nullopt;
    }
    const double d = v->get<double>();
    if (!std::isfinite(d) || (ok && !ok(d))) {
      fail(child(key), std::string(requirement));
      return std::nullopt;
    }
    return d;
  }

  std::optional<std::uint64_t> unsigned_integer(std::string_view key,
                                                bool required,
                                                std::uint64_t min_value = 0) {
    const json* v = get(key, required);
    if (!v) return std::nullopt;
    std::optional<std::uint64_t> out;
    if (v->is_number_unsigned()) {
      out = v->get<std::uint64_t>();
    } else if (v->is_number_float()) {
      const double d = v->get<double>();
      if (d >= 0 && d < 1.8446744073709552e19 && std::floor(d) == d) {
        out = static_cast<std::uint64_t>(d);
      }
    }
    if (!out) {
      fail(child(key), "must be a non-negative integer");
    } else if (*out < min_value) {
      fail(child(key), "must be >= " + std::to_string(min_value));
      out.reset();
    }
    return out;
  }

  std::optional<std::string> string(std::string_view key, bool required) {
    const json* v = get(key, required);
    if (!v) return std::nullopt;
    if (!v->is_string()) {
      fail(child(key), "must be a string");
      return std::nullopt;
    }
    return v->get<std::string>();
  }

  /// Reports keys that were never asked for.
  void finish() {
    if (!valid_) return;
    for (auto it = node_.begin(); it != node_.end(); ++it) {
      if (!known_.count(it.key())) fail(child(it.key()), "unknown key");
    }
  }

  void fail(std::string path, std::string message) {
    errors_.push_back({std::move(path), std::move(message)});
  }

 private:
  const json& node_;
  std::string path_;
  std::vector<FieldError>& errors_;
  std::set<std::string> known_;
  bool valid_ = true;
};

const auto positive = [](double v) { return v > 0; };

std::optional<PhiSpec> read_phi(const json& node, const std::string& path,
                                std::vector<FieldError>& errors) {
  ObjectReader r(node, path, errors);
  if (!r.valid()) return std::nullopt;
  const auto kind = r.string("kind", true);
  std::optional<PhiSpec> out;
  if (kind == "exp") {
    const auto scale = r.number("scale", true, positive, "must be > 0");
    if (scale) out = ExponentialPhi{*scale};
  } else if (kind == "threshold_linear") {
    const auto theta = r.number("theta", true);
    const auto slope = r.number("slope", true, positive, "must be > 0");
    if (theta && slope) out = ThresholdLinearPhi{*theta, *slope};
  } else if (kind) {
    r.fail(r.child("kind"), "unknown variant \"" + *kind + "\"");
    return std::nullopt;
  }
  r.finish();
  return out;
}

std::optional<ZSpec> read_z(const json& node, const std::string& path,
                            std::vector<FieldError>& errors) {
  ObjectReader r(node, path, errors);
  if (!r.valid()) return std::nullopt;
  const auto kind = r.string("kind", true);
  std::optional<ZSpec> out;
  if (kind == "exponential") {
    const auto mean = r.number("mean", true, positive, "must be > 0");
    if (mean) out = ExponentialZ{*mean};
  } else if (kind == "uniform") {
    const auto a = r.number("a", true, [](double v) { return v >= 0; },
                            "must be >= 0");
    const auto b = r.number("b", true);
    if (a && b) {
      if (*b > *a) {
        out = UniformZ{*a, *b};
      } else {
        r.fail(r.child("b"), "must be > a");
      }
    }
  } else if (kind == "deterministic") {
    const auto value = r.number("value", true, positive, "must be > 0");
    if (value) out = DeterministicZ{*value};
  } else if (kind) {
    r.fail(r.child("kind"), "unknown variant \"" + *kind + "\"");
    return std::nullopt;
  }
  r.finish();
  return out;
}

}  // namespace

ConfigError::ConfigError(std::vector<FieldError> errors)
    : std::runtime_error(join_errors(errors)), errors_(std::move(errors)) {}

RunConfig parse_config(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ConfigError({{"$", std::string("malformed JSON: ") + e.what()}});
  }
  return parse_config_json(doc);
}

RunConfig parse_config_json(const json& doc) {
  std::vector<FieldError> errors;
  RunConfig cfg;
  ObjectReader root(doc, "$", errors);
  if (!root.valid()) throw ConfigError(errors);

  if (const json* model = root.get("model", true)) {
    ObjectReader m(*model, "$.model", errors);
    if (m.valid()) {
      if (auto c = m.number("c", true, positive, "must be > 0")) cfg.model.c = *c;
      if (auto k = m.number("k", true, positive, "must be > 0")) cfg.model.k = *k;
      if (auto a = m.number("alpha", true, positive, "must be > 0")) {
        cfg.model.alpha = *a;
      }
      if (const json* phi = m.get("phi", true)) {
        if (auto p = read_phi(*phi, "$.model.phi", errors)) cfg.model.phi = *p;
      }
      if (const json* z = m.get("z", true)) {
        if (auto d = read_z(*z, "$.model.z", errors)) cfg.model.z = *d;
      }
      if (auto cap = m.number("saturation_cap", false, positive, "must be > 0")) {
        cfg.saturation_cap = *cap;
      }
      m.finish();
    }
  }

  if (const json* initial = root.get("initial", true)) {
    ObjectReader s(*initial, "$.initial", errors);
    if (s.valid()) {
      if (auto x = s.number("x", true)) cfg.initial.x = *x;
      if (auto y = s.number("y", true, [](double v) { return v >= 0; },
                            "must be >= 0")) {
        cfg.initial.y = *y;
      }
      s.finish();
    }
  }

  if (auto seed = root.unsigned_integer("seed", true)) cfg.seed = *seed;

  if (const json* stop = root.get("stop", true)) {
    ObjectReader s(*stop, "$.stop", errors);
    if (s.valid()) {
      cfg.stop = {};
      cfg.stop.horizon = s.number("horizon", false, positive, "must be > 0");
      cfg.stop.max_events = s.unsigned_integer("max_events", false);
      if (!s.get("horizon", false) && !s.get("max_events", false)) {
        s.fail("$.stop", "needs horizon and/or max_events");
      }
      s.finish();
    }
  }

  if (auto reps = root.unsigned_integer("replications", true, 1)) {
    cfg.replications = *reps;
  }
  if (auto burn = root.number("burn_in_fraction", true,
                              [](double v) { return v >= 0 && v < 1; },
                              "must lie in [0, 1)")) {
    cfg.burn_in_fraction = *burn;
  }

  if (const json* outputs = root.get("outputs", false)) {
    ObjectReader o(*outputs, "$.outputs", errors);
    if (o.valid()) {
      cfg.events_path = o.string("events", false);
      cfg.summary_path = o.string("summary", false);
      o.finish();
    }
  }

  if (const json* foster = root.get("foster", false)) {
    ObjectReader f(*foster, "$.foster", errors);
    if (f.valid()) {
      const auto r1 = f.number("r1", true, positive, "must be > 0");
      const auto r2 = f.number("r2", true, positive, "must be > 0");
      const auto r3 = f.number("r3", true, positive, "must be > 0");
      if (r1 && r2 && r3) cfg.foster_weights = std::array{*r1, *r2, *r3};
      f.finish();
    }
  }

  root.finish();
  if (!errors.empty()) throw ConfigError(std::move(errors));
  return cfg;
}

json to_json(const ModelParams& params) {
  json phi = std::visit(
      [](const auto& p) -> json {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, ExponentialPhi>) {
          return {{"kind", "exp"}, {"scale", p.scale}};
        } else {
          return {{"kind", "threshold_linear"}, {"theta", p.theta},
                  {"slope", p.slope}};
        }
      },
      params.phi);
  json z = std::visit(
      [](const auto& d) -> json {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, ExponentialZ>) {
          return {{"kind", "exponential"}, {"mean", d.mean}};
        } else if constexpr (std::is_same_v<T, UniformZ>) {
          return {{"kind", "uniform"}, {"a", d.a}, {"b", d.b}};
        } else {
          return {{"kind", "deterministic"}, {"value", d.value}};
        }
      },
      params.z);
  return {{"c", params.c},
          {"k", params.k},
          {"alpha", params.alpha},
          {"phi", std::move(phi)},
          {"z", std::move(z)}};
}

json to_json(const RunConfig& config) {
  json model = to_json(config.model);
  if (config.saturation_cap != kDefaultSaturationCap) {
    model["saturation_cap"] = config.saturation_cap;
  }
  json stop = json::object();
  if (config.stop.horizon) stop["horizon"] = *config.stop.horizon;
  if (config.stop.max_events) stop["max_events"] = *config.stop.max_events;

  json out = {{"model", std::move(model)},
              {"initial", {{"x", config.initial.x}, {"y", config.initial.y}}},
              {"seed", config.seed},
              {"stop", std::move(stop)},
              {"replications", config.replications},
              {"burn_in_fraction", config.burn_in_fraction}};
  if (config.events_path || config.summary_path) {
    json outputs = json::object();
    if (config.events_path) outputs["events"] = *config.events_path;
    if (config.summary_path) outputs["summary"] = *config.summary_path;
    out["outputs"] = std::move(outputs);
  }
  if (config.foster_weights) {
    const auto& w = *config.foster_weights;
    out["foster"] = {{"r1", w[0]}, {"r2", w[1]}, {"r3", w[2]}};
  }
  return out;
}

}  // namespace quakesim
