// JSON <-> config plumbing. Exact quantities (rates, times, set endpoints)
// travel as rational strings "p/q" or JSON integers; JSON floats are rejected
// in those positions so exactness survives serialization. Floating-point
// literals are accepted only inside the explicitly float-generated part
// (the brownian stress spec).
#pragma once

#include <json.hpp>

#include <fstream>
#include <string>
#include <vector>

#include "jumphit/harness.hpp"

namespace jumphit {

using Json = nlohmann::json;

namespace cfg {

inline Rat rat_from(const Json& j, const std::string& field) {
  if (j.is_number_integer()) return Rat(static_cast<long>(j.get<std::int64_t>()));
  if (j.is_string()) {
    try {
      return parse_rat(j.get<std::string>());
    } catch (const std::invalid_argument& e) {
      throw ConfigError(field, e.what());
    }
  }
  if (j.is_number_float())
    throw ConfigError(field, "floating-point literals are not exact; write a rational string like \"1/2\"");
  throw ConfigError(field, "expected a rational string \"p/q\" or an integer");
}

inline ExtRat endpoint_from(const Json& j, const std::string& field) {
  if (j.is_string()) {
    std::string s = j.get<std::string>();
    if (s == "-inf") return ExtRat::neg_infinity();
    if (s == "+inf" || s == "inf") return ExtRat::pos_infinity();
  }
  return ExtRat(rat_from(j, field));
}

inline long long_from(const Json& j, const std::string& field) {
  if (!j.is_number_integer()) throw ConfigError(field, "expected an integer");
  return static_cast<long>(j.get<std::int64_t>());
}

inline std::uint64_t u64_from(const Json& j, const std::string& field) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<std::int64_t>() >= 0))
    throw ConfigError(field, "expected a nonnegative integer");
  return j.get<std::uint64_t>();
}

inline const Json& member(const Json& j, const char* key, const std::string& field) {
  auto it = j.find(key);
  if (it == j.end()) throw ConfigError(field, "missing required field");
  return *it;
}

inline ClosedSet closed_set_from(const Json& j, const std::string& field) {
  if (!j.is_array()) throw ConfigError(field, "expected a list of [lo, hi] intervals");
  std::vector<ClosedInterval> intervals;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const Json& iv = j[i];
    std::string at = field + "[" + std::to_string(i) + "]";
    if (!iv.is_array() || iv.size() != 2) throw ConfigError(at, "expected an interval pair [lo, hi]");
    ExtRat lo = endpoint_from(iv[0], at + ".lo");
    ExtRat hi = endpoint_from(iv[1], at + ".hi");
    try {
      intervals.emplace_back(lo, hi);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(at, e.what());
    }
  }
  return ClosedSet::normalize(std::move(intervals));
}

inline TargetSpec target_from(const Json& j, const std::string& field) {
  if (!j.is_object()) throw ConfigError(field, "expected an object with 'components' or 'open_interval'");
  if (j.contains("open_interval")) {
    const Json& oi = j["open_interval"];
    OpenIntervalSpec spec;
    spec.a = rat_from(member(oi, "a", field + ".open_interval.a"), field + ".open_interval.a");
    spec.b = rat_from(member(oi, "b", field + ".open_interval.b"), field + ".open_interval.b");
    spec.components =
        long_from(member(oi, "components", field + ".open_interval.components"), field + ".open_interval.components");
    return spec;
  }
  if (j.contains("components")) {
    const Json& comps = j["components"];
    if (!comps.is_array()) throw ConfigError(field + ".components", "expected a list of closed sets");
    FSigmaSet u;
    for (std::size_t k = 0; k < comps.size(); ++k)
      u.components.push_back(closed_set_from(comps[k], field + ".components[" + std::to_string(k) + "]"));
    if (j.contains("truncated")) {
      const Json& tr = j["truncated"];
      if (!tr.is_boolean()) throw ConfigError(field + ".truncated", "expected a boolean");
      u.truncated = tr.get<bool>();
    }
    return u;
  }
  throw ConfigError(field, "expected 'components' or 'open_interval'");
}

inline SizeSampler sizes_from(const Json& j, const std::string& field) {
  if (!j.is_object() || !j.contains("kind")) throw ConfigError(field, "expected an object with a 'kind'");
  std::string kind = j["kind"].get<std::string>();
  if (kind == "lattice") {
    LatticeUniformSizes lat;
    lat.denominator = long_from(member(j, "denominator", field + ".denominator"), field + ".denominator");
    lat.min_numerator = long_from(member(j, "min_numerator", field + ".min_numerator"), field + ".min_numerator");
    lat.max_numerator = long_from(member(j, "max_numerator", field + ".max_numerator"), field + ".max_numerator");
    return lat;
  }
  if (kind == "choice") {
    ChoiceSizes ch;
    const Json& values = member(j, "values", field + ".values");
    if (!values.is_array()) throw ConfigError(field + ".values", "expected a list of rationals");
    for (std::size_t i = 0; i < values.size(); ++i)
      ch.values.push_back(rat_from(values[i], field + ".values[" + std::to_string(i) + "]"));
    if (j.contains("weights")) {
      const Json& weights = j["weights"];
      if (!weights.is_array()) throw ConfigError(field + ".weights", "expected a list of nonnegative integers");
      for (std::size_t i = 0; i < weights.size(); ++i)
        ch.weights.push_back(u64_from(weights[i], field + ".weights[" + std::to_string(i) + "]"));
    }
    return ch;
  }
  throw ConfigError(field + ".kind", "unknown size sampler kind '" + kind + "' (lattice|choice)");
}

inline ContinuousSpec continuous_from(const Json& j, const std::string& field) {
  if (!j.is_object() || !j.contains("kind")) throw ConfigError(field, "expected an object with a 'kind'");
  std::string kind = j["kind"].get<std::string>();
  if (kind == "zero") return ZeroContinuous{};
  if (kind == "constant") return ConstantContinuous{rat_from(member(j, "value", field + ".value"), field + ".value")};
  if (kind == "fixed") {
    FixedPiecewise fp;
    const Json& pts = member(j, "breakpoints", field + ".breakpoints");
    if (!pts.is_array() || pts.size() < 2) throw ConfigError(field + ".breakpoints", "expected >= 2 [time, value] pairs");
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const Json& p = pts[i];
      std::string at = field + ".breakpoints[" + std::to_string(i) + "]";
      if (!p.is_array() || p.size() != 2) throw ConfigError(at, "expected a [time, value] pair");
      fp.breakpoints.emplace_back(rat_from(p[0], at + ".time"), rat_from(p[1], at + ".value"));
    }
    return fp;
  }
  if (kind == "random_slopes") {
    RandomSlopes rs;
    rs.slope_bound = rat_from(member(j, "slope_bound", field + ".slope_bound"), field + ".slope_bound");
    if (j.contains("segments")) rs.segments = static_cast<unsigned>(u64_from(j["segments"], field + ".segments"));
    if (j.contains("slope_denominator"))
      rs.slope_denominator = long_from(j["slope_denominator"], field + ".slope_denominator");
    return rs;
  }
  if (kind == "brownian") {
    BrownianStress bs;
    if (j.contains("sigma")) {
      if (!j["sigma"].is_number()) throw ConfigError(field + ".sigma", "expected a number");
      bs.sigma = j["sigma"].get<double>();  // float-generated part: doubles are the point
    }
    if (j.contains("steps")) bs.steps = static_cast<unsigned>(u64_from(j["steps"], field + ".steps"));
    return bs;
  }
  throw ConfigError(field + ".kind",
                    "unknown continuous kind '" + kind + "' (zero|constant|fixed|random_slopes|brownian)");
}

inline ScheduleSpec schedule_from(const Json& j, const std::string& field) {
  ScheduleSpec spec;
  if (j.is_string()) {
    std::string s = j.get<std::string>();
    if (s == "guaranteed") {
      spec.kind = ScheduleSpec::Kind::guaranteed;
      return spec;
    }
    if (s.rfind("base=", 0) == 0) {
      spec.kind = ScheduleSpec::Kind::base;
      try {
        spec.base = std::stol(s.substr(5));
      } catch (...) {
        throw ConfigError(field, "malformed base schedule '" + s + "' (want base=<integer>)");
      }
      return spec;
    }
    throw ConfigError(field, "unknown schedule '" + s + "' (guaranteed | base=<b> | {custom:[...]})");
  }
  if (j.is_object() && j.contains("base")) {
    spec.kind = ScheduleSpec::Kind::base;
    spec.base = long_from(j["base"], field + ".base");
    return spec;
  }
  if (j.is_object() && j.contains("custom")) {
    const Json& ms = j["custom"];
    if (!ms.is_array() || ms.empty()) throw ConfigError(field + ".custom", "expected a nonempty integer list");
    spec.kind = ScheduleSpec::Kind::custom;
    for (std::size_t i = 0; i < ms.size(); ++i)
      spec.resolutions.push_back(long_from(ms[i], field + ".custom[" + std::to_string(i) + "]"));
    return spec;
  }
  throw ConfigError(field, "expected \"guaranteed\", \"base=<b>\", {\"base\": b} or {\"custom\": [...]}");
}

}  // namespace cfg

inline ScenarioConfig parse_scenario_config(const Json& j) {
  if (!j.is_object()) throw ConfigError("config", "expected a JSON object");
  ScenarioConfig config;
  if (j.contains("scenario_id")) {
    if (!j["scenario_id"].is_string()) throw ConfigError("scenario_id", "expected a string");
    config.scenario_id = j["scenario_id"].get<std::string>();
  }
  if (j.contains("seed")) config.seed = cfg::u64_from(j["seed"], "seed");
  if (j.contains("replicates")) config.replicates = cfg::u64_from(j["replicates"], "replicates");

  const Json& path = cfg::member(j, "path", "path");
  config.path.rate = cfg::rat_from(cfg::member(path, "rate", "path.rate"), "path.rate");
  config.path.horizon = cfg::rat_from(cfg::member(path, "horizon", "path.horizon"), "path.horizon");
  if (path.contains("time_denominator"))
    config.path.time_denominator = cfg::u64_from(path["time_denominator"], "path.time_denominator");
  if (path.contains("sizes")) config.path.sizes = cfg::sizes_from(path["sizes"], "path.sizes");
  if (path.contains("continuous")) config.path.continuous = cfg::continuous_from(path["continuous"], "path.continuous");

  config.target = cfg::target_from(cfg::member(j, "target", "target"), "target");
  config.t = cfg::rat_from(cfg::member(j, "t", "t"), "t");
  if (j.contains("levels")) config.levels = cfg::long_from(j["levels"], "levels");
  if (j.contains("schedule")) config.schedule = cfg::schedule_from(j["schedule"], "schedule");
  if (j.contains("mode")) {
    std::string mode = j["mode"].is_string() ? j["mode"].get<std::string>() : std::string();
    if (mode == "exact")
      config.mode = ArithmeticMode::exact;
    else if (mode == "float")
      config.mode = ArithmeticMode::floating;
    else
      throw ConfigError("mode", "expected \"exact\" or \"float\"");
  }
  return config;
}

inline ScenarioConfig load_scenario_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open config file: " + path);
  Json j;
  try {
    in >> j;
  } catch (const Json::parse_error& e) {
    throw ConfigError("config", std::string("JSON parse error: ") + e.what());
  }
  return parse_scenario_config(j);
}

// Explicit path fixture: a literal cadlag path for `detect` runs and the
// output format of `simulate`.
inline Json path_to_json(const CadlagPath& path) {
  Json j;
  j["horizon"] = rat_str(path.horizon());
  Json bps = Json::array();
  for (const auto& [time, value] : path.continuous().breakpoints()) bps.push_back({rat_str(time), rat_str(value)});
  j["breakpoints"] = std::move(bps);
  Json jumps = Json::array();
  for (const auto& jump : path.jumps()) jumps.push_back({rat_str(jump.time), rat_str(jump.size)});
  j["jumps"] = std::move(jumps);
  j["exact"] = path.exact();
  return j;
}

inline CadlagPath path_from_json(const Json& j, const std::string& field = "fixture") {
  if (!j.is_object()) throw ConfigError(field, "expected an object");
  Rat horizon = cfg::rat_from(cfg::member(j, "horizon", field + ".horizon"), field + ".horizon");
  std::vector<PiecewiseLinear::Breakpoint> bps;
  if (j.contains("breakpoints")) {
    const Json& pts = j["breakpoints"];
    if (!pts.is_array()) throw ConfigError(field + ".breakpoints", "expected a list of [time, value] pairs");
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const Json& p = pts[i];
      std::string at = field + ".breakpoints[" + std::to_string(i) + "]";
      if (!p.is_array() || p.size() != 2) throw ConfigError(at, "expected a [time, value] pair");
      bps.emplace_back(cfg::rat_from(p[0], at + ".time"), cfg::rat_from(p[1], at + ".value"));
    }
  } else {
    bps = {{Rat(0), Rat(0)}, {horizon, Rat(0)}};
  }
  std::vector<JumpSpec> jumps;
  if (j.contains("jumps")) {
    const Json& js = j["jumps"];
    if (!js.is_array()) throw ConfigError(field + ".jumps", "expected a list of [time, size] pairs");
    for (std::size_t i = 0; i < js.size(); ++i) {
      const Json& p = js[i];
      std::string at = field + ".jumps[" + std::to_string(i) + "]";
      if (!p.is_array() || p.size() != 2) throw ConfigError(at, "expected a [time, size] pair");
      jumps.push_back(JumpSpec{cfg::rat_from(p[0], at + ".time"), cfg::rat_from(p[1], at + ".size")});
    }
  }
  bool exact = true;
  if (j.contains("exact")) {
    if (!j["exact"].is_boolean()) throw ConfigError(field + ".exact", "expected a boolean");
    exact = j["exact"].get<bool>();
  }
  try {
    PiecewiseLinear continuous(std::move(bps));
    if (continuous.horizon() != horizon)
      throw std::invalid_argument("breakpoints must end exactly at the declared horizon");
    return CadlagPath(std::move(continuous), std::move(jumps), exact);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(field, e.what());
  }
}

}  // namespace jumphit
