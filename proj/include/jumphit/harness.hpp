// Monte Carlo comparison harness: run R seeded replicates of a compound
// Poisson scenario, evaluate the exact hitting-time oracle and the grid
// detector on each, and report agreement. Replicates are independent (seeded
// by a published counter hash), so the parallel map is embarrassingly
// parallel and the report is byte-stable across job counts.
#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <exception>
#include <fstream>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "jumphit/grid_detector.hpp"
#include "jumphit/hitting_oracle.hpp"
#include "jumphit/path_gen.hpp"
#include "jumphit/path_model.hpp"
#include "jumphit/rational.hpp"
#include "jumphit/set_algebra.hpp"

namespace jumphit {

enum class ArithmeticMode { exact, floating };

inline const char* mode_name(ArithmeticMode m) { return m == ArithmeticMode::exact ? "exact" : "float"; }

struct ScheduleSpec {
  enum class Kind { guaranteed, base, custom };
  Kind kind = Kind::guaranteed;
  long base = 0;                  // base kind: constant resolution
  std::vector<long> resolutions;  // custom kind: m(1), m(2), ...
};

// Open interval (a, b) materialized as its first K closed components; kept
// symbolic in the config so sweeps can vary K.
struct OpenIntervalSpec {
  Rat a;
  Rat b;
  long components = 1;
};

using TargetSpec = std::variant<FSigmaSet, OpenIntervalSpec>;

inline FSigmaSet build_target(const TargetSpec& spec) {
  if (const auto* lit = std::get_if<FSigmaSet>(&spec)) return *lit;
  const auto& oi = std::get<OpenIntervalSpec>(spec);
  return FSigmaSet::open_interval(oi.a, oi.b, oi.components);
}

struct ScenarioConfig {
  std::string scenario_id = "scenario";
  std::uint64_t seed = 0;
  std::uint64_t replicates = 1;  // R
  CompoundPoissonParams path;
  TargetSpec target = FSigmaSet{};
  Rat t = Rat(1);
  long levels = 1;  // N
  ScheduleSpec schedule;
  ArithmeticMode mode = ArithmeticMode::exact;
};

// Config rejection with the offending field spelled out.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::runtime_error(field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

inline void validate(const ScenarioConfig& config) {
  if (config.scenario_id.empty()) throw ConfigError("scenario_id", "must be nonempty");
  if (config.scenario_id.find_first_of(",\"\n\r") != std::string::npos)
    throw ConfigError("scenario_id", "must not contain commas, quotes or newlines (it is a CSV cell)");
  if (config.replicates < 1) throw ConfigError("replicates", "must be >= 1");
  if (config.levels < 1) throw ConfigError("levels", "must be >= 1");
  if (!(config.path.rate > 0)) throw ConfigError("path.rate", "must be > 0");
  if (!(config.path.horizon > 0)) throw ConfigError("path.horizon", "must be > 0");
  if (config.path.time_denominator < 1) throw ConfigError("path.time_denominator", "must be >= 1");
  try {
    jumphit::validate(config.path.sizes);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("path.sizes", e.what());
  }
  if (!(config.t > 0)) throw ConfigError("t", "must be > 0");
  if (config.t > config.path.horizon) throw ConfigError("t", "must be <= path.horizon");
  if (const auto* oi = std::get_if<OpenIntervalSpec>(&config.target)) {
    if (!(oi->a < oi->b)) throw ConfigError("target.open_interval", "needs a < b");
    if (oi->components < 1) throw ConfigError("target.open_interval.components", "must be >= 1");
  }
  bool float_continuous = std::holds_alternative<BrownianStress>(config.path.continuous);
  if (config.mode == ArithmeticMode::exact && float_continuous)
    throw ConfigError("mode", "exact mode cannot use the float-generated continuous part; declare mode float");
  if (config.mode == ArithmeticMode::floating && !float_continuous)
    throw ConfigError("mode", "float mode requires the float-generated (brownian) continuous part");
  switch (config.schedule.kind) {
    case ScheduleSpec::Kind::guaranteed:
      if (config.mode == ArithmeticMode::floating)
        throw ConfigError("schedule", "guaranteed schedule requires exact arithmetic mode");
      break;
    case ScheduleSpec::Kind::base:
      if (config.schedule.base < 2) throw ConfigError("schedule.base", "must be >= 2");
      break;
    case ScheduleSpec::Kind::custom:
      if (static_cast<long>(config.schedule.resolutions.size()) < config.levels)
        throw ConfigError("schedule.custom", "must list a resolution for every level up to N");
      for (long m : config.schedule.resolutions)
        if (m < 2) throw ConfigError("schedule.custom", "resolutions must be >= 2");
      break;
  }
}

struct ReplicateRow {
  std::uint64_t replicate = 0;
  std::uint64_t subseed = 0;
  bool oracle_event = false;
  HitBranch oracle_branch = HitBranch::never;
  ExtRat oracle_time = ExtRat::pos_infinity();
  bool detector_overall = false;
  std::optional<long> first_reject_level;
  std::optional<Witness> witness;  // deepest-level witness of the first accepting component
  std::uint64_t levels_run = 0;
  std::uint64_t total_pairs = 0;
  bool vacuous_seen = false;
  bool isolation_ok = true;              // rejection certificate's isolation hypothesis
  std::optional<long> rejection_bound;   // certified rejection level, when computed
  long levels_budget = 0;                // N actually offered to the detector
  std::int64_t runtime_ms = 0;           // 0 unless timing collection was requested

  bool agrees() const { return oracle_event == detector_overall; }
};

struct ScenarioReport {
  ScenarioConfig config;
  std::vector<ReplicateRow> rows;
  std::uint64_t agree_count = 0;

  std::uint64_t disagree_count() const { return rows.size() - agree_count; }
  // Exact agreement rate as a rational; display-grade double alongside.
  Rat agreement_rate() const {
    if (rows.empty()) return Rat(1);
    return make_rat(static_cast<long>(agree_count), static_cast<long>(rows.size()));
  }
};

namespace detail {

inline ReplicateRow run_replicate(const ScenarioConfig& config, const FSigmaSet& target, std::uint64_t r,
                                  bool collect_timings, bool bump_levels) {
  auto started = std::chrono::steady_clock::now();
  ReplicateRow row;
  row.replicate = r;
  row.subseed = derive_subseed(config.seed, r);
  CadlagPath path = gen_compound_poisson(row.subseed, config.path);

  HittingResult hit = first_hitting_time(path, target);
  row.oracle_branch = hit.branch;
  row.oracle_time = hit.time;
  row.oracle_event = hit.time < ExtRat(config.t);

  if (hit.branch == HitBranch::zero_in_U) {
    // The zero branch is decided upstream of the detector: T = 0 < t always.
    row.detector_overall = true;
    row.levels_budget = 0;
  } else {
    Schedule schedule;
    long n_eff = config.levels;
    switch (config.schedule.kind) {
      case ScheduleSpec::Kind::guaranteed: {
        schedule = make_guaranteed_schedule(path, config.t);
        // The equivalence precondition: enough levels to reach the certified
        // rejection depth of this replicate.
        if (auto cert = rejection_level(path, target, config.t)) {
          row.rejection_bound = cert->level;
          row.isolation_ok = cert->isolated;
          if (bump_levels && cert->level > n_eff) n_eff = cert->level;
        }
        break;
      }
      case ScheduleSpec::Kind::base:
        schedule = make_base_schedule(config.schedule.base);
        break;
      case ScheduleSpec::Kind::custom:
        schedule = make_custom_schedule(config.schedule.resolutions);
        break;
    }
    FSigmaVerdict verdict = detect_fsigma(path, target, config.t, n_eff, schedule);
    row.detector_overall = verdict.overall;
    row.first_reject_level = verdict.first_reject_level();
    row.levels_run = verdict.levels_run_total();
    row.total_pairs = verdict.pairs_tested_total();
    row.levels_budget = n_eff;
    for (const auto& component : verdict.components) {
      for (const auto& lv : component.levels) row.vacuous_seen = row.vacuous_seen || lv.vacuous;
      if (!row.witness && component.overall && !component.levels.empty())
        row.witness = component.levels.back().witness;
    }
  }

  if (collect_timings) {
    auto elapsed = std::chrono::steady_clock::now() - started;
    row.runtime_ms = std::chrono::duration_cast<std::chrono::milliseconds>(elapsed).count();
  }
  return row;
}

inline ScenarioReport run_scenario_impl(const ScenarioConfig& config, unsigned jobs, bool collect_timings,
                                        bool bump_levels) {
  validate(config);
  FSigmaSet target = build_target(config.target);

  ScenarioReport report;
  report.config = config;
  report.rows.resize(config.replicates);

  std::uint64_t total = config.replicates;
  unsigned workers = jobs == 0 ? 1u : jobs;
  if (static_cast<std::uint64_t>(workers) > total) workers = static_cast<unsigned>(total);

  if (workers <= 1) {
    for (std::uint64_t r = 0; r < total; ++r)
      report.rows[r] = run_replicate(config, target, r, collect_timings, bump_levels);
  } else {
    std::atomic<std::uint64_t> cursor{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto body = [&]() {
      try {
        for (;;) {
          std::uint64_t r = cursor.fetch_add(1);
          if (r >= total) return;
          report.rows[r] = run_replicate(config, target, r, collect_timings, bump_levels);
        }
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(body);
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
  }

  for (const auto& row : report.rows)
    if (row.agrees()) ++report.agree_count;
  return report;
}

}  // namespace detail

// Deterministic parallel map over replicates. `jobs` caps the worker count;
// results depend only on (config, replicate index), never on scheduling.
// In guaranteed mode the per-replicate level budget is raised to the
// certified rejection level when that is finite and above N, so the identity
// check runs with its precondition satisfied.
inline ScenarioReport run_scenario(const ScenarioConfig& config, unsigned jobs = 1,
                                   bool collect_timings = false) {
  return detail::run_scenario_impl(config, jobs, collect_timings, /*bump_levels=*/true);
}

// CSV contract. Columns are fixed; rationals print as "p/q", infinities as
// "+inf", booleans as "true"/"false", absent optionals as empty cells.
inline constexpr const char* kCsvHeader =
    "scenario_id,replicate,subseed,oracle_event,oracle_branch,oracle_time,detector_overall,"
    "first_reject_level,witness_p,witness_q,witness_increment,levels_run,total_pairs,"
    "arithmetic_mode,runtime_ms";

inline void emit_csv(const ScenarioReport& report, std::ostream& out) {
  out << kCsvHeader << '\n';
  for (const auto& row : report.rows) {
    out << report.config.scenario_id << ',' << row.replicate << ',' << row.subseed << ','
        << (row.oracle_event ? "true" : "false") << ',' << branch_name(row.oracle_branch) << ','
        << row.oracle_time.str() << ',' << (row.detector_overall ? "true" : "false") << ',';
    if (row.first_reject_level) out << *row.first_reject_level;
    out << ',';
    if (row.witness) out << rat_str(row.witness->p);
    out << ',';
    if (row.witness) out << rat_str(row.witness->q);
    out << ',';
    if (row.witness) out << rat_str(row.witness->increment);
    out << ',' << row.levels_run << ',' << row.total_pairs << ',' << mode_name(report.config.mode) << ','
        << row.runtime_ms << '\n';
  }
}

inline std::string csv_string(const ScenarioReport& report) {
  std::ostringstream out;
  emit_csv(report, out);
  return out.str();
}

inline void emit_csv_file(const ScenarioReport& report, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open CSV destination: " + path);
  emit_csv(report, out);
  if (!out.good()) throw std::runtime_error("short write to CSV destination: " + path);
}

// Identity check: detector == oracle on every replicate. Exit code semantics:
// 0 all agree, 1 any disagreement. Every disagreement carries a diagnostic
// that pins it on a violated guarantee precondition (coarse schedule, level
// budget below the rejection bound, unisolated jump cluster, float mode).
struct VerifyOutcome {
  ScenarioReport report;
  std::vector<std::string> diagnostics;
  std::uint64_t vacuous_rows = 0;
  int exit_code = 0;
};

inline VerifyOutcome verify_identity(const ScenarioConfig& config, unsigned jobs = 1,
                                     bool collect_timings = false) {
  VerifyOutcome outcome;
  outcome.report = run_scenario(config, jobs, collect_timings);
  for (const auto& row : outcome.report.rows) {
    if (row.vacuous_seen) ++outcome.vacuous_rows;
    if (row.agrees()) continue;
    std::ostringstream why;
    why << "replicate " << row.replicate << " (subseed " << row.subseed << "): oracle "
        << (row.oracle_event ? "true" : "false") << " vs detector "
        << (row.detector_overall ? "true" : "false");
    if (config.mode == ArithmeticMode::floating) {
      why << "; float-mode path: resolution certificates do not apply";
    } else if (!row.oracle_event && row.detector_overall) {
      if (row.rejection_bound && row.levels_budget < *row.rejection_bound)
        why << "; level budget N=" << row.levels_budget << " is below the certified rejection level n*="
            << *row.rejection_bound;
      else if (!row.isolation_ok)
        why << "; jump cluster tighter than the certified window: isolation precondition fails";
      else
        why << "; no certificate covers this configuration (schedule "
            << (config.schedule.kind == ScheduleSpec::Kind::guaranteed ? "guaranteed" : "non-guaranteed") << ")";
    } else if (row.oracle_event && !row.detector_overall) {
      if (row.vacuous_seen)
        why << "; a level had an empty pair set: schedule resolution too coarse for its window";
      else if (config.schedule.kind != ScheduleSpec::Kind::guaranteed)
        why << "; schedule below the certified resolution for some level";
      else
        why << "; unexpected under the guaranteed schedule — please report";
      if (row.first_reject_level) why << " (first rejecting level " << *row.first_reject_level << ")";
    }
    outcome.diagnostics.push_back(why.str());
  }
  outcome.exit_code = outcome.diagnostics.empty() ? 0 : 1;
  return outcome;
}

// Convergence sweep along one refinement axis.
enum class SweepAxis { levels, base_resolution, components };

inline const char* axis_name(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::levels: return "N";
    case SweepAxis::base_resolution: return "base";
    default: return "K";
  }
}

struct SweepRow {
  long axis_value = 0;
  std::uint64_t replicates = 0;
  std::uint64_t oracle_true = 0;
  std::uint64_t detector_true = 0;
  std::uint64_t agree = 0;
  std::uint64_t vacuous_rows = 0;
};

struct SweepResult {
  SweepAxis axis = SweepAxis::levels;
  std::vector<SweepRow> rows;
  std::vector<ScenarioReport> reports;  // one per axis value, aligned with rows
};

// Axis semantics:
//   levels: vary the level budget N. Under the guaranteed schedule in exact
//     mode, per-replicate agreement is provably nondecreasing in N (deeper
//     conjunctions only turn detector-true rows false, and completeness keeps
//     oracle-true rows accepted), so that monotonicity is asserted.
//   base_resolution: vary a constant resolution m(n) = b. Per-replicate
//     detector acceptance is asserted monotone across divisible consecutive
//     values (grid refinement); agreement itself is reported, not asserted.
//   components: vary the open-interval truncation depth K. Both the oracle
//     event and the detector verdict are asserted monotone per replicate.
// The levels axis disables the automatic rejection-bound level bump: the
// whole point of the sweep is to watch the budget N do its work.
inline SweepResult sweep(const ScenarioConfig& base_config, SweepAxis axis, const std::vector<long>& values,
                         unsigned jobs = 1) {
  if (values.empty()) throw ConfigError("sweep.values", "must list at least one axis value");
  for (std::size_t i = 1; i < values.size(); ++i)
    if (!(values[i - 1] < values[i])) throw ConfigError("sweep.values", "must be strictly increasing");
  if (axis == SweepAxis::components && !std::holds_alternative<OpenIntervalSpec>(base_config.target))
    throw ConfigError("sweep.axis", "the K axis needs an open-interval target");

  SweepResult result;
  result.axis = axis;
  for (long value : values) {
    ScenarioConfig config = base_config;
    switch (axis) {
      case SweepAxis::levels:
        if (value < 1) throw ConfigError("sweep.values", "level budgets must be >= 1");
        config.levels = value;
        break;
      case SweepAxis::base_resolution:
        if (value < 2) throw ConfigError("sweep.values", "base resolutions must be >= 2");
        config.schedule.kind = ScheduleSpec::Kind::base;
        config.schedule.base = value;
        break;
      case SweepAxis::components: {
        auto oi = std::get<OpenIntervalSpec>(base_config.target);
        oi.components = value;
        config.target = oi;
        break;
      }
    }
    // The levels axis runs with the raw budget (no rejection-bound bump):
    // the whole point of that sweep is to watch the budget N do its work.
    bool bump = axis != SweepAxis::levels;
    ScenarioReport report = detail::run_scenario_impl(config, jobs, false, bump);

    SweepRow row;
    row.axis_value = value;
    row.replicates = report.rows.size();
    for (const auto& rr : report.rows) {
      row.oracle_true += rr.oracle_event ? 1 : 0;
      row.detector_true += rr.detector_overall ? 1 : 0;
      row.agree += rr.agrees() ? 1 : 0;
      row.vacuous_rows += rr.vacuous_seen ? 1 : 0;
    }
    result.rows.push_back(row);
    result.reports.push_back(std::move(report));
  }

  // Scoped monotonicity assertions (exact mode only; float mode reports).
  if (base_config.mode == ArithmeticMode::exact) {
    for (std::size_t i = 1; i < result.reports.size(); ++i) {
      const auto& prev = result.reports[i - 1].rows;
      const auto& cur = result.reports[i].rows;
      for (std::size_t r = 0; r < prev.size(); ++r) {
        if (axis == SweepAxis::levels && base_config.schedule.kind == ScheduleSpec::Kind::guaranteed) {
          if (prev[r].agrees() && !cur[r].agrees())
            throw std::logic_error("sweep monotonicity violated on the N axis at replicate " +
                                   std::to_string(r));
        }
        if (axis == SweepAxis::base_resolution && values[i] % values[i - 1] == 0) {
          if (prev[r].detector_overall && !cur[r].detector_overall)
            throw std::logic_error("grid-refinement monotonicity violated on the base axis at replicate " +
                                   std::to_string(r));
        }
        if (axis == SweepAxis::components) {
          if (prev[r].oracle_event && !cur[r].oracle_event)
            throw std::logic_error("truncation monotonicity of the oracle violated at replicate " +
                                   std::to_string(r));
          if (prev[r].detector_overall && !cur[r].detector_overall)
            throw std::logic_error("truncation monotonicity of the detector violated at replicate " +
                                   std::to_string(r));
        }
      }
    }
  }
  return result;
}

inline void emit_sweep_csv(const SweepResult& result, std::ostream& out) {
  out << "axis,value,replicates,oracle_true,detector_true,agree,agreement_rate,vacuous_rows\n";
  for (const auto& row : result.rows) {
    Rat rate = row.replicates ? make_rat(static_cast<long>(row.agree), static_cast<long>(row.replicates))
                              : Rat(1);
    out << axis_name(result.axis) << ',' << row.axis_value << ',' << row.replicates << ',' << row.oracle_true
        << ',' << row.detector_true << ',' << row.agree << ',' << rat_str(rate) << ',' << row.vacuous_rows
        << '\n';
  }
}

}  // namespace jumphit
