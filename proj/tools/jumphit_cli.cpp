// Command-line front end: simulate (emit a path fixture), detect (trace one
// path against one target), verify (oracle vs detector over R replicates),
// sweep (convergence table along one refinement axis).
// Exit codes: 0 success/agreement, 1 disagreement found, 2 config error.
#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "jumphit/config.hpp"
#include "jumphit/harness.hpp"

namespace {

using namespace jumphit;

struct CommonFlags {
  std::string config_path;
  std::string csv_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> mode;
  std::optional<long> levels;
  std::optional<std::string> schedule;
  unsigned jobs = 1;
  bool timings = false;
};

void add_common(CLI::App* cmd, CommonFlags& flags, bool with_csv = true) {
  cmd->add_option("--config", flags.config_path, "JSON scenario config")->required();
  if (with_csv) cmd->add_option("--csv", flags.csv_path, "write the CSV report here");
  cmd->add_option("--seed", flags.seed, "override the config seed");
  cmd->add_option("--mode", flags.mode, "arithmetic mode: exact|float")
      ->check(CLI::IsMember({"exact", "float"}));
  cmd->add_option("--levels", flags.levels, "level budget N");
  cmd->add_option("--schedule", flags.schedule, "resolution schedule: guaranteed | base=<b>");
  cmd->add_option("--jobs", flags.jobs, "parallel worker count")->check(CLI::Range(1, 4096));
  cmd->add_flag("--timings", flags.timings,
                "record wall-clock runtime_ms per replicate (off by default: keeps CSV bytes "
                "reproducible across runs and job counts)");
}

ScenarioConfig load_with_overrides(const CommonFlags& flags) {
  ScenarioConfig config = load_scenario_config(flags.config_path);
  if (flags.seed) config.seed = *flags.seed;
  if (flags.levels) config.levels = *flags.levels;
  if (flags.mode) config.mode = (*flags.mode == "float") ? ArithmeticMode::floating : ArithmeticMode::exact;
  if (flags.schedule) config.schedule = cfg::schedule_from(Json(*flags.schedule), "schedule");
  return config;
}

Json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open config file: " + path);
  Json j;
  try {
    in >> j;
  } catch (const Json::parse_error& e) {
    throw ConfigError("config", std::string("JSON parse error: ") + e.what());
  }
  return j;
}

int cmd_simulate(const CommonFlags& flags, std::uint64_t replicate, const std::string& out_path) {
  ScenarioConfig config = load_with_overrides(flags);
  validate(config);
  std::uint64_t subseed = derive_subseed(config.seed, replicate);
  CadlagPath path = gen_compound_poisson(subseed, config.path);
  Json out = path_to_json(path);
  out["seed"] = config.seed;
  out["replicate"] = replicate;
  out["subseed"] = subseed;
  if (!out_path.empty()) {
    std::ofstream f(out_path);
    if (!f) throw ConfigError("config", "cannot open output file: " + out_path);
    f << out.dump(2) << '\n';
  } else {
    std::cout << out.dump(2) << '\n';
  }
  return 0;
}

const char* verdict_word(bool accepted) { return accepted ? "ACCEPT" : "reject"; }

int cmd_detect(const CommonFlags& flags) {
  Json j = load_json(flags.config_path);

  CadlagPath path = [&]() {
    if (j.contains("fixture")) return path_from_json(j["fixture"], "fixture");
    ScenarioConfig config = load_with_overrides(flags);
    validate(config);
    return gen_compound_poisson(derive_subseed(config.seed, 0), config.path);
  }();

  FSigmaSet target = build_target(cfg::target_from(cfg::member(j, "target", "target"), "target"));
  Rat t = cfg::rat_from(cfg::member(j, "t", "t"), "t");
  long levels = flags.levels ? *flags.levels : (j.contains("levels") ? cfg::long_from(j["levels"], "levels") : 1);
  ScheduleSpec schedule_spec;
  if (flags.schedule)
    schedule_spec = cfg::schedule_from(Json(*flags.schedule), "schedule");
  else if (j.contains("schedule"))
    schedule_spec = cfg::schedule_from(j["schedule"], "schedule");
  if (levels < 1) throw ConfigError("levels", "must be >= 1");
  if (!(t > 0) || t > path.horizon()) throw ConfigError("t", "must lie in (0, horizon]");
  if (schedule_spec.kind == ScheduleSpec::Kind::guaranteed && !path.exact())
    throw ConfigError("schedule", "guaranteed schedule requires an exact-provenance path");

  Schedule schedule;
  switch (schedule_spec.kind) {
    case ScheduleSpec::Kind::guaranteed: schedule = make_guaranteed_schedule(path, t); break;
    case ScheduleSpec::Kind::base:
      if (schedule_spec.base < 2) throw ConfigError("schedule.base", "must be >= 2");
      schedule = make_base_schedule(schedule_spec.base);
      break;
    case ScheduleSpec::Kind::custom:
      if (static_cast<long>(schedule_spec.resolutions.size()) < levels)
        throw ConfigError("schedule.custom", "must list a resolution for every level up to N");
      schedule = make_custom_schedule(schedule_spec.resolutions);
      break;
  }

  std::cout << "path: horizon " << rat_str(path.horizon()) << ", " << path.jumps().size() << " jump(s)"
            << ", lipschitz bound " << rat_str(path.lipschitz_bound()) << ", "
            << (path.exact() ? "exact" : "float-generated") << "\n";
  std::cout << "target: " << target.str() << "\n";
  std::cout << "t = " << rat_str(t) << ", level budget N = " << levels << "\n";

  HittingResult oracle = first_hitting_time(path, target);
  if (oracle.branch == HitBranch::zero_in_U) {
    std::cout << "zero branch: the target contains 0, so the hitting time is identically 0;"
              << " the detector is not consulted\n";
    std::cout << "oracle: event " << (ExtRat(Rat(0)) < ExtRat(t) ? "true" : "false")
              << ", branch zero_in_U, T = 0\n";
    return 0;
  }

  FSigmaVerdict verdict = detect_fsigma(path, target, t, levels, schedule, /*full_sweep=*/true);
  for (std::size_t c = 0; c < verdict.components.size(); ++c) {
    std::cout << "component " << (c + 1) << ": " << target.components[c].str() << "\n";
    for (const auto& lv : verdict.components[c].levels) {
      std::cout << "  level n=" << lv.n << " m=" << lv.m << ": pairs " << lv.pair_count << ", tested "
                << lv.pairs_tested;
      if (lv.vacuous) std::cout << ", VACUOUS (no admissible pairs at this resolution)";
      std::cout << ", " << verdict_word(lv.accepted);
      if (lv.witness)
        std::cout << " witness p=" << rat_str(lv.witness->p) << " q=" << rat_str(lv.witness->q)
                  << " increment=" << rat_str(lv.witness->increment);
      std::cout << "\n";
    }
    std::cout << "  -> component " << (verdict.components[c].overall ? "ACCEPT" : "reject") << "\n";
  }
  bool oracle_event = oracle.time < ExtRat(t);
  std::cout << "detector overall: " << (verdict.overall ? "EVENT" : "no event") << "\n";
  std::cout << "oracle: event " << (oracle_event ? "true" : "false") << ", branch "
            << branch_name(oracle.branch) << ", T = " << oracle.time.str() << "\n";
  std::cout << "agreement: " << (verdict.overall == oracle_event ? "yes" : "NO") << "\n";
  return 0;
}

int cmd_verify(const CommonFlags& flags) {
  ScenarioConfig config = load_with_overrides(flags);
  VerifyOutcome outcome = verify_identity(config, flags.jobs, flags.timings);
  const ScenarioReport& report = outcome.report;
  std::cout << "scenario " << config.scenario_id << ": " << report.rows.size() << " replicate(s), "
            << report.agree_count << " agree, " << report.disagree_count() << " disagree"
            << " (agreement " << rat_str(report.agreement_rate()) << ")\n";
  if (outcome.vacuous_rows > 0)
    std::cout << "vacuous-rejection rows: " << outcome.vacuous_rows
              << " (some level had an empty pair set; schedule likely too coarse)\n";
  for (const auto& line : outcome.diagnostics) std::cout << "DISAGREEMENT " << line << "\n";
  if (!flags.csv_path.empty()) {
    emit_csv_file(report, flags.csv_path);
    std::cout << "csv: " << flags.csv_path << "\n";
  }
  return outcome.exit_code;
}

int cmd_sweep(const CommonFlags& flags, const std::string& axis_word, std::vector<long> values) {
  ScenarioConfig config = load_with_overrides(flags);
  SweepAxis axis;
  if (axis_word == "N")
    axis = SweepAxis::levels;
  else if (axis_word == "base")
    axis = SweepAxis::base_resolution;
  else if (axis_word == "K")
    axis = SweepAxis::components;
  else
    throw ConfigError("sweep.axis", "expected N, base or K");

  SweepResult result = sweep(config, axis, values, flags.jobs);
  std::ostringstream table;
  emit_sweep_csv(result, table);
  std::cout << table.str();
  if (!flags.csv_path.empty()) {
    std::ofstream f(flags.csv_path, std::ios::binary);
    if (!f) throw ConfigError("config", "cannot open CSV destination: " + flags.csv_path);
    f << table.str();
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact first-hitting-time detector for cadlag jump paths"};
  app.require_subcommand(1);

  CommonFlags sim_flags, det_flags, ver_flags, sw_flags;
  std::uint64_t sim_replicate = 0;
  std::string sim_out;

  CLI::App* sim = app.add_subcommand("simulate", "generate a path fixture (JSON) from a scenario config");
  add_common(sim, sim_flags, /*with_csv=*/false);
  sim->add_option("--replicate", sim_replicate, "which replicate's path to emit (default 0)");
  sim->add_option("--out", sim_out, "write the fixture here instead of stdout");

  CLI::App* det = app.add_subcommand("detect", "trace one path against one target, level by level");
  add_common(det, det_flags, /*with_csv=*/false);

  CLI::App* ver = app.add_subcommand("verify", "compare oracle and detector over R replicates");
  add_common(ver, ver_flags);

  CLI::App* sw = app.add_subcommand("sweep", "convergence table along one refinement axis");
  add_common(sw, sw_flags);
  std::string axis_word = "N";
  std::vector<long> axis_values;
  sw->add_option("--axis", axis_word, "refinement axis: N (levels) | base (resolution) | K (components)");
  sw->add_option("--values", axis_values, "strictly increasing axis values")->required()->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);      // prints usage/help; 0 for --help
    return code == 0 ? 0 : 2;    // any usage problem is a config error
  }

  try {
    if (sim->parsed()) return cmd_simulate(sim_flags, sim_replicate, sim_out);
    if (det->parsed()) return cmd_detect(det_flags);
    if (ver->parsed()) return cmd_verify(ver_flags);
    if (sw->parsed()) return cmd_sweep(sw_flags, axis_word, axis_values);
  } catch (const jumphit::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::logic_error& e) {
    std::cerr << "assertion failed: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
