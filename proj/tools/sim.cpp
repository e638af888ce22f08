#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lockss/config.hpp"
#include "lockss/runner.hpp"

using namespace lockss;

namespace {

struct Overrides {
  std::map<std::string, std::string> values;

  void attach(CLI::App* app) {
    for (const std::string& name : field_names()) {
      values.emplace(name, std::string{});
      app->add_option("--" + name, values[name], "config key " + name);
    }
  }

  void apply(ScenarioConfig& cfg, CLI::App* app) const {
    for (const auto& [name, value] : values)
      if (app->count("--" + name) > 0) set_field(cfg, name, value);
  }
};

ScenarioConfig build_config(const std::string& path, const Overrides& ov, CLI::App* app,
                            const std::vector<std::uint64_t>& seeds) {
  ScenarioConfig cfg = path.empty() ? ScenarioConfig{} : load_config(path);
  ov.apply(cfg, app);
  // An attack configured without a name shouldn't be reported as the baseline.
  if (cfg.scenario == "baseline" && cfg.adversary.kind != AttackKind::none)
    cfg.scenario = std::string(attack_name(cfg.adversary.kind));
  if (!seeds.empty()) {
    cfg.seeds = seeds;
  } else if (app->count("--seeds") == 0) {
    if (const char* env = std::getenv("SIM_SEED"); env != nullptr && *env != '\0') set_field(cfg, "seeds", env);
  }
  cfg.validate();
  return cfg;
}

void print_summary(const std::vector<ScenarioReport>& reports) {
  for (const auto& r : reports) {
    const auto& m = r.summary;
    std::cerr << r.scenario << ": access_failure " << format_number(m.mean.access_failure) << " ["
              << format_number(m.min.access_failure) << ", " << format_number(m.max.access_failure) << "]"
              << "  delay_ratio " << format_number(m.mean.delay_ratio) << "  friction "
              << format_number(m.mean.friction) << "  cost_ratio " << format_number(m.mean.cost_ratio) << '\n';
  }
}

int write_reports(const std::vector<ScenarioReport>& reports, const std::string& out_path) {
  if (out_path.empty() || out_path == "-") {
    emit_csv(reports, std::cout);
    std::cout.flush();
    return std::cout ? 0 : 1;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) {
    std::cerr << "cannot open " << out_path << '\n';
    return 1;
  }
  emit_csv(reports, out);
  out.close();
  if (!out) {
    std::cerr << "write failed: " << out_path << '\n';
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"LOCKSS attrition simulator"};
  app.require_subcommand(1);

  std::string config_path, out_path;
  std::vector<std::uint64_t> seeds;
  std::vector<std::string> vary;
  bool quiet = false;

  auto* run = app.add_subcommand("run", "run one scenario");
  run->add_option("--config", config_path, "config file (key = value)");
  run->add_option("--seed", seeds, "seed (repeatable)");
  run->add_option("--out", out_path, "CSV output, default stdout");
  run->add_flag("--quiet", quiet, "no summary on stderr");
  Overrides run_ov;
  run_ov.attach(run);

  auto* sweep = app.add_subcommand("sweep", "run a scenario for every combination of varied keys");
  sweep->add_option("--config", config_path, "config file (key = value)");
  sweep->add_option("--vary", vary, "KEY=v1,v2,... (repeatable)")->required();
  sweep->add_option("--seed", seeds, "seed (repeatable)");
  sweep->add_option("--out", out_path, "CSV output, default stdout");
  sweep->add_flag("--quiet", quiet, "no summary on stderr");
  Overrides sweep_ov;
  sweep_ov.attach(sweep);

  auto* baseline = app.add_subcommand("baseline", "run the default attack-free scenario");
  baseline->add_option("--seed", seeds, "seed (repeatable)");
  baseline->add_option("--out", out_path, "CSV output, default stdout");
  baseline->add_flag("--quiet", quiet, "no summary on stderr");
  Overrides base_ov;
  base_ov.attach(baseline);

  auto* show = app.add_subcommand("config", "print the effective configuration");
  show->add_option("--config", config_path, "config file (key = value)");
  Overrides show_ov;
  show_ov.attach(show);

  CLI11_PARSE(app, argc, argv);

  try {
    std::vector<ScenarioReport> reports;
    BaselineCache cache;
    if (*run) {
      reports.push_back(run_scenario(build_config(config_path, run_ov, run, seeds), cache));
    } else if (*sweep) {
      const ScenarioConfig base = build_config(config_path, sweep_ov, sweep, seeds);
      std::vector<Variation> vs;
      for (const auto& v : vary) vs.push_back(parse_variation(v));
      for (const auto& cfg : expand_sweep(base, vs)) {
        reports.push_back(run_scenario(cfg, cache));
        if (!quiet) print_summary({reports.back()});
      }
      quiet = true;
    } else if (*baseline) {
      ScenarioConfig cfg = build_config("", base_ov, baseline, seeds);
      cfg.adversary = AdversaryConfig{};
      reports.push_back(run_scenario(cfg, cache));
    } else if (*show) {
      std::cout << serialize_config(build_config(config_path, show_ov, show, {}));
      return 0;
    }
    if (!quiet) print_summary(reports);
    return write_reports(reports, out_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
