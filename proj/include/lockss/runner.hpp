#pragma once

#include <cstdint>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "lockss/config.hpp"
#include "lockss/metrics.hpp"

namespace lockss {

struct LayerResult {
  std::uint32_t layer = 1;  // 1-based
  RunTrace trace;
  MetricsRow row;
};

struct SeedResult {
  std::uint64_t seed = 0;
  std::vector<LayerResult> layers;
  MetricsRow combined;
};

struct ScenarioReport {
  std::string scenario;
  std::vector<SeedResult> seeds;
  MetricsSummary summary;  // over the per-seed combined rows
};

// Runs layers 1..cfg.layers for one seed, each preloaded with the schedule
// occupancy of all earlier layers.
std::vector<RunTrace> run_chain(const ScenarioConfig& cfg, std::uint64_t seed);

// Adversary-free runs keyed by configuration and seed, so sweeps that share a
// baseline only simulate it once.
class BaselineCache {
 public:
  const std::vector<RunTrace>& get(const ScenarioConfig& cfg, std::uint64_t seed);
  std::size_t size() const { return runs_.size(); }

 private:
  std::map<std::string, std::vector<RunTrace>> runs_;
};

ScenarioConfig baseline_of(const ScenarioConfig& cfg);

ScenarioReport run_scenario(const ScenarioConfig& cfg, BaselineCache& cache);
ScenarioReport run_scenario(const ScenarioConfig& cfg);

// One scenario per value combination of the varied keys. Scenario names get
// a "key=value" suffix per varied key.
struct Variation {
  std::string key;
  std::vector<std::string> values;
};
std::vector<ScenarioConfig> expand_sweep(const ScenarioConfig& base, const std::vector<Variation>& vary);
// Parses "key=v1,v2,...". Throws ConfigError.
Variation parse_variation(const std::string& text);

inline constexpr const char* kCsvHeader =
    "scenario,seed,layer,access_failure,delay_ratio,friction,cost_ratio,alarms,successful_polls,loyal_effort,"
    "adversary_effort";

std::string format_number(double v);

// Detail rows per (seed, layer); a combined row per seed when there are
// several layers; then one "mean,all" row per scenario.
void emit_csv(const std::vector<ScenarioReport>& reports, std::ostream& out);

}  // namespace lockss
