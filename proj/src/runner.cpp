#include "lockss/runner.hpp"

#include <charconv>
#include <cmath>
#include <memory>

#include "lockss/simulation.hpp"
#include "lockss/task_schedule.hpp"

namespace lockss {

std::vector<RunTrace> run_chain(const ScenarioConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  std::vector<RunTrace> out;
  std::vector<std::shared_ptr<const BusyIntervals>> preload(cfg.peers);
  for (std::uint32_t layer = 0; layer < cfg.layers; ++layer) {
    SimOptions opts;
    opts.layer = layer;
    opts.preload = preload;
    opts.record_polls = false;
    const bool more = layer + 1 < cfg.layers;
    opts.record_schedule = more;
    Simulation sim(cfg, seed, opts);
    out.push_back(sim.run());
    if (!more) break;
    ScheduleArtifact art = sim.take_schedule_artifact();
    for (std::uint32_t p = 0; p < cfg.peers; ++p) {
      static const BusyIntervals kEmpty;
      const BusyIntervals& old = preload[p] ? *preload[p] : kEmpty;
      preload[p] = std::make_shared<const BusyIntervals>(BusyIntervals::merge(old, art.per_peer[p]));
    }
  }
  return out;
}

ScenarioConfig baseline_of(const ScenarioConfig& cfg) {
  ScenarioConfig b = cfg;
  b.adversary = AdversaryConfig{};
  return b;
}

const std::vector<RunTrace>& BaselineCache::get(const ScenarioConfig& cfg, std::uint64_t seed) {
  ScenarioConfig key_cfg = baseline_of(cfg);
  key_cfg.scenario = "";
  key_cfg.seeds = {seed};
  const std::string key = serialize_config(key_cfg) + "#" + std::to_string(seed);
  auto it = runs_.find(key);
  if (it == runs_.end()) it = runs_.emplace(key, run_chain(key_cfg, seed)).first;
  return it->second;
}

ScenarioReport run_scenario(const ScenarioConfig& cfg, BaselineCache& cache) {
  cfg.validate();
  ScenarioReport rep;
  rep.scenario = cfg.scenario;
  std::vector<MetricsRow> per_seed;
  for (std::uint64_t seed : cfg.seeds) {
    SeedResult sr;
    sr.seed = seed;
    const bool attacked = cfg.adversary.kind != AttackKind::none;
    std::vector<RunTrace> runs = attacked ? run_chain(cfg, seed) : cache.get(cfg, seed);
    const std::vector<RunTrace>& base = attacked ? cache.get(cfg, seed) : runs;
    std::vector<MetricsRow> rows;
    for (std::size_t l = 0; l < runs.size(); ++l) {
      LayerResult lr;
      lr.layer = static_cast<std::uint32_t>(l + 1);
      lr.row = metrics_row(runs[l], base[l]);
      lr.trace = std::move(runs[l]);
      rows.push_back(lr.row);
      sr.layers.push_back(std::move(lr));
    }
    sr.combined = combine_layers(rows);
    per_seed.push_back(sr.combined);
    rep.seeds.push_back(std::move(sr));
  }
  rep.summary = summarize(per_seed);
  return rep;
}

ScenarioReport run_scenario(const ScenarioConfig& cfg) {
  BaselineCache cache;
  return run_scenario(cfg, cache);
}

Variation parse_variation(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError("--vary expects KEY=v1,v2,...: " + text);
  Variation v;
  v.key = text.substr(0, eq);
  std::string rest = text.substr(eq + 1);
  std::size_t pos = 0;
  while (pos <= rest.size()) {
    const auto comma = rest.find(',', pos);
    const std::string item = rest.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    if (!item.empty()) v.values.push_back(item);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  if (v.values.empty()) throw ConfigError("--vary has no values: " + text);
  // Fail early on unknown keys.
  ScenarioConfig probe;
  set_field(probe, v.key, v.values.front());
  return v;
}

std::vector<ScenarioConfig> expand_sweep(const ScenarioConfig& base, const std::vector<Variation>& vary) {
  std::vector<ScenarioConfig> out{base};
  for (const Variation& v : vary) {
    std::vector<ScenarioConfig> next;
    for (const ScenarioConfig& c : out) {
      for (const std::string& value : v.values) {
        ScenarioConfig n = c;
        set_field(n, v.key, value);
        n.scenario = c.scenario + " " + v.key + "=" + value;
        n.validate();
        next.push_back(std::move(n));
      }
    }
    out = std::move(next);
  }
  return out;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void row(std::ostream& out, const std::string& scenario, const std::string& seed, const std::string& layer,
         const MetricsRow& r) {
  out << csv_field(scenario) << ',' << seed << ',' << layer << ',' << format_number(r.access_failure) << ','
      << format_number(r.delay_ratio) << ',' << format_number(r.friction) << ',' << format_number(r.cost_ratio) << ','
      << format_number(r.alarms) << ',' << format_number(r.successful_polls) << ',' << format_number(r.loyal_effort)
      << ',' << format_number(r.adversary_effort) << '\n';
}

}  // namespace

void emit_csv(const std::vector<ScenarioReport>& reports, std::ostream& out) {
  out << kCsvHeader << '\n';
  for (const ScenarioReport& rep : reports) {
    for (const SeedResult& s : rep.seeds) {
      for (const LayerResult& l : s.layers) row(out, rep.scenario, std::to_string(s.seed), std::to_string(l.layer), l.row);
      if (s.layers.size() > 1) row(out, rep.scenario, std::to_string(s.seed), "all", s.combined);
    }
    row(out, rep.scenario, "mean", "all", rep.summary.mean);
  }
}

}  // namespace lockss
