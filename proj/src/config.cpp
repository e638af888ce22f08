#include "lockss/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

namespace lockss {

std::string_view attack_name(AttackKind k) {
  switch (k) {
    case AttackKind::none: return "none";
    case AttackKind::pipe_stoppage: return "pipe_stoppage";
    case AttackKind::admission_flood: return "admission_flood";
    case AttackKind::brute_force: return "brute_force";
    case AttackKind::reputation: return "reputation";
  }
  return "none";
}

std::string_view defection_name(Defection d) {
  switch (d) {
    case Defection::none: return "none";
    case Defection::intro: return "intro";
    case Defection::remaining: return "remaining";
  }
  return "none";
}

EffortParams ScenarioConfig::effort_params() const {
  EffortParams p;
  p.hash_bytes_per_sec = hash_bytes_per_sec;
  p.verify_ratio = verify_ratio;
  p.session_cost = session_cost;
  p.intro_share = intro_share;
  p.poller_margin = poller_margin;
  return p;
}

AdmissionParams ScenarioConfig::admission_params() const {
  return AdmissionParams{drop_unknown, drop_debt, from_days(refractory_days)};
}

void ScenarioConfig::validate() const {
  auto need = [](bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(what);
  };
  need(peers >= 2, "peers must be at least 2");
  need(aus_per_layer >= 1, "aus_per_layer must be at least 1");
  need(layers >= 1 && layers <= 12, "layers must be in 1..12");
  need(static_cast<std::uint64_t>(layers) * aus_per_layer <= 600, "layers * aus_per_layer must not exceed 600");
  need(horizon_days > 0, "horizon_days must be positive");
  need(!seeds.empty(), "at least one seed is required");
  need(inter_poll_days > 0, "inter_poll_days must be positive");
  need(quorum >= 1, "quorum must be at least 1");
  need(max_disagree < quorum, "max_disagree must be below quorum");
  need(inner_circle >= 1, "inner_circle must be at least 1");
  need(solicit_fraction > 0 && solicit_fraction < 1, "solicit_fraction must be in (0,1)");
  need(drop_unknown >= 0 && drop_unknown <= 1, "drop_unknown must be a probability");
  need(drop_debt >= 0 && drop_debt <= 1, "drop_debt must be a probability");
  need(frivolous_repair_prob >= 0 && frivolous_repair_prob <= 1, "frivolous_repair_prob must be a probability");
  need(introduction_share >= 0 && introduction_share <= 1, "introduction_share must be a probability");
  need(nomination_fraction >= 0 && nomination_fraction <= 1, "nomination_fraction must be in [0,1]");
  need(retry_gap_days >= 0, "retry_gap_days must be non-negative");
  need(decay_days > 0, "decay_days must be positive");
  need(refractory_days >= 0, "refractory_days must be non-negative");
  need(au_blocks >= 1 && block_bytes >= 1, "AU must have at least one non-empty block");
  need(hash_bytes_per_sec > 0, "hash_bytes_per_sec must be positive");
  need(verify_ratio > 1, "verify_ratio must exceed 1");
  need(intro_share > 0 && intro_share < 1, "intro_share must be in (0,1)");
  need(poller_margin >= 0, "poller_margin must be non-negative");
  need(friends < peers, "friends must be fewer than peers");
  need(adversary.coverage >= 0 && adversary.coverage <= 1, "coverage must be in [0,1]");
  need(adversary.attack_days >= 0 && adversary.recuperation_days >= 0, "attack timings must be non-negative");
  need(adversary.flood_rate_per_day >= 0, "flood_rate_per_day must be non-negative");
  need(adversary.kind != AttackKind::brute_force || adversary.minions >= 1, "brute force needs at least one minion");
  need(adversary.kind != AttackKind::reputation, "the reputation adversary is reserved and not simulated");
}

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::string fmt_double(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

double parse_double(std::string_view key, std::string_view v) {
  double out = 0;
  const std::string t = trim(v);
  if (t == "inf") return INFINITY;
  auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
  if (ec != std::errc() || p != t.data() + t.size()) {
    throw ConfigError("bad number for " + std::string(key) + ": '" + t + "'");
  }
  return out;
}

template <class U>
U parse_unsigned(std::string_view key, std::string_view v) {
  U out = 0;
  const std::string t = trim(v);
  auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
  if (ec != std::errc() || p != t.data() + t.size()) {
    throw ConfigError("bad integer for " + std::string(key) + ": '" + t + "'");
  }
  return out;
}

std::int32_t parse_int(std::string_view key, std::string_view v) {
  std::int32_t out = 0;
  const std::string t = trim(v);
  auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
  if (ec != std::errc() || p != t.data() + t.size()) {
    throw ConfigError("bad integer for " + std::string(key) + ": '" + t + "'");
  }
  return out;
}

struct Field {
  std::string_view name;
  std::function<void(ScenarioConfig&, std::string_view)> set;
  std::function<std::string(const ScenarioConfig&)> get;
};

template <class M>
Field dbl(std::string_view name, M member) {
  return Field{name, [name, member](ScenarioConfig& c, std::string_view v) { std::invoke(member, c) = parse_double(name, v); },
               [member](const ScenarioConfig& c) { return fmt_double(std::invoke(member, c)); }};
}

template <class U, class M>
Field uns(std::string_view name, M member) {
  return Field{name,
               [name, member](ScenarioConfig& c, std::string_view v) { std::invoke(member, c) = parse_unsigned<U>(name, v); },
               [member](const ScenarioConfig& c) { return std::to_string(std::invoke(member, c)); }};
}

AttackKind parse_attack(std::string_view v) {
  for (AttackKind k : {AttackKind::none, AttackKind::pipe_stoppage, AttackKind::admission_flood, AttackKind::brute_force,
                       AttackKind::reputation}) {
    if (attack_name(k) == v) return k;
  }
  throw ConfigError("unknown adversary kind: '" + std::string(v) + "'");
}

Defection parse_defection(std::string_view v) {
  for (Defection d : {Defection::none, Defection::intro, Defection::remaining}) {
    if (defection_name(d) == v) return d;
  }
  throw ConfigError("unknown defection: '" + std::string(v) + "'");
}

const std::vector<Field>& fields() {
  static const std::vector<Field> table = [] {
    std::vector<Field> f;
    f.push_back(Field{"scenario", [](ScenarioConfig& c, std::string_view v) { c.scenario = trim(v); },
                      [](const ScenarioConfig& c) { return c.scenario; }});
    f.push_back(uns<std::uint32_t>("peers", &ScenarioConfig::peers));
    f.push_back(uns<std::uint32_t>("aus_per_layer", &ScenarioConfig::aus_per_layer));
    f.push_back(uns<std::uint32_t>("layers", &ScenarioConfig::layers));
    f.push_back(dbl("horizon_days", &ScenarioConfig::horizon_days));
    f.push_back(Field{"seeds",
                      [](ScenarioConfig& c, std::string_view v) {
                        std::vector<std::uint64_t> out;
                        std::string s(v);
                        std::stringstream ss(s);
                        std::string item;
                        while (std::getline(ss, item, ',')) {
                          if (trim(item).empty()) continue;
                          out.push_back(parse_unsigned<std::uint64_t>("seeds", item));
                        }
                        if (out.empty()) throw ConfigError("seeds must list at least one seed");
                        c.seeds = std::move(out);
                      },
                      [](const ScenarioConfig& c) {
                        std::string s;
                        for (std::size_t i = 0; i < c.seeds.size(); ++i) {
                          if (i) s += ',';
                          s += std::to_string(c.seeds[i]);
                        }
                        return s;
                      }});
    f.push_back(dbl("inter_poll_days", &ScenarioConfig::inter_poll_days));
    f.push_back(uns<std::uint32_t>("quorum", &ScenarioConfig::quorum));
    f.push_back(uns<std::uint32_t>("max_disagree", &ScenarioConfig::max_disagree));
    f.push_back(uns<std::uint32_t>("inner_circle", &ScenarioConfig::inner_circle));
    f.push_back(dbl("solicit_fraction", &ScenarioConfig::solicit_fraction));
    f.push_back(Field{"invite_retries",
                      [](ScenarioConfig& c, std::string_view v) { c.invite_retries = parse_int("invite_retries", v); },
                      [](const ScenarioConfig& c) { return std::to_string(c.invite_retries); }});
    f.push_back(dbl("retry_gap_days", &ScenarioConfig::retry_gap_days));
    f.push_back(dbl("ack_wait_s", &ScenarioConfig::ack_wait_s));
    f.push_back(dbl("vote_allowance_votes", &ScenarioConfig::vote_allowance_votes));
    f.push_back(dbl("frivolous_repair_prob", &ScenarioConfig::frivolous_repair_prob));
    f.push_back(dbl("repair_wait_s", &ScenarioConfig::repair_wait_s));
    f.push_back(uns<std::uint32_t>("reference_target", &ScenarioConfig::reference_target));
    f.push_back(uns<std::uint32_t>("friends", &ScenarioConfig::friends));
    f.push_back(uns<std::uint32_t>("friends_per_poll", &ScenarioConfig::friends_per_poll));
    f.push_back(uns<std::uint32_t>("initial_random_references", &ScenarioConfig::initial_random_references));
    f.push_back(dbl("nomination_fraction", &ScenarioConfig::nomination_fraction));
    f.push_back(uns<std::uint32_t>("nomination_cap", &ScenarioConfig::nomination_cap));
    f.push_back(dbl("introduction_share", &ScenarioConfig::introduction_share));
    f.push_back(dbl("drop_unknown", &ScenarioConfig::drop_unknown));
    f.push_back(dbl("drop_debt", &ScenarioConfig::drop_debt));
    f.push_back(dbl("refractory_days", &ScenarioConfig::refractory_days));
    f.push_back(dbl("decay_days", &ScenarioConfig::decay_days));
    f.push_back(uns<std::uint32_t>("intro_cap", &ScenarioConfig::intro_cap));
    f.push_back(Field{"initial_grade",
                      [](ScenarioConfig& c, std::string_view v) {
                        auto g = parse_grade(trim(v));
                        if (!g) throw ConfigError("unknown grade: '" + trim(v) + "'");
                        c.initial_grade = *g;
                      },
                      [](const ScenarioConfig& c) { return std::string(grade_name(c.initial_grade)); }});
    f.push_back(dbl("mtbf_years", &ScenarioConfig::mtbf_years));
    f.push_back(dbl("aus_per_disk", &ScenarioConfig::aus_per_disk));
    f.push_back(uns<std::uint32_t>("au_blocks", &ScenarioConfig::au_blocks));
    f.push_back(uns<std::uint64_t>("block_bytes", &ScenarioConfig::block_bytes));
    f.push_back(dbl("hash_bytes_per_sec", &ScenarioConfig::hash_bytes_per_sec));
    f.push_back(dbl("verify_ratio", &ScenarioConfig::verify_ratio));
    f.push_back(dbl("session_cost", &ScenarioConfig::session_cost));
    f.push_back(dbl("intro_share", &ScenarioConfig::intro_share));
    f.push_back(dbl("poller_margin", &ScenarioConfig::poller_margin));
    f.push_back(uns<std::uint64_t>("header_bytes", &ScenarioConfig::header_bytes));
    f.push_back(uns<std::uint64_t>("digest_bytes", &ScenarioConfig::digest_bytes));
    f.push_back(Field{"adversary",
                      [](ScenarioConfig& c, std::string_view v) { c.adversary.kind = parse_attack(trim(v)); },
                      [](const ScenarioConfig& c) { return std::string(attack_name(c.adversary.kind)); }});
    f.push_back(Field{"coverage",
                      [](ScenarioConfig& c, std::string_view v) { c.adversary.coverage = parse_double("coverage", v); },
                      [](const ScenarioConfig& c) { return fmt_double(c.adversary.coverage); }});
    f.push_back(Field{"attack_days",
                      [](ScenarioConfig& c, std::string_view v) { c.adversary.attack_days = parse_double("attack_days", v); },
                      [](const ScenarioConfig& c) { return fmt_double(c.adversary.attack_days); }});
    f.push_back(Field{"recuperation_days",
                      [](ScenarioConfig& c, std::string_view v) {
                        c.adversary.recuperation_days = parse_double("recuperation_days", v);
                      },
                      [](const ScenarioConfig& c) { return fmt_double(c.adversary.recuperation_days); }});
    f.push_back(Field{"defection",
                      [](ScenarioConfig& c, std::string_view v) { c.adversary.defection = parse_defection(trim(v)); },
                      [](const ScenarioConfig& c) { return std::string(defection_name(c.adversary.defection)); }});
    f.push_back(Field{"flood_rate_per_day",
                      [](ScenarioConfig& c, std::string_view v) {
                        c.adversary.flood_rate_per_day = parse_double("flood_rate_per_day", v);
                      },
                      [](const ScenarioConfig& c) { return fmt_double(c.adversary.flood_rate_per_day); }});
    f.push_back(Field{"minions",
                      [](ScenarioConfig& c, std::string_view v) {
                        c.adversary.minions = parse_unsigned<std::uint32_t>("minions", v);
                      },
                      [](const ScenarioConfig& c) { return std::to_string(c.adversary.minions); }});
    return f;
  }();
  return table;
}

const Field& find_field(std::string_view key) {
  for (const Field& f : fields()) {
    if (f.name == key) return f;
  }
  throw ConfigError("unknown config key: '" + std::string(key) + "'");
}

}  // namespace

void set_field(ScenarioConfig& cfg, std::string_view key, std::string_view value) {
  find_field(trim(key)).set(cfg, trim(value));
}

std::string get_field(const ScenarioConfig& cfg, std::string_view key) { return find_field(trim(key)).get(cfg); }

std::vector<std::string> field_names() {
  std::vector<std::string> out;
  for (const Field& f : fields()) out.emplace_back(f.name);
  return out;
}

ScenarioConfig parse_config(std::string_view text, ScenarioConfig base) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    try {
      set_field(base, std::string_view(t).substr(0, eq), std::string_view(t).substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return base;
}

ScenarioConfig load_config(const std::string& path, ScenarioConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), std::move(base));
}

std::string serialize_config(const ScenarioConfig& cfg) {
  std::string out;
  for (const Field& f : fields()) {
    out += f.name;
    out += " = ";
    out += f.get(cfg);
    out += '\n';
  }
  return out;
}

}  // namespace lockss
