#include <gtest/gtest.h>

#include "lockss/config.hpp"
#include "lockss/rng.hpp"

using namespace lockss;

TEST(Config, DefaultsValidate) {
  ScenarioConfig c;
  EXPECT_NO_THROW(c.validate());
  EXPECT_EQ(c.peers, 100u);
  EXPECT_EQ(c.quorum, 10u);
  EXPECT_EQ(c.max_disagree, 3u);
  EXPECT_EQ(c.inner_circle, 20u);
}

TEST(Config, ParsesCommentsAndWhitespace) {
  const auto c = parse_config("# scenario\n  peers = 40 \nadversary=admission_flood # trailing\n\nseeds = 4, 5\n");
  EXPECT_EQ(c.peers, 40u);
  EXPECT_EQ(c.adversary.kind, AttackKind::admission_flood);
  EXPECT_EQ(c.seeds, (std::vector<std::uint64_t>{4, 5}));
}

TEST(Config, RejectsBadInput) {
  EXPECT_THROW(parse_config("nonsense = 1"), ConfigError);
  EXPECT_THROW(parse_config("peers = many"), ConfigError);
  EXPECT_THROW(parse_config("peers 4"), ConfigError);
  EXPECT_THROW(parse_config("adversary = meteor"), ConfigError);
  EXPECT_THROW(parse_config("seeds = ,"), ConfigError);
  EXPECT_THROW(parse_config("mtbf_years = 1x"), ConfigError);
  ScenarioConfig c;
  c.max_disagree = c.quorum;
  EXPECT_THROW(c.validate(), std::invalid_argument);
}

// Random configs survive serialize/parse unchanged.
TEST(Config, RoundTripsRandomConfigs) {
  RngStream rng(1, "config");
  const AttackKind kinds[] = {AttackKind::none, AttackKind::pipe_stoppage, AttackKind::admission_flood,
                              AttackKind::brute_force};
  const Defection defs[] = {Defection::none, Defection::intro, Defection::remaining};
  for (int i = 0; i < 1000; ++i) {
    ScenarioConfig c;
    c.scenario = "s" + std::to_string(rng.below(1000));
    c.peers = 1 + static_cast<std::uint32_t>(rng.below(1000));
    c.horizon_days = rng.uniform(1, 2000);
    c.seeds.assign(1 + rng.below(4), 0);
    for (auto& s : c.seeds) s = rng.next();
    c.mtbf_years = rng.uniform(0.1, 10);
    c.drop_unknown = rng.uniform();
    c.invite_retries = static_cast<std::int32_t>(rng.below(10)) - 1;
    c.initial_grade = static_cast<Grade>(rng.below(4));
    c.block_bytes = 1 + rng.below(1u << 24);
    c.adversary.kind = kinds[rng.below(4)];
    c.adversary.defection = defs[rng.below(3)];
    c.adversary.coverage = rng.uniform();
    c.adversary.flood_rate_per_day = rng.uniform(0, 1e4);
    c.adversary.minions = static_cast<std::uint32_t>(rng.below(100));
    const auto text = serialize_config(c);
    ASSERT_EQ(parse_config(text), c) << text;
  }
}

TEST(Config, FieldAccessByName) {
  ScenarioConfig c;
  set_field(c, "coverage", "0.25");
  EXPECT_EQ(get_field(c, "coverage"), "0.25");
  EXPECT_THROW(get_field(c, "nope"), ConfigError);
  const auto names = field_names();
  EXPECT_NE(std::find(names.begin(), names.end(), "flood_rate_per_day"), names.end());
}
