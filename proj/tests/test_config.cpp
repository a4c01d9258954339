#include <gtest/gtest.h>

#include "cho/config.hpp"

using namespace cho;

TEST(Config, ParsesKeysCommentsAndLists) {
  const auto cfg = parse_config(R"(
# comment line
scenario.n_ues = 100      # trailing comment
scenario.mode = BHO
protocol.exec.type = And
protocol.exec.left.type = A5
sweep.speeds_kmh = 3, 30, 60
sweep.seeds = 1,2
)");
  EXPECT_EQ(cfg.scenario.n_ues, 100);
  EXPECT_EQ(cfg.scenario.mode, HoMode::BHO);
  EXPECT_EQ(cfg.protocol.exec.type, ConditionType::And);
  EXPECT_EQ(cfg.protocol.exec.left.type, ConditionType::A5);
  EXPECT_EQ(cfg.sweep.speeds_kmh, (std::vector<double>{3, 30, 60}));
  EXPECT_EQ(cfg.sweep.seeds, (std::vector<std::uint64_t>{1, 2}));
  EXPECT_NO_THROW(validate(cfg));
}

TEST(Config, DefaultsMatchReferenceScenario) {
  const Config cfg;
  EXPECT_EQ(cfg.scenario.isd_m, 200.0);
  EXPECT_EQ(cfg.scenario.n_sites, 7);
  EXPECT_EQ(cfg.scenario.n_ues, 420);
  EXPECT_EQ(cfg.scenario.sim_duration_s, 300.0);
  EXPECT_EQ(cfg.scenario.carrier_ghz, 28.0);
  EXPECT_EQ(cfg.scenario.pp_window_ms, 1000);
  EXPECT_EQ(cfg.protocol.t310_ms, 1000);
  EXPECT_EQ(cfg.protocol.n310, 5);
  EXPECT_EQ(cfg.measure.k, 4.0);
  EXPECT_NO_THROW(validate(cfg));
}

TEST(Config, UnknownKeyAndBadValues) {
  EXPECT_THROW(parse_config("scenario.n_uez = 3"), ConfigError);
  EXPECT_THROW(parse_config("scenario.n_ues"), ConfigError);
  EXPECT_THROW(parse_config("scenario.n_ues = many"), ConfigError);
  EXPECT_THROW(parse_config("scenario.n_ues = 3.5"), ConfigError);
  EXPECT_THROW(parse_config("scenario.mode = XHO"), ConfigError);
  EXPECT_THROW(parse_config("protocol.prep_needs_link = maybe"), ConfigError);
}

TEST(Config, ValidationRejectsInvalidSettings) {
  auto bad = [](std::string_view text) { return parse_config(text); };
  EXPECT_THROW(validate(bad("scenario.max_prepared = 3")), ConfigError);
  EXPECT_THROW(validate(bad("sweep.max_prepared = 1, 5")), ConfigError);
  EXPECT_THROW(validate(bad("scenario.n_ues = 0")), ConfigError);
  EXPECT_THROW(validate(bad("scenario.n_sites = 3")), ConfigError);
  EXPECT_THROW(validate(bad("scenario.time_step_s = 0.0105")), ConfigError);
  EXPECT_THROW(validate(bad("scenario.sim_duration_s = 0")), ConfigError);
  EXPECT_THROW(validate(bad("protocol.exec.type = And\nprotocol.exec.left.type = And")),
               ConfigError);
  EXPECT_THROW(validate(bad("protocol.exec.type = TimeWindow\nprotocol.exec.t1_s = 5\n"
                            "protocol.exec.t2_s = 1")),
               ConfigError);
}

TEST(Config, OverridesApplyInOrder) {
  Config cfg;
  apply_overrides(cfg, {"scenario.seed=9", "scenario.seed = 11", "sweep.modes=BHO,CHO"});
  EXPECT_EQ(cfg.scenario.seed, 11u);
  EXPECT_EQ(cfg.sweep.modes, (std::vector<HoMode>{HoMode::BHO, HoMode::CHO}));
  EXPECT_THROW(apply_overrides(cfg, {"scenario.seed"}), ConfigError);
}

TEST(Config, DumpRoundTrips) {
  Config cfg = parse_config(R"(
scenario.ue_speed_kmh = 62.5
radio.shadow_sigma_nlos_db = 7.82
protocol.exec.type = And
protocol.exec.right.type = ChannelOccupancy
protocol.exec.right.threshold = 0.3
sweep.o_exec_db = 3, 6
)");
  const auto text = dump_config(cfg);
  EXPECT_EQ(dump_config(parse_config(text)), text);
  EXPECT_EQ(dump_config(parse_config(dump_config(Config{}))), dump_config(Config{}));
}
