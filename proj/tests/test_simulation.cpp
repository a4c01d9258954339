#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "cho/simulation.hpp"
#include "cho/sweep.hpp"

using namespace cho;
namespace fs = std::filesystem;

namespace {

Config small(HoMode mode, double speed, std::uint64_t seed) {
  Config c;
  c.scenario.n_ues = 20;
  c.scenario.sim_duration_s = 20;
  c.scenario.mode = mode;
  c.scenario.ue_speed_kmh = speed;
  c.scenario.seed = seed;
  c.scenario.max_prepared = 4;
  return c;
}

std::string log_text(const std::vector<Event>& events) {
  std::ostringstream ss;
  write_event_log(ss, events);
  return ss.str();
}

}  // namespace

TEST(Simulation, SameSeedSameBytes) {
  const auto cfg = small(HoMode::CHO, 60, 3);
  const auto a = sim::run_simulation(cfg, {.keep_events = true});
  const auto b = sim::run_simulation(cfg, {.keep_events = true});
  EXPECT_EQ(sweep::csv_row(a.report), sweep::csv_row(b.report));
  EXPECT_EQ(log_text(a.events), log_text(b.events));
  EXPECT_FALSE(a.events.empty());
}

TEST(Simulation, DifferentSeedsDiffer) {
  const auto a = sim::run_simulation(small(HoMode::CHO, 60, 1), {.keep_events = true});
  const auto b = sim::run_simulation(small(HoMode::CHO, 60, 2), {.keep_events = true});
  EXPECT_NE(log_text(a.events), log_text(b.events));
}

TEST(Simulation, KeepingEventsDoesNotChangeResults) {
  const auto cfg = small(HoMode::BHO, 60, 5);
  const auto a = sim::run_simulation(cfg, {.keep_events = true});
  const auto b = sim::run_simulation(cfg);
  EXPECT_EQ(a.counters, b.counters);
  EXPECT_TRUE(b.events.empty());
}

TEST(Simulation, ReplayEqualsOnlineReport) {
  for (auto mode : {HoMode::BHO, HoMode::CHO}) {
    const auto cfg = small(mode, 60, 4);
    const auto run = sim::run_simulation(cfg, {.keep_events = true});
    std::stringstream ss;
    write_event_log(ss, run.events);
    kpi::KpiAggregator agg(cfg.kpi);
    agg.ingest_all(read_event_log(ss));
    agg.finish(cfg.scenario.duration());
    EXPECT_EQ(agg.counters(), run.counters);
    const auto replay =
        kpi::normalize(agg.counters(), cfg.scenario.n_ues, cfg.scenario.sim_duration_s, run.key);
    EXPECT_EQ(sweep::csv_row(replay), sweep::csv_row(run.report));
  }
}

TEST(Simulation, EventStreamConsistency) {
  for (auto mode : {HoMode::BHO, HoMode::CHO}) {
    const auto run = sim::run_simulation(small(mode, 60, 6), {.keep_events = true});
    EXPECT_GT(run.invariant_checks, 0u);
    std::map<int, int> open;  // failures awaiting resolution per UE
    SimTime last{0};
    for (const auto& e : run.events) {
      EXPECT_GE(e.time, last);
      last = e.time;
      if (e.kind == EventKind::RlfSource || e.kind == EventKind::HofTarget) {
        EXPECT_EQ(open[e.ue_id], 0) << "failure while another is open";
        ++open[e.ue_id];
      }
      if (e.kind == EventKind::ResolvedRecovery || e.kind == EventKind::ResolvedReest) {
        EXPECT_EQ(open[e.ue_id], 1) << "resolution without an open failure";
        --open[e.ue_id];
      }
      if (mode == HoMode::BHO) {
        EXPECT_NE(e.kind, EventKind::ResolvedRecovery);
        EXPECT_NE(e.kind, EventKind::PrepActive);
      }
    }
    const auto& c = run.counters;
    EXPECT_EQ(c.all_mobility_fail, c.rlf_source + c.hof_target);
    EXPECT_LE(c.failures_resolved_by_recovery + c.failures_resolved_by_reest, c.all_mobility_fail);
  }
}

TEST(Simulation, StationaryUesRarelyHandOver) {
  auto cfg = small(HoMode::CHO, 0, 2);
  const auto run = sim::run_simulation(cfg);
  EXPECT_EQ(run.counters.ping_pong, 0u);
  EXPECT_LE(run.report.all_fail_per_ue_min, 0.1);
}

TEST(Simulation, SingleSiteRuns) {
  auto cfg = small(HoMode::CHO, 30, 1);
  cfg.scenario.n_sites = 1;
  const auto run = sim::run_simulation(cfg);
  EXPECT_EQ(run.key.seed, 1u);
  EXPECT_GE(run.report.ho_succ_per_ue_min, 0.0);
}

TEST(Simulation, InvalidConfigThrows) {
  auto cfg = small(HoMode::CHO, 30, 1);
  cfg.scenario.max_prepared = 3;
  EXPECT_THROW(sim::run_simulation(cfg), ConfigError);
}

TEST(Sweep, RunWritesSortedCsvAndTracesSerialEqualsParallel) {
  const auto dir = fs::temp_directory_path() / "cho_sim_sweep";
  fs::remove_all(dir);
  Config base = small(HoMode::CHO, 30, 1);
  base.scenario.n_ues = 5;
  base.scenario.sim_duration_s = 5;
  base.sweep.modes = {HoMode::CHO, HoMode::BHO};
  base.sweep.seeds = {2, 1};
  sweep::SweepOptions opts;
  opts.out_dir = dir;
  opts.trace = true;
  opts.parallel = 2;
  const auto reports = sweep::run_sweep(base, opts);
  ASSERT_EQ(reports.size(), 4u);
  const auto back = sweep::read_results_csv(dir / "results.csv");
  ASSERT_EQ(back.size(), 4u);
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(back[i].key, reports[i].key);
    EXPECT_TRUE(fs::exists(dir / sweep::event_log_name(reports[i].key)));
  }

  std::ifstream f(dir / "results.csv");
  std::stringstream first;
  first << f.rdbuf();
  opts.parallel = 1;
  sweep::run_sweep(base, opts);
  std::ifstream g(dir / "results.csv");
  std::stringstream second;
  second << g.rdbuf();
  EXPECT_EQ(first.str(), second.str());
}
