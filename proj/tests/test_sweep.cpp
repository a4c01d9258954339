#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cho/sweep.hpp"

using namespace cho;
using namespace cho::sweep;
namespace fs = std::filesystem;

namespace {

kpi::KpiReport report(HoMode mode, double speed, int max_prep, std::uint64_t seed, double succ,
                      double fail, double pp, double recovery) {
  kpi::KpiReport r;
  r.key = {mode, speed, 3.0, 3.0, max_prep, seed};
  r.ho_succ_per_ue_min = succ;
  r.all_fail_per_ue_min = fail;
  r.pp_per_ue_min = pp;
  r.cho_recovery_rate = recovery;
  return r;
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("cho_sweep_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Expand, CrossProductSortedByKey) {
  Config base;
  base.sweep.speeds_kmh = {60, 30, 3};
  base.sweep.modes = {HoMode::CHO, HoMode::BHO};
  base.sweep.seeds = {2, 1, 3};
  const auto runs = expand(base);
  ASSERT_EQ(runs.size(), 18u);
  for (std::size_t i = 1; i < runs.size(); ++i)
    EXPECT_LT(sim::key_of(runs[i - 1]), sim::key_of(runs[i]));
  for (const auto& r : runs) {
    EXPECT_TRUE(r.sweep.seeds.empty());
    EXPECT_EQ(r.scenario.o_prep_db, base.scenario.o_prep_db);
  }
}

TEST(Expand, EmptyAxesUseScenarioValues) {
  Config base;
  base.scenario.seed = 42;
  const auto runs = expand(base);
  ASSERT_EQ(runs.size(), 1u);
  EXPECT_EQ(runs[0].scenario.seed, 42u);
}

TEST(Csv, HeaderAndRowLayout) {
  EXPECT_EQ(std::string(kCsvHeader),
            "mode,speed_kmh,o_prep_db,o_exec_db,max_prepared,seed,ho_succ_per_ue_min,"
            "all_fail_per_ue_min,pp_per_ue_min,cho_recovery_rate,rlf_count,hof_count,"
            "prepared_cell_seconds");
  auto r = report(HoMode::CHO, 30, 4, 7, 1.0, 0.25, 0.0, 0.8);
  r.rlf_count = 3;
  r.hof_count = 1;
  r.prepared_cell_seconds = 12.5;
  EXPECT_EQ(csv_row(r), "CHO,30,3,3,4,7,1.000000,0.250000,0.000000,0.800000,3,1,12.500");
  const auto text = format_csv({report(HoMode::CHO, 60, 1, 1, 0, 0, 0, NAN),
                                report(HoMode::BHO, 60, 1, 1, 0, 0, 0, NAN)});
  EXPECT_EQ(text.substr(0, text.find('\n')), kCsvHeader);
  EXPECT_LT(text.find("BHO"), text.find("CHO,60"));
}

TEST(Csv, ReadBackMatchesWritten) {
  const auto dir = scratch("read");
  const std::vector<kpi::KpiReport> in{report(HoMode::BHO, 3, 1, 1, 0.5, 0.125, 0.0, NAN),
                                       report(HoMode::CHO, 3, 2, 1, 0.75, 0.0, 0.03125, 0.5)};
  std::ofstream(dir / "results.csv") << format_csv(in);
  const auto out = read_results_csv(dir / "results.csv");
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out[0].key, in[0].key);
  EXPECT_EQ(out[1].key, in[1].key);
  EXPECT_TRUE(std::isnan(out[0].cho_recovery_rate));
  EXPECT_EQ(out[1].pp_per_ue_min, 0.03125);
}

TEST(Csv, MissingColumnIsReported) {
  const auto dir = scratch("missing");
  std::ofstream(dir / "bad.csv") << "mode,speed_kmh,seed\nCHO,3,1\n";
  EXPECT_THROW(read_results_csv(dir / "bad.csv"), ConfigError);
}

TEST(Plot, BarsAverageSeeds) {
  const std::vector<kpi::KpiReport> rows{report(HoMode::CHO, 30, 1, 1, 1.0, 0.3, 0.0, NAN),
                                         report(HoMode::CHO, 30, 1, 2, 2.0, 0.6, 0.3, NAN),
                                         report(HoMode::CHO, 30, 1, 3, 3.0, 0.0, 0.0, NAN),
                                         report(HoMode::BHO, 30, 1, 1, 5.0, 1.0, 0.0, NAN)};
  const auto bars = kpi_bars(rows);
  ASSERT_EQ(bars.size(), 2u);
  const auto& cho = bars[0].mode == HoMode::CHO ? bars[0] : bars[1];
  EXPECT_EQ(cho.n_runs, 3);
  EXPECT_DOUBLE_EQ(cho.ho_succ, 2.0);
  EXPECT_DOUBLE_EQ(cho.all_fail, 0.3);
  EXPECT_DOUBLE_EQ(cho.pp, 0.1);
}

TEST(Plot, SingleRowGivesSingleGroup) {
  const auto bars = kpi_bars({report(HoMode::BHO, 60, 1, 9, 4.0, 2.0, 1.0, NAN)});
  ASSERT_EQ(bars.size(), 1u);
  EXPECT_EQ(bars[0].n_runs, 1);
  EXPECT_EQ(bars[0].ho_succ, 4.0);
}

TEST(Plot, RecoveryCurveSkipsUndefinedRuns) {
  std::vector<kpi::KpiReport> rows;
  for (int m : {1, 2, 4, 8}) {
    rows.push_back(report(HoMode::CHO, 30, m, 1, 0, 0, 0, 0.1 * m));
    rows.push_back(report(HoMode::CHO, 30, m, 2, 0, 0, 0, NAN));
  }
  rows.push_back(report(HoMode::BHO, 30, 1, 1, 0, 0, 0, 0.0));
  const auto curve = recovery_curve(rows);
  ASSERT_EQ(curve.size(), 4u);
  for (const auto& p : curve) {
    EXPECT_EQ(p.n_runs, 1);
    EXPECT_DOUBLE_EQ(p.recovery_rate, 0.1 * p.max_prepared);
  }
  const auto none = recovery_curve({report(HoMode::CHO, 60, 2, 1, 0, 0, 0, NAN)});
  ASSERT_EQ(none.size(), 1u);
  EXPECT_TRUE(std::isnan(none[0].recovery_rate));
}

TEST(Plot, EmitsDataAndScript) {
  const auto dir = scratch("emit");
  std::vector<kpi::KpiReport> rows;
  for (int m : {1, 2, 4, 8}) rows.push_back(report(HoMode::CHO, 30, m, 1, 1, 0.1, 0, 0.5));
  std::ofstream(dir / "results.csv") << format_csv(rows);

  const auto bars = emit_plot_data(dir / "results.csv", Figure::KpiBars, dir / "plots");
  ASSERT_EQ(bars.size(), 2u);
  EXPECT_NE(slurp(bars[1]).find("kpi_bars.dat"), std::string::npos);

  const auto curve = emit_plot_data(dir / "results.csv", Figure::RecoveryCurve, dir / "plots");
  ASSERT_EQ(curve.size(), 2u);
  const auto dat = slurp(curve[0]);
  int points = 0;
  std::istringstream lines(dat);
  for (std::string l; std::getline(lines, l);)
    if (!l.empty() && l[0] != '#') ++points;
  EXPECT_EQ(points, 4);
}
