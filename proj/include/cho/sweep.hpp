#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "cho/config.hpp"
#include "cho/kpi.hpp"
#include "cho/simulation.hpp"

namespace cho::sweep {

/// The run set: cross product of every sweep axis (empty axes use the
/// scenario value), sorted by run key.
std::vector<Config> expand(const Config& base);

/// Exact CSV column order.
inline constexpr const char* kCsvHeader =
    "mode,speed_kmh,o_prep_db,o_exec_db,max_prepared,seed,ho_succ_per_ue_min,"
    "all_fail_per_ue_min,pp_per_ue_min,cho_recovery_rate,rlf_count,hof_count,"
    "prepared_cell_seconds";

std::string csv_row(const kpi::KpiReport& r);

/// Header plus rows sorted by key.
std::string format_csv(std::vector<kpi::KpiReport> reports);

/// File name of a run's event log inside the output directory.
std::string event_log_name(const kpi::RunKey& key);

struct SweepOptions {
  int parallel = 1;
  bool trace = false;
  std::filesystem::path out_dir = ".";
  std::function<void(const sim::RunResult&)> on_run_done;
};

/// Executes every run, writes `results.csv` (and event logs with trace) into
/// out_dir, and returns the reports sorted by key. Each run owns all of its
/// state; only the result vector is shared, one slot per run.
std::vector<kpi::KpiReport> run_sweep(const Config& base, const SweepOptions& opts);

/// Parses a results CSV. Throws ConfigError if a required column is missing.
std::vector<kpi::KpiReport> read_results_csv(const std::filesystem::path& path);

struct BarGroup {
  HoMode mode = HoMode::CHO;
  double speed_kmh = 0.0;
  double o_prep_db = 0.0;
  double o_exec_db = 0.0;
  int max_prepared = 1;
  int n_runs = 0;
  double ho_succ = 0.0;
  double all_fail = 0.0;
  double pp = 0.0;
};

struct CurvePoint {
  double speed_kmh = 0.0;
  double o_prep_db = 0.0;
  double o_exec_db = 0.0;
  int max_prepared = 1;
  int n_runs = 0;              // runs with a defined recovery rate
  double recovery_rate = 0.0;  // mean over those runs; NaN if none
};

/// Seed-averaged KPI rates per configuration.
std::vector<BarGroup> kpi_bars(const std::vector<kpi::KpiReport>& reports);

/// Seed-averaged recovery rate vs max_prepared per (speed, o_prep, o_exec),
/// CHO rows only.
std::vector<CurvePoint> recovery_curve(const std::vector<kpi::KpiReport>& reports);

enum class Figure { KpiBars, RecoveryCurve };

/// Writes `<figure>.dat` and a gnuplot script `<figure>.gp` into out_dir.
/// Returns the paths written.
std::vector<std::filesystem::path> emit_plot_data(const std::filesystem::path& csv_path,
                                                  Figure figure,
                                                  const std::filesystem::path& out_dir);

}  // namespace cho::sweep
