#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "cho/types.hpp"

namespace cho {

/// Deployment, population and run-level mobility parameters. Defaults are the
/// full-scale reference scenario (7 sites at 200 m ISD, 28 GHz, 420 UEs, 300 s).
struct ScenarioConfig {
  double isd_m = 200.0;
  int n_sites = 7;
  int sectors_per_site = 3;
  double carrier_ghz = 28.0;
  double tx_power_dbm = 30.0;
  int n_ues = 420;
  double sim_duration_s = 300.0;
  double time_step_s = 0.010;
  double ue_speed_kmh = 30.0;
  double sinr_outage_db = -8.0;
  std::uint64_t seed = 1;
  HoMode mode = HoMode::CHO;
  double o_prep_db = 3.0;
  double o_exec_db = 3.0;
  int max_prepared = 1;
  int pp_window_ms = 1000;
  /// UE confinement margin around the site hull; negative means ISD/2.
  double bounds_margin_m = -1.0;

  SimTime time_step() const;
  SimTime duration() const;
  double margin() const { return bounds_margin_m < 0 ? isd_m / 2.0 : bounds_margin_m; }
};

struct RadioConfig {
  double bs_height_m = 10.0;
  double ue_height_m = 1.5;
  int n_beams = 8;
  double beamwidth_deg = 13.0;
  double max_gain_dbi = 18.0;
  double front_to_back_db = 25.0;
  double sector_width_deg = 120.0;
  double ue_gain_dbi = 0.0;
  double bandwidth_mhz = 100.0;
  double noise_figure_db = 9.0;
  double shadow_sigma_los_db = 4.0;
  double shadow_sigma_nlos_db = 7.82;
  double decorr_los_m = 10.0;
  double decorr_nlos_m = 13.0;
  /// Travel distance after which a link's LOS state is redrawn.
  double los_decorr_m = 50.0;

  /// Thermal noise (-174 dBm/Hz) over the bandwidth plus UE noise figure.
  double noise_dbm() const;
};

struct MeasureConfig {
  double k = 4.0;
  int period_ms = 40;
  int consolidation_n = 2;
  double abs_threshold_dbm = -110.0;
  double l1_error_sigma_db = 0.0;
};

enum class ConditionType { A3, A5, TimeWindow, Location, ChannelOccupancy, And };

std::string_view to_string(ConditionType t);

/// Declarative form of a leaf execution condition as read from config. A3
/// leaves take their offset from the run's o_exec.
struct ConditionLeafSpec {
  ConditionType type = ConditionType::A3;
  double hys = 0.0;  // dB for A3/A5, occupancy units for ChannelOccupancy
  double a5_thresh1_dbm = -95.0;
  double a5_thresh2_dbm = -80.0;
  double t1_s = 0.0;
  double t2_s = 1e9;
  double thresh_serv_m = 100.0;
  double thresh_cand_m = 100.0;
  double occupancy_threshold = 0.5;
};

struct ConditionSpec {
  ConditionType type = ConditionType::A3;
  int ttt_ms = 160;
  ConditionLeafSpec leaf;   // used when type != And
  ConditionLeafSpec left;   // used when type == And
  ConditionLeafSpec right;
};

struct ProtocolConfig {
  int report_delay_ms = 10;
  int prep_delay_ms = 50;
  int cmd_delay_ms = 10;
  int report_interval_ms = 240;
  int ra_interval_ms = 20;
  int cell_selection_delay_ms = 50;
  int recovery_fast_delay_ms = 80;
  int reestablishment_delay_ms = 200;
  int t310_ms = 1000;
  int t304_ms = 500;
  int n310 = 5;
  int n311 = 2;
  double qin_offset_db = 2.0;        // qin = qout + offset
  double ra_sinr_threshold_db = -8.0;
  double min_rx_level_dbm = -110.0;  // cell selection floor
  double release_hys_db = 2.0;
  bool prep_needs_link = false;      // CHO config dropped if serving SINR < qout at delivery
  int prep_ttt_ms = 0;
  double occupancy_metric = 1.0;     // constant M_c fed to occupancy leaves
  ConditionSpec exec;
};

struct KpiConfig {
  bool count_recovery_as_ho_success = false;
};

/// Cross-product axes. Empty axes fall back to the scenario value.
struct SweepSpec {
  std::vector<double> speeds_kmh;
  std::vector<HoMode> modes;
  std::vector<double> o_prep_values;
  std::vector<double> o_exec_values;
  std::vector<int> max_prepared_values;
  std::vector<std::uint64_t> seeds;
};

struct Config {
  ScenarioConfig scenario;
  RadioConfig radio;
  MeasureConfig measure;
  ProtocolConfig protocol;
  KpiConfig kpi;
  SweepSpec sweep;
};

/// Throws ConfigError on the first violated constraint.
void validate(const Config& cfg);

/// Applies one `key = value` assignment. Unknown keys and malformed values
/// throw ConfigError.
void apply_setting(Config& cfg, std::string_view key, std::string_view value);

/// Parses the line-oriented `group.key = value` format. `#` starts a comment.
Config parse_config(std::string_view text, Config base = {});
Config load_config(const std::filesystem::path& path, Config base = {});

/// Applies `key=value` overrides in order.
void apply_overrides(Config& cfg, const std::vector<std::string>& overrides);

/// Every recognised key with its current value, in the file format.
std::string dump_config(const Config& cfg);

}  // namespace cho
