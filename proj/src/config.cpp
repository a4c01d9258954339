#include "cho/config.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

namespace cho {

SimTime ScenarioConfig::time_step() const {
  return SimTime{static_cast<std::int64_t>(std::llround(time_step_s * 1000.0))};
}

SimTime ScenarioConfig::duration() const {
  return SimTime{static_cast<std::int64_t>(std::llround(sim_duration_s * 1000.0))};
}

double RadioConfig::noise_dbm() const {
  return -174.0 + 10.0 * std::log10(bandwidth_mhz * 1e6) + noise_figure_db;
}

std::string_view to_string(ConditionType t) {
  switch (t) {
    case ConditionType::A3: return "A3";
    case ConditionType::A5: return "A5";
    case ConditionType::TimeWindow: return "TimeWindow";
    case ConditionType::Location: return "Location";
    case ConditionType::ChannelOccupancy: return "ChannelOccupancy";
    case ConditionType::And: return "And";
  }
  return "?";
}

namespace {

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split_list(std::string_view s) {
  std::vector<std::string_view> out;
  while (true) {
    const auto comma = s.find(',');
    const auto item = trim(s.substr(0, comma));
    if (!item.empty()) out.push_back(item);
    if (comma == std::string_view::npos) break;
    s.remove_prefix(comma + 1);
  }
  return out;
}

double to_double(std::string_view key, std::string_view v) {
  // from_chars for double is available in libstdc++ 11
  double out = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || p != v.data() + v.size() || !std::isfinite(out))
    throw ConfigError(fmt::format("{}: expected a number, got '{}'", key, v));
  return out;
}

template <typename Int>
Int to_int(std::string_view key, std::string_view v) {
  Int out = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || p != v.data() + v.size())
    throw ConfigError(fmt::format("{}: expected an integer, got '{}'", key, v));
  return out;
}

bool to_bool(std::string_view key, std::string_view v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError(fmt::format("{}: expected a boolean, got '{}'", key, v));
}

HoMode to_mode(std::string_view key, std::string_view v) {
  if (auto m = parse_mode(v)) return *m;
  throw ConfigError(fmt::format("{}: expected BHO or CHO, got '{}'", key, v));
}

ConditionType to_condition_type(std::string_view key, std::string_view v) {
  for (auto t : {ConditionType::A3, ConditionType::A5, ConditionType::TimeWindow,
                 ConditionType::Location, ConditionType::ChannelOccupancy, ConditionType::And}) {
    if (v == to_string(t)) return t;
  }
  throw ConfigError(fmt::format("{}: unknown condition type '{}'", key, v));
}

std::string fmt_num(double v) { return fmt::format("{}", v); }

template <typename T>
std::string fmt_list(const std::vector<T>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    if constexpr (std::is_same_v<T, HoMode>) {
      out += to_string(v[i]);
    } else {
      out += fmt::format("{}", v[i]);
    }
  }
  return out;
}

struct Field {
  std::function<void(Config&, std::string_view key, std::string_view value)> set;
  std::function<std::string(const Config&)> get;
};

using Registry = std::vector<std::pair<std::string, Field>>;

template <typename Member>
Field num_field(Member member) {
  return {[member](Config& c, std::string_view k, std::string_view v) {
            auto& ref = member(c);
            using T = std::remove_reference_t<decltype(ref)>;
            if constexpr (std::is_floating_point_v<T>) {
              ref = to_double(k, v);
            } else if constexpr (std::is_same_v<T, bool>) {
              ref = to_bool(k, v);
            } else {
              ref = to_int<T>(k, v);
            }
          },
          [member](const Config& c) {
            const auto& ref = member(c);
            using T = std::remove_cvref_t<decltype(ref)>;
            if constexpr (std::is_same_v<T, bool>) {
              return std::string(ref ? "true" : "false");
            } else if constexpr (std::is_floating_point_v<T>) {
              return fmt_num(ref);
            } else {
              return fmt::format("{}", ref);
            }
          }};
}

#define CHO_NUM(key, expr) \
  r.emplace_back(key, num_field([](auto& c) -> auto& { return expr; }))

template <typename LeafOf>
void add_leaf_fields(Registry& r, const std::string& prefix, LeafOf leaf) {
  auto add = [&](const std::string& name, auto member) {
    r.emplace_back(prefix + name,
                   num_field([leaf, member](auto& c) -> auto& { return member(leaf(c)); }));
  };
  r.emplace_back(prefix + "type",
                 Field{[leaf](Config& c, std::string_view k, std::string_view v) {
                         leaf(c).type = to_condition_type(k, v);
                       },
                       [leaf](const Config& c) {
                         return std::string(to_string(leaf(c).type));
                       }});
  add("hys", [](auto& l) -> auto& { return l.hys; });
  add("thresh1_dbm", [](auto& l) -> auto& { return l.a5_thresh1_dbm; });
  add("thresh2_dbm", [](auto& l) -> auto& { return l.a5_thresh2_dbm; });
  add("t1_s", [](auto& l) -> auto& { return l.t1_s; });
  add("t2_s", [](auto& l) -> auto& { return l.t2_s; });
  add("thresh_serv_m", [](auto& l) -> auto& { return l.thresh_serv_m; });
  add("thresh_cand_m", [](auto& l) -> auto& { return l.thresh_cand_m; });
  add("threshold", [](auto& l) -> auto& { return l.occupancy_threshold; });
}

template <typename T, typename Member, typename Parse>
Field list_field(Member member, Parse parse) {
  return {[member, parse](Config& c, std::string_view k, std::string_view v) {
            auto& out = member(c);
            out.clear();
            for (auto item : split_list(v)) out.push_back(parse(k, item));
          },
          [member](const Config& c) { return fmt_list<T>(member(c)); }};
}

const Registry& registry() {
  static const Registry reg = [] {
    Registry r;
    CHO_NUM("scenario.isd_m", c.scenario.isd_m);
    CHO_NUM("scenario.n_sites", c.scenario.n_sites);
    CHO_NUM("scenario.sectors_per_site", c.scenario.sectors_per_site);
    CHO_NUM("scenario.carrier_ghz", c.scenario.carrier_ghz);
    CHO_NUM("scenario.tx_power_dbm", c.scenario.tx_power_dbm);
    CHO_NUM("scenario.n_ues", c.scenario.n_ues);
    CHO_NUM("scenario.sim_duration_s", c.scenario.sim_duration_s);
    CHO_NUM("scenario.time_step_s", c.scenario.time_step_s);
    CHO_NUM("scenario.ue_speed_kmh", c.scenario.ue_speed_kmh);
    CHO_NUM("scenario.sinr_outage_db", c.scenario.sinr_outage_db);
    CHO_NUM("scenario.seed", c.scenario.seed);
    r.emplace_back("scenario.mode",
                   Field{[](Config& c, std::string_view k, std::string_view v) {
                           c.scenario.mode = to_mode(k, v);
                         },
                         [](const Config& c) { return std::string(to_string(c.scenario.mode)); }});
    CHO_NUM("scenario.o_prep_db", c.scenario.o_prep_db);
    CHO_NUM("scenario.o_exec_db", c.scenario.o_exec_db);
    CHO_NUM("scenario.max_prepared", c.scenario.max_prepared);
    CHO_NUM("scenario.pp_window_ms", c.scenario.pp_window_ms);
    CHO_NUM("scenario.bounds_margin_m", c.scenario.bounds_margin_m);

    CHO_NUM("radio.bs_height_m", c.radio.bs_height_m);
    CHO_NUM("radio.ue_height_m", c.radio.ue_height_m);
    CHO_NUM("radio.n_beams", c.radio.n_beams);
    CHO_NUM("radio.beamwidth_deg", c.radio.beamwidth_deg);
    CHO_NUM("radio.max_gain_dbi", c.radio.max_gain_dbi);
    CHO_NUM("radio.front_to_back_db", c.radio.front_to_back_db);
    CHO_NUM("radio.sector_width_deg", c.radio.sector_width_deg);
    CHO_NUM("radio.ue_gain_dbi", c.radio.ue_gain_dbi);
    CHO_NUM("radio.bandwidth_mhz", c.radio.bandwidth_mhz);
    CHO_NUM("radio.noise_figure_db", c.radio.noise_figure_db);
    CHO_NUM("radio.shadow_sigma_los_db", c.radio.shadow_sigma_los_db);
    CHO_NUM("radio.shadow_sigma_nlos_db", c.radio.shadow_sigma_nlos_db);
    CHO_NUM("radio.decorr_los_m", c.radio.decorr_los_m);
    CHO_NUM("radio.decorr_nlos_m", c.radio.decorr_nlos_m);
    CHO_NUM("radio.los_decorr_m", c.radio.los_decorr_m);

    CHO_NUM("measure.k", c.measure.k);
    CHO_NUM("measure.period_ms", c.measure.period_ms);
    CHO_NUM("measure.consolidation_n", c.measure.consolidation_n);
    CHO_NUM("measure.abs_threshold_dbm", c.measure.abs_threshold_dbm);
    CHO_NUM("measure.l1_error_sigma_db", c.measure.l1_error_sigma_db);

    CHO_NUM("protocol.report_delay_ms", c.protocol.report_delay_ms);
    CHO_NUM("protocol.prep_delay_ms", c.protocol.prep_delay_ms);
    CHO_NUM("protocol.cmd_delay_ms", c.protocol.cmd_delay_ms);
    CHO_NUM("protocol.report_interval_ms", c.protocol.report_interval_ms);
    CHO_NUM("protocol.ra_interval_ms", c.protocol.ra_interval_ms);
    CHO_NUM("protocol.cell_selection_delay_ms", c.protocol.cell_selection_delay_ms);
    CHO_NUM("protocol.recovery_fast_delay_ms", c.protocol.recovery_fast_delay_ms);
    CHO_NUM("protocol.reestablishment_delay_ms", c.protocol.reestablishment_delay_ms);
    CHO_NUM("protocol.t310_ms", c.protocol.t310_ms);
    CHO_NUM("protocol.t304_ms", c.protocol.t304_ms);
    CHO_NUM("protocol.n310", c.protocol.n310);
    CHO_NUM("protocol.n311", c.protocol.n311);
    CHO_NUM("protocol.qin_offset_db", c.protocol.qin_offset_db);
    CHO_NUM("protocol.ra_sinr_threshold_db", c.protocol.ra_sinr_threshold_db);
    CHO_NUM("protocol.min_rx_level_dbm", c.protocol.min_rx_level_dbm);
    CHO_NUM("protocol.release_hys_db", c.protocol.release_hys_db);
    CHO_NUM("protocol.prep_needs_link", c.protocol.prep_needs_link);
    CHO_NUM("protocol.prep_ttt_ms", c.protocol.prep_ttt_ms);
    CHO_NUM("protocol.occupancy_metric", c.protocol.occupancy_metric);
    r.emplace_back("protocol.exec.type",
                   Field{[](Config& c, std::string_view k, std::string_view v) {
                           const auto t = to_condition_type(k, v);
                           c.protocol.exec.type = t;
                           if (t != ConditionType::And) c.protocol.exec.leaf.type = t;
                         },
                         [](const Config& c) {
                           return std::string(to_string(c.protocol.exec.type));
                         }});
    CHO_NUM("protocol.exec.ttt_ms", c.protocol.exec.ttt_ms);
    // The leaf's own type key is redundant with protocol.exec.type, so only its
    // parameters are exposed at the top level.
    {
      Registry leaf;
      add_leaf_fields(leaf, "protocol.exec.",
                      [](auto& c) -> auto& { return c.protocol.exec.leaf; });
      for (auto& f : leaf)
        if (f.first != "protocol.exec.type") r.push_back(std::move(f));
    }
    add_leaf_fields(r, "protocol.exec.left.",
                    [](auto& c) -> auto& { return c.protocol.exec.left; });
    add_leaf_fields(r, "protocol.exec.right.",
                    [](auto& c) -> auto& { return c.protocol.exec.right; });

    CHO_NUM("kpi.count_recovery_as_ho_success", c.kpi.count_recovery_as_ho_success);

    r.emplace_back("sweep.speeds_kmh",
                   list_field<double>([](auto& c) -> auto& { return c.sweep.speeds_kmh; },
                                      to_double));
    r.emplace_back("sweep.modes",
                   list_field<HoMode>([](auto& c) -> auto& { return c.sweep.modes; }, to_mode));
    r.emplace_back("sweep.o_prep_db",
                   list_field<double>([](auto& c) -> auto& { return c.sweep.o_prep_values; },
                                      to_double));
    r.emplace_back("sweep.o_exec_db",
                   list_field<double>([](auto& c) -> auto& { return c.sweep.o_exec_values; },
                                      to_double));
    r.emplace_back("sweep.max_prepared",
                   list_field<int>([](auto& c) -> auto& { return c.sweep.max_prepared_values; },
                                   to_int<int>));
    r.emplace_back("sweep.seeds",
                   list_field<std::uint64_t>([](auto& c) -> auto& { return c.sweep.seeds; },
                                             to_int<std::uint64_t>));
    return r;
  }();
  return reg;
}

#undef CHO_NUM

bool valid_max_prepared(int n) { return n == 1 || n == 2 || n == 4 || n == 8; }

void validate_leaf(const ConditionLeafSpec& l, std::string_view where) {
  if (l.type == ConditionType::And)
    throw ConfigError(fmt::format("{}: nested conjunctions are not allowed", where));
  if (l.hys < 0) throw ConfigError(fmt::format("{}: hysteresis must be >= 0", where));
  if (l.type == ConditionType::TimeWindow && l.t1_s > l.t2_s)
    throw ConfigError(fmt::format("{}: time window needs t1 <= t2", where));
  if (l.type == ConditionType::Location && (l.thresh_serv_m <= 0 || l.thresh_cand_m <= 0))
    throw ConfigError(fmt::format("{}: location thresholds must be > 0", where));
}

}  // namespace

void validate(const Config& cfg) {
  const auto& s = cfg.scenario;
  if (!(s.isd_m > 0)) throw ConfigError("scenario.isd_m must be > 0");
  if (s.n_sites != 1 && s.n_sites != 7)
    throw ConfigError(fmt::format("scenario.n_sites = {} unsupported (1 or 7)", s.n_sites));
  if (s.sectors_per_site < 1) throw ConfigError("scenario.sectors_per_site must be >= 1");
  if (s.n_ues < 1) throw ConfigError("scenario.n_ues must be >= 1");
  if (!(s.time_step_s > 0)) throw ConfigError("scenario.time_step_s must be > 0");
  if (s.time_step().count() < 1 ||
      std::abs(s.time_step_s * 1000.0 - static_cast<double>(s.time_step().count())) > 1e-9)
    throw ConfigError("scenario.time_step_s must be a whole number of milliseconds");
  if (s.sim_duration_s < s.time_step_s)
    throw ConfigError("scenario.sim_duration_s must be >= time_step_s");
  if (s.ue_speed_kmh < 0) throw ConfigError("scenario.ue_speed_kmh must be >= 0");
  if (!valid_max_prepared(s.max_prepared))
    throw ConfigError("scenario.max_prepared must be one of 1, 2, 4, 8");
  if (s.pp_window_ms < 0) throw ConfigError("scenario.pp_window_ms must be >= 0");
  if (s.carrier_ghz < 0.5 || s.carrier_ghz > 100)
    throw ConfigError("scenario.carrier_ghz must lie in [0.5, 100]");

  const auto& r = cfg.radio;
  if (r.n_beams < 1) throw ConfigError("radio.n_beams must be >= 1");
  if (!(r.beamwidth_deg > 0)) throw ConfigError("radio.beamwidth_deg must be > 0");
  if (r.shadow_sigma_los_db < 0 || r.shadow_sigma_nlos_db < 0)
    throw ConfigError("radio shadowing sigma must be >= 0");
  if (!(r.decorr_los_m > 0) || !(r.decorr_nlos_m > 0) || !(r.los_decorr_m > 0))
    throw ConfigError("radio decorrelation distances must be > 0");
  if (r.bs_height_m <= r.ue_height_m) throw ConfigError("radio.bs_height_m must exceed ue height");

  const auto& m = cfg.measure;
  if (m.k < 0) throw ConfigError("measure.k must be >= 0");
  if (m.period_ms < 1) throw ConfigError("measure.period_ms must be >= 1");
  if (m.period_ms % s.time_step().count() != 0)
    throw ConfigError("measure.period_ms must be a multiple of the time step");
  if (m.consolidation_n < 1) throw ConfigError("measure.consolidation_n must be >= 1");
  if (m.l1_error_sigma_db < 0) throw ConfigError("measure.l1_error_sigma_db must be >= 0");

  const auto& p = cfg.protocol;
  for (int v : {p.report_delay_ms, p.prep_delay_ms, p.cmd_delay_ms, p.cell_selection_delay_ms,
                p.recovery_fast_delay_ms, p.reestablishment_delay_ms, p.prep_ttt_ms,
                p.report_interval_ms})
    if (v < 0) throw ConfigError("protocol delays must be >= 0");
  if (p.ra_interval_ms < 1) throw ConfigError("protocol.ra_interval_ms must be >= 1");
  if (p.t310_ms < 1 || p.t304_ms < 1) throw ConfigError("protocol timers must be >= 1 ms");
  if (p.n310 < 1 || p.n311 < 1) throw ConfigError("protocol.n310/n311 must be >= 1");
  if (p.release_hys_db < 0) throw ConfigError("protocol.release_hys_db must be >= 0");
  if (p.exec.ttt_ms < 0) throw ConfigError("protocol.exec.ttt_ms must be >= 0");
  if (p.exec.type == ConditionType::And) {
    validate_leaf(p.exec.left, "protocol.exec.left");
    validate_leaf(p.exec.right, "protocol.exec.right");
  } else {
    validate_leaf(p.exec.leaf, "protocol.exec");
  }

  for (int n : cfg.sweep.max_prepared_values)
    if (!valid_max_prepared(n)) throw ConfigError("sweep.max_prepared values must be 1, 2, 4 or 8");
  for (double v : cfg.sweep.speeds_kmh)
    if (v < 0) throw ConfigError("sweep.speeds_kmh values must be >= 0");
}

void apply_setting(Config& cfg, std::string_view key, std::string_view value) {
  const auto& reg = registry();
  const auto it = std::find_if(reg.begin(), reg.end(), [&](const auto& f) { return f.first == key; });
  if (it == reg.end()) throw ConfigError(fmt::format("unknown configuration key '{}'", key));
  it->second.set(cfg, key, trim(value));
}

Config parse_config(std::string_view text, Config base) {
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view l = line;
    if (const auto hash = l.find('#'); hash != std::string_view::npos) l = l.substr(0, hash);
    l = trim(l);
    if (l.empty()) continue;
    const auto eq = l.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError(fmt::format("line {}: expected 'key = value'", lineno));
    try {
      apply_setting(base, trim(l.substr(0, eq)), trim(l.substr(eq + 1)));
    } catch (const ConfigError& e) {
      throw ConfigError(fmt::format("line {}: {}", lineno, e.what()));
    }
  }
  return base;
}

Config load_config(const std::filesystem::path& path, Config base) {
  std::ifstream f(path);
  if (!f) throw ConfigError(fmt::format("cannot open config file '{}'", path.string()));
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str(), std::move(base));
}

void apply_overrides(Config& cfg, const std::vector<std::string>& overrides) {
  for (const auto& o : overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos)
      throw ConfigError(fmt::format("override '{}' is not key=value", o));
    apply_setting(cfg, trim(std::string_view(o).substr(0, eq)),
                  std::string_view(o).substr(eq + 1));
  }
}

std::string dump_config(const Config& cfg) {
  std::string out;
  for (const auto& [key, field] : registry()) out += fmt::format("{} = {}\n", key, field.get(cfg));
  return out;
}

}  // namespace cho
