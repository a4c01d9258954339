#include "cho/simulation.hpp"

#include <algorithm>
#include <cmath>

#include "cho/measure.hpp"
#include "cho/protocol.hpp"
#include "cho/radio.hpp"
#include "cho/rng.hpp"
#include "cho/scenario.hpp"

namespace cho::sim {

kpi::RunKey key_of(const Config& cfg) {
  const auto& s = cfg.scenario;
  return {s.mode, s.ue_speed_kmh, s.o_prep_db, s.o_exec_db, s.max_prepared, s.seed};
}

namespace {

struct UeRuntime {
  scenario::UeKinematics kin;
  Rng mobility_rng;
  Rng meas_rng;
  std::vector<Rng> link_rngs;
  std::vector<radio::LinkState> links;
  measure::UeMeasurements meas;
  core::UeProtocolState proto;
};

class World {
 public:
  explicit World(const Config& cfg)
      : cfg_(cfg),
        cells_(scenario::build_layout(cfg.scenario, cfg.radio.n_beams)),
        region_(scenario::bounding_region(cells_, cfg.scenario.margin())),
        params_(core::ProtocolParams::from_config(cfg)),
        n_cells_(static_cast<int>(cells_.size())),
        n_sites_(cfg.scenario.n_sites),
        noise_mw_(db_to_linear(cfg.radio.noise_dbm())),
        grid_(n_cells_, cfg.radio.n_beams),
        sinr_(static_cast<std::size_t>(n_cells_)),
        ref_dist_(static_cast<std::size_t>(n_cells_)),
        site_base_(static_cast<std::size_t>(n_sites_)),
        site_az_(static_cast<std::size_t>(n_sites_)),
        best_mw_(static_cast<std::size_t>(n_cells_)) {
    for (const auto& c : cells_) patterns_.push_back(radio::BeamPattern::sector(c.boresight_azimuth_deg, cfg.radio));
    for (int s = 0; s < n_sites_; ++s)
      site_pos_.push_back(cells_[static_cast<std::size_t>(s * cfg.scenario.sectors_per_site)].site_position);
  }

  RunResult run(const RunOptions& opts) {
    RunResult result;
    result.key = key_of(cfg_);
    kpi::KpiAggregator agg(cfg_.kpi);
    core::EventSink events;

    const SimTime dt = cfg_.scenario.time_step();
    const SimTime end = cfg_.scenario.duration();
    const SimTime period{cfg_.measure.period_ms};
    const double dt_s = static_cast<double>(dt.count()) / 1000.0;

    init_ues();

    for (SimTime now{0}; now < end; now += dt) {
      const bool tick = now.count() % period.count() == 0;
      for (auto& ue : ues_) {
        if (now > SimTime{0}) {
          ue.kin = scenario::step_random_waypoint(ue.kin, region_, dt_s, ue.mobility_rng);
          update_links(ue);
        }
        compute_radio(ue, tick);
        if (tick) measure::measurement_tick(ue.meas, grid_, cfg_.measure, &ue.meas_rng);

        const core::StepInput in{now, dt, tick, ue.meas.cells, sinr_, ref_dist_};
        events.clear();
        core::step_ue(ue.proto, in, params_, events);
        if (opts.check_invariants) {
          core::check_invariants(ue.proto, params_);
          ++result.invariant_checks;
        }
        for (const auto& e : events) agg.ingest(e);
        if (opts.keep_events) result.events.insert(result.events.end(), events.begin(), events.end());
      }
    }

    agg.finish(end);
    result.counters = agg.counters();
    result.report = kpi::normalize(result.counters, cfg_.scenario.n_ues, cfg_.scenario.sim_duration_s,
                                   result.key);
    return result;
  }

 private:
  void init_ues() {
    const auto seed = cfg_.scenario.seed;
    const double speed = scenario::kmh_to_mps(cfg_.scenario.ue_speed_kmh);
    ues_.clear();
    ues_.reserve(static_cast<std::size_t>(cfg_.scenario.n_ues));
    for (int u = 0; u < cfg_.scenario.n_ues; ++u) {
      UeRuntime ue{{},
                   make_stream(seed, StreamKind::Mobility, static_cast<std::uint64_t>(u)),
                   make_stream(seed, StreamKind::Measurement, static_cast<std::uint64_t>(u)),
                   {},
                   {},
                   measure::UeMeasurements(n_cells_, cfg_.measure.k),
                   {}};
      ue.kin.position = region_.sample(ue.mobility_rng);
      ue.kin.waypoint = region_.sample(ue.mobility_rng);
      ue.kin.speed_mps = speed;
      for (int s = 0; s < n_sites_; ++s) {
        ue.link_rngs.push_back(make_stream(seed, StreamKind::Link, static_cast<std::uint64_t>(u),
                                           static_cast<std::uint64_t>(s)));
        const double d2d = distance(ue.kin.position, site_pos_[static_cast<std::size_t>(s)]);
        ue.links.push_back(radio::initial_link(ue.kin.position, d2d, cfg_.radio, ue.link_rngs.back()));
      }

      // Initial attachment to the strongest consolidated cell.
      compute_radio(ue, true);
      CellId best = 0;
      double best_rsrp = -1e300;
      for (int c = 0; c < n_cells_; ++c) {
        const double v = measure::consolidate_beams(grid_.row(c), cfg_.measure.abs_threshold_dbm,
                                                    cfg_.measure.consolidation_n);
        if (v > best_rsrp) {
          best_rsrp = v;
          best = c;
        }
      }
      ue.proto = core::make_ue(u, best, n_cells_);
      ues_.push_back(std::move(ue));
    }
  }

  void update_links(UeRuntime& ue) {
    for (int s = 0; s < n_sites_; ++s) {
      const auto si = static_cast<std::size_t>(s);
      const double d2d = distance(ue.kin.position, site_pos_[si]);
      ue.links[si] = radio::advance_link(ue.links[si], ue.kin.position, d2d, cfg_.radio, ue.link_rngs[si]);
    }
  }

  // Fills sinr_ and ref_dist_ for the UE's current position, and grid_ when
  // `full_grid` is set.
  void compute_radio(const UeRuntime& ue, bool full_grid) {
    const auto& r = cfg_.radio;
    const radio::AntennaHeights h{r.bs_height_m, r.ue_height_m};
    const double dh = r.bs_height_m - r.ue_height_m;
    for (int s = 0; s < n_sites_; ++s) {
      const auto si = static_cast<std::size_t>(s);
      const double d2d = distance(ue.kin.position, site_pos_[si]);
      const double d3d = std::max(1.0, std::sqrt(d2d * d2d + dh * dh));
      const auto& link = ue.links[si];
      const double pl = radio::pathloss_umi(d3d, cfg_.scenario.carrier_ghz, link.los, h);
      site_base_[si] = radio::rsrp_dbm(cfg_.scenario.tx_power_dbm, pl, link.shadowing_db, r.ue_gain_dbi);
      site_az_[si] = azimuth_deg(site_pos_[si], ue.kin.position);
    }

    double total_mw = noise_mw_;
    for (int c = 0; c < n_cells_; ++c) {
      const auto ci = static_cast<std::size_t>(c);
      const auto& cell = cells_[ci];
      const auto si = static_cast<std::size_t>(cell.site);
      double best = -1e300;
      if (full_grid) {
        auto row = grid_.row(c);
        patterns_[ci].gains_toward(site_az_[si], row);
        for (auto& v : row) {
          v += site_base_[si];
          best = std::max(best, v);
        }
      } else {
        best = site_base_[si] + patterns_[ci].best_gain_toward(site_az_[si]);
      }
      best_mw_[ci] = db_to_linear(best);
      total_mw += best_mw_[ci];
      ref_dist_[ci] = distance(ue.kin.position, cell.reference_point);
    }
    for (std::size_t c = 0; c < best_mw_.size(); ++c) {
      const double interference = std::max(total_mw - best_mw_[c], noise_mw_);
      sinr_[c] = linear_to_db(best_mw_[c] / interference);
    }
  }

  Config cfg_;
  std::vector<scenario::Cell> cells_;
  scenario::Region region_;
  core::ProtocolParams params_;
  int n_cells_;
  int n_sites_;
  double noise_mw_;
  std::vector<radio::BeamPattern> patterns_;
  std::vector<Vec2> site_pos_;
  std::vector<UeRuntime> ues_;

  // Per-UE scratch, reused across UEs.
  measure::BeamGrid grid_;
  std::vector<double> sinr_;
  std::vector<double> ref_dist_;
  std::vector<double> site_base_;
  std::vector<double> site_az_;
  std::vector<double> best_mw_;
};

}  // namespace

RunResult run_simulation(const Config& cfg, const RunOptions& opts) {
  validate(cfg);
  World world(cfg);
  return world.run(opts);
}

}  // namespace cho::sim
