#include "cho/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cho::scenario {

Vec2 Region::sample(Rng& rng) const {
  std::uniform_real_distribution<double> ux(lo.x, hi.x);
  std::uniform_real_distribution<double> uy(lo.y, hi.y);
  const double x = ux(rng);
  return {x, uy(rng)};
}

std::vector<Cell> build_layout(const ScenarioConfig& cfg, int n_beams) {
  if (cfg.n_sites != 1 && cfg.n_sites != 7)
    throw ConfigError("build_layout supports 1 or 7 sites");
  if (cfg.sectors_per_site < 1) throw ConfigError("sectors_per_site must be >= 1");
  if (!(cfg.isd_m > 0)) throw ConfigError("isd must be > 0");
  if (n_beams < 1) throw ConfigError("n_beams must be >= 1");

  std::vector<Vec2> sites{{0.0, 0.0}};
  if (cfg.n_sites == 7) {
    for (int k = 0; k < 6; ++k) {
      const double a = k * 60.0 * M_PI / 180.0;
      sites.push_back({cfg.isd_m * std::cos(a), cfg.isd_m * std::sin(a)});
    }
  }

  std::vector<int> beams(static_cast<std::size_t>(n_beams));
  for (int b = 0; b < n_beams; ++b) beams[static_cast<std::size_t>(b)] = b;

  std::vector<Cell> cells;
  cells.reserve(sites.size() * static_cast<std::size_t>(cfg.sectors_per_site));
  for (std::size_t s = 0; s < sites.size(); ++s) {
    for (int sec = 0; sec < cfg.sectors_per_site; ++sec) {
      Cell c;
      c.cell_id = static_cast<CellId>(cells.size());
      c.site = static_cast<int>(s);
      c.site_position = sites[s];
      c.boresight_azimuth_deg = 360.0 * sec / cfg.sectors_per_site;
      c.beams = beams;
      const double a = c.boresight_azimuth_deg * M_PI / 180.0;
      c.reference_point = sites[s] + Vec2{std::cos(a), std::sin(a)} * (cfg.isd_m / 3.0);
      cells.push_back(std::move(c));
    }
  }
  return cells;
}

Region bounding_region(std::span<const Cell> cells, double margin_m) {
  Region r{{std::numeric_limits<double>::max(), std::numeric_limits<double>::max()},
           {std::numeric_limits<double>::lowest(), std::numeric_limits<double>::lowest()}};
  for (const auto& c : cells) {
    r.lo.x = std::min(r.lo.x, c.site_position.x);
    r.lo.y = std::min(r.lo.y, c.site_position.y);
    r.hi.x = std::max(r.hi.x, c.site_position.x);
    r.hi.y = std::max(r.hi.y, c.site_position.y);
  }
  r.lo = r.lo - Vec2{margin_m, margin_m};
  r.hi = r.hi + Vec2{margin_m, margin_m};
  return r;
}

UeKinematics step_random_waypoint(UeKinematics kin, const Region& bounds, double dt_s, Rng& rng) {
  if (dt_s <= 0.0) return kin;
  double budget = kin.speed_mps * dt_s;
  // A degenerate region can hand back the same waypoint forever; cap redraws.
  for (int redraws = 0; redraws < 64; ++redraws) {
    const Vec2 to_wp = kin.waypoint - kin.position;
    const double dist = to_wp.norm();
    if (dist > budget) {
      kin.position = kin.position + to_wp * (budget / dist);
      return kin;
    }
    kin.position = kin.waypoint;
    budget -= dist;
    kin.waypoint = bounds.sample(rng);
    if (budget <= 0.0 && dist > 0.0) return kin;
  }
  return kin;
}

}  // namespace cho::scenario
