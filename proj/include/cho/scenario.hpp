#pragma once

#include <span>
#include <vector>

#include "cho/config.hpp"
#include "cho/rng.hpp"
#include "cho/types.hpp"

namespace cho::scenario {

/// One sector of a site.
struct Cell {
  CellId cell_id = 0;
  int site = 0;
  Vec2 site_position;
  double boresight_azimuth_deg = 0.0;
  std::vector<int> beams;
  /// Nominal centre of the sector's dominant coverage area, used as the
  /// reference location for distance-based execution conditions.
  Vec2 reference_point;

  bool operator==(const Cell&) const = default;
};

/// Axis-aligned box. Convex, so straight waypoint legs between interior
/// points never leave it.
struct Region {
  Vec2 lo;
  Vec2 hi;

  bool contains(Vec2 p, double tol = 1e-9) const {
    return p.x >= lo.x - tol && p.x <= hi.x + tol && p.y >= lo.y - tol && p.y <= hi.y + tol;
  }
  double width() const { return hi.x - lo.x; }
  double height() const { return hi.y - lo.y; }
  Vec2 sample(Rng& rng) const;
};

struct UeKinematics {
  Vec2 position;
  Vec2 waypoint;
  double speed_mps = 0.0;
};

inline double kmh_to_mps(double kmh) { return kmh / 3.6; }

/// Centre site plus, for n_sites = 7, a hexagonal ring at exactly ISD.
/// Sector boresights are spaced 360/sectors apart starting at 0 degrees.
std::vector<Cell> build_layout(const ScenarioConfig& cfg, int n_beams = 8);

Region bounding_region(std::span<const Cell> cells, double margin_m);

/// Moves toward the waypoint at constant speed. Arrival consumes part of the
/// step budget; a fresh waypoint is drawn and the rest of the budget is spent
/// toward it (zero pause time).
UeKinematics step_random_waypoint(UeKinematics kin, const Region& bounds, double dt_s, Rng& rng);

}  // namespace cho::scenario
