#include "cho/radio.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cho::radio {

namespace {
constexpr double kSpeedOfLight = 299792458.0;

// wrap_deg for arguments already within (-540, 540).
double wrap_near(double a) {
  if (a >= 180.0) return a - 360.0;
  if (a < -180.0) return a + 360.0;
  return a;
}
}  // namespace

double pathloss_umi(double d3d_m, double fc_ghz, bool los, AntennaHeights h) {
  if (!(d3d_m >= 1.0)) throw std::domain_error("pathloss_umi: d3d must be >= 1 m");
  if (!(fc_ghz >= 0.5 && fc_ghz <= 100.0))
    throw std::domain_error("pathloss_umi: fc must lie in [0.5, 100] GHz");

  // Breakpoint with 1 m effective environment height.
  const double h_bs_eff = h.bs_m - 1.0;
  const double h_ut_eff = h.ut_m - 1.0;
  const double d_bp = 4.0 * h_bs_eff * h_ut_eff * fc_ghz * 1e9 / kSpeedOfLight;

  double pl_los = 0.0;
  if (d3d_m <= d_bp) {
    pl_los = 32.4 + 21.0 * std::log10(d3d_m) + 20.0 * std::log10(fc_ghz);
  } else {
    const double dh = h.bs_m - h.ut_m;
    pl_los = 32.4 + 40.0 * std::log10(d3d_m) + 20.0 * std::log10(fc_ghz) -
             9.5 * std::log10(d_bp * d_bp + dh * dh);
  }
  if (los) return pl_los;

  const double pl_nlos =
      35.3 * std::log10(d3d_m) + 22.4 + 21.3 * std::log10(fc_ghz) - 0.3 * (h.ut_m - 1.5);
  return std::max(pl_los, pl_nlos);
}

double los_probability(double d2d_m) {
  if (d2d_m <= 18.0) return 1.0;
  return 18.0 / d2d_m + std::exp(-d2d_m / 36.0) * (1.0 - 18.0 / d2d_m);
}

LinkState update_shadowing(LinkState link, Vec2 new_position, double sigma_db, double decorr_m,
                           Rng& rng) {
  const double moved = distance(link.last_update_position, new_position);
  link.last_update_position = new_position;
  if (moved <= 0.0) return link;
  const double rho = std::exp(-moved / decorr_m);
  std::normal_distribution<double> n01(0.0, 1.0);
  link.shadowing_db = rho * link.shadowing_db + std::sqrt(1.0 - rho * rho) * sigma_db * n01(rng);
  return link;
}

LinkState advance_link(LinkState link, Vec2 new_position, double d2d_m, const RadioConfig& cfg,
                       Rng& rng) {
  const double moved = distance(link.last_update_position, new_position);
  const double sigma = link.los ? cfg.shadow_sigma_los_db : cfg.shadow_sigma_nlos_db;
  const double decorr = link.los ? cfg.decorr_los_m : cfg.decorr_nlos_m;
  link = update_shadowing(link, new_position, sigma, decorr, rng);
  link.travel_since_los_draw_m += moved;
  if (link.travel_since_los_draw_m > cfg.los_decorr_m) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    link.los = u(rng) < los_probability(d2d_m);
    link.travel_since_los_draw_m = 0.0;
  }
  return link;
}

LinkState initial_link(Vec2 position, double d2d_m, const RadioConfig& cfg, Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::normal_distribution<double> n01(0.0, 1.0);
  LinkState link;
  link.los = u(rng) < los_probability(d2d_m);
  link.shadowing_db = n01(rng) * (link.los ? cfg.shadow_sigma_los_db : cfg.shadow_sigma_nlos_db);
  link.last_update_position = position;
  return link;
}

BeamPattern BeamPattern::sector(double boresight_deg, const RadioConfig& cfg) {
  BeamPattern p;
  p.n_beams = cfg.n_beams;
  p.beamwidth_deg = cfg.beamwidth_deg;
  p.max_gain_dbi = cfg.max_gain_dbi;
  p.front_to_back_db = cfg.front_to_back_db;
  p.boresight_deg = wrap_deg(boresight_deg);
  const double step = cfg.sector_width_deg / cfg.n_beams;
  for (int b = 0; b < cfg.n_beams; ++b) {
    const double rel = -cfg.sector_width_deg / 2.0 + step * (b + 0.5);
    p.pointing_offsets_deg.push_back(rel);
    p.pointing_azimuths_deg.push_back(wrap_deg(boresight_deg + rel));
  }
  return p;
}

double BeamPattern::best_gain_toward(double ue_azimuth_deg) const {
  const double rel = wrap_near(ue_azimuth_deg - boresight_deg);
  // Offsets are sorted, so the nearest beam is found by one scan from the
  // left; beyond the sector edges all far beams are on the floor anyway.
  std::size_t best = 0;
  double best_off = std::abs(wrap_near(rel - pointing_offsets_deg[0]));
  for (std::size_t b = 1; b < pointing_offsets_deg.size(); ++b) {
    const double off = std::abs(wrap_near(rel - pointing_offsets_deg[b]));
    if (off >= best_off) break;
    best_off = off;
    best = b;
  }
  return beam_gain(*this, static_cast<int>(best), best_off);
}

void BeamPattern::gains_toward(double ue_azimuth_deg, std::span<double> out) const {
  const double rel = wrap_near(ue_azimuth_deg - boresight_deg);
  for (std::size_t b = 0; b < pointing_offsets_deg.size(); ++b)
    out[b] = beam_gain(*this, static_cast<int>(b), wrap_near(rel - pointing_offsets_deg[b]));
}

double beam_gain(const BeamPattern& pattern, int beam, double azimuth_offset_deg) {
  if (beam < 0 || beam >= pattern.n_beams) throw std::out_of_range("beam_gain: beam index");
  const double x = azimuth_offset_deg / pattern.beamwidth_deg;
  return pattern.max_gain_dbi - std::min(12.0 * x * x, pattern.front_to_back_db);
}

double beam_gain_toward(const BeamPattern& pattern, int beam, double ue_azimuth_deg) {
  const double offset =
      wrap_deg(ue_azimuth_deg - pattern.pointing_azimuths_deg[static_cast<std::size_t>(beam)]);
  return beam_gain(pattern, beam, offset);
}

int best_beam(const BeamPattern& pattern, double ue_azimuth_deg) {
  int best = 0;
  double best_off = 1e300;
  for (int b = 0; b < pattern.n_beams; ++b) {
    const double off = std::abs(
        wrap_deg(ue_azimuth_deg - pattern.pointing_azimuths_deg[static_cast<std::size_t>(b)]));
    if (off < best_off) {
      best_off = off;
      best = b;
    }
  }
  return best;
}

double sinr_db(double serving_rsrp_dbm, std::span<const double> interferer_rsrps_dbm,
               double noise_dbm) {
  double denom = db_to_linear(noise_dbm);
  for (double i : interferer_rsrps_dbm) denom += db_to_linear(i);
  return linear_to_db(db_to_linear(serving_rsrp_dbm) / denom);
}

}  // namespace cho::radio
