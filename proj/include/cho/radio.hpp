#pragma once

#include <span>
#include <vector>

#include "cho/config.hpp"
#include "cho/rng.hpp"
#include "cho/types.hpp"

namespace cho::radio {

struct AntennaHeights {
  double bs_m = 10.0;
  double ut_m = 1.5;
};

/// UMi street-canyon pathloss (TR 38.901 Table 7.4.1-1). Throws
/// std::domain_error for d3d < 1 m or fc outside [0.5, 100] GHz.
double pathloss_umi(double d3d_m, double fc_ghz, bool los, AntennaHeights h = {});

/// UMi LOS probability as a function of 2-D distance.
double los_probability(double d2d_m);

/// Large-scale state of one UE-site link.
struct LinkState {
  bool los = true;
  double shadowing_db = 0.0;
  Vec2 last_update_position;
  /// Distance travelled since the LOS state was last drawn.
  double travel_since_los_draw_m = 0.0;
};

/// Gudmundson AR(1) update of the shadowing term with rho = exp(-dd/decorr).
LinkState update_shadowing(LinkState link, Vec2 new_position, double sigma_db, double decorr_m,
                           Rng& rng);

/// Full per-step link update: shadowing with the parameters of the current
/// LOS state, then a fresh LOS draw once the UE has moved more than the
/// LOS decorrelation distance since the previous draw.
LinkState advance_link(LinkState link, Vec2 new_position, double d2d_m, const RadioConfig& cfg,
                       Rng& rng);

/// Initial link state: LOS drawn from los_probability, shadowing from the
/// stationary distribution.
LinkState initial_link(Vec2 position, double d2d_m, const RadioConfig& cfg, Rng& rng);

struct BeamPattern {
  int n_beams = 8;
  double beamwidth_deg = 13.0;
  double max_gain_dbi = 18.0;
  double front_to_back_db = 25.0;
  std::vector<double> pointing_azimuths_deg;
  double boresight_deg = 0.0;
  /// Beam pointing relative to the boresight, ascending.
  std::vector<double> pointing_offsets_deg;

  /// Beams evenly tiling `sector_width_deg` around the boresight.
  static BeamPattern sector(double boresight_deg, const RadioConfig& cfg);

  /// Gain of the beam nearest to a UE at `ue_azimuth_deg`; equal to the
  /// maximum of beam_gain_toward over all beams.
  double best_gain_toward(double ue_azimuth_deg) const;

  /// Writes every beam's gain toward the UE into `out` (size n_beams).
  void gains_toward(double ue_azimuth_deg, std::span<double> out) const;
};

/// Parabolic main lobe clamped at the front-to-back floor. `azimuth_offset_deg`
/// is measured from the beam's own pointing direction.
double beam_gain(const BeamPattern& pattern, int beam, double azimuth_offset_deg);

/// Gain of `beam` toward a UE seen at absolute azimuth `ue_azimuth_deg`.
double beam_gain_toward(const BeamPattern& pattern, int beam, double ue_azimuth_deg);

/// Beam whose pointing azimuth is nearest the UE (lowest index on ties).
int best_beam(const BeamPattern& pattern, double ue_azimuth_deg);

inline double rsrp_dbm(double tx_power_dbm, double pathloss_db, double shadow_db, double gain_dbi) {
  return tx_power_dbm - pathloss_db - shadow_db + gain_dbi;
}

/// Serving over interference-plus-noise, summed in mW.
double sinr_db(double serving_rsrp_dbm, std::span<const double> interferer_rsrps_dbm,
               double noise_dbm);

}  // namespace cho::radio
