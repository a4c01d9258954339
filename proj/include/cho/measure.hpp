#pragma once

#include <span>
#include <vector>

#include "cho/config.hpp"
#include "cho/rng.hpp"
#include "cho/types.hpp"

namespace cho::measure {

struct CellMeasurement {
  CellId cell_id = kNoCell;
  double l1_cell_rsrp = -1e9;  // consolidated, latest sample
  double l3_rsrp = -1e9;       // filtered
  int best_beam = 0;
};

/// Layer-3 exponential filter state. The filter runs in the dB domain with
/// coefficient a = 2^(-k/4).
struct FilterState {
  double k = 4.0;
  double value = 0.0;
  bool initialized = false;

  double coefficient() const;
};

/// Linear-domain mean of up to `max_n` strongest beams above `abs_threshold`.
/// If no beam clears the threshold the strongest beam is returned as is.
/// Throws std::domain_error on an empty list or max_n < 1.
double consolidate_beams(std::span<const double> beam_rsrps_dbm, double abs_threshold_dbm,
                         int max_n);

FilterState l3_filter(FilterState state, double sample_dbm);

/// Beam RSRPs of every cell for one UE, row-major by cell.
struct BeamGrid {
  int n_cells = 0;
  int n_beams = 0;
  std::vector<double> rsrp_dbm;

  BeamGrid() = default;
  BeamGrid(int cells, int beams)
      : n_cells(cells), n_beams(beams), rsrp_dbm(static_cast<std::size_t>(cells * beams)) {}

  std::span<double> row(int cell) {
    return {rsrp_dbm.data() + static_cast<std::ptrdiff_t>(cell) * n_beams,
            static_cast<std::size_t>(n_beams)};
  }
  std::span<const double> row(int cell) const {
    return {rsrp_dbm.data() + static_cast<std::ptrdiff_t>(cell) * n_beams,
            static_cast<std::size_t>(n_beams)};
  }
};

/// Per-UE measurement state: one L3 filter per cell.
struct UeMeasurements {
  std::vector<FilterState> filters;
  std::vector<CellMeasurement> cells;

  UeMeasurements() = default;
  UeMeasurements(int n_cells, double k);
};

/// One measurement occasion: consolidate each cell's beams, optionally add L1
/// error, and push the result through that cell's L3 filter. Cells are
/// processed independently.
void measurement_tick(UeMeasurements& ue, const BeamGrid& beams, const MeasureConfig& cfg,
                      Rng* l1_error_rng = nullptr);

}  // namespace cho::measure
