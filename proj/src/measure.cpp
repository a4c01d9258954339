#include "cho/measure.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace cho::measure {

double FilterState::coefficient() const { return std::pow(2.0, -k / 4.0); }

double consolidate_beams(std::span<const double> beam_rsrps_dbm, double abs_threshold_dbm,
                         int max_n) {
  if (beam_rsrps_dbm.empty()) throw std::domain_error("consolidate_beams: no beams");
  if (max_n < 1) throw std::domain_error("consolidate_beams: max_n must be >= 1");

  // Small fixed beam counts; a partial sort of a copy is cheapest.
  double top[16];
  std::vector<double> heap_copy;
  std::span<double> sorted;
  if (beam_rsrps_dbm.size() <= std::size(top)) {
    std::copy(beam_rsrps_dbm.begin(), beam_rsrps_dbm.end(), top);
    sorted = {top, beam_rsrps_dbm.size()};
  } else {
    heap_copy.assign(beam_rsrps_dbm.begin(), beam_rsrps_dbm.end());
    sorted = heap_copy;
  }
  const auto n = std::min<std::size_t>(static_cast<std::size_t>(max_n), sorted.size());
  std::partial_sort(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(n), sorted.end(),
                    std::greater<>{});

  double sum_mw = 0.0;
  int used = 0;
  for (std::size_t i = 0; i < n && sorted[i] > abs_threshold_dbm; ++i) {
    sum_mw += db_to_linear(sorted[i]);
    ++used;
  }
  if (used == 0) return sorted[0];
  return linear_to_db(sum_mw / used);
}

FilterState l3_filter(FilterState state, double sample_dbm) {
  if (!state.initialized) {
    state.value = sample_dbm;
    state.initialized = true;
    return state;
  }
  const double a = state.coefficient();
  state.value = (1.0 - a) * state.value + a * sample_dbm;
  return state;
}

UeMeasurements::UeMeasurements(int n_cells, double k)
    : filters(static_cast<std::size_t>(n_cells), FilterState{k, 0.0, false}),
      cells(static_cast<std::size_t>(n_cells)) {
  for (int c = 0; c < n_cells; ++c) cells[static_cast<std::size_t>(c)].cell_id = c;
}

void measurement_tick(UeMeasurements& ue, const BeamGrid& beams, const MeasureConfig& cfg,
                      Rng* l1_error_rng) {
  std::normal_distribution<double> err(0.0, cfg.l1_error_sigma_db);
  for (int c = 0; c < beams.n_cells; ++c) {
    const auto row = beams.row(c);
    double l1 = consolidate_beams(row, cfg.abs_threshold_dbm, cfg.consolidation_n);
    if (l1_error_rng != nullptr && cfg.l1_error_sigma_db > 0) l1 += err(*l1_error_rng);

    auto& filter = ue.filters[static_cast<std::size_t>(c)];
    filter = l3_filter(filter, l1);

    auto& m = ue.cells[static_cast<std::size_t>(c)];
    m.l1_cell_rsrp = l1;
    m.l3_rsrp = filter.value;
    m.best_beam = static_cast<int>(std::max_element(row.begin(), row.end()) - row.begin());
  }
}

}  // namespace cho::measure
