#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <span>
#include <utility>

#include "cho/config.hpp"
#include "cho/events.hpp"
#include "cho/types.hpp"

namespace cho::kpi {

struct KpiCounters {
  std::uint64_t ho_success = 0;
  std::uint64_t all_mobility_fail = 0;
  std::uint64_t rlf_source = 0;
  std::uint64_t hof_target = 0;
  std::uint64_t ping_pong = 0;
  std::uint64_t failures_resolved_by_recovery = 0;
  std::uint64_t failures_resolved_by_reest = 0;
  /// Integral of the number of stored candidate configurations over time,
  /// kept in integer cell-milliseconds so replays are exact.
  std::int64_t prepared_cell_ms = 0;

  double prepared_cell_seconds() const { return static_cast<double>(prepared_cell_ms) / 1000.0; }
  bool operator==(const KpiCounters&) const = default;
};

/// Applies one event to the counters. Trace-only kinds leave the counters
/// unchanged. Throws std::invalid_argument for a kind outside the schema.
KpiCounters ingest_event(KpiCounters counters, const Event& event, const KpiConfig& cfg = {});

/// Stateful aggregator: ingest_event plus the bookkeeping needed to integrate
/// prepared-cell time from PREP_ACTIVE/PREP_RELEASE pairs.
class KpiAggregator {
 public:
  explicit KpiAggregator(KpiConfig cfg = {}) : cfg_(cfg) {}

  void ingest(const Event& event);
  void ingest_all(std::span<const Event> events) {
    for (const auto& e : events) ingest(e);
  }
  /// Closes every still-open candidate interval at `end`.
  void finish(SimTime end);

  const KpiCounters& counters() const { return counters_; }

 private:
  KpiConfig cfg_;
  KpiCounters counters_;
  std::map<std::pair<int, CellId>, SimTime> open_prep_;
};

/// Identifies one run of a sweep; the CSV is sorted by this key.
struct RunKey {
  HoMode mode = HoMode::CHO;
  double speed_kmh = 0.0;
  double o_prep_db = 0.0;
  double o_exec_db = 0.0;
  int max_prepared = 1;
  std::uint64_t seed = 0;

  auto operator<=>(const RunKey&) const = default;
  bool operator==(const RunKey&) const = default;
};

struct KpiReport {
  RunKey key;
  double ho_succ_per_ue_min = 0.0;
  double all_fail_per_ue_min = 0.0;
  double pp_per_ue_min = 0.0;
  double cho_recovery_rate = 0.0;  // NaN when no failure occurred
  std::uint64_t rlf_count = 0;
  std::uint64_t hof_count = 0;
  double prepared_cell_seconds = 0.0;
};

/// Rates per UE per minute. Throws std::domain_error for n_ues <= 0 or
/// duration <= 0.
KpiReport normalize(const KpiCounters& counters, int n_ues, double duration_s, RunKey key = {});

/// Fraction of mobility failures closed by CHO recovery; NaN if there were none.
double recovery_rate(const KpiCounters& counters);

}  // namespace cho::kpi
