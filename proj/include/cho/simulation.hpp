#pragma once

#include <cstdint>
#include <vector>

#include "cho/config.hpp"
#include "cho/events.hpp"
#include "cho/kpi.hpp"

namespace cho::sim {

struct RunOptions {
  bool keep_events = false;
  bool check_invariants = true;
};

struct RunResult {
  kpi::RunKey key;
  kpi::KpiCounters counters;
  kpi::KpiReport report;
  /// Full event stream in emission order (only with keep_events).
  std::vector<Event> events;
  std::uint64_t invariant_checks = 0;
};

kpi::RunKey key_of(const Config& cfg);

/// One complete, self-contained run. UEs are advanced sequentially by id
/// within each step; every random stream is derived from the run seed, so the
/// result is a pure function of the configuration.
///
/// Throws ConfigError for an invalid configuration and InvariantViolation if
/// the protocol state machine breaks a structural invariant.
RunResult run_simulation(const Config& cfg, const RunOptions& opts = {});

}  // namespace cho::sim
