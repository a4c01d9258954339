#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "cho/types.hpp"

namespace cho {

/// Everything the protocol reports. KPI-bearing kinds are listed first; the
/// rest are trace-only but still part of the log schema.
enum class EventKind {
  HoSuccess,          // RA completed on the target of a regular (C)HO
  PingPong,           // the HO just completed returned to its source in time
  RlfSource,          // T310 expiry in the serving cell
  HofTarget,          // T304 expiry during HO execution
  ResolvedRecovery,   // open failure closed through CHO recovery
  ResolvedReest,      // open failure closed through reestablishment
  PrepActive,         // candidate configuration delivered and stored
  PrepRelease,        // stored or pending candidate dropped
  PrepRequest,
  PrepLost,           // CHO command not delivered over the serving link
  MeasReport,         // BHO measurement report sent
  HoCommandLost,      // BHO command not delivered over the serving link
  ExecStart,          // phase -> ExecutingHO, T304 started
  T310Start,
  T310Stop,
  CellSelection,      // post-failure cell selection outcome
  Down,               // no cell above the selection floor
};

std::string_view to_string(EventKind k);

/// Throws std::invalid_argument for unknown names.
EventKind parse_event_kind(std::string_view s);

struct Event {
  SimTime time{0};
  int ue_id = 0;
  EventKind kind = EventKind::HoSuccess;
  CellId serving = kNoCell;
  CellId target = kNoCell;
  std::string detail;

  bool operator==(const Event&) const = default;
};

/// Tab-separated: time_ms, ue_id, event, serving, target, detail. Missing
/// cells are written as '-', an empty detail as '-'.
std::string format_event(const Event& e);

/// Inverse of format_event. Throws std::invalid_argument on malformed lines
/// or unknown event names.
Event parse_event(std::string_view line);

void write_event_log(std::ostream& out, const std::vector<Event>& events);
std::vector<Event> read_event_log(std::istream& in);

}  // namespace cho
