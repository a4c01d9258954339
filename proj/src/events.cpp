#include "cho/events.hpp"

#include <fmt/format.h>

#include <array>
#include <charconv>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <utility>

namespace cho {

namespace {

constexpr std::array<std::pair<EventKind, std::string_view>, 17> kNames{{
    {EventKind::HoSuccess, "HO_SUCCESS"},
    {EventKind::PingPong, "PING_PONG"},
    {EventKind::RlfSource, "RLF"},
    {EventKind::HofTarget, "HOF"},
    {EventKind::ResolvedRecovery, "RESOLVED_CHO_RECOVERY"},
    {EventKind::ResolvedReest, "RESOLVED_REESTABLISHMENT"},
    {EventKind::PrepActive, "PREP_ACTIVE"},
    {EventKind::PrepRelease, "PREP_RELEASE"},
    {EventKind::PrepRequest, "PREP_REQUEST"},
    {EventKind::PrepLost, "PREP_LOST"},
    {EventKind::MeasReport, "MEAS_REPORT"},
    {EventKind::HoCommandLost, "HO_COMMAND_LOST"},
    {EventKind::ExecStart, "EXEC_START"},
    {EventKind::T310Start, "T310_START"},
    {EventKind::T310Stop, "T310_STOP"},
    {EventKind::CellSelection, "CELL_SELECTION"},
    {EventKind::Down, "DOWN"},
}};

template <typename Int>
Int parse_int(std::string_view s, std::string_view what) {
  Int v{};
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size())
    throw std::invalid_argument(fmt::format("event log: bad {} '{}'", what, s));
  return v;
}

CellId parse_cell(std::string_view s) { return s == "-" ? kNoCell : parse_int<int>(s, "cell"); }

std::string cell_str(CellId c) { return c == kNoCell ? "-" : std::to_string(c); }

}  // namespace

std::string_view to_string(EventKind k) {
  for (const auto& [kind, name] : kNames)
    if (kind == k) return name;
  throw std::invalid_argument("unknown EventKind value");
}

EventKind parse_event_kind(std::string_view s) {
  for (const auto& [kind, name] : kNames)
    if (name == s) return kind;
  throw std::invalid_argument(fmt::format("unknown event kind '{}'", s));
}

std::string format_event(const Event& e) {
  return fmt::format("{}\t{}\t{}\t{}\t{}\t{}", e.time.count(), e.ue_id, to_string(e.kind),
                     cell_str(e.serving), cell_str(e.target), e.detail.empty() ? "-" : e.detail);
}

Event parse_event(std::string_view line) {
  std::array<std::string_view, 6> f;
  std::size_t n = 0;
  while (n < f.size()) {
    const auto tab = line.find('\t');
    f[n++] = line.substr(0, tab);
    if (tab == std::string_view::npos) break;
    line.remove_prefix(tab + 1);
  }
  if (n != f.size() || line.find('\t') != std::string_view::npos)
    throw std::invalid_argument("event log: expected 6 tab-separated fields");
  Event e;
  e.time = SimTime{parse_int<std::int64_t>(f[0], "time")};
  e.ue_id = parse_int<int>(f[1], "ue id");
  e.kind = parse_event_kind(f[2]);
  e.serving = parse_cell(f[3]);
  e.target = parse_cell(f[4]);
  if (f[5] != "-") e.detail = std::string(f[5]);
  return e;
}

void write_event_log(std::ostream& out, const std::vector<Event>& events) {
  out << "time_ms\tue_id\tevent\tserving\ttarget\tdetail\n";
  for (const auto& e : events) out << format_event(e) << '\n';
}

std::vector<Event> read_event_log(std::istream& in) {
  std::vector<Event> out;
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (header) {
      header = false;
      if (line.rfind("time_ms", 0) == 0) continue;
    }
    if (line.empty()) continue;
    out.push_back(parse_event(line));
  }
  return out;
}

}  // namespace cho
