#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "cho/events.hpp"
#include "cho/kpi.hpp"

using namespace cho;
using namespace cho::kpi;

namespace {
Event ev(int t, EventKind k, int ue = 0, CellId serving = 0, CellId target = kNoCell) {
  return Event{SimTime{t}, ue, k, serving, target, {}};
}
}  // namespace

TEST(Ingest, CountsEachKpiKind) {
  KpiCounters c;
  c = ingest_event(c, ev(0, EventKind::HoSuccess));
  c = ingest_event(c, ev(1, EventKind::HoSuccess));
  c = ingest_event(c, ev(2, EventKind::PingPong));
  c = ingest_event(c, ev(3, EventKind::RlfSource));
  c = ingest_event(c, ev(4, EventKind::HofTarget));
  c = ingest_event(c, ev(5, EventKind::ResolvedRecovery));
  c = ingest_event(c, ev(6, EventKind::ResolvedReest));
  EXPECT_EQ(c.ho_success, 2u);
  EXPECT_EQ(c.ping_pong, 1u);
  EXPECT_EQ(c.rlf_source, 1u);
  EXPECT_EQ(c.hof_target, 1u);
  EXPECT_EQ(c.all_mobility_fail, 2u);
  EXPECT_EQ(c.failures_resolved_by_recovery, 1u);
  EXPECT_EQ(c.failures_resolved_by_reest, 1u);
}

TEST(Ingest, TraceKindsLeaveCountersAlone) {
  const KpiCounters zero;
  for (auto k : {EventKind::PrepActive, EventKind::PrepRelease, EventKind::PrepRequest,
                 EventKind::PrepLost, EventKind::MeasReport, EventKind::HoCommandLost,
                 EventKind::ExecStart, EventKind::T310Start, EventKind::T310Stop,
                 EventKind::CellSelection, EventKind::Down})
    EXPECT_EQ(ingest_event(zero, ev(0, k)), zero) << to_string(k);
}

TEST(Ingest, RecoveryAsSuccessIsOptional) {
  KpiConfig cfg;
  cfg.count_recovery_as_ho_success = true;
  const auto c = ingest_event({}, ev(0, EventKind::ResolvedRecovery), cfg);
  EXPECT_EQ(c.ho_success, 1u);
  EXPECT_EQ(ingest_event({}, ev(0, EventKind::ResolvedRecovery)).ho_success, 0u);
}

TEST(Ingest, RejectsKindOutsideSchema) {
  Event e = ev(0, EventKind::HoSuccess);
  e.kind = static_cast<EventKind>(99);
  EXPECT_THROW(ingest_event({}, e), std::invalid_argument);
}

TEST(Aggregator, PreparedCellTime) {
  KpiAggregator agg;
  agg.ingest(ev(100, EventKind::PrepActive, 0, 0, 4));
  agg.ingest(ev(300, EventKind::PrepActive, 0, 0, 5));
  agg.ingest(ev(1100, EventKind::PrepRelease, 0, 0, 4));
  agg.ingest(ev(1200, EventKind::PrepRelease, 1, 0, 4));  // never activated for UE 1
  agg.finish(SimTime{2300});
  EXPECT_EQ(agg.counters().prepared_cell_ms, 1000 + 2000);
  EXPECT_DOUBLE_EQ(agg.counters().prepared_cell_seconds(), 3.0);
}

TEST(Aggregator, DoubleActivationThrows) {
  KpiAggregator agg;
  agg.ingest(ev(0, EventKind::PrepActive, 0, 0, 4));
  EXPECT_THROW(agg.ingest(ev(10, EventKind::PrepActive, 0, 0, 4)), std::invalid_argument);
}

TEST(Normalize, HandExample) {
  KpiCounters c;
  c.ho_success = 2100;
  const auto r = normalize(c, 420, 300.0);
  // 420 UEs * 5 min = 2100 UE-minutes.
  EXPECT_EQ(r.ho_succ_per_ue_min, 1.0);
  EXPECT_EQ(r.all_fail_per_ue_min, 0.0);
  EXPECT_EQ(r.pp_per_ue_min, 0.0);
  EXPECT_TRUE(std::isnan(r.cho_recovery_rate));
}

TEST(Normalize, DoublingDurationHalvesRates) {
  KpiCounters c;
  c.ho_success = 77;
  c.ping_pong = 13;
  c.rlf_source = 9;
  c.all_mobility_fail = 9;
  const auto a = normalize(c, 100, 60.0);
  const auto b = normalize(c, 100, 120.0);
  EXPECT_DOUBLE_EQ(b.ho_succ_per_ue_min, a.ho_succ_per_ue_min / 2);
  EXPECT_DOUBLE_EQ(b.pp_per_ue_min, a.pp_per_ue_min / 2);
  EXPECT_DOUBLE_EQ(b.all_fail_per_ue_min, a.all_fail_per_ue_min / 2);
  EXPECT_EQ(a.rlf_count, 9u);
}

TEST(Normalize, RejectsEmptyPopulationOrDuration) {
  EXPECT_THROW(normalize({}, 0, 60.0), std::domain_error);
  EXPECT_THROW(normalize({}, 10, 0.0), std::domain_error);
}

TEST(RecoveryRate, Values) {
  KpiCounters c;
  EXPECT_TRUE(std::isnan(recovery_rate(c)));
  c.all_mobility_fail = 5;
  EXPECT_EQ(recovery_rate(c), 0.0);
  c.failures_resolved_by_recovery = 4;
  EXPECT_DOUBLE_EQ(recovery_rate(c), 0.8);
}

TEST(EventLog, FormatParseRoundTrip) {
  const std::vector<Event> events{
      {SimTime{0}, 0, EventKind::PrepActive, 3, 7, {}},
      {SimTime{40}, 12, EventKind::ExecStart, 3, 7, "recovery"},
      {SimTime{1230}, 5, EventKind::Down, kNoCell, kNoCell, {}},
      {SimTime{299990}, 419, EventKind::HoSuccess, 7, 7, {}},
  };
  for (const auto& e : events) EXPECT_EQ(parse_event(format_event(e)), e);
  std::stringstream ss;
  write_event_log(ss, events);
  EXPECT_EQ(read_event_log(ss), events);
}

TEST(EventLog, EveryKindNameRoundTrips) {
  for (int k = 0; k <= static_cast<int>(EventKind::Down); ++k) {
    const auto kind = static_cast<EventKind>(k);
    EXPECT_EQ(parse_event_kind(to_string(kind)), kind);
  }
}

TEST(EventLog, MalformedLinesThrow) {
  EXPECT_THROW(parse_event_kind("TELEPORT"), std::invalid_argument);
  EXPECT_THROW(parse_event("10\t0\tTELEPORT\t1\t2\t-"), std::invalid_argument);
  EXPECT_THROW(parse_event("10\t0\tHO_SUCCESS"), std::invalid_argument);
  EXPECT_THROW(parse_event("ten\t0\tHO_SUCCESS\t1\t2\t-"), std::invalid_argument);
}
