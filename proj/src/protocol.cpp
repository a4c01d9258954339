#include "cho/protocol.hpp"

#include <fmt/format.h>

#include <algorithm>

namespace cho::core {

std::string_view to_string(Phase p) {
  switch (p) {
    case Phase::Connected: return "Connected";
    case Phase::PreparingHO: return "PreparingHO";
    case Phase::ExecutingHO: return "ExecutingHO";
    case Phase::Reestablishing: return "Reestablishing";
    case Phase::Down: return "Down";
  }
  return "?";
}

ProtocolParams ProtocolParams::from_config(const Config& cfg) {
  const auto& s = cfg.scenario;
  const auto& pc = cfg.protocol;
  ProtocolParams p;
  p.mode = s.mode;
  p.o_prep_db = s.o_prep_db;
  p.o_exec_db = s.o_exec_db;
  p.max_prepared = s.max_prepared;
  p.pp_window = SimTime{s.pp_window_ms};
  p.qout_db = s.sinr_outage_db;
  p.qin_db = s.sinr_outage_db + pc.qin_offset_db;
  p.n310 = pc.n310;
  p.n311 = pc.n311;
  p.t310 = SimTime{pc.t310_ms};
  p.t304 = SimTime{pc.t304_ms};
  p.report_delay = SimTime{pc.report_delay_ms};
  p.prep_delay = SimTime{pc.prep_delay_ms};
  p.cmd_delay = SimTime{pc.cmd_delay_ms};
  p.report_interval = SimTime{pc.report_interval_ms};
  p.ra_interval = SimTime{pc.ra_interval_ms};
  p.cell_selection_delay = SimTime{pc.cell_selection_delay_ms};
  p.recovery_fast_delay = SimTime{pc.recovery_fast_delay_ms};
  p.reestablishment_delay = SimTime{pc.reestablishment_delay_ms};
  p.ra_sinr_threshold_db = pc.ra_sinr_threshold_db;
  p.min_rx_level_dbm = pc.min_rx_level_dbm;
  p.release_hys_db = pc.release_hys_db;
  p.prep_needs_link = pc.prep_needs_link;
  p.occupancy_metric = pc.occupancy_metric;
  p.exec_condition = cond::build_condition(pc.exec, s.o_exec_db);
  p.report_trigger = {cond::A3{s.o_exec_db, 0.0}, SimTime{pc.exec.ttt_ms}};
  p.prep_trigger = {cond::A3{-s.o_prep_db, 0.0}, SimTime{pc.prep_ttt_ms}};
  return p;
}

UeProtocolState make_ue(int ue_id, CellId serving, int n_cells) {
  UeProtocolState ue;
  ue.ue_id = ue_id;
  ue.serving = serving;
  ue.trigger_states.resize(static_cast<std::size_t>(n_cells));
  return ue;
}

namespace {

double sinr_of(const StepInput& in, CellId c) { return in.sinr_db[static_cast<std::size_t>(c)]; }
double l3_of(const StepInput& in, CellId c) {
  return in.meas[static_cast<std::size_t>(c)].l3_rsrp;
}

void emit(EventSink& out, const UeProtocolState& ue, SimTime now, EventKind kind, CellId target,
          std::string detail = {}) {
  out.push_back(Event{now, ue.ue_id, kind, ue.serving, target, std::move(detail)});
}

void reset_triggers(UeProtocolState& ue) {
  std::fill(ue.trigger_states.begin(), ue.trigger_states.end(), cond::ConditionState{});
}

void release_all(UeProtocolState& ue, SimTime now, std::string_view why, EventSink& out) {
  for (const auto& c : ue.prepared) emit(out, ue, now, EventKind::PrepRelease, c.cell_id, std::string(why));
  ue.prepared.clear();
}

void release_pending(UeProtocolState& ue, SimTime now, std::string_view why, EventSink& out) {
  std::erase_if(ue.prepared, [&](const PreparedCandidate& c) {
    if (c.active) return false;
    emit(out, ue, now, EventKind::PrepRelease, c.cell_id, std::string(why));
    return true;
  });
}

const PreparedCandidate* find_active(const UeProtocolState& ue, CellId cell) {
  for (const auto& c : ue.prepared)
    if (c.cell_id == cell && c.active) return &c;
  return nullptr;
}

void stop_t310(UeProtocolState& ue, SimTime now, std::string_view why, EventSink& out) {
  if (ue.t310.running) emit(out, ue, now, EventKind::T310Stop, kNoCell, std::string(why));
  ue.t310.stop();
  ue.n310_count = 0;
  ue.n311_count = 0;
}

void start_execution(UeProtocolState& ue, CellId target, bool recovery, const StepInput& in,
                     const ProtocolParams& p, EventSink& out, std::string_view detail) {
  stop_t310(ue, in.now, "execution", out);
  ue.phase = Phase::ExecutingHO;
  ue.exec_target = target;
  ue.exec_is_recovery = recovery;
  ue.pending_target = kNoCell;
  ue.t304.start();
  ue.next_ra_attempt = in.now + (recovery ? p.recovery_fast_delay : SimTime{0}) + p.ra_interval;
  emit(out, ue, in.now, EventKind::ExecStart, target, std::string(detail));
}

void declare_failure(UeProtocolState& ue, FailureKind kind, const StepInput& in,
                     const ProtocolParams& p, EventSink& out) {
  const CellId target = kind == FailureKind::HofTarget ? ue.exec_target : kNoCell;
  emit(out, ue, in.now, kind == FailureKind::RlfSource ? EventKind::RlfSource : EventKind::HofTarget,
       target);
  stop_t310(ue, in.now, "failure", out);
  ue.t304.stop();
  ue.phase = Phase::Reestablishing;
  ue.exec_target = kNoCell;
  ue.exec_is_recovery = false;
  ue.pending_target = kNoCell;
  ue.reest_target = kNoCell;
  ue.selection_due = in.now + p.cell_selection_delay;
  ue.open_failure = FailureRecord{kind, in.now, std::nullopt};
  reset_triggers(ue);
  // Stored configurations survive for recovery; requests still in flight do not.
  release_pending(ue, in.now, "failure", out);
}

void close_failure(UeProtocolState& ue, Resolution how) {
  if (!ue.open_failure) throw InvariantViolation("closing a failure that is not open");
  if (ue.open_failure->resolved_by) throw InvariantViolation("failure resolved twice");
  ue.open_failure->resolved_by = how;
  ue.failure_history.push_back(*ue.open_failure);
  ue.open_failure.reset();
}

void reconnect(UeProtocolState& ue, CellId cell) {
  ue.serving = cell;
  ue.phase = Phase::Connected;
  ue.exec_target = kNoCell;
  ue.exec_is_recovery = false;
  ue.reest_target = kNoCell;
  ue.t304.stop();
  ue.n310_count = 0;
  ue.n311_count = 0;
  reset_triggers(ue);
}

// Cell with the highest value of `key` among cells other than the serving one
// whose trigger is fulfilled; lowest id on ties.
template <typename Pred>
std::optional<CellId> strongest_where(const StepInput& in, Pred pred) {
  std::optional<CellId> best;
  for (std::size_t c = 0; c < in.meas.size(); ++c) {
    const auto id = static_cast<CellId>(c);
    if (!pred(id)) continue;
    if (!best || l3_of(in, id) > l3_of(in, *best)) best = id;
  }
  return best;
}

}  // namespace

bool detect_ping_pong(const UeProtocolState& ue, CellId new_serving, SimTime now, SimTime window) {
  return ue.last_ho_completed_at.has_value() && new_serving == ue.last_ho_source &&
         now - *ue.last_ho_completed_at <= window;
}

void rlf_monitor(UeProtocolState& ue, const StepInput& in, const ProtocolParams& p,
                 EventSink& out) {
  const double sinr = sinr_of(in, ue.serving);
  if (!ue.t310.running) {
    ue.n310_count = sinr < p.qout_db ? ue.n310_count + 1 : 0;
    if (ue.n310_count >= p.n310) {
      ue.t310.start();
      ue.n310_count = 0;
      ue.n311_count = 0;
      emit(out, ue, in.now, EventKind::T310Start, kNoCell);
    }
    return;
  }

  ue.t310.elapsed += in.dt;
  ue.n311_count = sinr > p.qin_db ? ue.n311_count + 1 : 0;
  if (ue.n311_count >= p.n311) {
    stop_t310(ue, in.now, "in_sync", out);
    return;
  }
  if (ue.t310.elapsed >= p.t310) declare_failure(ue, FailureKind::RlfSource, in, p, out);
}

void deliver_candidates(UeProtocolState& ue, const StepInput& in, const ProtocolParams& p,
                        EventSink& out) {
  bool lost_any = false;
  std::erase_if(ue.prepared, [&](PreparedCandidate& c) {
    if (c.active || in.now < c.active_at) return false;
    if (!p.prep_needs_link || sinr_of(in, ue.serving) >= p.qout_db) {
      c.active = true;
      emit(out, ue, in.now, EventKind::PrepActive, c.cell_id);
      return false;
    }
    emit(out, ue, in.now, EventKind::PrepLost, c.cell_id);
    emit(out, ue, in.now, EventKind::PrepRelease, c.cell_id, "lost");
    lost_any = true;
    return true;
  });
  if (lost_any) ue.next_request_allowed = in.now + p.report_interval;
}

void check_preparation(UeProtocolState& ue, const StepInput& in, const ProtocolParams& p,
                       EventSink& out) {
  const double serv = l3_of(in, ue.serving);

  std::erase_if(ue.prepared, [&](const PreparedCandidate& c) {
    if (l3_of(in, c.cell_id) >= serv - p.o_prep_db - p.release_hys_db) return false;
    emit(out, ue, in.now, EventKind::PrepRelease, c.cell_id, "weak");
    return true;
  });

  std::vector<CellId> qualified;
  for (std::size_t c = 0; c < in.meas.size(); ++c) {
    const auto id = static_cast<CellId>(c);
    auto& st = ue.trigger_states[c];
    if (id == ue.serving) {
      st = {};
      continue;
    }
    cond::MeasInput mi{serv, l3_of(in, id), in.now, 0.0, 0.0, 0.0};
    st = cond::eval_condition(p.prep_trigger, st, mi);
    const bool known = std::any_of(ue.prepared.begin(), ue.prepared.end(),
                                   [&](const auto& pc) { return pc.cell_id == id; });
    if (st.fulfilled && !known) qualified.push_back(id);
  }
  if (in.now < ue.next_request_allowed || qualified.empty()) return;

  std::stable_sort(qualified.begin(), qualified.end(),
                   [&](CellId a, CellId b) { return l3_of(in, a) > l3_of(in, b); });

  const auto cap = static_cast<std::size_t>(std::min(p.max_prepared, 8));
  for (CellId id : qualified) {
    if (ue.prepared.size() >= cap) {
      auto weakest = std::min_element(ue.prepared.begin(), ue.prepared.end(),
                                      [&](const auto& a, const auto& b) {
                                        return l3_of(in, a.cell_id) < l3_of(in, b.cell_id);
                                      });
      if (l3_of(in, id) <= l3_of(in, weakest->cell_id) + p.release_hys_db) break;
      emit(out, ue, in.now, EventKind::PrepRelease, weakest->cell_id, "evicted");
      ue.prepared.erase(weakest);
    }
    PreparedCandidate pc;
    pc.cell_id = id;
    pc.exec_condition = p.exec_condition;
    pc.prepared_at = in.now;
    pc.active_at = in.now + p.signalling_delay();
    ue.prepared.push_back(std::move(pc));
    emit(out, ue, in.now, EventKind::PrepRequest, id);
  }
}

std::optional<CellId> check_execution(UeProtocolState& ue, const StepInput& in,
                                      const ProtocolParams& p) {
  std::optional<CellId> best;
  const double serv = l3_of(in, ue.serving);
  for (auto& c : ue.prepared) {
    if (!c.active) continue;
    const cond::MeasInput mi{serv,
                             l3_of(in, c.cell_id),
                             in.now,
                             in.ref_distance_m[static_cast<std::size_t>(ue.serving)],
                             in.ref_distance_m[static_cast<std::size_t>(c.cell_id)],
                             p.occupancy_metric};
    c.condition_state = cond::eval_condition(c.exec_condition, c.condition_state, mi);
    if (c.condition_state.fulfilled && (!best || l3_of(in, c.cell_id) > l3_of(in, *best)))
      best = c.cell_id;
  }
  return best;
}

void baseline_ho(UeProtocolState& ue, const StepInput& in, const ProtocolParams& p,
                 EventSink& out) {
  if (ue.phase == Phase::PreparingHO) {
    if (in.now < ue.command_due) return;
    if (sinr_of(in, ue.serving) >= p.qout_db) {
      start_execution(ue, ue.pending_target, false, in, p, out, "bho");
    } else {
      emit(out, ue, in.now, EventKind::HoCommandLost, ue.pending_target);
      ue.pending_target = kNoCell;
      ue.phase = Phase::Connected;
      ue.next_request_allowed = in.now + p.report_interval;
    }
    return;
  }

  if (ue.phase != Phase::Connected || !in.measurement_tick) return;
  const double serv = l3_of(in, ue.serving);
  for (std::size_t c = 0; c < in.meas.size(); ++c) {
    auto& st = ue.trigger_states[c];
    if (static_cast<CellId>(c) == ue.serving) {
      st = {};
      continue;
    }
    cond::MeasInput mi{serv, in.meas[c].l3_rsrp, in.now, 0.0, 0.0, 0.0};
    st = cond::eval_condition(p.report_trigger, st, mi);
  }
  if (in.now < ue.next_request_allowed) return;

  const auto target = strongest_where(in, [&](CellId id) {
    return id != ue.serving && ue.trigger_states[static_cast<std::size_t>(id)].fulfilled;
  });
  if (!target) return;
  emit(out, ue, in.now, EventKind::MeasReport, *target);
  ue.phase = Phase::PreparingHO;
  ue.pending_target = *target;
  ue.command_due = in.now + p.signalling_delay();
}

RaOutcome random_access(UeProtocolState& ue, const StepInput& in, const ProtocolParams& p,
                        EventSink& out) {
  ue.t304.elapsed += in.dt;
  bool success = false;
  if (in.now >= ue.next_ra_attempt) {
    success = sinr_of(in, ue.exec_target) >= p.ra_sinr_threshold_db;
    if (!success) ue.next_ra_attempt += p.ra_interval;
  }

  if (success) {
    const CellId source = ue.serving;
    const CellId target = ue.exec_target;
    const bool recovery = ue.exec_is_recovery;
    release_all(ue, in.now, recovery ? "recovered" : "ho_complete", out);
    reconnect(ue, target);
    if (recovery) {
      close_failure(ue, Resolution::ChoRecovery);
      out.push_back(Event{in.now, ue.ue_id, EventKind::ResolvedRecovery, target, target, {}});
      ue.last_ho_completed_at.reset();
      ue.last_ho_source = kNoCell;
    } else {
      out.push_back(Event{in.now, ue.ue_id, EventKind::HoSuccess, source, target, {}});
      if (detect_ping_pong(ue, target, in.now, p.pp_window))
        out.push_back(Event{in.now, ue.ue_id, EventKind::PingPong, source, target, {}});
      ue.last_ho_source = source;
      ue.last_ho_completed_at = in.now;
    }
    return RaOutcome::Success;
  }

  if (ue.t304.elapsed < p.t304) return RaOutcome::Progress;

  if (ue.exec_is_recovery) {
    // The stored configuration did not work out; fall back to cell selection
    // and reestablishment under the same open failure.
    release_all(ue, in.now, "recovery_failed", out);
    ue.t304.stop();
    ue.phase = Phase::Reestablishing;
    ue.exec_target = kNoCell;
    ue.exec_is_recovery = false;
    ue.selection_due = in.now + p.cell_selection_delay;
  } else {
    declare_failure(ue, FailureKind::HofTarget, in, p, out);
  }
  return RaOutcome::Failure;
}

void recover(UeProtocolState& ue, const StepInput& in, const ProtocolParams& p, EventSink& out) {
  if (ue.reest_target != kNoCell) {
    if (in.now < ue.reest_due) return;
    const CellId cell = ue.reest_target;
    if (sinr_of(in, cell) >= p.qout_db) {
      reconnect(ue, cell);
      close_failure(ue, Resolution::Reestablishment);
      out.push_back(Event{in.now, ue.ue_id, EventKind::ResolvedReest, cell, cell, {}});
      ue.last_ho_completed_at.reset();
      ue.last_ho_source = kNoCell;
    } else {
      ue.reest_target = kNoCell;
      ue.phase = Phase::Reestablishing;
      ue.selection_due = in.now + p.cell_selection_delay;
    }
    return;
  }

  if (in.now < ue.selection_due) return;

  std::optional<CellId> best;
  for (std::size_t c = 0; c < in.meas.size(); ++c) {
    if (!best || in.meas[c].l1_cell_rsrp > in.meas[static_cast<std::size_t>(*best)].l1_cell_rsrp)
      best = static_cast<CellId>(c);
  }
  if (!best || in.meas[static_cast<std::size_t>(*best)].l1_cell_rsrp < p.min_rx_level_dbm) {
    if (ue.phase != Phase::Down) emit(out, ue, in.now, EventKind::Down, kNoCell);
    ue.phase = Phase::Down;
    return;
  }

  const bool prepared = find_active(ue, *best) != nullptr;
  emit(out, ue, in.now, EventKind::CellSelection, *best, prepared ? "prepared" : "not_prepared");
  if (prepared) {
    start_execution(ue, *best, true, in, p, out, "recovery");
    return;
  }
  release_all(ue, in.now, "reestablishment", out);
  ue.phase = Phase::Reestablishing;
  ue.reest_target = *best;
  ue.reest_due = in.now + p.reestablishment_delay;
}

void step_ue(UeProtocolState& ue, const StepInput& in, const ProtocolParams& p, EventSink& out) {
  switch (ue.phase) {
    case Phase::Connected:
    case Phase::PreparingHO:
      rlf_monitor(ue, in, p, out);
      if (ue.phase == Phase::Reestablishing) return;
      if (p.mode == HoMode::CHO) {
        deliver_candidates(ue, in, p, out);
        if (!in.measurement_tick) return;
        check_preparation(ue, in, p, out);
        if (auto target = check_execution(ue, in, p))
          start_execution(ue, *target, false, in, p, out, "cho");
      } else {
        baseline_ho(ue, in, p, out);
      }
      return;
    case Phase::ExecutingHO: random_access(ue, in, p, out); return;
    case Phase::Reestablishing:
    case Phase::Down: recover(ue, in, p, out); return;
  }
}

void check_invariants(const UeProtocolState& ue, const ProtocolParams& p) {
  auto fail = [&](std::string_view what) {
    throw InvariantViolation(fmt::format("ue {}: {} (phase {})", ue.ue_id, what, to_string(ue.phase)));
  };
  if (ue.prepared.size() > static_cast<std::size_t>(std::min(p.max_prepared, 8)))
    fail("more prepared candidates than allowed");
  if (p.mode == HoMode::BHO && !ue.prepared.empty()) fail("BHO UE holds CHO candidates");
  if (ue.t310.running && ue.t304.running) fail("T310 and T304 running together");
  if (ue.t304.running != (ue.phase == Phase::ExecutingHO)) fail("T304 out of step with ExecutingHO");
  if (ue.t310.running && ue.phase != Phase::Connected && ue.phase != Phase::PreparingHO)
    fail("T310 running outside the connected phases");
  if ((ue.exec_target != kNoCell) != (ue.phase == Phase::ExecutingHO))
    fail("execution target without ExecutingHO");
  for (std::size_t i = 0; i < ue.prepared.size(); ++i) {
    if (ue.prepared[i].cell_id == ue.serving) fail("serving cell listed as candidate");
    for (std::size_t j = i + 1; j < ue.prepared.size(); ++j)
      if (ue.prepared[i].cell_id == ue.prepared[j].cell_id) fail("duplicate candidate");
  }
  const bool failing = ue.phase == Phase::Reestablishing || ue.phase == Phase::Down ||
                       (ue.phase == Phase::ExecutingHO && ue.exec_is_recovery);
  if (failing != ue.open_failure.has_value()) fail("open failure out of step with phase");
}

}  // namespace cho::core
