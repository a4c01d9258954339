#include "cho/kpi.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace cho::kpi {

KpiCounters ingest_event(KpiCounters c, const Event& e, const KpiConfig& cfg) {
  switch (e.kind) {
    case EventKind::HoSuccess: ++c.ho_success; break;
    case EventKind::PingPong: ++c.ping_pong; break;
    case EventKind::RlfSource:
      ++c.all_mobility_fail;
      ++c.rlf_source;
      break;
    case EventKind::HofTarget:
      ++c.all_mobility_fail;
      ++c.hof_target;
      break;
    case EventKind::ResolvedRecovery:
      ++c.failures_resolved_by_recovery;
      if (cfg.count_recovery_as_ho_success) ++c.ho_success;
      break;
    case EventKind::ResolvedReest: ++c.failures_resolved_by_reest; break;
    case EventKind::PrepActive:
    case EventKind::PrepRelease:
    case EventKind::PrepRequest:
    case EventKind::PrepLost:
    case EventKind::MeasReport:
    case EventKind::HoCommandLost:
    case EventKind::ExecStart:
    case EventKind::T310Start:
    case EventKind::T310Stop:
    case EventKind::CellSelection:
    case EventKind::Down: break;
    default: throw std::invalid_argument("ingest_event: event kind outside the log schema");
  }
  return c;
}

void KpiAggregator::ingest(const Event& e) {
  counters_ = ingest_event(counters_, e, cfg_);
  if (e.kind == EventKind::PrepActive) {
    const auto [it, inserted] = open_prep_.try_emplace({e.ue_id, e.target}, e.time);
    if (!inserted) throw std::invalid_argument("ingest: candidate activated twice");
  } else if (e.kind == EventKind::PrepRelease) {
    // Releases of never-activated (pending) candidates carry no reserved time.
    if (auto it = open_prep_.find({e.ue_id, e.target}); it != open_prep_.end()) {
      counters_.prepared_cell_ms += (e.time - it->second).count();
      open_prep_.erase(it);
    }
  }
}

void KpiAggregator::finish(SimTime end) {
  for (const auto& [key, since] : open_prep_) counters_.prepared_cell_ms += (end - since).count();
  open_prep_.clear();
}

double recovery_rate(const KpiCounters& c) {
  if (c.all_mobility_fail == 0) return std::numeric_limits<double>::quiet_NaN();
  return static_cast<double>(c.failures_resolved_by_recovery) /
         static_cast<double>(c.all_mobility_fail);
}

KpiReport normalize(const KpiCounters& c, int n_ues, double duration_s, RunKey key) {
  if (n_ues <= 0) throw std::domain_error("normalize: n_ues must be > 0");
  if (!(duration_s > 0)) throw std::domain_error("normalize: duration must be > 0");
  const double ue_minutes = static_cast<double>(n_ues) * (duration_s / 60.0);
  KpiReport r;
  r.key = key;
  r.ho_succ_per_ue_min = static_cast<double>(c.ho_success) / ue_minutes;
  r.all_fail_per_ue_min = static_cast<double>(c.all_mobility_fail) / ue_minutes;
  r.pp_per_ue_min = static_cast<double>(c.ping_pong) / ue_minutes;
  r.cho_recovery_rate = recovery_rate(c);
  r.rlf_count = c.rlf_source;
  r.hof_count = c.hof_target;
  r.prepared_cell_seconds = c.prepared_cell_seconds();
  return r;
}

}  // namespace cho::kpi
