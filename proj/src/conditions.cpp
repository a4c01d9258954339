#include "cho/conditions.hpp"

#include <cmath>

namespace cho::cond {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

bool is_leaf(const ExecCondition& c) { return !std::holds_alternative<Conjunction>(c.kind); }

// Hysteresis-carrying update of a single leaf.
bool update_leaf(const ExecCondition& leaf, bool entered, const MeasInput& in) {
  return std::visit(
      overloaded{
          [&](const A3& c) { return eval_a3(in, c.offset_db, c.hys_db, entered); },
          [&](const A5& c) { return eval_a5(in, c.thresh1_dbm, c.thresh2_dbm, c.hys_db, entered); },
          [&](const TimeWindow& c) { return eval_time_window(in.now, c.t1, c.t2); },
          [&](const Location& c) {
            return eval_location(in.d_serv_ref, in.d_cand_ref, c.thresh_serv_m, c.thresh_cand_m);
          },
          [&](const ChannelOccupancy& c) {
            if (eval_channel_occupancy(in.m_c, c.hys, c.threshold)) return true;
            if (in.m_c + c.hys < c.threshold) return false;
            return entered;
          },
          [&](const Conjunction&) -> bool {
            throw InvariantViolation("update_leaf called on a conjunction");
          }},
      leaf.kind);
}

void validate_leaf(const ExecCondition& c) {
  std::visit(overloaded{
                 [](const A3& a) {
                   if (a.hys_db < 0) throw ConfigError("A3 hysteresis must be >= 0");
                 },
                 [](const A5& a) {
                   if (a.hys_db < 0) throw ConfigError("A5 hysteresis must be >= 0");
                 },
                 [](const TimeWindow& w) {
                   if (w.t1 > w.t2) throw ConfigError("time window needs t1 <= t2");
                 },
                 [](const Location& l) {
                   if (l.thresh_serv_m <= 0 || l.thresh_cand_m <= 0)
                     throw ConfigError("location thresholds must be > 0");
                 },
                 [](const ChannelOccupancy& o) {
                   if (o.hys < 0) throw ConfigError("occupancy hysteresis must be >= 0");
                 },
                 [](const Conjunction&) {}},
             c.kind);
}

ExecCondition build_leaf(const ConditionLeafSpec& s, double a3_offset_db) {
  switch (s.type) {
    case ConditionType::A3: return {A3{a3_offset_db, s.hys}, SimTime{0}};
    case ConditionType::A5: return {A5{s.a5_thresh1_dbm, s.a5_thresh2_dbm, s.hys}, SimTime{0}};
    case ConditionType::TimeWindow:
      return {TimeWindow{SimTime{std::llround(s.t1_s * 1000.0)},
                         SimTime{std::llround(s.t2_s * 1000.0)}},
              SimTime{0}};
    case ConditionType::Location: return {Location{s.thresh_serv_m, s.thresh_cand_m}, SimTime{0}};
    case ConditionType::ChannelOccupancy:
      return {ChannelOccupancy{s.occupancy_threshold, s.hys}, SimTime{0}};
    case ConditionType::And: break;
  }
  throw ConfigError("a conjunction cannot be used as a leaf");
}

}  // namespace

ExecCondition make_and(ExecCondition left, ExecCondition right, SimTime ttt) {
  return {Conjunction{std::make_shared<const ExecCondition>(std::move(left)),
                      std::make_shared<const ExecCondition>(std::move(right))},
          ttt};
}

bool eval_a3(const MeasInput& in, double offset_db, double hys_db, bool entered) {
  if (in.m_cand - hys_db > in.m_serv + offset_db) return true;
  if (in.m_cand + hys_db < in.m_serv + offset_db) return false;
  return entered;
}

bool eval_a5(const MeasInput& in, double thresh1_dbm, double thresh2_dbm, double hys_db,
             bool entered) {
  const bool serv_entry = in.m_serv + hys_db < thresh1_dbm;
  const bool cand_entry = in.m_cand - hys_db > thresh2_dbm;
  if (serv_entry && cand_entry) return true;
  const bool serv_leave = in.m_serv - hys_db > thresh1_dbm;
  const bool cand_leave = in.m_cand + hys_db < thresh2_dbm;
  if (serv_leave || cand_leave) return false;
  return entered;
}

bool eval_time_window(SimTime now, SimTime t1, SimTime t2) { return t1 <= now && now <= t2; }

bool eval_location(double d_serv_ref, double d_cand_ref, double thresh_serv, double thresh_cand) {
  return d_serv_ref > thresh_serv && d_cand_ref < thresh_cand;
}

bool eval_channel_occupancy(double m_c, double hys, double threshold) {
  return m_c - hys > threshold;
}

ConditionState eval_condition(const ExecCondition& cond, ConditionState state,
                              const MeasInput& in) {
  if (const auto* conj = std::get_if<Conjunction>(&cond.kind)) {
    state.leaf_entered[0] = update_leaf(*conj->left, state.leaf_entered[0], in);
    state.leaf_entered[1] = update_leaf(*conj->right, state.leaf_entered[1], in);
    state.entered = state.leaf_entered[0] && state.leaf_entered[1];
  } else {
    state.leaf_entered[0] = update_leaf(cond, state.leaf_entered[0], in);
    state.entered = state.leaf_entered[0];
  }

  if (!state.entered) {
    state.hold_since.reset();
    state.fulfilled = false;
    return state;
  }
  if (!state.hold_since) state.hold_since = in.now;
  state.fulfilled = in.now - *state.hold_since >= cond.ttt;
  return state;
}

void validate_condition(const ExecCondition& cond) {
  if (cond.ttt < SimTime{0}) throw ConfigError("time-to-trigger must be >= 0");
  if (const auto* conj = std::get_if<Conjunction>(&cond.kind)) {
    if (!conj->left || !conj->right) throw ConfigError("conjunction needs two operands");
    if (!is_leaf(*conj->left) || !is_leaf(*conj->right))
      throw ConfigError("at most two execution conditions may be combined");
    validate_leaf(*conj->left);
    validate_leaf(*conj->right);
    return;
  }
  validate_leaf(cond);
}

ExecCondition build_condition(const ConditionSpec& spec, double a3_offset_db) {
  ExecCondition out;
  if (spec.type == ConditionType::And) {
    out = make_and(build_leaf(spec.left, a3_offset_db), build_leaf(spec.right, a3_offset_db));
  } else {
    out = build_leaf(spec.leaf, a3_offset_db);
  }
  out.ttt = SimTime{spec.ttt_ms};
  validate_condition(out);
  return out;
}

}  // namespace cho::cond
