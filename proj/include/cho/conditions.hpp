#pragma once

#include <array>
#include <memory>
#include <optional>
#include <variant>

#include "cho/config.hpp"
#include "cho/types.hpp"

namespace cho::cond {

// Leaf conditions. All comparisons are strict: ties never trigger entry.

struct A3 {
  double offset_db = 0.0;
  double hys_db = 0.0;
};

struct A5 {
  double thresh1_dbm = 0.0;
  double thresh2_dbm = 0.0;
  double hys_db = 0.0;
};

/// Inclusive access window [t1, t2].
struct TimeWindow {
  SimTime t1{0};
  SimTime t2{0};
};

struct Location {
  double thresh_serv_m = 0.0;
  double thresh_cand_m = 0.0;
};

/// Channel-occupancy entry condition M_c - Hys > Threshold.
struct ChannelOccupancy {
  double threshold = 0.0;
  double hys = 0.0;
};

struct ExecCondition;

struct Conjunction {
  std::shared_ptr<const ExecCondition> left;
  std::shared_ptr<const ExecCondition> right;
};

using ConditionKind = std::variant<A3, A5, TimeWindow, Location, ChannelOccupancy, Conjunction>;

/// An execution (or preparation) condition. Time-to-trigger applies to the
/// condition as a whole; TTT values on the operands of a conjunction are
/// ignored.
struct ExecCondition {
  ConditionKind kind;
  SimTime ttt{0};
};

ExecCondition make_and(ExecCondition left, ExecCondition right, SimTime ttt = SimTime{0});

struct ConditionState {
  /// Hysteresis state of each leaf (index 0 for a single leaf).
  std::array<bool, 2> leaf_entered{false, false};
  bool entered = false;
  std::optional<SimTime> hold_since;
  bool fulfilled = false;
};

struct MeasInput {
  double m_serv = 0.0;      // dBm
  double m_cand = 0.0;      // dBm
  SimTime now{0};
  double d_serv_ref = 0.0;  // m
  double d_cand_ref = 0.0;  // m
  double m_c = 0.0;         // occupancy metric of the candidate
};

/// Returns the new entered state: enter when m_cand - hys > m_serv + offset,
/// leave when m_cand + hys < m_serv + offset, otherwise hold.
bool eval_a3(const MeasInput& in, double offset_db, double hys_db, bool entered);

/// Enter when serving is below thresh1 and candidate above thresh2 (both with
/// hysteresis); leave when either clause is violated beyond the hysteresis.
bool eval_a5(const MeasInput& in, double thresh1_dbm, double thresh2_dbm, double hys_db,
             bool entered);

bool eval_time_window(SimTime now, SimTime t1, SimTime t2);

bool eval_location(double d_serv_ref, double d_cand_ref, double thresh_serv, double thresh_cand);

/// Entry predicate only.
bool eval_channel_occupancy(double m_c, double hys, double threshold);

/// Advances one condition by one evaluation occasion at `in.now`.
ConditionState eval_condition(const ExecCondition& cond, ConditionState state, const MeasInput& in);

/// Rejects conjunctions with more than two leaves and malformed leaf
/// parameters. Throws ConfigError.
void validate_condition(const ExecCondition& cond);

/// Builds the run's execution condition from its declarative form. A3 leaves
/// use `a3_offset_db`.
ExecCondition build_condition(const ConditionSpec& spec, double a3_offset_db);

}  // namespace cho::cond
