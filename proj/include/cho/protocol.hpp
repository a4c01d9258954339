#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "cho/conditions.hpp"
#include "cho/config.hpp"
#include "cho/events.hpp"
#include "cho/measure.hpp"
#include "cho/types.hpp"

namespace cho::core {

enum class Phase { Connected, PreparingHO, ExecutingHO, Reestablishing, Down };

std::string_view to_string(Phase p);

enum class FailureKind { RlfSource, HofTarget };
enum class Resolution { ChoRecovery, Reestablishment };

struct Timer {
  bool running = false;
  SimTime elapsed{0};

  void start() {
    running = true;
    elapsed = SimTime{0};
  }
  void stop() {
    running = false;
    elapsed = SimTime{0};
  }
};

/// A candidate target cell. Until `active` the configuration is still in
/// flight (preparation plus CHO command delivery) and cannot be executed.
struct PreparedCandidate {
  CellId cell_id = kNoCell;
  cond::ExecCondition exec_condition;
  cond::ConditionState condition_state;
  SimTime prepared_at{0};
  SimTime active_at{0};
  bool active = false;
};

struct FailureRecord {
  FailureKind kind = FailureKind::RlfSource;
  SimTime at{0};
  std::optional<Resolution> resolved_by;
};

/// Run-level protocol parameters, resolved once from the configuration.
struct ProtocolParams {
  HoMode mode = HoMode::CHO;
  double o_prep_db = 3.0;
  double o_exec_db = 3.0;
  int max_prepared = 1;
  SimTime pp_window{1000};

  double qout_db = -8.0;
  double qin_db = -6.0;
  int n310 = 5;
  int n311 = 2;
  SimTime t310{1000};
  SimTime t304{500};

  SimTime report_delay{10};
  SimTime prep_delay{50};
  SimTime cmd_delay{10};
  SimTime report_interval{240};
  SimTime ra_interval{20};
  SimTime cell_selection_delay{50};
  SimTime recovery_fast_delay{80};
  SimTime reestablishment_delay{200};

  double ra_sinr_threshold_db = -8.0;
  double min_rx_level_dbm = -110.0;
  double release_hys_db = 2.0;
  bool prep_needs_link = false;
  double occupancy_metric = 1.0;

  /// CHO execution condition attached to each prepared candidate.
  cond::ExecCondition exec_condition;
  /// BHO measurement-report trigger: A3 with o_exec and the execution TTT.
  cond::ExecCondition report_trigger;
  /// CHO preparation trigger: candidate better than serving - o_prep.
  cond::ExecCondition prep_trigger;

  static ProtocolParams from_config(const Config& cfg);

  SimTime signalling_delay() const { return report_delay + prep_delay + cmd_delay; }
};

struct UeProtocolState {
  int ue_id = 0;
  Phase phase = Phase::Connected;
  CellId serving = kNoCell;
  std::vector<PreparedCandidate> prepared;
  Timer t310;
  Timer t304;
  int n310_count = 0;
  int n311_count = 0;
  std::optional<SimTime> last_ho_completed_at;
  CellId last_ho_source = kNoCell;

  // ExecutingHO
  CellId exec_target = kNoCell;
  bool exec_is_recovery = false;
  SimTime next_ra_attempt{0};

  /// Per-cell state of the BHO report trigger (BHO) or preparation trigger (CHO).
  std::vector<cond::ConditionState> trigger_states;
  SimTime next_request_allowed{0};

  // PreparingHO (BHO): command in flight.
  CellId pending_target = kNoCell;
  SimTime command_due{0};

  // Failure handling.
  std::optional<FailureRecord> open_failure;
  std::vector<FailureRecord> failure_history;
  SimTime selection_due{0};
  CellId reest_target = kNoCell;
  SimTime reest_due{0};
};

UeProtocolState make_ue(int ue_id, CellId serving, int n_cells);

/// What the UE observes at one simulation step. All spans are indexed by cell id.
struct StepInput {
  SimTime now{0};
  SimTime dt{10};
  bool measurement_tick = false;
  std::span<const measure::CellMeasurement> meas;
  /// DL SINR the UE would see if the cell served it (best beams everywhere).
  std::span<const double> sinr_db;
  std::span<const double> ref_distance_m;
};

using EventSink = std::vector<Event>;

/// Advances one UE by one simulation step. Radio-link monitoring, command
/// delivery, random access and recovery run every step; preparation,
/// execution and BHO reporting run on measurement occasions only.
void step_ue(UeProtocolState& ue, const StepInput& in, const ProtocolParams& p, EventSink& out);

// The individual procedures. step_ue calls them in a fixed order; they are
// exposed for unit testing.

/// Out-of-sync / in-sync counting and T310 supervision. Declares RLF on expiry.
void rlf_monitor(UeProtocolState& ue, const StepInput& in, const ProtocolParams& p, EventSink& out);

/// CHO only: release weak candidates, then request preparation of qualified
/// cells up to max_prepared, evicting the weakest when a stronger cell appears.
void check_preparation(UeProtocolState& ue, const StepInput& in, const ProtocolParams& p,
                       EventSink& out);

/// Activates in-flight CHO candidates whose delay has elapsed. With
/// prep_needs_link the serving link must be above qout at that moment,
/// otherwise the candidate is lost.
void deliver_candidates(UeProtocolState& ue, const StepInput& in, const ProtocolParams& p,
                        EventSink& out);

/// Evaluates every active candidate's execution condition and returns the
/// fulfilled candidate with the highest L3 RSRP.
std::optional<CellId> check_execution(UeProtocolState& ue, const StepInput& in,
                                      const ProtocolParams& p);

/// BHO: A3-triggered measurement report and command delivery over the serving link.
void baseline_ho(UeProtocolState& ue, const StepInput& in, const ProtocolParams& p,
                 EventSink& out);

enum class RaOutcome { Progress, Success, Failure };

/// One step of random access toward the execution target under T304.
RaOutcome random_access(UeProtocolState& ue, const StepInput& in, const ProtocolParams& p,
                        EventSink& out);

/// Post-failure cell selection, CHO recovery or reestablishment.
void recover(UeProtocolState& ue, const StepInput& in, const ProtocolParams& p, EventSink& out);

/// True iff the HO into `new_serving` returns to the previous HO's source
/// within the window.
bool detect_ping_pong(const UeProtocolState& ue, CellId new_serving, SimTime now, SimTime window);

/// Throws InvariantViolation if the state breaks a structural invariant.
void check_invariants(const UeProtocolState& ue, const ProtocolParams& p);

}  // namespace cho::core
