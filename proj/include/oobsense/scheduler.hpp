// scheduler.hpp -- reserve-channel selection and per-frame sensing decisions
//
// select_reserve picks the out-of-band channel that maximizes the interval
// between consecutive OoB sensing frames, subject to the candidate staying
// usable longer than the current channel. decide_frame / apply_fine_result
// form the per-frame state machine that keeps fine sensing and OoB sensing
// out of the same frame.
#pragma once

#include <optional>
#include <span>
#include <stdexcept>

#include "oobsense/channel.hpp"

namespace oobsense {

struct CandidateView {
  ChannelId id = 0;
  bool available = false;
  double t_on = 0.0;  // estimated on-time, seconds
  double capacity = 0.0;
};

struct TrafficDemand {
  double d_su_tot = 1.0;  // bits/Hz the SU intends to move
};

struct ReserveSelection {
  ChannelId res_c = 0;
  double s_i_raw = 0.0;
  int max_i = 1;  // frames between consecutive OoB frames

  friend bool operator==(const ReserveSelection&, const ReserveSelection&) = default;
};

/// Raised by sensing_interval when the candidate is not usable longer than
/// the current channel.
class ConstraintViolation : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// (D_sup(current) + D_sup(candidate)) / d_su_tot.
double sensing_interval(const CandidateView& current, const CandidateView& candidate,
                        const TrafficDemand& demand);

/// Frame count derived from a raw interval ratio: max(1, floor(s_i_raw)).
int max_interval_frames(double s_i_raw);

/// Reserve-channel selection. Candidates are visited in id order; entries
/// that are unavailable, equal to the current channel, or not strictly
/// longer-lived than the current channel are skipped. Ties keep the lowest id.
/// Returns nullopt when nothing qualifies.
std::optional<ReserveSelection> select_reserve(const CandidateView& current,
                                               std::span<const CandidateView> candidates,
                                               const TrafficDemand& demand);

enum class FrameKind { IbOnly, IbPlusFine, IbPlusOob, SwitchTo, ReactiveProbe };

struct FrameDecision {
  FrameKind kind = FrameKind::IbOnly;
  ChannelId target = -1;  // SwitchTo / ReactiveProbe only

  friend bool operator==(const FrameDecision&, const FrameDecision&) = default;
};

enum class FineResult { Vacate, Stay };

struct SchedulerState {
  int count = 1;
  std::optional<ReserveSelection> selection;
  bool oob_deferred = false;  // OoB pushed past a fine-sensing frame at count == max_i
  bool scan_pending = true;   // first frame on a channel is an OoB/scan frame
  ChannelId current_channel = 0;
  bool proactive = true;      // false: never schedule OoB, reactive only

  /// max_i of the current selection, 1 (rescan every frame) without one.
  int max_i() const { return selection ? selection->max_i : 1; }

  friend bool operator==(const SchedulerState&, const SchedulerState&) = default;
};

/// Fresh scheduling session on `channel`. A proactive session opens with a scan frame.
SchedulerState start_session(ChannelId channel, bool proactive = true);

struct FrameStep {
  FrameDecision decision;
  SchedulerState state;
};

/// Chooses this frame's sensing layout. `fine_required` is the caller's
/// fast-sensing verdict. Every frame carries the fast (in-band) sensing slot.
FrameStep decide_frame(const SchedulerState& state, bool fine_required);

/// Records the result of an OoB scan (rerun of select_reserve).
SchedulerState apply_scan(const SchedulerState& state, std::optional<ReserveSelection> selection);

enum class FineOutcome { Continue, Switch, NoReserve };

struct FineStep {
  FineOutcome outcome = FineOutcome::Continue;
  FrameDecision decision;  // SwitchTo(res_c) on Switch, otherwise IbPlusFine
  SchedulerState state;
};

/// Continues a frame that performed fine sensing. Vacate moves to the reserve
/// channel and opens a new session there; without a reserve the outcome is
/// NoReserve and the caller must find a channel reactively, then call
/// start_session on it.
FineStep apply_fine_result(const SchedulerState& state, FineResult result);

}  // namespace oobsense
