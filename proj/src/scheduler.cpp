#include "oobsense/scheduler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace oobsense {

double sensing_interval(const CandidateView& current, const CandidateView& candidate,
                        const TrafficDemand& demand) {
  if (!(demand.d_su_tot > 0.0)) throw std::invalid_argument("d_su_tot must be > 0");
  if (!(candidate.t_on > current.t_on))
    throw ConstraintViolation("candidate on-time must exceed the current channel's on-time");
  return (supported_data(current.t_on, current.capacity) +
          supported_data(candidate.t_on, candidate.capacity)) /
         demand.d_su_tot;
}

int max_interval_frames(double s_i_raw) {
  if (!(s_i_raw >= 1.0)) return 1;
  constexpr double kCap = static_cast<double>(std::numeric_limits<int>::max());
  return static_cast<int>(std::min(std::floor(s_i_raw), kCap));
}

std::optional<ReserveSelection> select_reserve(const CandidateView& current,
                                               std::span<const CandidateView> candidates,
                                               const TrafficDemand& demand) {
  std::vector<CandidateView> ordered(candidates.begin(), candidates.end());
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const auto& a, const auto& b) { return a.id < b.id; });

  std::optional<ReserveSelection> best;
  for (const auto& c : ordered) {
    if (!c.available || c.id == current.id) continue;
    if (!(c.t_on > current.t_on)) continue;
    const double s_i = sensing_interval(current, c, demand);
    if (!best || s_i > best->s_i_raw) best = ReserveSelection{c.id, s_i, max_interval_frames(s_i)};
  }
  return best;
}

SchedulerState start_session(ChannelId channel, bool proactive) {
  SchedulerState s;
  s.current_channel = channel;
  s.proactive = proactive;
  s.scan_pending = proactive;
  return s;
}

FrameStep decide_frame(const SchedulerState& state, bool fine_required) {
  SchedulerState next = state;
  if (!state.proactive) {
    if (fine_required) return {{FrameKind::IbPlusFine}, next};
    ++next.count;
    return {{FrameKind::IbOnly}, next};
  }

  if (state.scan_pending || state.oob_deferred) {
    next.scan_pending = false;
    next.oob_deferred = false;
    next.count = 1;
    return {{FrameKind::IbPlusOob}, next};
  }

  if (state.count < state.max_i()) {
    if (fine_required) return {{FrameKind::IbPlusFine}, next};
    ++next.count;
    return {{FrameKind::IbOnly}, next};
  }

  // count == max_i: this frame is due for OoB sensing.
  if (fine_required) {
    next.oob_deferred = true;
    return {{FrameKind::IbPlusFine}, next};
  }
  next.count = 1;
  return {{FrameKind::IbPlusOob}, next};
}

SchedulerState apply_scan(const SchedulerState& state, std::optional<ReserveSelection> selection) {
  SchedulerState next = state;
  next.selection = selection;
  return next;
}

FineStep apply_fine_result(const SchedulerState& state, FineResult result) {
  if (result == FineResult::Stay) {
    SchedulerState next = state;
    // A deferred OoB frame keeps its slot; otherwise this frame counts as IB.
    if (!state.oob_deferred) ++next.count;
    return {FineOutcome::Continue, {FrameKind::IbPlusFine}, next};
  }
  if (!state.proactive || !state.selection) {
    SchedulerState next = state;
    next.oob_deferred = false;
    next.count = 1;
    return {FineOutcome::NoReserve, {FrameKind::IbPlusFine}, next};
  }
  const ChannelId target = state.selection->res_c;
  return {FineOutcome::Switch, {FrameKind::SwitchTo, target}, start_session(target, true)};
}

}  // namespace oobsense
