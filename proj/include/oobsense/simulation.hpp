// simulation.hpp -- frame-driven simulation of one secondary user
//
// Each frame the SU fast-senses its current channel, asks the scheduler what
// the frame's omega slot is used for, performs fine sensing or an OoB scan
// accordingly, and is credited data for the payload part of the frame. PU
// activity on every channel evolves independently of the SU's decisions, so
// two sessions with the same seed see the same activity trace.
#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "oobsense/channel.hpp"
#include "oobsense/detection.hpp"
#include "oobsense/scheduler.hpp"
#include "oobsense/throughput.hpp"

namespace oobsense {

enum class DetectionMode { analytic, montecarlo };

/// How sensing verdicts are produced. In analytic mode the verdict is a
/// Bernoulli draw with (pd, pf) for the fast slot and (pd_fine, pf_fine) for
/// the fine / scan / probe slots. In montecarlo mode a window of samples is
/// generated and compared against epsilon_fast or epsilon_fine; thresholds
/// left unset are chosen for the pf / pf_fine targets.
struct SensingConfig {
  DetectionMode mode = DetectionMode::analytic;
  double pd = 0.9;
  double pf = 0.1;
  double pd_fine = 0.9;
  double pf_fine = 0.1;
  double sigma_u2 = 1.0;
  double f_s = 6e6;
  std::optional<double> epsilon_fast;
  std::optional<double> epsilon_fine;
};

struct SimConfig {
  FrameConfig frame;
  std::vector<ChannelSpec> channels;
  ChannelId initial_channel = 1;
  TrafficDemand demand;
  SensingConfig sensing;
  double c0 = 6.6582;
  double c1 = 6.6137;
  double prior_h0 = 0.9;  // priors used by the analytic comparison
  double prior_h1 = 0.1;
  std::int64_t frames = 1000;
  std::uint64_t seed = 1;
  double scan_noise = 0.0;  // relative on-time estimate error, uniform in +-scan_noise
  int scan_limit = 0;       // channels refreshed per OoB frame, 0 = all
  bool proactive = true;    // false: no OoB sensing, reactive recovery only

  /// Throws std::invalid_argument naming the violated invariant.
  void validate() const;
};

enum class FrameEvent { none, switch_channel, collision, no_reserve, probe };

std::string_view to_string(FrameKind kind);
std::string_view to_string(FrameEvent event);

struct FrameRecord {
  std::int64_t index = 0;
  ChannelId channel = 0;
  FrameDecision decision;
  bool fast_decided_h1 = false;
  std::optional<FineResult> fine_result;
  bool pu_truth = false;
  double data_sent = 0.0;  // bits/Hz
  FrameEvent event = FrameEvent::none;
  std::optional<ChannelId> reserve;  // reserve held at the end of the frame
};

struct SimSummary {
  std::int64_t total_frames = 0;
  std::int64_t ib_frames = 0;
  std::int64_t oob_frames = 0;
  std::int64_t fine_frames = 0;
  std::int64_t probe_frames = 0;
  std::int64_t switches = 0;
  std::int64_t collisions = 0;
  double realized_aggregate = 0.0;        // bits/Hz
  double analytic_aggregate = 0.0;        // frame length times the closed-form sum, bits/Hz
  double analytic_aggregate_full = 0.0;   // same, including PU-present scenarios
  std::vector<std::int64_t> interruption_gaps;  // frames without a usable channel, per vacate
};

struct SessionResult {
  SimSummary summary;
  std::vector<FrameRecord> frames;
};

/// The rate parameters the analytic comparison uses for this configuration.
RateParams analytic_rate_params(const SimConfig& config);

SessionResult run_session(const SimConfig& config);

struct ComparisonRecord {
  SimSummary with_oob;
  SimSummary without_oob;
  double analytic_with = 0.0;     // bits/Hz, OoB frame count from the proactive session
  double analytic_without = 0.0;  // bits/Hz, every frame an IB frame
  double realized_loss = 0.0;     // 1 - realized_with / realized_without
  double analytic_loss = 0.0;     // 1 - analytic_with / analytic_without
  std::int64_t interruption_with = 0;
  std::int64_t interruption_without = 0;
};

/// Runs the proactive session and a reactive-only session on the same seed.
ComparisonRecord compare_analytic(const SimConfig& config);

}  // namespace oobsense
