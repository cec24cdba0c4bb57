// channel.hpp -- channel descriptors and primary-user activity
#pragma once

#include <cstdint>
#include <random>

#include "oobsense/detection.hpp"

namespace oobsense {

using ChannelId = int;

enum class ActivityKind { fixed, exponential };

/// On/off renewal process of the primary user on one channel. `phase` is the
/// time already spent in the initial state at t = 0 (fixed model only).
struct ActivityModel {
  ActivityKind kind = ActivityKind::fixed;
  double mean_on = 1.0;   // seconds the PU stays on
  double mean_off = 1.0;  // seconds the PU stays off
  bool initial_on = false;
  double phase = 0.0;

  void validate() const;
};

struct ChannelSpec {
  ChannelId id = 0;
  double capacity = 1.0;  // bits/s/Hz
  double gamma = 0.0;     // PU SNR at the SU, linear
  double prior_h0 = 1.0;
  double prior_h1 = 0.0;
  ActivityModel activity;

  void validate() const;
};

struct OccupancyEstimate {
  std::int64_t n_on = 0;
  double t_s = 0.0;
  double t_on = 0.0;
};

struct ChannelState {
  ChannelSpec spec;
  bool pu_on = false;
  double time_in_state = 0.0;
  double next_toggle = 0.0;  // absolute simulation time
  double now = 0.0;
};

/// Toggle instants closer than this to a target time count as reached.
inline constexpr double kToggleTolerance = 1e-9;

/// T_on = n_on * t_s + 2 * t_s. Throws std::domain_error for t_s <= 0 or n_on < 0.
double estimate_on_time(std::int64_t n_on, double t_s);

/// Data volume a channel supports over t_on seconds, in bits/Hz.
double supported_data(double t_on, double capacity);

/// State at t = 0. The engine is consumed only by the exponential model.
ChannelState initial_state(const ChannelSpec& spec, std::mt19937_64& engine);

/// Advances the renewal process by dt seconds. Throws std::invalid_argument for dt <= 0.
ChannelState advance_activity(const ChannelState& state, double dt, std::mt19937_64& engine);

/// Advances to absolute time `t` (no-op if t <= state.now).
ChannelState advance_to(const ChannelState& state, double t, std::mt19937_64& engine);

/// Counts samples of `window`, starting at state.now, that fall in PU-on
/// periods. Future toggles are known exactly for the fixed model; for the
/// exponential model only the pending toggle is known and the process is
/// assumed to hold its next state for the rest of the window.
OccupancyEstimate sample_occupancy(const ChannelState& state, const SenseWindow& window);

/// Seconds until the PU next turns on (0 while it is on).
double remaining_idle(const ChannelState& state);

}  // namespace oobsense
