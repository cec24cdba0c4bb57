#include "oobsense/channel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace oobsense {

namespace {

double holding_time(const ActivityModel& m, bool on, std::mt19937_64& engine) {
  const double mean = on ? m.mean_on : m.mean_off;
  if (m.kind == ActivityKind::fixed || mean == 0.0) return mean;
  return std::exponential_distribution<double>(1.0 / mean)(engine);
}

// First sample index whose offset k / f_s is >= x.
std::int64_t first_index_at_or_after(double x, double f_s) {
  return static_cast<std::int64_t>(std::ceil(x * f_s - 1e-9));
}

}  // namespace

void ActivityModel::validate() const {
  if (!(mean_on > 0.0)) throw std::invalid_argument("activity mean_on must be > 0");
  if (!(mean_off >= 0.0)) throw std::invalid_argument("activity mean_off must be >= 0");
  if (!(phase >= 0.0)) throw std::invalid_argument("activity phase must be >= 0");
}

void ChannelSpec::validate() const {
  if (!(capacity > 0.0)) throw std::invalid_argument("channel capacity must be > 0");
  if (!(gamma >= 0.0)) throw std::invalid_argument("channel gamma must be >= 0");
  if (!(prior_h0 >= 0.0 && prior_h0 <= 1.0) || !(prior_h1 >= 0.0 && prior_h1 <= 1.0))
    throw std::invalid_argument("channel priors must lie in [0, 1]");
  if (std::abs(prior_h0 + prior_h1 - 1.0) > 1e-12)
    throw std::invalid_argument("channel priors prior_h0 + prior_h1 must sum to 1");
  activity.validate();
}

double estimate_on_time(std::int64_t n_on, double t_s) {
  if (!(t_s > 0.0)) throw std::domain_error("sampling period must be > 0");
  if (n_on < 0) throw std::domain_error("n_on must be >= 0");
  return static_cast<double>(n_on) * t_s + 2.0 * t_s;
}

double supported_data(double t_on, double capacity) { return t_on * capacity; }

ChannelState initial_state(const ChannelSpec& spec, std::mt19937_64& engine) {
  ChannelState s;
  s.spec = spec;
  s.pu_on = spec.activity.initial_on;
  s.now = 0.0;
  if (spec.activity.kind == ActivityKind::fixed) {
    const double first = spec.activity.initial_on ? spec.activity.mean_on : spec.activity.mean_off;
    s.time_in_state = std::min(spec.activity.phase, first);
    s.next_toggle = first - s.time_in_state;
  } else {
    s.time_in_state = 0.0;
    s.next_toggle = holding_time(spec.activity, s.pu_on, engine);
  }
  return s;
}

ChannelState advance_to(const ChannelState& state, double t, std::mt19937_64& engine) {
  if (t <= state.now) return state;
  ChannelState s = state;
  double last_toggle = s.now - s.time_in_state;
  while (s.next_toggle <= t + kToggleTolerance) {
    last_toggle = s.next_toggle;
    s.pu_on = !s.pu_on;
    s.next_toggle = last_toggle + holding_time(s.spec.activity, s.pu_on, engine);
  }
  s.now = t;
  s.time_in_state = std::max(0.0, t - last_toggle);
  return s;
}

ChannelState advance_activity(const ChannelState& state, double dt, std::mt19937_64& engine) {
  if (!(dt > 0.0)) throw std::invalid_argument("advance_activity: dt must be > 0");
  return advance_to(state, state.now + dt, engine);
}

OccupancyEstimate sample_occupancy(const ChannelState& state, const SenseWindow& window) {
  const std::int64_t n = window.n_samples();
  const double f_s = window.f_s();
  const double span = static_cast<double>(n) / f_s;
  const auto& m = state.spec.activity;

  auto count_between = [&](double from, double to) {
    const auto a = std::clamp<std::int64_t>(first_index_at_or_after(from, f_s), 0, n);
    const auto b = std::clamp<std::int64_t>(first_index_at_or_after(to, f_s), 0, n);
    return std::max<std::int64_t>(0, b - a);
  };

  std::int64_t n_on = 0;
  bool on = state.pu_on;
  double seg_start = 0.0;
  double seg_end = state.next_toggle - state.now;
  while (seg_start < span) {
    if (on) n_on += count_between(seg_start, seg_end);
    seg_start = seg_end;
    on = !on;
    if (m.kind == ActivityKind::exponential) {
      if (on) n_on += count_between(seg_start, span);
      break;
    }
    seg_end = seg_start + (on ? m.mean_on : m.mean_off);
  }

  const double t_s = 1.0 / f_s;
  return {n_on, t_s, estimate_on_time(n_on, t_s)};
}

double remaining_idle(const ChannelState& state) {
  return state.pu_on ? 0.0 : std::max(0.0, state.next_toggle - state.now);
}

}  // namespace oobsense
