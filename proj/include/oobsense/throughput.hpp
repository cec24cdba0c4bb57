// throughput.hpp -- closed-form SU throughput with and without OoB sensing
#pragma once

#include <cstdint>

namespace oobsense {

/// Frame timing: every frame of length `frame` seconds starts with a fast
/// sensing slot `tau`; an optional slot `omega` serves fine or OoB sensing.
struct FrameConfig {
  double frame = 0.1;
  double tau = 1e-3;
  double omega = 1e-3;

  void validate() const;
};

struct RateParams {
  FrameConfig frame;
  double c0 = 6.6582;  // capacity, PU absent (bits/s/Hz)
  double c1 = 6.6137;  // capacity, PU present
  double pf = 0.1;
  double pd = 0.9;
  double prior_h0 = 0.9;
  double prior_h1 = 0.1;

  void validate() const;
};

/// Per-scenario rates, bits/s/Hz:
///  r01  PU absent, no false alarm, IB frame
///  r02  PU absent, no false alarm, frame carrying an omega slot
///  r13  PU present, missed, IB frame
///  r14  PU present, missed, frame carrying an omega slot
struct ScenarioRates {
  double r01 = 0.0;
  double r02 = 0.0;
  double r13 = 0.0;
  double r14 = 0.0;
};

struct FrameBudget {
  std::int64_t f_tot = 0;
  std::int64_t f_oob = 0;
  std::int64_t f_ib = 0;
};

ScenarioRates scenario_rates(const RateParams& p);

/// r01 + r13
double avg_throughput_ib(const RateParams& p);

/// r02 + r14
double avg_throughput_oob(const RateParams& p);

/// Whole frames in t_on_cur, one OoB frame per max_i of them.
FrameBudget frame_budget(double t_on_cur, double frame_T, int max_i);

/// Sum of per-frame rates over the budget. Without OoB every frame is an IB
/// frame. The PU-present scenarios are left out unless `include_pu_terms`.
double aggregate_throughput(const FrameBudget& budget, const RateParams& p, bool with_oob,
                            bool include_pu_terms = false);

}  // namespace oobsense
