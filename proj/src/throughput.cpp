#include "oobsense/throughput.hpp"

#include <cmath>
#include <stdexcept>

namespace oobsense {

void FrameConfig::validate() const {
  if (!(frame > 0.0)) throw std::invalid_argument("frame duration must be > 0");
  if (!(tau > 0.0)) throw std::invalid_argument("tau must be > 0");
  if (!(omega >= 0.0)) throw std::invalid_argument("omega must be >= 0");
  if (!(tau + omega < frame)) throw std::invalid_argument("tau + omega must be < frame duration");
}

void RateParams::validate() const {
  frame.validate();
  auto in_unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  if (!in_unit(pf) || !in_unit(pd)) throw std::invalid_argument("pf and pd must lie in [0, 1]");
  if (!in_unit(prior_h0) || !in_unit(prior_h1))
    throw std::invalid_argument("priors must lie in [0, 1]");
  if (std::abs(prior_h0 + prior_h1 - 1.0) > 1e-12)
    throw std::invalid_argument("prior_h0 + prior_h1 must sum to 1");
  if (!(c1 > 0.0) || !(c0 >= c1)) throw std::invalid_argument("capacities must satisfy c0 >= c1 > 0");
}

ScenarioRates scenario_rates(const RateParams& p) {
  const auto& f = p.frame;
  const double ib_share = (f.frame - f.tau) / f.frame;
  const double oob_share = (f.frame - f.tau - f.omega) / f.frame;
  const double idle = (1.0 - p.pf) * p.prior_h0;
  const double missed = (1.0 - p.pd) * p.prior_h1;
  return {ib_share * p.c0 * idle, oob_share * p.c0 * idle, ib_share * p.c1 * missed,
          oob_share * p.c1 * missed};
}

double avg_throughput_ib(const RateParams& p) {
  const auto r = scenario_rates(p);
  return r.r01 + r.r13;
}

double avg_throughput_oob(const RateParams& p) {
  const auto r = scenario_rates(p);
  return r.r02 + r.r14;
}

FrameBudget frame_budget(double t_on_cur, double frame_T, int max_i) {
  if (!(frame_T > 0.0)) throw std::invalid_argument("frame duration must be > 0");
  if (max_i < 1) throw std::invalid_argument("max_i must be >= 1");
  if (!(t_on_cur >= 0.0)) throw std::invalid_argument("t_on_cur must be >= 0");
  // 10 / 0.1 and friends must count as whole frames.
  const auto f_tot = static_cast<std::int64_t>(std::floor(t_on_cur / frame_T + 1e-9));
  const std::int64_t f_oob = f_tot / max_i;
  return {f_tot, f_oob, f_tot - f_oob};
}

double aggregate_throughput(const FrameBudget& budget, const RateParams& p, bool with_oob,
                            bool include_pu_terms) {
  const auto r = scenario_rates(p);
  const double ib_rate = r.r01 + (include_pu_terms ? r.r13 : 0.0);
  const double oob_rate = r.r02 + (include_pu_terms ? r.r14 : 0.0);
  if (!with_oob) return static_cast<double>(budget.f_tot) * ib_rate;
  return static_cast<double>(budget.f_ib) * ib_rate + static_cast<double>(budget.f_oob) * oob_rate;
}

}  // namespace oobsense
