#include "oobsense/experiments.hpp"

#include <array>
#include <string>

#include "oobsense/rng.hpp"
#include "oobsense/scheduler.hpp"

namespace oobsense {

namespace {

constexpr std::array<std::pair<std::string_view, ExperimentKind>, 6> kKinds{{
    {"fig2-interval-sweep", ExperimentKind::fig2_interval_sweep},
    {"fig3-avg-throughput-pu", ExperimentKind::fig3_avg_throughput_pu},
    {"fig4-avg-throughput-nopu", ExperimentKind::fig4_avg_throughput_nopu},
    {"fig5-aggregate-sweep", ExperimentKind::fig5_aggregate_sweep},
    {"validate-detector", ExperimentKind::validate_detector},
    {"simulate", ExperimentKind::simulate},
}};

// Evaluates rows[i] = f(i) for every sweep index across OpenMP threads.
template <typename F>
std::vector<std::vector<double>> parallel_rows(std::size_t n, F&& f) {
  std::vector<std::vector<double>> rows(n);
  const auto count = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < count; ++i) rows[static_cast<std::size_t>(i)] = f(static_cast<std::size_t>(i));
  return rows;
}

CsvTable make_table(std::vector<std::string> header, const std::vector<std::vector<double>>& rows) {
  CsvTable t;
  t.header = std::move(header);
  for (const auto& r : rows) t.add_numeric_row(r);
  return t;
}

CsvTable interval_sweep(const LoadedConfig& cfg) {
  const auto& p = cfg.experiments.interval;
  const auto on_times = linspace(p.t_on_min, p.t_on_max, p.steps);
  const CandidateView current{0, true, p.current_t_on, p.current_capacity};
  const std::size_t per_demand = on_times.size();
  auto rows = parallel_rows(p.demands.size() * per_demand, [&](std::size_t i) {
    const double demand = p.demands[i / per_demand];
    const double t_on = on_times[i % per_demand];
    const CandidateView cand{1, true, t_on, p.candidate_capacity};
    return std::vector<double>{t_on, demand, sensing_interval(current, cand, TrafficDemand{demand})};
  });
  return make_table({"max_candidate_on_time", "d_su_tot", "sensing_interval"}, rows);
}

CsvTable omega_sweep(const LoadedConfig& cfg, bool include_pu_terms) {
  const auto& p = cfg.experiments.omega;
  const auto omegas = linspace(p.omega_ms_min, p.omega_ms_max, p.steps);
  const RateParams base = sweep_rate_params(cfg);
  auto rows = parallel_rows(omegas.size(), [&](std::size_t i) {
    RateParams rp = base;
    rp.frame.omega = omegas[i] * 1e-3;
    const auto r = scenario_rates(rp);
    const double r_ib = include_pu_terms ? r.r01 + r.r13 : r.r01;
    const double r_oob = include_pu_terms ? r.r02 + r.r14 : r.r02;
    return std::vector<double>{omegas[i], r_ib, r_oob};
  });
  return make_table({"omega_ms", "r_ib", "r_oob"}, rows);
}

CsvTable on_time_sweep(const LoadedConfig& cfg) {
  const auto& p = cfg.experiments.on_time;
  const auto on_times = linspace(p.t_on_min, p.t_on_max, p.steps);
  const RateParams rp = sweep_rate_params(cfg);
  auto rows = parallel_rows(on_times.size(), [&](std::size_t i) {
    const auto budget = frame_budget(on_times[i], rp.frame.frame, p.max_i);
    return std::vector<double>{on_times[i], aggregate_throughput(budget, rp, true),
                               aggregate_throughput(budget, rp, false)};
  });
  return make_table({"t_on_cur", "agg_with_oob", "agg_without_oob"}, rows);
}

CsvTable detector_sweep(const LoadedConfig& cfg) {
  const auto& p = cfg.experiments.detector;
  const auto& sc = cfg.sim.sensing;
  const double gamma = db_to_linear(p.gamma_db);
  CsvTable t;
  t.header = {"n_samples", "pf_closed", "pf_empirical", "pd_closed", "pd_empirical"};
  // simulate_detection already spreads trials across threads.
  for (std::size_t i = 0; i < p.durations_ms.size(); ++i) {
    const SenseWindow w(p.durations_ms[i] * 1e-3, sc.f_s);
    const double eps = threshold_for_false_alarm(sc.pf, w, sc.sigma_u2);
    const DetectorParams d{sc.sigma_u2, gamma, eps};
    const auto seed = rng::substream(cfg.sim.seed, {static_cast<std::uint64_t>(i)});
    const double row[] = {static_cast<double>(w.n_samples()), prob_false_alarm(d, w),
                          simulate_detection(d, w, false, p.trials, seed), prob_detection(d, w),
                          simulate_detection(d, w, true, p.trials, rng::splitmix64(seed))};
    t.add_numeric_row(row);
  }
  return t;
}

std::string bool_cell(bool b) { return b ? "1" : "0"; }

}  // namespace

std::optional<ExperimentKind> parse_experiment_kind(std::string_view name) {
  for (const auto& [n, k] : kKinds)
    if (n == name) return k;
  return std::nullopt;
}

std::string_view to_string(ExperimentKind kind) {
  for (const auto& [n, k] : kKinds)
    if (k == kind) return n;
  return "?";
}

std::vector<double> linspace(double lo, double hi, int steps) {
  std::vector<double> out;
  if (steps < 1) return out;
  out.reserve(static_cast<std::size_t>(steps));
  if (steps == 1) {
    out.push_back(lo);
    return out;
  }
  for (int i = 0; i < steps; ++i) out.push_back(lo + (hi - lo) * i / (steps - 1));
  out.back() = hi;
  return out;
}

RateParams sweep_rate_params(const LoadedConfig& config) {
  RateParams rp;
  rp.frame = config.sim.frame;
  rp.c0 = config.sim.c0;
  rp.c1 = config.sim.c1;
  rp.pd = config.sim.sensing.pd;
  rp.pf = config.sim.sensing.pf;
  rp.prior_h0 = config.sim.prior_h0;
  rp.prior_h1 = config.sim.prior_h1;
  return rp;
}

CsvTable frame_table(const SessionResult& session) {
  CsvTable t;
  t.header = {"index",     "channel",   "decision", "target", "fast_h1", "fine_result",
              "pu_truth",  "data_sent", "event",    "reserve"};
  for (const auto& f : session.frames) {
    std::string fine;
    if (f.fine_result) fine = *f.fine_result == FineResult::Vacate ? "vacate" : "stay";
    t.add_row({std::to_string(f.index), std::to_string(f.channel), std::string(to_string(f.decision.kind)),
               f.decision.target >= 0 ? std::to_string(f.decision.target) : "",
               bool_cell(f.fast_decided_h1), fine, bool_cell(f.pu_truth), format_number(f.data_sent),
               std::string(to_string(f.event)), f.reserve ? std::to_string(*f.reserve) : ""});
  }
  return t;
}

CsvTable summary_table(const std::vector<std::pair<std::string, SimSummary>>& sessions) {
  CsvTable t;
  t.header = {"session",     "total_frames", "ib_frames",          "oob_frames",
              "fine_frames", "probe_frames", "switches",           "collisions",
              "realized_aggregate", "analytic_aggregate", "analytic_aggregate_full",
              "interruption_frames"};
  for (const auto& [label, s] : sessions) {
    std::int64_t gaps = 0;
    for (auto g : s.interruption_gaps) gaps += g;
    t.add_row({label, std::to_string(s.total_frames), std::to_string(s.ib_frames),
               std::to_string(s.oob_frames), std::to_string(s.fine_frames),
               std::to_string(s.probe_frames), std::to_string(s.switches),
               std::to_string(s.collisions), format_number(s.realized_aggregate),
               format_number(s.analytic_aggregate), format_number(s.analytic_aggregate_full),
               std::to_string(gaps)});
  }
  return t;
}

ExperimentResult run_experiment(const ExperimentSpec& spec) {
  const auto& cfg = spec.config;
  switch (spec.kind) {
    case ExperimentKind::fig2_interval_sweep: return {interval_sweep(cfg), std::nullopt};
    case ExperimentKind::fig3_avg_throughput_pu: return {omega_sweep(cfg, true), std::nullopt};
    case ExperimentKind::fig4_avg_throughput_nopu: return {omega_sweep(cfg, false), std::nullopt};
    case ExperimentKind::fig5_aggregate_sweep: return {on_time_sweep(cfg), std::nullopt};
    case ExperimentKind::validate_detector: return {detector_sweep(cfg), std::nullopt};
    case ExperimentKind::simulate: {
      const auto session = run_session(cfg.sim);
      std::vector<std::pair<std::string, SimSummary>> rows{
          {cfg.sim.proactive ? "with_oob" : "without_oob", session.summary}};
      if (cfg.sim.proactive) {
        SimConfig baseline = cfg.sim;
        baseline.proactive = false;
        rows.emplace_back("without_oob", run_session(baseline).summary);
      }
      return {frame_table(session), summary_table(rows)};
    }
  }
  throw std::logic_error("unhandled experiment kind");
}

}  // namespace oobsense
