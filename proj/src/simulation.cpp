#include "oobsense/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>
#include <stdexcept>

#include "oobsense/rng.hpp"

namespace oobsense {

std::string_view to_string(FrameKind kind) {
  switch (kind) {
    case FrameKind::IbOnly: return "ib_only";
    case FrameKind::IbPlusFine: return "ib_fine";
    case FrameKind::IbPlusOob: return "ib_oob";
    case FrameKind::SwitchTo: return "switch";
    case FrameKind::ReactiveProbe: return "probe";
  }
  return "?";
}

std::string_view to_string(FrameEvent event) {
  switch (event) {
    case FrameEvent::none: return "";
    case FrameEvent::switch_channel: return "switch";
    case FrameEvent::collision: return "collision";
    case FrameEvent::no_reserve: return "no_reserve";
    case FrameEvent::probe: return "probe";
  }
  return "?";
}

void SimConfig::validate() const {
  frame.validate();
  if (channels.empty()) throw std::invalid_argument("channels must not be empty");
  std::set<ChannelId> ids;
  for (const auto& c : channels) {
    c.validate();
    if (!ids.insert(c.id).second) throw std::invalid_argument("channel ids must be unique");
  }
  if (!ids.contains(initial_channel))
    throw std::invalid_argument("initial_channel must name one of the channels");
  if (!(demand.d_su_tot > 0.0)) throw std::invalid_argument("demand d_su_tot must be > 0");
  if (frames < 1) throw std::invalid_argument("frames must be >= 1");
  auto in_unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  if (!in_unit(sensing.pd) || !in_unit(sensing.pf) || !in_unit(sensing.pd_fine) ||
      !in_unit(sensing.pf_fine))
    throw std::invalid_argument("sensing probabilities must lie in [0, 1]");
  if (!(sensing.sigma_u2 > 0.0)) throw std::invalid_argument("sigma_u2 must be > 0");
  if (!(sensing.f_s > 0.0)) throw std::invalid_argument("f_s must be > 0");
  if (sensing.epsilon_fast && !(*sensing.epsilon_fast > 0.0))
    throw std::invalid_argument("epsilon_fast must be > 0");
  if (sensing.epsilon_fine && !(*sensing.epsilon_fine > 0.0))
    throw std::invalid_argument("epsilon_fine must be > 0");
  if (sensing.mode == DetectionMode::montecarlo) {
    // Throws when tau holds no sample.
    SenseWindow(frame.tau, sensing.f_s);
    if (!sensing.epsilon_fast && !(sensing.pf > 0.0 && sensing.pf < 1.0))
      throw std::invalid_argument("montecarlo mode needs 0 < pf < 1 or an explicit epsilon_fast");
    if (!sensing.epsilon_fine && !(sensing.pf_fine > 0.0 && sensing.pf_fine < 1.0))
      throw std::invalid_argument(
          "montecarlo mode needs 0 < pf_fine < 1 or an explicit epsilon_fine");
  }
  RateParams rp;
  rp.frame = frame;
  rp.c0 = c0;
  rp.c1 = c1;
  rp.prior_h0 = prior_h0;
  rp.prior_h1 = prior_h1;
  rp.validate();
  if (!(scan_noise >= 0.0 && scan_noise < 1.0))
    throw std::invalid_argument("scan_noise must lie in [0, 1)");
  if (scan_limit < 0) throw std::invalid_argument("scan_limit must be >= 0");
}

namespace {

enum class Slot { fast, fine, scan, probe };

rng::Stream stream_of(Slot slot) {
  switch (slot) {
    case Slot::fast: return rng::Stream::fast_sense;
    case Slot::fine: return rng::Stream::fine_sense;
    case Slot::scan: return rng::Stream::scan_sense;
    case Slot::probe: return rng::Stream::probe_sense;
  }
  return rng::Stream::fast_sense;
}

std::uint64_t as_key(ChannelId id) { return static_cast<std::uint64_t>(static_cast<std::int64_t>(id)); }

class Session {
 public:
  explicit Session(const SimConfig& cfg)
      : cfg_(cfg),
        fast_window_(cfg.frame.tau, cfg.sensing.f_s),
        fine_window_(fine_window_for(cfg)) {
    auto specs = cfg.channels;
    std::sort(specs.begin(), specs.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
    for (const auto& spec : specs) {
      engines_.emplace_back(rng::substream(cfg.seed, {rng::key(rng::Stream::activity), as_key(spec.id)}));
      states_.push_back(initial_state(spec, engines_.back()));
    }
    if (cfg.sensing.mode == DetectionMode::montecarlo) {
      eps_fast_ = cfg.sensing.epsilon_fast.value_or(
          threshold_for_false_alarm(cfg.sensing.pf, fast_window_, cfg.sensing.sigma_u2));
      eps_fine_ = cfg.sensing.epsilon_fine.value_or(
          threshold_for_false_alarm(cfg.sensing.pf_fine, fine_window_, cfg.sensing.sigma_u2));
    }
  }

  SessionResult run() {
    SessionResult out;
    out.frames.reserve(static_cast<std::size_t>(cfg_.frames));
    SchedulerState sched = start_session(cfg_.initial_channel, cfg_.proactive);
    std::optional<Probe> probe;
    const double T = cfg_.frame.frame;

    for (std::int64_t k = 0; k < cfg_.frames; ++k) {
      if (k > 0) advance_all(static_cast<double>(k) * T);

      if (probe) {
        bool found = false;
        out.frames.push_back(probe_frame(k, *probe, sched, out.summary, found));
        if (found) probe.reset();
        continue;
      }

      FrameRecord rec;
      rec.index = k;
      rec.channel = sched.current_channel;
      const auto& cur = state_of(sched.current_channel);
      rec.pu_truth = cur.pu_on;
      rec.fast_decided_h1 = sense(Slot::fast, k, cur);

      auto step = decide_frame(sched, rec.fast_decided_h1);
      sched = step.state;
      rec.decision = step.decision;

      switch (step.decision.kind) {
        case FrameKind::IbOnly:
          ++out.summary.ib_frames;
          break;
        case FrameKind::IbPlusOob:
          ++out.summary.oob_frames;
          sched = apply_scan(sched, scan(k, sched.current_channel));
          break;
        case FrameKind::IbPlusFine: {
          ++out.summary.fine_frames;
          const bool busy = sense(Slot::fine, k, cur);
          rec.fine_result = busy ? FineResult::Vacate : FineResult::Stay;
          auto fine = apply_fine_result(sched, *rec.fine_result);
          sched = fine.state;
          if (fine.outcome == FineOutcome::Switch) {
            rec.decision = fine.decision;
            rec.event = FrameEvent::switch_channel;
            ++out.summary.switches;
            out.summary.interruption_gaps.push_back(0);
          } else if (fine.outcome == FineOutcome::NoReserve) {
            rec.event = FrameEvent::no_reserve;
            probe = Probe{probe_order(rec.channel), 0, 0};
          }
          break;
        }
        case FrameKind::SwitchTo:
        case FrameKind::ReactiveProbe:
          break;
      }

      rec.data_sent = payload(rec);
      if (rec.data_sent > 0.0 && rec.pu_truth) {
        rec.event = FrameEvent::collision;
        ++out.summary.collisions;
      }
      if (sched.selection) rec.reserve = sched.selection->res_c;
      out.summary.realized_aggregate += rec.data_sent;
      out.frames.push_back(rec);
    }

    if (probe) out.summary.interruption_gaps.push_back(probe->frames);
    finish_summary(out.summary, static_cast<std::int64_t>(out.frames.size()));
    return out;
  }

 private:
  struct Probe {
    std::vector<ChannelId> order;
    std::size_t next = 0;
    std::int64_t frames = 0;
  };

  static SenseWindow fine_window_for(const SimConfig& cfg) {
    // A zero-length omega slot leaves nothing to sample; confirm on a tau window instead.
    if (cfg.frame.omega * cfg.sensing.f_s >= 1.0) return {cfg.frame.omega, cfg.sensing.f_s};
    return {cfg.frame.tau, cfg.sensing.f_s};
  }

  void advance_all(double t) {
    for (std::size_t i = 0; i < states_.size(); ++i) states_[i] = advance_to(states_[i], t, engines_[i]);
  }

  const ChannelState& state_of(ChannelId id) const {
    for (const auto& s : states_)
      if (s.spec.id == id) return s;
    throw std::logic_error("unknown channel id");
  }

  bool sense(Slot slot, std::int64_t frame, const ChannelState& ch) const {
    const auto& sc = cfg_.sensing;
    const auto keys = {rng::key(stream_of(slot)), static_cast<std::uint64_t>(frame), as_key(ch.spec.id)};
    if (sc.mode == DetectionMode::analytic) {
      const bool fast = slot == Slot::fast;
      const double p_h1 = ch.pu_on ? (fast ? sc.pd : sc.pd_fine) : (fast ? sc.pf : sc.pf_fine);
      return rng::uniform(cfg_.seed, keys) < p_h1;
    }
    std::mt19937_64 engine(rng::substream(cfg_.seed, keys));
    const bool fast = slot == Slot::fast;
    DetectorParams params{sc.sigma_u2, ch.spec.gamma, fast ? eps_fast_ : eps_fine_};
    return sense_once(params, fast ? fast_window_ : fine_window_, ch.pu_on, engine).decided_h1;
  }

  double on_time_estimate(std::int64_t frame, const ChannelState& ch) const {
    double remaining = std::min(remaining_idle(ch), 1e9);
    if (cfg_.scan_noise > 0.0) {
      const double u = rng::uniform(cfg_.seed, {rng::key(rng::Stream::scan_noise),
                                                static_cast<std::uint64_t>(frame), as_key(ch.spec.id)});
      remaining *= 1.0 + cfg_.scan_noise * (2.0 * u - 1.0);
    }
    const auto n_idle = static_cast<std::int64_t>(std::floor(remaining * cfg_.sensing.f_s));
    return estimate_on_time(n_idle, 1.0 / cfg_.sensing.f_s);
  }

  std::optional<ReserveSelection> scan(std::int64_t frame, ChannelId current) {
    const auto& cur = state_of(current);
    const CandidateView cur_view{current, true, on_time_estimate(frame, cur), cur.spec.capacity};

    std::vector<const ChannelState*> others;
    for (const auto& s : states_)
      if (s.spec.id != current) others.push_back(&s);
    std::size_t budget = others.size();
    if (cfg_.scan_limit > 0) budget = std::min<std::size_t>(budget, cfg_.scan_limit);

    std::vector<CandidateView> views;
    for (std::size_t i = 0; i < budget; ++i) {
      const auto& s = *others[(scan_cursor_ + i) % others.size()];
      views.push_back({s.spec.id, !sense(Slot::scan, frame, s), on_time_estimate(frame, s), s.spec.capacity});
    }
    if (!others.empty()) scan_cursor_ = (scan_cursor_ + budget) % others.size();
    return select_reserve(cur_view, views, cfg_.demand);
  }

  std::vector<ChannelId> probe_order(ChannelId vacated) const {
    std::vector<ChannelId> order;
    std::size_t pos = 0;
    for (std::size_t i = 0; i < states_.size(); ++i)
      if (states_[i].spec.id == vacated) pos = i;
    for (std::size_t i = 1; i <= states_.size(); ++i)
      order.push_back(states_[(pos + i) % states_.size()].spec.id);
    return order;
  }

  FrameRecord probe_frame(std::int64_t k, Probe& probe, SchedulerState& sched, SimSummary& summary,
                          bool& found) {
    const ChannelId target = probe.order[probe.next % probe.order.size()];
    ++probe.next;
    ++probe.frames;
    ++summary.probe_frames;

    const auto& ch = state_of(target);
    FrameRecord rec;
    rec.index = k;
    rec.channel = target;
    rec.decision = {FrameKind::ReactiveProbe, target};
    rec.pu_truth = ch.pu_on;
    rec.event = FrameEvent::probe;
    if (!sense(Slot::probe, k, ch)) {
      summary.interruption_gaps.push_back(probe.frames);
      sched = start_session(target, cfg_.proactive);
      found = true;
    }
    return rec;
  }

  double payload(const FrameRecord& rec) const {
    if (rec.fast_decided_h1) return 0.0;
    const auto& f = cfg_.frame;
    const bool uses_omega = rec.decision.kind != FrameKind::IbOnly;
    const double time = f.frame - f.tau - (uses_omega ? f.omega : 0.0);
    return time * (rec.pu_truth ? cfg_.c1 : cfg_.c0);
  }

  void finish_summary(SimSummary& s, std::int64_t total) const {
    s.total_frames = total;
    const auto rp = analytic_rate_params(cfg_);
    const auto r = scenario_rates(rp);
    const double T = cfg_.frame.frame;
    const auto f_oob = static_cast<double>(s.oob_frames);
    const auto f_ib = static_cast<double>(total - s.oob_frames);
    s.analytic_aggregate = T * (f_ib * r.r01 + f_oob * r.r02);
    s.analytic_aggregate_full = T * (f_ib * (r.r01 + r.r13) + f_oob * (r.r02 + r.r14));
  }

  const SimConfig& cfg_;
  SenseWindow fast_window_;
  SenseWindow fine_window_;
  double eps_fast_ = 0.0;
  double eps_fine_ = 0.0;
  std::vector<ChannelState> states_;
  std::vector<std::mt19937_64> engines_;
  std::size_t scan_cursor_ = 0;
};

}  // namespace

RateParams analytic_rate_params(const SimConfig& config) {
  RateParams p;
  p.frame = config.frame;
  p.c0 = config.c0;
  p.c1 = config.c1;
  p.prior_h0 = config.prior_h0;
  p.prior_h1 = config.prior_h1;
  const auto& sc = config.sensing;
  if (sc.mode == DetectionMode::analytic) {
    p.pd = sc.pd;
    p.pf = sc.pf;
  } else {
    const SenseWindow w(config.frame.tau, sc.f_s);
    const double eps = sc.epsilon_fast.value_or(threshold_for_false_alarm(sc.pf, w, sc.sigma_u2));
    double gamma = 0.0;
    for (const auto& c : config.channels)
      if (c.id == config.initial_channel) gamma = c.gamma;
    const DetectorParams d{sc.sigma_u2, gamma, eps};
    p.pd = prob_detection(d, w);
    p.pf = prob_false_alarm(d, w);
  }
  return p;
}

SessionResult run_session(const SimConfig& config) {
  config.validate();
  return Session(config).run();
}

ComparisonRecord compare_analytic(const SimConfig& config) {
  SimConfig with_cfg = config;
  with_cfg.proactive = true;
  SimConfig without_cfg = config;
  without_cfg.proactive = false;

  ComparisonRecord rec;
  rec.with_oob = run_session(with_cfg).summary;
  rec.without_oob = run_session(without_cfg).summary;

  const auto rp = analytic_rate_params(config);
  const double T = config.frame.frame;
  const FrameBudget with_budget{rec.with_oob.total_frames, rec.with_oob.oob_frames,
                                rec.with_oob.total_frames - rec.with_oob.oob_frames};
  const FrameBudget without_budget{rec.without_oob.total_frames, 0, rec.without_oob.total_frames};
  rec.analytic_with = T * aggregate_throughput(with_budget, rp, true);
  rec.analytic_without = T * aggregate_throughput(without_budget, rp, false);

  auto loss = [](double with, double without) { return without > 0.0 ? 1.0 - with / without : 0.0; };
  rec.realized_loss = loss(rec.with_oob.realized_aggregate, rec.without_oob.realized_aggregate);
  rec.analytic_loss = loss(rec.analytic_with, rec.analytic_without);
  for (auto g : rec.with_oob.interruption_gaps) rec.interruption_with += g;
  for (auto g : rec.without_oob.interruption_gaps) rec.interruption_without += g;
  return rec;
}

}  // namespace oobsense
