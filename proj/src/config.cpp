#include "oobsense/config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>

#include "json.hpp"

namespace oobsense {

using nlohmann::json;

namespace {

[[noreturn]] void invalid(const std::string& what) { throw ConfigValidationError(what); }

// Reads typed fields from one JSON object and rejects keys it does not know.
class Section {
 public:
  Section(const json& parent, const char* name, std::string path)
      : path_(std::move(path)) {
    if (!parent.contains(name)) return;
    node_ = &parent.at(name);
    if (!node_->is_object()) invalid(path_ + " must be an object");
  }
  Section(const json& node, std::string path) : node_(&node), path_(std::move(path)) {
    if (!node.is_object()) invalid(path_ + " must be an object");
  }

  bool present() const { return node_ != nullptr; }
  const std::string& path() const { return path_; }

  void only(std::initializer_list<const char*> keys) const {
    if (!node_) return;
    for (const auto& [k, v] : node_->items()) {
      bool known = false;
      for (const char* allowed : keys) known = known || k == allowed;
      if (!known) invalid("unknown key " + (path_.empty() ? k : path_ + "." + k));
    }
  }

  template <typename T>
  void read(const char* key, T& out) const {
    if (!node_ || !node_->contains(key)) return;
    const json& v = node_->at(key);
    try {
      if constexpr (std::is_same_v<T, bool>) {
        if (!v.is_boolean()) invalid(path_ + "." + key + " must be a boolean");
      } else if constexpr (std::is_arithmetic_v<T>) {
        if (!v.is_number()) invalid(path_ + "." + key + " must be a number");
        if constexpr (std::is_integral_v<T>) {
          if (!v.is_number_integer()) invalid(path_ + "." + key + " must be an integer");
        }
      }
      out = v.get<T>();
    } catch (const json::exception& e) {
      invalid(path_ + "." + key + ": " + e.what());
    }
    if constexpr (std::is_floating_point_v<T>) {
      if (!std::isfinite(out)) invalid(path_ + "." + key + " must be finite");
    }
  }

  bool has(const char* key) const { return node_ && node_->contains(key); }
  const json* node() const { return node_; }

 private:
  const json* node_ = nullptr;
  std::string path_;
};

ChannelSpec default_channel(ChannelId id) {
  ChannelSpec c;
  c.id = id;
  c.capacity = 6.6582;
  c.gamma = db_to_linear(-15.0);
  c.prior_h0 = 0.9;
  c.prior_h1 = 0.1;
  c.activity.kind = ActivityKind::exponential;
  c.activity.mean_on = 1.0;
  c.activity.mean_off = 9.0;
  return c;
}

// Priors: either may be given alone; both must then sum to one.
void read_priors(const Section& s, double& h0, double& h1) {
  const bool has0 = s.has("prior_h0");
  const bool has1 = s.has("prior_h1");
  s.read("prior_h0", h0);
  s.read("prior_h1", h1);
  if (has0 && !has1) h1 = 1.0 - h0;
  if (has1 && !has0) h0 = 1.0 - h1;
  if (std::abs(h0 + h1 - 1.0) > 1e-12)
    invalid(s.path() + ": prior_h0 + prior_h1 must sum to 1 (got " + std::to_string(h0) + " + " +
            std::to_string(h1) + ")");
}

ChannelSpec parse_channel(const json& node, std::size_t index) {
  const Section s(node, "channels[" + std::to_string(index) + "]");
  s.only({"id", "capacity", "gamma", "gamma_db", "prior_h0", "prior_h1", "activity"});
  if (!s.has("id")) invalid(s.path() + ".id is required");
  ChannelSpec c = default_channel(0);
  s.read("id", c.id);
  s.read("capacity", c.capacity);
  if (s.has("gamma") && s.has("gamma_db")) invalid(s.path() + ": give gamma or gamma_db, not both");
  if (s.has("gamma_db")) {
    double db = 0.0;
    s.read("gamma_db", db);
    c.gamma = db_to_linear(db);
  }
  s.read("gamma", c.gamma);
  read_priors(s, c.prior_h0, c.prior_h1);

  const Section a(node, "activity", s.path() + ".activity");
  a.only({"kind", "mean_on_s", "mean_off_s", "initial_on", "phase_s"});
  if (a.has("kind")) {
    std::string kind;
    a.read("kind", kind);
    if (kind == "fixed")
      c.activity.kind = ActivityKind::fixed;
    else if (kind == "exponential")
      c.activity.kind = ActivityKind::exponential;
    else
      invalid(a.path() + ".kind must be \"fixed\" or \"exponential\"");
  }
  a.read("mean_on_s", c.activity.mean_on);
  a.read("mean_off_s", c.activity.mean_off);
  a.read("initial_on", c.activity.initial_on);
  a.read("phase_s", c.activity.phase);
  return c;
}

void parse_experiments(const json& root, ExperimentParams& ep) {
  const Section s(root, "experiments", "experiments");
  s.only({"fig2", "omega_sweep", "fig5", "validate_detector"});
  if (!s.present()) return;

  const Section f2(*s.node(), "fig2", "experiments.fig2");
  f2.only({"current_t_on_s", "current_capacity", "candidate_capacity", "t_on_min_s", "t_on_max_s",
           "steps", "demands"});
  auto& iv = ep.interval;
  f2.read("current_t_on_s", iv.current_t_on);
  f2.read("current_capacity", iv.current_capacity);
  f2.read("candidate_capacity", iv.candidate_capacity);
  f2.read("t_on_min_s", iv.t_on_min);
  f2.read("t_on_max_s", iv.t_on_max);
  f2.read("steps", iv.steps);
  f2.read("demands", iv.demands);

  const Section om(*s.node(), "omega_sweep", "experiments.omega_sweep");
  om.only({"omega_ms_min", "omega_ms_max", "steps"});
  om.read("omega_ms_min", ep.omega.omega_ms_min);
  om.read("omega_ms_max", ep.omega.omega_ms_max);
  om.read("steps", ep.omega.steps);

  const Section f5(*s.node(), "fig5", "experiments.fig5");
  f5.only({"t_on_min_s", "t_on_max_s", "steps", "max_i"});
  f5.read("t_on_min_s", ep.on_time.t_on_min);
  f5.read("t_on_max_s", ep.on_time.t_on_max);
  f5.read("steps", ep.on_time.steps);
  f5.read("max_i", ep.on_time.max_i);

  const Section vd(*s.node(), "validate_detector", "experiments.validate_detector");
  vd.only({"durations_ms", "trials", "gamma_db"});
  vd.read("durations_ms", ep.detector.durations_ms);
  vd.read("trials", ep.detector.trials);
  vd.read("gamma_db", ep.detector.gamma_db);
}

void validate_experiments(const LoadedConfig& cfg) {
  const auto& iv = cfg.experiments.interval;
  if (iv.steps < 1) invalid("experiments.fig2.steps must be >= 1");
  if (iv.demands.empty()) invalid("experiments.fig2.demands must not be empty");
  for (double d : iv.demands)
    if (!(d > 0.0) || !std::isfinite(d)) invalid("experiments.fig2.demands must be positive");
  if (!(iv.current_t_on >= 0.0)) invalid("experiments.fig2.current_t_on_s must be >= 0");
  if (!(iv.current_capacity > 0.0) || !(iv.candidate_capacity > 0.0))
    invalid("experiments.fig2 capacities must be > 0");
  if (!(iv.t_on_min > iv.current_t_on))
    invalid("experiments.fig2.t_on_min_s must exceed current_t_on_s");
  if (!(iv.t_on_max >= iv.t_on_min)) invalid("experiments.fig2.t_on_max_s must be >= t_on_min_s");

  const auto& om = cfg.experiments.omega;
  if (om.steps < 1) invalid("experiments.omega_sweep.steps must be >= 1");
  if (!(om.omega_ms_min >= 0.0) || !(om.omega_ms_max >= om.omega_ms_min))
    invalid("experiments.omega_sweep needs 0 <= omega_ms_min <= omega_ms_max");
  const auto& f = cfg.sim.frame;
  if (!(f.tau + om.omega_ms_max * 1e-3 < f.frame))
    invalid("experiments.omega_sweep: tau + omega_ms_max must stay below the frame duration");

  const auto& ot = cfg.experiments.on_time;
  if (ot.steps < 1) invalid("experiments.fig5.steps must be >= 1");
  if (ot.max_i < 1) invalid("experiments.fig5.max_i must be >= 1");
  if (!(ot.t_on_min > 0.0) || !(ot.t_on_max >= ot.t_on_min))
    invalid("experiments.fig5 needs 0 < t_on_min_s <= t_on_max_s");

  const auto& vd = cfg.experiments.detector;
  if (vd.durations_ms.empty()) invalid("experiments.validate_detector.durations_ms must not be empty");
  for (double d : vd.durations_ms) {
    if (!(d > 0.0) || !std::isfinite(d))
      invalid("experiments.validate_detector.durations_ms must be positive");
    if (d * 1e-3 * cfg.sim.sensing.f_s < 1.0)
      invalid("experiments.validate_detector: a duration holds no complete sample");
  }
  if (vd.trials < 1) invalid("experiments.validate_detector.trials must be >= 1");
}

}  // namespace

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

LoadedConfig default_config() {
  LoadedConfig cfg;
  cfg.sim.frame = FrameConfig{0.1, 1e-3, 1e-3};
  cfg.sim.channels = {default_channel(1), default_channel(2), default_channel(3)};
  cfg.sim.initial_channel = 1;
  cfg.sim.demand = TrafficDemand{12.0};
  return cfg;
}

LoadedConfig parse_config(std::string_view text) {
  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ConfigParseError(std::string("malformed JSON: ") + e.what());
  }
  if (!root.is_object()) throw ConfigParseError("configuration root must be a JSON object");

  LoadedConfig cfg = default_config();
  auto& sim = cfg.sim;

  const Section top(root, "");
  top.only({"frame", "sensing", "rates", "channels", "session", "experiments"});

  const Section fr(root, "frame", "frame");
  fr.only({"T_ms", "tau_ms", "omega_ms"});
  double t_ms = sim.frame.frame * 1e3, tau_ms = sim.frame.tau * 1e3, omega_ms = sim.frame.omega * 1e3;
  fr.read("T_ms", t_ms);
  fr.read("tau_ms", tau_ms);
  fr.read("omega_ms", omega_ms);
  sim.frame = FrameConfig{t_ms * 1e-3, tau_ms * 1e-3, omega_ms * 1e-3};

  const Section se(root, "sensing", "sensing");
  se.only({"mode", "pd", "pf", "pd_fine", "pf_fine", "sigma_u2", "f_s_hz", "epsilon_fast",
           "epsilon_fine"});
  if (se.has("mode")) {
    std::string mode;
    se.read("mode", mode);
    if (mode == "analytic")
      sim.sensing.mode = DetectionMode::analytic;
    else if (mode == "montecarlo")
      sim.sensing.mode = DetectionMode::montecarlo;
    else
      invalid("sensing.mode must be \"analytic\" or \"montecarlo\"");
  }
  se.read("pd", sim.sensing.pd);
  se.read("pf", sim.sensing.pf);
  sim.sensing.pd_fine = sim.sensing.pd;
  sim.sensing.pf_fine = sim.sensing.pf;
  se.read("pd_fine", sim.sensing.pd_fine);
  se.read("pf_fine", sim.sensing.pf_fine);
  se.read("sigma_u2", sim.sensing.sigma_u2);
  se.read("f_s_hz", sim.sensing.f_s);
  if (se.has("epsilon_fast")) {
    double e = 0.0;
    se.read("epsilon_fast", e);
    sim.sensing.epsilon_fast = e;
  }
  if (se.has("epsilon_fine")) {
    double e = 0.0;
    se.read("epsilon_fine", e);
    sim.sensing.epsilon_fine = e;
  }

  const Section ra(root, "rates", "rates");
  ra.only({"c0", "c1", "prior_h0", "prior_h1"});
  ra.read("c0", sim.c0);
  ra.read("c1", sim.c1);
  read_priors(ra, sim.prior_h0, sim.prior_h1);

  if (root.contains("channels")) {
    const json& arr = root.at("channels");
    if (!arr.is_array()) invalid("channels must be an array");
    sim.channels.clear();
    for (std::size_t i = 0; i < arr.size(); ++i) sim.channels.push_back(parse_channel(arr[i], i));
  }

  const Section ss(root, "session", "session");
  ss.only({"initial_channel", "demand", "frames", "seed", "scan_noise", "scan_limit", "proactive"});
  ss.read("initial_channel", sim.initial_channel);
  ss.read("demand", sim.demand.d_su_tot);
  ss.read("frames", sim.frames);
  ss.read("seed", sim.seed);
  ss.read("scan_noise", sim.scan_noise);
  ss.read("scan_limit", sim.scan_limit);
  ss.read("proactive", sim.proactive);

  parse_experiments(root, cfg.experiments);

  try {
    sim.validate();
  } catch (const std::invalid_argument& e) {
    invalid(e.what());
  }
  validate_experiments(cfg);
  return cfg;
}

LoadedConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("failed reading config file " + path.string());
  return parse_config(buf.str());
}

}  // namespace oobsense
