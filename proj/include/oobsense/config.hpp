// config.hpp -- JSON experiment configuration
//
// Every section is optional; omitted fields take the defaults below (frame
// 100 ms, fast sensing 1 ms, omega 1 ms, pd/pf 0.9/0.1, capacities
// 6.6582/6.6137, P(H0) 0.9, f_s 6 MHz, noise power 1). The schema is
// documented in docs/config.md.
#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "oobsense/simulation.hpp"

namespace oobsense {

/// Malformed JSON (CLI exit code 2).
class ConfigParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Well-formed JSON that violates an invariant (CLI exit code 3).
class ConfigValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// File could not be read or written (CLI exit code 4).
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct IntervalSweepParams {
  double current_t_on = 2.0;
  double current_capacity = 6.6582;
  double candidate_capacity = 6.6582;
  double t_on_min = 2.5;
  double t_on_max = 20.0;
  int steps = 20;
  std::vector<double> demands{5.0, 10.0, 20.0, 40.0, 80.0};
};

struct OmegaSweepParams {
  double omega_ms_min = 0.0;
  double omega_ms_max = 5.0;
  int steps = 51;
};

struct OnTimeSweepParams {
  double t_on_min = 1.0;
  double t_on_max = 100.0;
  int steps = 100;
  int max_i = 10;
};

struct DetectorSweepParams {
  std::vector<double> durations_ms{0.1, 0.25, 0.5, 1.0, 2.0};
  std::int64_t trials = 10000;
  double gamma_db = -15.0;
};

struct ExperimentParams {
  IntervalSweepParams interval;
  OmegaSweepParams omega;
  OnTimeSweepParams on_time;
  DetectorSweepParams detector;
};

struct LoadedConfig {
  SimConfig sim;
  ExperimentParams experiments;
};

/// The configuration an empty JSON object produces.
LoadedConfig default_config();

LoadedConfig parse_config(std::string_view text);
LoadedConfig load_config(const std::filesystem::path& path);

double db_to_linear(double db);

}  // namespace oobsense
