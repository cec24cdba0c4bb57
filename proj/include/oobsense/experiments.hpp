// experiments.hpp -- parameter sweeps and simulation runs behind the CLI
#pragma once

#include <optional>
#include <string_view>

#include "oobsense/config.hpp"
#include "oobsense/csv.hpp"

namespace oobsense {

enum class ExperimentKind {
  fig2_interval_sweep,
  fig3_avg_throughput_pu,
  fig4_avg_throughput_nopu,
  fig5_aggregate_sweep,
  validate_detector,
  simulate,
};

std::optional<ExperimentKind> parse_experiment_kind(std::string_view name);
std::string_view to_string(ExperimentKind kind);

struct ExperimentSpec {
  ExperimentKind kind = ExperimentKind::simulate;
  LoadedConfig config = default_config();
};

struct ExperimentResult {
  CsvTable table;
  std::optional<CsvTable> summary;  // simulate only
};

/// Rate parameters for the closed-form sweeps, taken from the config.
RateParams sweep_rate_params(const LoadedConfig& config);

/// Runs one experiment. Sweep points are evaluated in parallel; rows come out
/// in sweep order.
ExperimentResult run_experiment(const ExperimentSpec& spec);

/// Frame-by-frame CSV of a session.
CsvTable frame_table(const SessionResult& session);

/// One summary row per session; `label` distinguishes paired runs.
CsvTable summary_table(const std::vector<std::pair<std::string, SimSummary>>& sessions);

/// Evenly spaced points from lo to hi inclusive; a single point is lo.
std::vector<double> linspace(double lo, double hi, int steps);

}  // namespace oobsense
