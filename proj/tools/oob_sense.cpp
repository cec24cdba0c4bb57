// oob-sense: runs the sensing-scheme experiments and writes CSV.
//
//   oob-sense <subcommand> [--config file.json] [--out file.csv] [--seed N]
//
// Exit codes: 0 ok, 2 malformed config, 3 invalid config, 4 I/O failure.
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "oobsense/config.hpp"
#include "oobsense/experiments.hpp"

namespace {

constexpr int kExitParse = 2;
constexpr int kExitValidation = 3;
constexpr int kExitIo = 4;

void write_table(const oobsense::CsvTable& table, const std::string& path) {
  if (path.empty() || path == "-") {
    oobsense::write_csv(std::cout, table);
    return;
  }
  std::ofstream out(path);
  if (!out) throw oobsense::IoError("cannot open output file " + path);
  oobsense::write_csv(out, table);
  out.flush();
  if (!out) throw oobsense::IoError("failed writing output file " + path);
}

std::string summary_path(const std::string& out) {
  if (out.empty() || out == "-") return "-";
  std::filesystem::path p(out);
  p.replace_extension();
  return p.string() + ".summary.csv";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Out-of-band sensing experiments for cognitive radio secondary users"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  std::optional<std::uint64_t> seed;

  for (auto kind :
       {oobsense::ExperimentKind::fig2_interval_sweep, oobsense::ExperimentKind::fig3_avg_throughput_pu,
        oobsense::ExperimentKind::fig4_avg_throughput_nopu,
        oobsense::ExperimentKind::fig5_aggregate_sweep, oobsense::ExperimentKind::validate_detector,
        oobsense::ExperimentKind::simulate}) {
    auto* sub = app.add_subcommand(std::string(oobsense::to_string(kind)));
    sub->add_option("--config", config_path, "JSON configuration (defaults when omitted)");
    sub->add_option("--out", out_path, "output CSV path ('-' or omitted: stdout)");
    sub->add_option("--seed", seed, "override session.seed");
  }

  CLI11_PARSE(app, argc, argv);

  try {
    oobsense::ExperimentSpec spec;
    spec.kind = *oobsense::parse_experiment_kind(app.get_subcommands().front()->get_name());
    spec.config = config_path.empty() ? oobsense::default_config() : oobsense::load_config(config_path);
    if (seed) spec.config.sim.seed = *seed;

    const auto result = oobsense::run_experiment(spec);
    write_table(result.table, out_path);
    if (result.summary) {
      const auto path = summary_path(out_path);
      if (path == "-") std::cout << '\n';
      write_table(*result.summary, path);
    }
  } catch (const oobsense::ConfigParseError& e) {
    std::cerr << "config parse error: " << e.what() << '\n';
    return kExitParse;
  } catch (const oobsense::ConfigValidationError& e) {
    std::cerr << "config validation error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const oobsense::IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
