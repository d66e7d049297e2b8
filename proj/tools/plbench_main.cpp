#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "plbench/experiment.hpp"

namespace {

// 0 ok, 1 property-or-run failure, 2 usage error
constexpr int kOk = 0;
constexpr int kRunFailure = 1;
constexpr int kUsageError = 2;

plbench::ConfigFile load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw plbench::config_error("cannot open config file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return plbench::ConfigFile::parse(buf.str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite-sum PL optimization benchmark"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "runs";
  std::string out_file = "plot.svg";
  std::string topology_spec;
  std::string x_axis = "iter";
  std::vector<std::string> csv_paths;
  uint64_t seed = 0;
  bool seed_given = false;

  auto* run = app.add_subcommand("run", "run solvers from a config and emit CSVs");
  run->add_option("--config", config_path, "experiment config file")->required();
  run->add_option("--out", out_dir, "output directory for CSVs");
  run->add_option("--seed", seed, "override [run] seed")->each([&](const std::string&) {
    seed_given = true;
  });

  auto* spectral =
      app.add_subcommand("spectral", "report gamma, lambda2 and mixing checks");
  spectral->add_option("topology", topology_spec,
                       "linear:<n>, complete:<n>, ring:<n> or file:<path>")
      ->required();

  auto* check = app.add_subcommand("check-instance", "run the instance property suite");
  check->add_option("--config", config_path, "config naming the problem preset")
      ->required();

  auto* plot = app.add_subcommand("plot", "render CSV gap curves into an SVG");
  plot->add_option("csv", csv_paths, "metric CSV files")->required();
  plot->add_option("--x-axis", x_axis, "iter | lfo_total | comm_rounds | time_units");
  plot->add_option("--out", out_file, "output SVG path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsageError;
  }

  try {
    if (run->parsed()) {
      const auto cfg = load_config(config_path);
      const auto outcome = plbench::cmd_run(
          cfg, out_dir,
          seed_given ? std::optional<uint64_t>(seed) : std::nullopt);
      std::cout << outcome.summary;
      return kOk;
    }
    if (spectral->parsed()) {
      const auto outcome = plbench::cmd_spectral(topology_spec);
      std::cout << outcome.text;
      return outcome.report.symmetric_stochastic && outcome.report.pattern_matches_graph
                 ? kOk
                 : kRunFailure;
    }
    if (check->parsed()) {
      const auto cfg = load_config(config_path);
      const auto outcome = plbench::cmd_check_instance(cfg);
      std::cout << outcome.text;
      return outcome.all_passed ? kOk : kRunFailure;
    }
    if (plot->parsed()) {
      plbench::cmd_plot(csv_paths, x_axis, out_file);
      std::cout << "wrote " << out_file << '\n';
      return kOk;
    }
  } catch (const plbench::config_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const plbench::divergence_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRunFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRunFailure;
  }
  return kUsageError;
}
