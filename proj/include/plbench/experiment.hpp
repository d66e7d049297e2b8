#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "plbench/checks.hpp"
#include "plbench/instances.hpp"
#include "plbench/regression.hpp"
#include "plbench/solvers.hpp"
#include "plbench/topology.hpp"

namespace plbench {

struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Flat sectioned key-value config ([section] then key = value lines,
// '#' comments). Parsing then serializing then parsing again yields the
// same structure.
class ConfigFile {
 public:
  using Section = std::vector<std::pair<std::string, std::string>>;

  static ConfigFile parse(const std::string& text);
  std::string serialize() const;

  bool has(const std::string& section, const std::string& key) const;
  std::string get_string(const std::string& section, const std::string& key,
                         const std::string& fallback = "") const;
  double get_double(const std::string& section, const std::string& key,
                    double fallback) const;
  int get_int(const std::string& section, const std::string& key, int fallback) const;
  uint64_t get_uint(const std::string& section, const std::string& key,
                    uint64_t fallback) const;
  bool get_bool(const std::string& section, const std::string& key,
                bool fallback) const;
  void set(const std::string& section, const std::string& key,
           const std::string& value);

  bool operator==(const ConfigFile& other) const { return sections_ == other.sections_; }

 private:
  std::vector<std::pair<std::string, Section>> sections_;
};

// A fully assembled problem: oracles, declared constants, initial point and
// (when the construction dictates one) the mixing matrix.
struct ProblemInstance {
  std::string name;
  LocalObjectiveSet set;
  std::vector<double> x0;
  std::optional<MixingMatrix> forced_mixing;  // some constructions carry their own
  std::optional<Graph> forced_graph;
  std::optional<ChainSpec> chain;             // for the chain-based property suites
  std::optional<NetworkSplitSpec> split;
  std::optional<int> embed_block;             // block width for block-embedded sets
  struct SpanInstanceParams {
    double L, mu, Delta;
    int n;
  };
  std::optional<SpanInstanceParams> span_params;
};

ProblemInstance make_problem(const ConfigFile& cfg);

struct SolverOutcome {
  RunRecord record;
  std::string csv_path;
  // first row index with gap <= epsilon, or -1
  int reached_at = -1;
  long long lfo_at_target = 0;
  long long rounds_at_target = 0;
  double time_at_target = 0.0;
};

struct RunOutcome {
  std::vector<SolverOutcome> solvers;
  std::string summary;
};

// Writes one CSV per solver named <out_dir>/<solver>.csv and returns the
// summary printed by the CLI.
RunOutcome cmd_run(const ConfigFile& cfg, const std::string& out_dir,
                   std::optional<uint64_t> seed_override = {});

std::string run_record_csv(const RunRecord& rec, bool f_star_known);

struct SpectralOutcome {
  double gamma = 0.0;
  double lambda2 = 0.0;
  int n = 0;
  MixingReport report;
  std::string text;
};

// Topology spec is a preset name ("linear:32") or "file:<path>" with
// edge-list lines "u v [weight]".
SpectralOutcome cmd_spectral(const std::string& topology_spec);

struct CheckOutcome {
  std::vector<CheckResult> results;
  bool all_passed = true;
  std::string text;
};

CheckOutcome cmd_check_instance(const ConfigFile& cfg);

// Self-contained SVG, log-scale y (the gap column) against the chosen
// x-axis column, one series per CSV.
void cmd_plot(const std::vector<std::string>& csv_paths, const std::string& x_axis,
              const std::string& out_svg);

}  // namespace plbench
