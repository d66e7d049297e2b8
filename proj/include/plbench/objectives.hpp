#pragma once

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "plbench/numkit.hpp"

namespace plbench {

struct oracle_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A finite-sum objective f = (1/n) sum f_i exposed through per-agent
// value/gradient oracles, with whatever constants are known declared
// alongside. The declared smoothness is the mean-squared one:
//   (1/n) sum_i ||grad f_i(x) - grad f_i(y)||^2 <= L^2 ||x - y||^2.
struct LocalObjectiveSet {
  int n = 0;
  int d = 0;
  std::function<double(int, std::span<const double>)> value;
  std::function<void(int, std::span<const double>, std::span<double>)> gradient;

  std::optional<double> smoothness;    // L
  std::optional<double> pl_constant;   // mu
  std::optional<double> f_star;
  std::map<std::string, std::string> metadata;

  double mean_value(std::span<const double> x) const;
  // writes (1/n) sum_i grad f_i(x); diagnostic, never metered
  void mean_gradient(std::span<const double> x, std::span<double> out) const;
};

// Per-agent LFO counters plus communication/time accounting. One
// computation step costs one time unit no matter how many agents ran in
// parallel inside it; one communication round costs tau.
class OracleMeter {
 public:
  OracleMeter(int n, double tau) : lfo_(n, 0), tau_(tau) {}

  void record_lfo(int agent) { lfo_.at(agent) += 1; }
  void record_computation_step() { steps_ += 1; }
  void record_comm_rounds(int k) { rounds_ += k; }
  void record_comm_round() { record_comm_rounds(1); }

  long long lfo_total() const;
  long long lfo_for(int agent) const { return lfo_.at(agent); }
  long long comm_rounds() const { return rounds_; }
  long long computation_steps() const { return steps_; }
  double time_units() const { return static_cast<double>(steps_) + tau_ * rounds_; }
  double tau() const { return tau_; }

 private:
  std::vector<long long> lfo_;
  long long rounds_ = 0;
  long long steps_ = 0;
  double tau_ = 0.0;
};

// The only metered path to a gradient.
void metered_gradient(const LocalObjectiveSet& set, OracleMeter& meter, int agent,
                      std::span<const double> x, std::span<double> out);

// f(xbar) - f_star; requires a known optimum. Diagnostic, unmetered.
double mean_objective_gap(const LocalObjectiveSet& set, std::span<const double> xbar);

}  // namespace plbench
