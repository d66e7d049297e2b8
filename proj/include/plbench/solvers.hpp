#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "plbench/gossip.hpp"
#include "plbench/objectives.hpp"
#include "plbench/topology.hpp"

namespace plbench {

struct divergence_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SolverParams {
  double eta = 0.0;
  int iterations = 0;      // T
  int gossip_rounds = 0;   // K per AccGossip call
  double restart_prob = 1.0;  // p; the estimator refresh probability
  int minibatch = 1;          // b; expected fresh evaluations when not refreshing
  uint64_t seed = 0;
  // the per-agent sampling probability q is fixed at 1/n
};

struct RunRow {
  int iter = 0;
  long long lfo_total = 0;
  long long comm_rounds = 0;
  double time_units = 0.0;
  double fvalue = 0.0;
  double gap = std::numeric_limits<double>::quiet_NaN();
  double grad_norm = 0.0;
  double consensus_err = 0.0;
  double lyap_u = std::numeric_limits<double>::quiet_NaN();
  double lyap_v = std::numeric_limits<double>::quiet_NaN();
  double lyap_c = std::numeric_limits<double>::quiet_NaN();
  double lyap_phi = std::numeric_limits<double>::quiet_NaN();
};

struct RunRecord {
  std::string solver;
  std::vector<RunRow> rows;  // iterations + 1 entries, starting at iteration 0
  std::vector<double> final_mean;    // xbar at the last iteration
  std::vector<double> final_output;  // a uniformly sampled final local iterate
  int output_agent = 0;
  double eta = 0.0;
  int gossip_rounds = 0;
  double rho = 0.0;      // gossip contraction factor used for diagnostics
  double lambda2 = 0.0;
};

// Row means surrounding one tracking update, for invariant assertions.
struct TrackingObservation {
  int iter = 0;  // the update that produced this state
  std::vector<double> xbar_prev, sbar_prev;
  std::vector<double> xbar, sbar, gbar;
};

struct RunOptions {
  bool lyapunov = false;  // fill the U/V/C/Phi columns (needs f_star and L)
  double divergence_factor = 1e12;
  // stop once gap <= this (needs f_star); the record then holds the rows
  // actually performed
  std::optional<double> stop_at_gap;
  // invoked after every tracking-solver iteration when set
  std::function<void(const TrackingObservation&)> observer;
};

RunRecord gd(const LocalObjectiveSet& set, std::span<const double> x0, double eta,
             int iterations, OracleMeter& meter, const RunOptions& opt = {});

// Same iterate map as gd; server round-trip metering (one round per step).
RunRecord cgd(const LocalObjectiveSet& set, std::span<const double> x0, double eta,
              int iterations, OracleMeter& meter, const RunOptions& opt = {});

RunRecord dgd_gt(const LocalObjectiveSet& set, const MixingMatrix& w,
                 std::span<const double> xbar0, double eta, int gossip_rounds,
                 int iterations, OracleMeter& meter, uint64_t seed = 0,
                 const RunOptions& opt = {});

RunRecord drone(const LocalObjectiveSet& set, const MixingMatrix& w,
                std::span<const double> xbar0, const SolverParams& params,
                OracleMeter& meter, const RunOptions& opt = {});

struct DefaultParamsResult {
  SolverParams params;
  bool clamped = false;
  std::string note;
};

// p = 1/(min{sqrt(n), kappa}+1) clamped into [1/(n+1), 1/2], b = ceil((1-p)/p),
// eta = min{1/(20L), p/(2mu)}, K from the round-count rule, T = ceil(log(Phi0/eps)/(mu eta)).
DefaultParamsResult drone_default_params(int n, double L, double mu, double gamma,
                                         double phi0, double eps);

struct LyapunovComponents {
  double u = 0.0;
  double v = 0.0;
  double c = 0.0;
  double phi = 0.0;
};

// Single-trajectory evaluation of the four diagnostics; unmetered. `gap`
// is f(xbar) - f_star, the first term of phi.
LyapunovComponents lyapunov_components(const LocalObjectiveSet& set,
                                       const DenseMatrix& x, const DenseMatrix& s,
                                       const DenseMatrix& g, double eta, double p,
                                       double rho, double L, double gap);

}  // namespace plbench
