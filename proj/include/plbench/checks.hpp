#pragma once

#include <string>
#include <vector>

#include "plbench/instances.hpp"
#include "plbench/objectives.hpp"

namespace plbench {

struct CheckResult {
  std::string name;
  bool passed = false;
  double worst = 0.0;  // worst observed residual/ratio, for the report
  std::string detail;
};

struct CheckOptions {
  double box_half_width = 2.0;  // samples drawn from [-w, w]^d
  int gradient_points = 100;
  int pair_samples = 1000;
  int zero_chain_trials = 200;
  uint64_t seed = 20240817;
};

// ||fd - analytic|| / (1 + ||analytic||) <= tol at sampled points.
CheckResult check_gradient_matches_fd(const LocalObjectiveSet& set,
                                      const CheckOptions& opt = {},
                                      double tol = 1e-6);

// (1/n) sum_i ||grad f_i(x) - grad f_i(y)||^2 <= L^2 ||x-y||^2 over sampled pairs.
CheckResult check_mean_squared_smoothness(const LocalObjectiveSet& set,
                                          const CheckOptions& opt = {},
                                          double slack = 1e-9);

// ||grad f(x)||^2 >= 2 mu (f(x) - f_star) over sampled points.
CheckResult check_pl_inequality(const LocalObjectiveSet& set,
                                const CheckOptions& opt = {},
                                double slack = 1e-9);

// For sparse x with support in {1..k}, the gradient support stays within
// {1..k+1}; block-wise when the set embeds blocks.
CheckResult check_zero_chain(const ChainSpec& spec, const CheckOptions& opt = {});
CheckResult check_zero_chain_blockwise(const LocalObjectiveSet& set, int block_dim,
                                       const CheckOptions& opt = {});

// q1(b-x) + q2(b-x) + r(x) == g(x) at random points.
CheckResult check_split_identity(const ChainSpec& spec, const CheckOptions& opt = {});

// (1/n) sum_i h_i == g/n at random points.
CheckResult check_h_average_identity(const NetworkSplitSpec& split,
                                     const ChainSpec& spec,
                                     const CheckOptions& opt = {});

// psi gradient against central differences around the branch boundaries.
CheckResult check_psi_boundaries(double theta, double tol = 1e-6);

// f(x) - f* == Delta (1 - k/n) when x fills the blocks touched by k agents
// with -c/(nL); checked for every k in 0..n.
CheckResult check_span_gap(double L, double mu, int n, double Delta);

std::vector<CheckResult> standard_instance_checks(const LocalObjectiveSet& set,
                                                  const CheckOptions& opt = {});

}  // namespace plbench
