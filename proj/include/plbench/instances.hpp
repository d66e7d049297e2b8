#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "plbench/objectives.hpp"
#include "plbench/topology.hpp"

namespace plbench {

struct construction_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// PL scale of the chain family: g over a chain with block length T is
// 1/(kChainA * T)-PL.
inline constexpr double kChainA = 19708.0;

// Piecewise-quadratic penalty with a flat spot at theta; 33-smooth.
double psi_value(double theta, double x);
double psi_grad(double theta, double x);

// Coordinate chain over R^{block_len * blocks}, minimized at `target`
// (entry k*T+tau is (7/8)^k). The gradient can grow the support of a
// sparse point by at most one coordinate.
struct ChainSpec {
  int block_len = 0;  // T
  int blocks = 0;     // t
  std::vector<double> target;

  int dim() const { return block_len * blocks; }
};

ChainSpec make_chain_spec(int block_len, int blocks);

// g(x) = q(b - x) + sum_i psi_{b_i}(b_i - x_i); min value 0 at x = b.
double g_value(const ChainSpec& spec, std::span<const double> x);
void g_grad(const ChainSpec& spec, std::span<const double> x, std::span<double> out);

// The raw quadratic coupling q and its two-piece split (even block_len
// only): q1 + q2 = q identically. Arguments are the plain z, not b - x.
double chain_q(const ChainSpec& spec, std::span<const double> z);
double chain_q1(const ChainSpec& spec, std::span<const double> z);
double chain_q2(const ChainSpec& spec, std::span<const double> z);

// Composed pieces used by the network split: values/grads as functions of
// x, i.e. q1(b-x), q2(b-x) and r(x) = sum_i psi_{b_i}(b_i - x_i).
double q1_at(const ChainSpec& spec, std::span<const double> x);
double q2_at(const ChainSpec& spec, std::span<const double> x);
double r_at(const ChainSpec& spec, std::span<const double> x);
void q1_at_grad_accum(const ChainSpec& spec, std::span<const double> x, double coeff,
                      std::span<double> out);
void q2_at_grad_accum(const ChainSpec& spec, std::span<const double> x, double coeff,
                      std::span<double> out);
void r_grad_accum(const ChainSpec& spec, std::span<const double> x, double coeff,
                  std::span<double> out);

// A single scalar objective with whatever constants are known.
struct ScalarField {
  int dim = 0;
  std::function<double(std::span<const double>)> value;
  std::function<void(std::span<const double>, std::span<double>)> grad;
  std::optional<double> smoothness;   // Lhat
  std::optional<double> pl_constant;  // muhat
  std::optional<double> star;         // inf value
};

ScalarField make_g_field(const ChainSpec& spec);

// alpha * base(beta * x): constants become (alpha beta^2 L, alpha beta^2 mu),
// the optimum scales by alpha.
ScalarField scale_field(const ScalarField& base, double alpha, double beta);

// f_i depends only on coordinates of block i; the set over R^{dim*n} is
// (Lhat/sqrt(n))-mean-squared smooth and f is (muhat/n)-PL.
LocalObjectiveSet block_embed(const ScalarField& base, int n);

// f_i(x) = alpha * set_i(beta * x) applied to every local objective.
LocalObjectiveSet scale_objective_set(const LocalObjectiveSet& set, double alpha,
                                      double beta);

// Chain instance sized so the assembled set is L-mean-squared smooth with f
// mu-PL and f(0) - f* <= Delta; dimension n * T * t.
LocalObjectiveSet ifo_hard_instance(double L, double mu, int n, double Delta,
                                    double eps);

// f_i(x) = c <u_i, x> + (L/2)||x||^2 over R^{2n^2}; f* = -L Delta / L = -Delta.
LocalObjectiveSet linear_span_instance(double L, double mu, int n, double Delta);

// Node split for the three-case local objectives: C and the set of nodes
// at hop distance >= sigma from C.
struct NetworkSplitSpec {
  Graph graph;
  std::vector<int> c_nodes;
  int sigma = 0;
  std::vector<int> c_sigma;
};

NetworkSplitSpec make_network_split(Graph graph, std::vector<int> c_nodes, int sigma);

// h_i = r/n + q1(b-.)/|C| on C, r/n + q2(b-.)/|C_sigma| on C_sigma, r/n
// elsewhere; the average is g/n.
LocalObjectiveSet h_set(const NetworkSplitSpec& split, const ChainSpec& spec);

struct ExperimentInstance {
  LocalObjectiveSet set;
  ChainSpec chain;
  int sigma = 29;
  double alpha = 0.0;
  double beta = 0.0;
  // gap of the unit-weight path on n nodes, for reference
  double path_gamma = 0.0;
};

// The benchmark hard instance: n-agent path split with T=2, t=72, C={1},
// sigma=29, scaled by alpha=16/3, beta=sqrt(12a). Needs n >= 30.
ExperimentInstance experiment_instance(int n);

struct DfoInstance {
  LocalObjectiveSet set;
  MixingMatrix mixing;
  Graph graph;
  int branch_m = 0;
  ChainSpec chain;
  int sigma = 0;
};

// Hard instance paired with a mixing matrix of spectral gap exactly gamma.
DfoInstance dfo_hard_instance(double L, double mu, double gamma, double Delta,
                              double eps);

}  // namespace plbench
