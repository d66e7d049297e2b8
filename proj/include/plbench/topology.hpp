#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "plbench/numkit.hpp"

namespace plbench {

struct topology_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Undirected connected graph on nodes 0..n-1. Self-loops are implicit.
class Graph {
 public:
  Graph() = default;  // empty placeholder; build real graphs via the named ctors
  Graph(int n, std::vector<std::pair<int, int>> edges);

  static Graph path(int n);
  static Graph complete(int n);
  static Graph ring(int n);
  // "linear:<n>", "complete:<n>", "ring:<n>"
  static Graph from_preset(const std::string& preset);
  // lines of "u v [weight]", 1-based; weights returned separately
  static Graph from_edge_list(const std::string& text,
                              std::map<std::pair<int, int>, double>* weights = nullptr);

  int size() const { return n_; }
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }
  const std::vector<std::vector<int>>& neighbors() const { return adj_; }
  bool has_edge(int u, int v) const;

  bool connected() const;
  // min hop distance from any source; unreachable nodes get -1
  std::vector<int> bfs_distances(const std::vector<int>& sources) const;

 private:
  int n_ = 0;
  std::vector<std::pair<int, int>> edges_;
  std::vector<std::vector<int>> adj_;
};

// Symmetric doubly stochastic gossip matrix with cached spectrum.
struct MixingMatrix {
  DenseMatrix w;
  double lambda2 = 0.0;  // second-largest eigenvalue, clamped to [0,1]
  double gap = 1.0;      // 1 - lambda2

  int size() const { return w.rows(); }
};

using EdgeWeights = std::map<std::pair<int, int>, double>;

// W = I - R / lambda_max(R) with R the weighted graph Laplacian.
MixingMatrix laplacian_mixing(const Graph& g, const EdgeWeights& weights = {});

// (1 - cos(pi/m)) / (1 + cos(pi/m)); the exact gap of the unit-weight path of m nodes.
double iota(int m);

// Largest m with iota(m) >= gamma; at least 2.
int iota_branch_index(double gamma);

struct MixingForGapResult {
  MixingMatrix mixing;
  Graph graph;
  double weight_l = 0.0;  // interpolation weight used on the adjusted edge
};

// Builds a mixing matrix whose measured spectral gap matches gamma within tol:
// a weighted path (first edge weight 1-l) when gamma <= iota(3), else a
// weighted 3-node complete graph (edge (1,3) weight l). Deterministic.
MixingForGapResult mixing_for_gap(double gamma, double tol = 1e-10);

struct MixingReport {
  bool symmetric_stochastic = false;  // W = W^T, W1 = 1, 0 <= eig <= 1
  bool pattern_matches_graph = false;
  bool gap_at_least = false;
  double symmetry_residual = 0.0;
  double row_sum_residual = 0.0;
  double min_eigenvalue = 0.0;
  double max_eigenvalue = 0.0;
  double measured_gap = 0.0;

  bool all_pass() const {
    return symmetric_stochastic && pattern_matches_graph && gap_at_least;
  }
};

MixingReport validate_mixing(const MixingMatrix& m, const Graph& g,
                             double declared_gamma = 0.0);

}  // namespace plbench
