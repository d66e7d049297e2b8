#include "plbench/topology.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <sstream>

namespace plbench {

Graph::Graph(int n, std::vector<std::pair<int, int>> edges)
    : n_(n), edges_(std::move(edges)), adj_(n) {
  if (n < 1) throw topology_error("graph needs at least one node");
  for (auto& [u, v] : edges_) {
    if (u > v) std::swap(u, v);
    if (u < 0 || v >= n_ || u == v)
      throw topology_error("edge endpoints out of range or self-loop");
  }
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
  for (auto [u, v] : edges_) {
    adj_[u].push_back(v);
    adj_[v].push_back(u);
  }
}

Graph Graph::path(int n) {
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
  return Graph(n, std::move(e));
}

Graph Graph::complete(int n) {
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) e.emplace_back(i, j);
  return Graph(n, std::move(e));
}

Graph Graph::ring(int n) {
  if (n < 3) return path(n);
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i < n; ++i) e.emplace_back(i, (i + 1) % n);
  return Graph(n, std::move(e));
}

Graph Graph::from_preset(const std::string& preset) {
  const auto colon = preset.find(':');
  if (colon == std::string::npos)
    throw topology_error("topology preset must look like linear:<n>");
  const std::string kind = preset.substr(0, colon);
  int n = 0;
  try {
    n = std::stoi(preset.substr(colon + 1));
  } catch (...) {
    throw topology_error("bad node count in topology preset: " + preset);
  }
  if (n < 1) throw topology_error("topology preset needs n >= 1");
  if (kind == "linear" || kind == "path") return path(n);
  if (kind == "complete") return complete(n);
  if (kind == "ring") return ring(n);
  throw topology_error("unknown topology preset: " + kind);
}

Graph Graph::from_edge_list(const std::string& text, EdgeWeights* weights) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::pair<int, int>> edges;
  EdgeWeights w;
  int max_node = 0;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    int u, v;
    if (!(ls >> u)) continue;  // blank line
    if (!(ls >> v))
      throw topology_error("edge list line " + std::to_string(line_no) +
                           ": expected 'u v [weight]'");
    double wt = 1.0;
    ls >> wt;
    if (u < 1 || v < 1)
      throw topology_error("edge list line " + std::to_string(line_no) +
                           ": nodes are 1-based");
    max_node = std::max({max_node, u, v});
    edges.emplace_back(u - 1, v - 1);
    int a = u - 1, b = v - 1;
    if (a > b) std::swap(a, b);
    w[{a, b}] = wt;
  }
  if (edges.empty()) throw topology_error("edge list is empty");
  if (weights) *weights = std::move(w);
  return Graph(max_node, std::move(edges));
}

bool Graph::has_edge(int u, int v) const {
  if (u > v) std::swap(u, v);
  return std::binary_search(edges_.begin(), edges_.end(), std::make_pair(u, v));
}

bool Graph::connected() const {
  auto dist = bfs_distances({0});
  return std::none_of(dist.begin(), dist.end(), [](int d) { return d < 0; });
}

std::vector<int> Graph::bfs_distances(const std::vector<int>& sources) const {
  std::vector<int> dist(n_, -1);
  std::deque<int> queue;
  for (int s : sources) {
    if (s < 0 || s >= n_) throw topology_error("bfs source out of range");
    dist[s] = 0;
    queue.push_back(s);
  }
  while (!queue.empty()) {
    const int u = queue.front();
    queue.pop_front();
    for (int v : adj_[u]) {
      if (dist[v] < 0) {
        dist[v] = dist[u] + 1;
        queue.push_back(v);
      }
    }
  }
  return dist;
}

namespace {

MixingMatrix mixing_from_laplacian(const Graph& g, const EdgeWeights& weights) {
  const int n = g.size();
  DenseMatrix lap(n, n);
  for (auto [u, v] : g.edges()) {
    double w = 1.0;
    if (!weights.empty()) {
      auto it = weights.find({u, v});
      if (it != weights.end()) w = it->second;
    }
    if (w < 0.0) throw topology_error("edge weights must be nonnegative");
    lap(u, v) -= w;
    lap(v, u) -= w;
    lap(u, u) += w;
    lap(v, v) += w;
  }

  // connectivity of the weighted graph: zero-weight edges do not count
  {
    std::vector<std::vector<int>> adj(n);
    for (auto [u, v] : g.edges()) {
      if (lap(u, v) != 0.0) {
        adj[u].push_back(v);
        adj[v].push_back(u);
      }
    }
    std::vector<int> seen(n, 0);
    std::deque<int> q{0};
    seen[0] = 1;
    int count = 1;
    while (!q.empty()) {
      int u = q.front();
      q.pop_front();
      for (int v : adj[u])
        if (!seen[v]) {
          seen[v] = 1;
          ++count;
          q.push_back(v);
        }
    }
    if (count != n) throw topology_error("weighted graph is disconnected");
  }

  if (n == 1) {
    MixingMatrix m;
    m.w = DenseMatrix(1, 1, 1.0);
    m.lambda2 = 0.0;
    m.gap = 1.0;
    return m;
  }

  const auto eig = symmetric_eigenvalues(lap);
  const double lam1 = eig.front();
  MixingMatrix m;
  m.w = DenseMatrix(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      m.w(i, j) = (i == j ? 1.0 : 0.0) - lap(i, j) / lam1;
  // eigenvalues of W are 1 - lam_k/lam1; second largest comes from the Fiedler value
  const double fiedler = eig[n - 2];
  m.lambda2 = std::clamp(1.0 - fiedler / lam1, 0.0, 1.0);
  m.gap = 1.0 - m.lambda2;
  return m;
}

}  // namespace

MixingMatrix laplacian_mixing(const Graph& g, const EdgeWeights& weights) {
  if (!g.connected()) throw topology_error("graph is disconnected");
  return mixing_from_laplacian(g, weights);
}

double iota(int m) {
  if (m < 2) throw topology_error("iota needs m >= 2");
  const double c = std::cos(M_PI / m);
  return (1.0 - c) / (1.0 + c);
}

int iota_branch_index(double gamma) {
  if (!(gamma > 0.0) || gamma > 1.0)
    throw topology_error("gamma must lie in (0, 1]");
  int m = static_cast<int>(std::floor(M_PI / std::acos((1.0 - gamma) / (1.0 + gamma))));
  m = std::max(m, 2);
  // fix rounding at exact iota boundaries: want iota(m+1) < gamma <= iota(m),
  // with iota(2) treated as its exact value 1
  while (m > 2 && gamma > iota(m)) --m;
  while (gamma <= iota(m + 1)) ++m;
  return m;
}

MixingForGapResult mixing_for_gap(double gamma, double tol) {
  if (!(gamma > 0.0) || gamma > 1.0)
    throw topology_error("mixing_for_gap: gamma must lie in (0, 1]");
  if (!(tol > 0.0)) throw topology_error("mixing_for_gap: tol must be positive");

  const int m = iota_branch_index(gamma);
  const int max_iter = 200;

  if (m >= 3) {
    // path of n = m nodes; first edge weight 1-l, gap decreasing in l from iota(m) to 0
    Graph g = Graph::path(m);
    auto build = [&](double l) {
      EdgeWeights w;
      w[{0, 1}] = 1.0 - l;
      return mixing_from_laplacian(g, w);
    };
    double lo = 0.0, hi = 1.0;
    MixingMatrix cand = build(lo);
    if (std::abs(cand.gap - gamma) <= tol)
      return {std::move(cand), std::move(g), lo};
    double l = lo;
    for (int it = 0; it < max_iter; ++it) {
      l = 0.5 * (lo + hi);
      cand = build(l);
      if (std::abs(cand.gap - gamma) <= tol) return {std::move(cand), std::move(g), l};
      if (cand.gap > gamma)
        lo = l;
      else
        hi = l;
    }
    throw numeric_error("mixing_for_gap: bisection did not converge on path branch");
  }

  // m == 2: 3-node complete graph, edge (1,3) weight l, gap increasing from iota(3) to 1
  Graph g = Graph::complete(3);
  auto build = [&](double l) {
    EdgeWeights w;
    w[{0, 1}] = 1.0;
    w[{1, 2}] = 1.0;
    w[{0, 2}] = l;
    return mixing_from_laplacian(g, w);
  };
  double lo = 0.0, hi = 1.0;
  MixingMatrix cand = build(hi);
  if (std::abs(cand.gap - gamma) <= tol) return {std::move(cand), std::move(g), hi};
  double l = hi;
  for (int it = 0; it < max_iter; ++it) {
    l = 0.5 * (lo + hi);
    cand = build(l);
    if (std::abs(cand.gap - gamma) <= tol) return {std::move(cand), std::move(g), l};
    if (cand.gap < gamma)
      lo = l;
    else
      hi = l;
  }
  throw numeric_error("mixing_for_gap: bisection did not converge on complete branch");
}

MixingReport validate_mixing(const MixingMatrix& m, const Graph& g,
                             double declared_gamma) {
  MixingReport rep;
  const int n = m.size();

  double sym = 0.0, rowsum = 0.0;
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int j = 0; j < n; ++j) {
      s += m.w(i, j);
      sym = std::max(sym, std::abs(m.w(i, j) - m.w(j, i)));
    }
    rowsum = std::max(rowsum, std::abs(s - 1.0));
  }
  rep.symmetry_residual = sym;
  rep.row_sum_residual = rowsum;

  std::vector<double> eig;
  try {
    eig = symmetric_eigenvalues(m.w, 1e-9);
  } catch (const numeric_error&) {
    rep.symmetric_stochastic = false;
    return rep;
  }
  rep.max_eigenvalue = eig.front();
  rep.min_eigenvalue = eig.back();
  rep.symmetric_stochastic = sym <= 1e-12 && rowsum <= 1e-12 &&
                             rep.min_eigenvalue >= -1e-10 &&
                             rep.max_eigenvalue <= 1.0 + 1e-10;

  rep.pattern_matches_graph = true;
  for (int i = 0; i < n && rep.pattern_matches_graph; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const double w = m.w(i, j);
      if (w != 0.0 && (w < 0.0 || !g.has_edge(i, j))) {
        rep.pattern_matches_graph = false;
        break;
      }
    }

  rep.measured_gap = n >= 2 ? 1.0 - std::clamp(eig[1], 0.0, 1.0) : 1.0;
  rep.gap_at_least = rep.measured_gap >= declared_gamma - 1e-12;
  return rep;
}

}  // namespace plbench
