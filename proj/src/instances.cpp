#include "plbench/instances.hpp"

#include <algorithm>
#include <cmath>

namespace plbench {

double psi_value(double theta, double x) {
  if (!(theta > 0.0)) throw construction_error("psi: theta must be positive");
  const double half_sq = 0.5 * x * x;
  if (x <= 31.0 / 32.0 * theta) return half_sq;
  if (x <= theta) {
    const double u = x - 31.0 / 32.0 * theta;
    return half_sq - 16.0 * u * u;
  }
  if (x <= 33.0 / 32.0 * theta) {
    const double u = x - 33.0 / 32.0 * theta;
    return half_sq - theta * theta / 32.0 + 16.0 * u * u;
  }
  return half_sq - theta * theta / 32.0;
}

double psi_grad(double theta, double x) {
  if (!(theta > 0.0)) throw construction_error("psi: theta must be positive");
  if (x <= 31.0 / 32.0 * theta) return x;
  if (x <= theta) return x - 32.0 * (x - 31.0 / 32.0 * theta);
  if (x <= 33.0 / 32.0 * theta) return x + 32.0 * (x - 33.0 / 32.0 * theta);
  return x;
}

ChainSpec make_chain_spec(int block_len, int blocks) {
  if (block_len < 1) throw construction_error("chain: block length must be >= 1");
  if (blocks < 2) throw construction_error("chain: need at least two blocks");
  ChainSpec spec;
  spec.block_len = block_len;
  spec.blocks = blocks;
  spec.target.resize(static_cast<size_t>(block_len) * blocks);
  double level = 1.0;
  for (int k = 0; k < blocks; ++k) {
    for (int tau = 0; tau < block_len; ++tau)
      spec.target[static_cast<size_t>(k) * block_len + tau] = level;
    level *= 7.0 / 8.0;
  }
  return spec;
}

namespace {

void check_dim(const ChainSpec& spec, std::span<const double> x, const char* who) {
  if (static_cast<int>(x.size()) != spec.dim())
    throw construction_error(std::string(who) + ": dimension mismatch");
}

void check_even(const ChainSpec& spec, const char* who) {
  if (spec.block_len % 2 != 0)
    throw construction_error(std::string(who) + ": block length must be even");
}

// z_k with the virtual zero coordinate at k = 0; 1-based k
inline double z_of(std::span<const double> z, int k) { return k == 0 ? 0.0 : z[k - 1]; }

}  // namespace

double chain_q(const ChainSpec& spec, std::span<const double> z) {
  check_dim(spec, z, "chain_q");
  const int T = spec.block_len;
  double s = 0.0;
  for (int i = 0; i < spec.blocks; ++i) {
    const double head = 7.0 / 8.0 * z_of(z, i * T) - z_of(z, i * T + 1);
    s += head * head;
    for (int j = 1; j <= T - 1; ++j) {
      const double u = z_of(z, i * T + j + 1) - z_of(z, i * T + j);
      s += u * u;
    }
  }
  return 0.5 * s;
}

double chain_q1(const ChainSpec& spec, std::span<const double> z) {
  check_dim(spec, z, "chain_q1");
  check_even(spec, "chain_q1");
  double s = 0.0;
  for (int i = 1; i <= spec.dim() / 2; ++i) {
    const double u = z_of(z, 2 * i - 1) - z_of(z, 2 * i);
    s += u * u;
  }
  return 0.5 * s;
}

double chain_q2(const ChainSpec& spec, std::span<const double> z) {
  check_dim(spec, z, "chain_q2");
  check_even(spec, "chain_q2");
  const int T = spec.block_len;
  double s = 0.0;
  for (int i = 0; i < spec.blocks; ++i) {
    const double head = 7.0 / 8.0 * z_of(z, i * T) - z_of(z, i * T + 1);
    s += head * head;
    for (int j = i * T / 2 + 1; j <= (i + 1) * T / 2 - 1; ++j) {
      const double u = z_of(z, 2 * j) - z_of(z, 2 * j + 1);
      s += u * u;
    }
  }
  return 0.5 * s;
}

double r_at(const ChainSpec& spec, std::span<const double> x) {
  check_dim(spec, x, "r_at");
  double s = 0.0;
  for (int i = 0; i < spec.dim(); ++i) {
    const double b = spec.target[i];
    s += psi_value(b, b - x[i]);
  }
  return s;
}

void r_grad_accum(const ChainSpec& spec, std::span<const double> x, double coeff,
                  std::span<double> out) {
  check_dim(spec, x, "r_grad");
  for (int i = 0; i < spec.dim(); ++i) {
    const double b = spec.target[i];
    out[i] -= coeff * psi_grad(b, b - x[i]);
  }
}

namespace {

// q-style terms evaluated at z = b - x; gradients are with respect to x.
inline double gap_of(const ChainSpec& spec, std::span<const double> x, int k) {
  return k == 0 ? 0.0 : spec.target[k - 1] - x[k - 1];
}

}  // namespace

double q1_at(const ChainSpec& spec, std::span<const double> x) {
  check_dim(spec, x, "q1_at");
  check_even(spec, "q1_at");
  double s = 0.0;
  for (int i = 1; i <= spec.dim() / 2; ++i) {
    const double u = gap_of(spec, x, 2 * i - 1) - gap_of(spec, x, 2 * i);
    s += u * u;
  }
  return 0.5 * s;
}

void q1_at_grad_accum(const ChainSpec& spec, std::span<const double> x, double coeff,
                      std::span<double> out) {
  check_dim(spec, x, "q1_at_grad");
  check_even(spec, "q1_at_grad");
  for (int i = 1; i <= spec.dim() / 2; ++i) {
    const double u = gap_of(spec, x, 2 * i - 1) - gap_of(spec, x, 2 * i);
    out[2 * i - 2] -= coeff * u;
    out[2 * i - 1] += coeff * u;
  }
}

double q2_at(const ChainSpec& spec, std::span<const double> x) {
  check_dim(spec, x, "q2_at");
  check_even(spec, "q2_at");
  const int T = spec.block_len;
  double s = 0.0;
  for (int i = 0; i < spec.blocks; ++i) {
    const double head = 7.0 / 8.0 * gap_of(spec, x, i * T) - gap_of(spec, x, i * T + 1);
    s += head * head;
    for (int j = i * T / 2 + 1; j <= (i + 1) * T / 2 - 1; ++j) {
      const double u = gap_of(spec, x, 2 * j) - gap_of(spec, x, 2 * j + 1);
      s += u * u;
    }
  }
  return 0.5 * s;
}

void q2_at_grad_accum(const ChainSpec& spec, std::span<const double> x, double coeff,
                      std::span<double> out) {
  check_dim(spec, x, "q2_at_grad");
  check_even(spec, "q2_at_grad");
  const int T = spec.block_len;
  for (int i = 0; i < spec.blocks; ++i) {
    const double head = 7.0 / 8.0 * gap_of(spec, x, i * T) - gap_of(spec, x, i * T + 1);
    if (i * T >= 1) out[i * T - 1] -= coeff * 7.0 / 8.0 * head;
    out[i * T] += coeff * head;
    for (int j = i * T / 2 + 1; j <= (i + 1) * T / 2 - 1; ++j) {
      const double u = gap_of(spec, x, 2 * j) - gap_of(spec, x, 2 * j + 1);
      out[2 * j - 1] -= coeff * u;
      out[2 * j] += coeff * u;
    }
  }
}

double g_value(const ChainSpec& spec, std::span<const double> x) {
  check_dim(spec, x, "g_value");
  const int T = spec.block_len;
  double s = 0.0;
  for (int i = 0; i < spec.blocks; ++i) {
    const double head = 7.0 / 8.0 * gap_of(spec, x, i * T) - gap_of(spec, x, i * T + 1);
    s += head * head;
    for (int j = 1; j <= T - 1; ++j) {
      const double u = gap_of(spec, x, i * T + j + 1) - gap_of(spec, x, i * T + j);
      s += u * u;
    }
  }
  return 0.5 * s + r_at(spec, x);
}

void g_grad(const ChainSpec& spec, std::span<const double> x, std::span<double> out) {
  check_dim(spec, x, "g_grad");
  std::fill(out.begin(), out.end(), 0.0);
  const int T = spec.block_len;
  for (int i = 0; i < spec.blocks; ++i) {
    const double head = 7.0 / 8.0 * gap_of(spec, x, i * T) - gap_of(spec, x, i * T + 1);
    if (i * T >= 1) out[i * T - 1] -= 7.0 / 8.0 * head;
    out[i * T] += head;
    for (int j = 1; j <= T - 1; ++j) {
      const double u = gap_of(spec, x, i * T + j + 1) - gap_of(spec, x, i * T + j);
      out[i * T + j - 1] += u;
      out[i * T + j] -= u;
    }
  }
  r_grad_accum(spec, x, 1.0, out);
}

ScalarField make_g_field(const ChainSpec& spec) {
  ScalarField f;
  f.dim = spec.dim();
  f.value = [spec](std::span<const double> x) { return g_value(spec, x); };
  f.grad = [spec](std::span<const double> x, std::span<double> out) {
    g_grad(spec, x, out);
  };
  f.smoothness = 37.0;
  f.pl_constant = 1.0 / (kChainA * spec.block_len);
  f.star = 0.0;
  return f;
}

ScalarField scale_field(const ScalarField& base, double alpha, double beta) {
  if (!(alpha > 0.0) || !(beta > 0.0))
    throw construction_error("scale_field: alpha and beta must be positive");
  ScalarField f;
  f.dim = base.dim;
  f.value = [base, alpha, beta](std::span<const double> x) {
    std::vector<double> y(x.size());
    for (size_t i = 0; i < x.size(); ++i) y[i] = beta * x[i];
    return alpha * base.value(y);
  };
  f.grad = [base, alpha, beta](std::span<const double> x, std::span<double> out) {
    std::vector<double> y(x.size());
    for (size_t i = 0; i < x.size(); ++i) y[i] = beta * x[i];
    base.grad(y, out);
    const double ab = alpha * beta;
    for (auto& v : out) v *= ab;
  };
  const double ab2 = alpha * beta * beta;
  if (base.smoothness) f.smoothness = ab2 * *base.smoothness;
  if (base.pl_constant) f.pl_constant = ab2 * *base.pl_constant;
  if (base.star) f.star = alpha * *base.star;
  return f;
}

LocalObjectiveSet block_embed(const ScalarField& base, int n) {
  if (n < 1) throw construction_error("block_embed: n must be >= 1");
  const int m = base.dim;
  LocalObjectiveSet set;
  set.n = n;
  set.d = m * n;
  set.value = [base, m](int i, std::span<const double> x) {
    return base.value(x.subspan(static_cast<size_t>(i) * m, m));
  };
  set.gradient = [base, m](int i, std::span<const double> x, std::span<double> out) {
    std::fill(out.begin(), out.end(), 0.0);
    base.grad(x.subspan(static_cast<size_t>(i) * m, m),
              out.subspan(static_cast<size_t>(i) * m, m));
  };
  if (base.smoothness) set.smoothness = *base.smoothness / std::sqrt(double(n));
  if (base.pl_constant) set.pl_constant = *base.pl_constant / n;
  if (base.star) set.f_star = *base.star;
  return set;
}

LocalObjectiveSet scale_objective_set(const LocalObjectiveSet& set, double alpha,
                                      double beta) {
  if (!(alpha > 0.0) || !(beta > 0.0))
    throw construction_error("scale_objective_set: scales must be positive");
  LocalObjectiveSet out;
  out.n = set.n;
  out.d = set.d;
  auto value = set.value;
  auto gradient = set.gradient;
  out.value = [value, alpha, beta](int i, std::span<const double> x) {
    std::vector<double> y(x.size());
    for (size_t k = 0; k < x.size(); ++k) y[k] = beta * x[k];
    return alpha * value(i, y);
  };
  out.gradient = [gradient, alpha, beta](int i, std::span<const double> x,
                                         std::span<double> g) {
    std::vector<double> y(x.size());
    for (size_t k = 0; k < x.size(); ++k) y[k] = beta * x[k];
    gradient(i, y, g);
    const double ab = alpha * beta;
    for (auto& v : g) v *= ab;
  };
  const double ab2 = alpha * beta * beta;
  if (set.smoothness) out.smoothness = ab2 * *set.smoothness;
  if (set.pl_constant) out.pl_constant = ab2 * *set.pl_constant;
  if (set.f_star) out.f_star = alpha * *set.f_star;
  out.metadata = set.metadata;
  return out;
}

LocalObjectiveSet ifo_hard_instance(double L, double mu, int n, double Delta,
                                    double eps) {
  if (!(L > 0.0) || !(mu > 0.0) || !(Delta > 0.0) || !(eps > 0.0) || n < 1)
    throw construction_error("ifo_hard_instance: parameters must be positive");
  if (!(eps < 0.005 * Delta))
    throw construction_error("ifo_hard_instance: requires eps < 0.005*Delta");
  const double root_n = std::sqrt(static_cast<double>(n));
  if (L < 37.0 * kChainA * root_n * mu)
    throw construction_error("ifo_hard_instance: requires L >= 37*a*sqrt(n)*mu");

  const int block_raw = static_cast<int>(std::floor(L / (37.0 * kChainA * root_n * mu)));
  int block_len = block_raw - block_raw % 2;
  bool adjusted = block_len != block_raw;
  if (block_len < 2) {
    block_len = 2;
    adjusted = true;
  }

  const double ratio = Delta / (3.0 * eps);
  if (!(ratio >= 8.0 / 7.0))
    throw construction_error("ifo_hard_instance: Delta/(3*eps) below 8/7, chain degenerates");
  const int blocks =
      2 * static_cast<int>(std::floor(std::log(ratio) / std::log(8.0 / 7.0)));

  const ChainSpec spec = make_chain_spec(block_len, blocks);
  const double alpha = Delta / (3.0 * block_len);
  const double beta = std::sqrt(3.0 * root_n * L * block_len / (37.0 * Delta));
  LocalObjectiveSet set = block_embed(scale_field(make_g_field(spec), alpha, beta), n);

  set.smoothness = L;
  // guaranteed PL constant of f; equals mu when the floor was exact
  set.pl_constant = L / (37.0 * kChainA * root_n * block_len);
  set.f_star = 0.0;
  set.metadata["family"] = "ifo-hard";
  set.metadata["block_len"] = std::to_string(block_len);
  set.metadata["blocks"] = std::to_string(blocks);
  set.metadata["alpha"] = std::to_string(alpha);
  set.metadata["beta"] = std::to_string(beta);
  set.metadata["delta_bound"] = std::to_string(Delta);
  if (adjusted) set.metadata["block_len_adjusted_from"] = std::to_string(block_raw);
  return set;
}

LocalObjectiveSet linear_span_instance(double L, double mu, int n, double Delta) {
  if (!(L > 0.0) || !(mu > 0.0) || !(Delta > 0.0) || n < 1)
    throw construction_error("linear_span_instance: parameters must be positive");
  if (L < mu) throw construction_error("linear_span_instance: requires L >= mu");
  const int d = 2 * n * n;
  const int block = 2 * n;
  const double c = std::sqrt(L * Delta);

  LocalObjectiveSet set;
  set.n = n;
  set.d = d;
  set.value = [c, L, block](int i, std::span<const double> x) {
    double lin = 0.0;
    for (int j = i * block; j < (i + 1) * block; ++j) lin += x[j];
    double sq = 0.0;
    for (double v : x) sq += v * v;
    return c * lin + 0.5 * L * sq;
  };
  set.gradient = [c, L, block](int i, std::span<const double> x, std::span<double> out) {
    for (size_t j = 0; j < x.size(); ++j) out[j] = L * x[j];
    for (int j = i * block; j < (i + 1) * block; ++j) out[j] += c;
  };
  set.smoothness = L;
  set.pl_constant = mu;
  set.f_star = -c * c / L;
  set.metadata["family"] = "linear-span";
  set.metadata["c"] = std::to_string(c);
  set.metadata["support_per_agent"] = std::to_string(block);
  return set;
}

NetworkSplitSpec make_network_split(Graph graph, std::vector<int> c_nodes, int sigma) {
  if (c_nodes.empty()) throw construction_error("network split: C must be nonempty");
  if (sigma < 1) throw construction_error("network split: sigma must be >= 1");
  for (int v : c_nodes)
    if (v < 0 || v >= graph.size())
      throw construction_error("network split: C node out of range");
  const auto dist = graph.bfs_distances(c_nodes);
  std::vector<int> far;
  for (int v = 0; v < graph.size(); ++v)
    if (dist[v] >= sigma) far.push_back(v);
  if (far.empty())
    throw construction_error(
        "network split: no node lies at distance >= sigma from C");
  NetworkSplitSpec split{std::move(graph), std::move(c_nodes), sigma, std::move(far)};
  return split;
}

LocalObjectiveSet h_set(const NetworkSplitSpec& split, const ChainSpec& spec) {
  check_even(spec, "h_set");
  const int n = split.graph.size();
  std::vector<char> in_c(n, 0), in_far(n, 0);
  for (int v : split.c_nodes) in_c[v] = 1;
  for (int v : split.c_sigma) in_far[v] = 1;
  const double c_size = static_cast<double>(split.c_nodes.size());
  const double far_size = static_cast<double>(split.c_sigma.size());

  LocalObjectiveSet set;
  set.n = n;
  set.d = spec.dim();
  set.value = [spec, in_c, in_far, c_size, far_size, n](int i,
                                                        std::span<const double> x) {
    double v = r_at(spec, x) / n;
    if (in_c[i])
      v += q1_at(spec, x) / c_size;
    else if (in_far[i])
      v += q2_at(spec, x) / far_size;
    return v;
  };
  set.gradient = [spec, in_c, in_far, c_size, far_size, n](int i,
                                                           std::span<const double> x,
                                                           std::span<double> out) {
    std::fill(out.begin(), out.end(), 0.0);
    r_grad_accum(spec, x, 1.0 / n, out);
    if (in_c[i])
      q1_at_grad_accum(spec, x, 1.0 / c_size, out);
    else if (in_far[i])
      q2_at_grad_accum(spec, x, 1.0 / far_size, out);
  };
  set.smoothness = 33.0 / n + std::max(2.0 / c_size, 2.0 / far_size);
  set.pl_constant = 1.0 / (kChainA * n * spec.block_len);
  set.f_star = 0.0;
  set.metadata["family"] = "network-split";
  set.metadata["sigma"] = std::to_string(split.sigma);
  set.metadata["c_size"] = std::to_string(split.c_nodes.size());
  set.metadata["c_sigma_size"] = std::to_string(split.c_sigma.size());
  return set;
}

ExperimentInstance experiment_instance(int n) {
  if (n < 30)
    throw construction_error(
        "experiment_instance: needs n >= 30 so some node is 29 hops from node 1");
  ExperimentInstance inst;
  inst.chain = make_chain_spec(2, 72);
  inst.sigma = 29;
  inst.alpha = 16.0 / 3.0;
  inst.beta = std::sqrt(12.0 * kChainA);
  auto split = make_network_split(Graph::path(n), {0}, inst.sigma);
  inst.set = scale_objective_set(h_set(split, inst.chain), inst.alpha, inst.beta);
  inst.set.metadata["family"] = "hard-decentralized";
  inst.path_gamma = iota(n);
  return inst;
}

DfoInstance dfo_hard_instance(double L, double mu, double gamma, double Delta,
                              double eps) {
  if (!(L > 0.0) || !(mu > 0.0) || !(Delta > 0.0) || !(eps > 0.0))
    throw construction_error("dfo_hard_instance: parameters must be positive");
  if (!(gamma > 0.0) || gamma > 1.0)
    throw construction_error("dfo_hard_instance: gamma must lie in (0, 1]");
  if (!(eps < 0.01 * Delta))
    throw construction_error("dfo_hard_instance: requires eps < 0.01*Delta");

  const double kappa = L / mu;
  const int m = iota_branch_index(gamma);
  const int blocks = 2 * static_cast<int>(std::floor(
                             std::log(2.0 * Delta / (3.0 * eps)) / std::log(8.0 / 7.0)));

  DfoInstance inst;
  inst.branch_m = m;

  auto built = mixing_for_gap(gamma);
  inst.mixing = std::move(built.mixing);
  inst.graph = std::move(built.graph);
  const int n = inst.graph.size();

  int block_len = 0;
  double beta = 0.0;
  std::vector<int> c_nodes;
  int sigma = 0;
  if (m >= 3) {
    block_len = 2 * static_cast<int>(std::floor(kappa / (194.0 * kChainA)));
    if (block_len < 2)
      throw construction_error("dfo_hard_instance: requires L >= 194*a*mu on this branch");
    for (int v = 0; v < (n + 31) / 32; ++v) c_nodes.push_back(v);
    sigma = (15 * n + 15) / 16 - 1;
    beta = std::sqrt(3.0 * L * block_len / (97.0 * Delta));
  } else {
    block_len = 2 * static_cast<int>(std::floor(kappa / (78.0 * kChainA)));
    if (block_len < 2)
      throw construction_error("dfo_hard_instance: requires L >= 78*a*mu on this branch");
    c_nodes = {0};
    sigma = 1;
    beta = std::sqrt(L * block_len / (13.0 * Delta));
  }
  const double alpha = n * Delta / (3.0 * block_len);

  inst.chain = make_chain_spec(block_len, blocks);
  inst.sigma = sigma;
  auto split = make_network_split(inst.graph, c_nodes, sigma);
  inst.set = scale_objective_set(h_set(split, inst.chain), alpha, beta);
  inst.set.smoothness = L;
  inst.set.pl_constant = mu;
  inst.set.f_star = 0.0;
  inst.set.metadata["family"] = "dfo-hard";
  inst.set.metadata["branch_m"] = std::to_string(m);
  inst.set.metadata["alpha"] = std::to_string(alpha);
  inst.set.metadata["beta"] = std::to_string(beta);
  inst.set.metadata["delta_bound"] = std::to_string(Delta);
  return inst;
}

}  // namespace plbench
