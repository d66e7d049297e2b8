#include "plbench/gossip.hpp"

#include <algorithm>
#include <cmath>

namespace plbench {

double gossip_momentum(double lambda2) {
  const double l2 = std::clamp(lambda2, 0.0, 1.0);
  return 1.0 / (1.0 + std::sqrt(1.0 - l2 * l2));
}

double gossip_contraction_factor(double lambda2, int rounds) {
  const double l2 = std::clamp(lambda2, 0.0, 1.0);
  const double base = 1.0 - (1.0 - 1.0 / std::sqrt(2.0)) * std::sqrt(1.0 - l2);
  return std::sqrt(14.0) * std::pow(base, rounds);
}

namespace {

// nonzero pattern of W, built once per call; tridiagonal for paths
struct Pattern {
  std::vector<int> offsets;
  std::vector<int> cols;
  std::vector<double> vals;
};

Pattern build_pattern(const DenseMatrix& w) {
  Pattern p;
  const int n = w.rows();
  p.offsets.reserve(n + 1);
  p.offsets.push_back(0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (w(i, j) != 0.0) {
        p.cols.push_back(j);
        p.vals.push_back(w(i, j));
      }
    }
    p.offsets.push_back(static_cast<int>(p.cols.size()));
  }
  return p;
}

}  // namespace

DenseMatrix acc_gossip(const DenseMatrix& y0, const MixingMatrix& w, int rounds,
                       OracleMeter* meter) {
  const int n = y0.rows();
  const int d = y0.cols();
  if (n != w.size())
    throw numeric_error("acc_gossip: row count does not match mixing matrix");
  if (rounds < 0) throw numeric_error("acc_gossip: negative round count");
  if (rounds == 0) return y0;
  if (n == 1) {
    // a single agent is already consensual; the recursion is the identity
    if (meter) meter->record_comm_rounds(rounds);
    return y0;
  }

  const double eta = gossip_momentum(w.lambda2);
  const Pattern pat = build_pattern(w.w);

  DenseMatrix prev = y0;
  DenseMatrix cur = y0;
  DenseMatrix next(n, d);

  for (int k = 0; k < rounds; ++k) {
    for (int i = 0; i < n; ++i) {
      double* out = next.row(i);
      std::fill(out, out + d, 0.0);
      for (int e = pat.offsets[i]; e < pat.offsets[i + 1]; ++e) {
        const double c = (1.0 + eta) * pat.vals[e];
        const double* src = cur.row(pat.cols[e]);
        for (int j = 0; j < d; ++j) out[j] += c * src[j];
      }
      const double* pv = prev.row(i);
      for (int j = 0; j < d; ++j) out[j] -= eta * pv[j];
    }
    std::swap(prev, cur);
    std::swap(cur, next);
  }

  if (meter) meter->record_comm_rounds(rounds);
  return cur;
}

int default_round_count(int n, double gamma) {
  if (n < 1) throw numeric_error("default_round_count: n must be >= 1");
  if (!(gamma > 0.0) || gamma > 1.0)
    throw numeric_error("default_round_count: gamma must lie in (0, 1]");
  const double s2 = std::sqrt(2.0);
  return static_cast<int>(
      std::ceil(s2 * (4.0 + std::log(static_cast<double>(n))) /
                ((s2 - 1.0) * std::sqrt(gamma))));
}

}  // namespace plbench
