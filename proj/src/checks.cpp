#include "plbench/checks.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace plbench {

namespace {

std::vector<double> sample_point(RandomStream& rs, int d, double half_width) {
  std::vector<double> x(d);
  for (auto& v : x) v = (2.0 * rs.next_double() - 1.0) * half_width;
  return x;
}

std::string format_worst(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace

CheckResult check_gradient_matches_fd(const LocalObjectiveSet& set,
                                      const CheckOptions& opt, double tol) {
  RandomStream rs(opt.seed);
  CheckResult res{"gradient-vs-central-difference", true, 0.0, {}};
  std::vector<double> an(set.d);
  for (int trial = 0; trial < opt.gradient_points; ++trial) {
    const auto x = sample_point(rs, set.d, opt.box_half_width);
    const int i = static_cast<int>(rs.next_below(set.n));
    set.gradient(i, x, an);
    // piecewise-quadratic objectives want a smaller step than the library
    // default so a kink inside the stencil stays below the tolerance
    const double h = 1e-7 * std::max(1.0, inf_norm(x));
    const auto fd = central_difference_gradient(
        [&](std::span<const double> p) { return set.value(i, p); }, x, h);
    double diff = 0.0, scale = 0.0;
    for (int j = 0; j < set.d; ++j) {
      diff += (fd[j] - an[j]) * (fd[j] - an[j]);
      scale += an[j] * an[j];
    }
    const double rel = std::sqrt(diff) / (1.0 + std::sqrt(scale));
    res.worst = std::max(res.worst, rel);
  }
  res.passed = res.worst <= tol;
  res.detail = "worst relative error " + format_worst(res.worst);
  return res;
}

CheckResult check_mean_squared_smoothness(const LocalObjectiveSet& set,
                                          const CheckOptions& opt, double slack) {
  CheckResult res{"mean-squared-smoothness", true, 0.0, {}};
  if (!set.smoothness) {
    res.detail = "no declared smoothness, skipped";
    return res;
  }
  const double L = *set.smoothness;
  RandomStream rs(opt.seed + 1);
  std::vector<double> gx(set.d), gy(set.d);
  for (int trial = 0; trial < opt.pair_samples; ++trial) {
    const auto x = sample_point(rs, set.d, opt.box_half_width);
    const auto y = sample_point(rs, set.d, opt.box_half_width);
    double dist = 0.0;
    for (int j = 0; j < set.d; ++j) dist += (x[j] - y[j]) * (x[j] - y[j]);
    if (dist == 0.0) continue;
    double acc = 0.0;
    for (int i = 0; i < set.n; ++i) {
      set.gradient(i, x, gx);
      set.gradient(i, y, gy);
      double s = 0.0;
      for (int j = 0; j < set.d; ++j) s += (gx[j] - gy[j]) * (gx[j] - gy[j]);
      acc += s;
    }
    const double ratio = std::sqrt(acc / set.n / dist);
    res.worst = std::max(res.worst, ratio);
  }
  res.passed = res.worst <= L + slack * std::max(1.0, L);
  res.detail = "worst quotient " + format_worst(res.worst) + " vs declared " +
               format_worst(L);
  return res;
}

CheckResult check_pl_inequality(const LocalObjectiveSet& set, const CheckOptions& opt,
                                double slack) {
  CheckResult res{"pl-inequality", true, 0.0, {}};
  if (!set.pl_constant || !set.f_star) {
    res.detail = "no declared PL constant or optimum, skipped";
    return res;
  }
  const double mu = *set.pl_constant;
  RandomStream rs(opt.seed + 2);
  std::vector<double> grad(set.d);
  double worst_violation = 0.0;
  for (int trial = 0; trial < opt.pair_samples; ++trial) {
    const auto x = sample_point(rs, set.d, opt.box_half_width);
    set.mean_gradient(x, grad);
    double gn = 0.0;
    for (double v : grad) gn += v * v;
    const double gap = set.mean_value(x) - *set.f_star;
    const double lhs = gn;
    const double rhs = 2.0 * mu * gap;
    const double scale = std::max({1.0, lhs, std::abs(rhs)});
    worst_violation = std::max(worst_violation, (rhs - lhs) / scale);
  }
  res.worst = worst_violation;
  res.passed = worst_violation <= slack;
  res.detail = "worst normalized violation " + format_worst(worst_violation);
  return res;
}

namespace {

CheckResult zero_chain_impl(const std::string& name, int dim, int blocks_of,
                            const std::function<void(std::span<const double>, std::span<double>)>& grad,
                            const CheckOptions& opt) {
  // blocks_of: coordinates per block (== dim for the plain chain)
  RandomStream rs(opt.seed + 3);
  CheckResult res{name, true, 0.0, {}};
  std::vector<double> x(dim), g(dim);
  const int nblocks = dim / blocks_of;
  for (int trial = 0; trial < opt.zero_chain_trials; ++trial) {
    std::fill(x.begin(), x.end(), 0.0);
    // one support prefix per block
    std::vector<int> prefix(nblocks);
    for (int bidx = 0; bidx < nblocks; ++bidx) {
      prefix[bidx] = static_cast<int>(rs.next_below(blocks_of));  // in {0..m-1}
      for (int j = 0; j < prefix[bidx]; ++j)
        x[bidx * blocks_of + j] = (2.0 * rs.next_double() - 1.0) * opt.box_half_width;
    }
    grad(x, g);
    // the flat spot of psi is zero only to rounding, so allow ~1e-13
    for (int bidx = 0; bidx < nblocks; ++bidx) {
      for (int j = prefix[bidx] + 1; j < blocks_of; ++j) {
        const double v = std::abs(g[bidx * blocks_of + j]);
        res.worst = std::max(res.worst, v);
        if (v > 1e-13) res.passed = false;
      }
    }
  }
  res.detail = res.passed ? "support never grew by more than one"
                          : "gradient leaked beyond support+1, worst " +
                                format_worst(res.worst);
  return res;
}

}  // namespace

CheckResult check_zero_chain(const ChainSpec& spec, const CheckOptions& opt) {
  return zero_chain_impl(
      "zero-chain", spec.dim(), spec.dim(),
      [&spec](std::span<const double> x, std::span<double> g) { g_grad(spec, x, g); },
      opt);
}

CheckResult check_zero_chain_blockwise(const LocalObjectiveSet& set, int block_dim,
                                       const CheckOptions& opt) {
  return zero_chain_impl(
      "zero-chain-blockwise", set.d, block_dim,
      [&set](std::span<const double> x, std::span<double> g) {
        std::vector<double> gi(set.d);
        std::fill(g.begin(), g.end(), 0.0);
        for (int i = 0; i < set.n; ++i) {
          set.gradient(i, x, gi);
          for (int j = 0; j < set.d; ++j) g[j] += gi[j];
        }
      },
      opt);
}

CheckResult check_split_identity(const ChainSpec& spec, const CheckOptions& opt) {
  RandomStream rs(opt.seed + 4);
  CheckResult res{"split-identity", true, 0.0, {}};
  for (int trial = 0; trial < opt.gradient_points; ++trial) {
    const auto x = sample_point(rs, spec.dim(), opt.box_half_width);
    const double whole = g_value(spec, x);
    const double parts = q1_at(spec, x) + q2_at(spec, x) + r_at(spec, x);
    const double err = std::abs(whole - parts) / (1.0 + std::abs(whole));
    res.worst = std::max(res.worst, err);
  }
  res.passed = res.worst <= 1e-10;
  res.detail = "worst relative mismatch " + format_worst(res.worst);
  return res;
}

CheckResult check_h_average_identity(const NetworkSplitSpec& split,
                                     const ChainSpec& spec, const CheckOptions& opt) {
  RandomStream rs(opt.seed + 5);
  CheckResult res{"h-average-identity", true, 0.0, {}};
  const auto set = h_set(split, spec);
  for (int trial = 0; trial < opt.gradient_points; ++trial) {
    const auto x = sample_point(rs, spec.dim(), opt.box_half_width);
    const double avg = set.mean_value(x);
    const double expected = g_value(spec, x) / split.graph.size();
    const double err = std::abs(avg - expected) / (1.0 + std::abs(expected));
    res.worst = std::max(res.worst, err);
  }
  res.passed = res.worst <= 1e-10;
  res.detail = "worst relative mismatch " + format_worst(res.worst);
  return res;
}

CheckResult check_psi_boundaries(double theta, double tol) {
  CheckResult res{"psi-boundary-gradients", true, 0.0, {}};
  const double kinks[] = {31.0 / 32.0 * theta, theta, 33.0 / 32.0 * theta};
  const double offsets[] = {-1e-9, 0.0, 1e-9};
  const double h = 1e-8 * std::max(1.0, theta);
  for (double kink : kinks) {
    for (double off : offsets) {
      const double x = kink + off;
      const double an = psi_grad(theta, x);
      const double fd =
          (psi_value(theta, x + h) - psi_value(theta, x - h)) / (2.0 * h);
      const double err = std::abs(fd - an) / (1.0 + std::abs(an));
      res.worst = std::max(res.worst, err);
    }
  }
  res.passed = res.worst <= tol;
  res.detail = "worst relative error " + format_worst(res.worst);
  return res;
}

CheckResult check_span_gap(double L, double mu, int n, double Delta) {
  CheckResult res{"span-gap", true, 0.0, {}};
  const auto set = linear_span_instance(L, mu, n, Delta);
  const double c = std::sqrt(L * Delta);
  const int block = 2 * n;
  std::vector<double> x(set.d, 0.0);
  double worst = 0.0;
  for (int k = 0; k <= n; ++k) {
    if (k > 0) {
      // reveal the support of agent k-1 and set it to the per-coordinate optimum
      for (int j = (k - 1) * block; j < k * block; ++j) x[j] = -c / (n * L);
    }
    const double gap = mean_objective_gap(set, x);
    const double expected = Delta * (1.0 - static_cast<double>(k) / n);
    worst = std::max(worst, std::abs(gap - expected) / (1.0 + expected));
  }
  res.worst = worst;
  res.passed = worst <= 1e-10;
  res.detail = "worst relative mismatch " + format_worst(worst);
  return res;
}

std::vector<CheckResult> standard_instance_checks(const LocalObjectiveSet& set,
                                                  const CheckOptions& opt) {
  std::vector<CheckResult> all;
  all.push_back(check_gradient_matches_fd(set, opt));
  all.push_back(check_mean_squared_smoothness(set, opt));
  all.push_back(check_pl_inequality(set, opt));
  return all;
}

}  // namespace plbench
