#include "plbench/solvers.hpp"

#include <algorithm>
#include <cmath>

namespace plbench {

namespace {

void check_positive_eta(double eta) {
  if (!(eta > 0.0)) throw divergence_error("step size must be positive");
}

void guard(double fvalue, double initial_gap, std::optional<double> f_star,
           double factor, int iter, const std::string& solver) {
  if (!std::isfinite(fvalue))
    throw divergence_error(solver + " diverged at iteration " + std::to_string(iter) +
                           ": non-finite objective");
  if (f_star && initial_gap > 0.0 && fvalue - *f_star > factor * initial_gap)
    throw divergence_error(solver + " diverged at iteration " + std::to_string(iter) +
                           ": gap exceeded " + std::to_string(factor) + "x initial");
}

RunRow point_snapshot(const LocalObjectiveSet& set, std::span<const double> x,
                      const OracleMeter& meter, int iter, const RunOptions& opt) {
  RunRow row;
  row.iter = iter;
  row.lfo_total = meter.lfo_total();
  row.comm_rounds = meter.comm_rounds();
  row.time_units = meter.time_units();
  row.fvalue = set.mean_value(x);
  if (set.f_star) row.gap = row.fvalue - *set.f_star;
  std::vector<double> g(set.d);
  set.mean_gradient(x, g);
  row.grad_norm = norm2(g);
  row.consensus_err = 0.0;
  if (opt.lyapunov && set.f_star) {
    // a single exact iterate has no estimator error and no consensus term
    row.lyap_u = 0.0;
    row.lyap_v = 0.0;
    row.lyap_c = 0.0;
    row.lyap_phi = row.gap;
  }
  return row;
}

RunRecord run_centralized(const char* name, bool server_round,
                          const LocalObjectiveSet& set, std::span<const double> x0,
                          double eta, int iterations, OracleMeter& meter,
                          const RunOptions& opt) {
  check_positive_eta(eta);
  if (static_cast<int>(x0.size()) != set.d)
    throw divergence_error("initial point dimension mismatch");
  RunRecord rec;
  rec.solver = name;
  rec.eta = eta;

  std::vector<double> x(x0.begin(), x0.end());
  rec.rows.push_back(point_snapshot(set, x, meter, 0, opt));
  const double initial_gap = set.f_star ? rec.rows[0].fvalue - *set.f_star : 0.0;

  std::vector<double> gi(set.d), mean_g(set.d);
  for (int t = 0; t < iterations; ++t) {
    std::fill(mean_g.begin(), mean_g.end(), 0.0);
    for (int i = 0; i < set.n; ++i) {
      metered_gradient(set, meter, i, x, gi);
      for (int j = 0; j < set.d; ++j) mean_g[j] += gi[j];
    }
    for (int j = 0; j < set.d; ++j) mean_g[j] /= set.n;
    meter.record_computation_step();
    if (server_round) meter.record_comm_round();
    for (int j = 0; j < set.d; ++j) x[j] -= eta * mean_g[j];

    rec.rows.push_back(point_snapshot(set, x, meter, t + 1, opt));
    guard(rec.rows.back().fvalue, initial_gap, set.f_star, opt.divergence_factor,
          t + 1, rec.solver);
    if (opt.stop_at_gap && set.f_star && rec.rows.back().gap <= *opt.stop_at_gap)
      break;
  }
  rec.final_mean = x;
  rec.final_output = x;
  return rec;
}

struct TrackingLoopMode {
  bool stochastic = false;
  double p = 1.0;
  int b = 1;
};

RunRow aggregate_snapshot(const LocalObjectiveSet& set, const DenseMatrix& x,
                          const DenseMatrix& s, const DenseMatrix& g,
                          const OracleMeter& meter, int iter, double eta, double p,
                          double rho, const RunOptions& opt) {
  RunRow row;
  row.iter = iter;
  row.lfo_total = meter.lfo_total();
  row.comm_rounds = meter.comm_rounds();
  row.time_units = meter.time_units();
  const auto xbar = x.column_means();
  row.fvalue = set.mean_value(xbar);
  if (set.f_star) row.gap = row.fvalue - *set.f_star;
  std::vector<double> grad(set.d);
  set.mean_gradient(xbar, grad);
  row.grad_norm = norm2(grad);
  row.consensus_err = x.deviation_from_mean();
  if (opt.lyapunov && set.f_star && set.smoothness) {
    const auto lyap =
        lyapunov_components(set, x, s, g, eta, p, rho, *set.smoothness, row.gap);
    row.lyap_u = lyap.u;
    row.lyap_v = lyap.v;
    row.lyap_c = lyap.c;
    row.lyap_phi = lyap.phi;
  }
  return row;
}

RunRecord run_tracking(const char* name, const LocalObjectiveSet& set,
                       const MixingMatrix& w, std::span<const double> xbar0,
                       double eta, int gossip_rounds, int iterations,
                       OracleMeter& meter, uint64_t seed, const RunOptions& opt,
                       const TrackingLoopMode& mode) {
  check_positive_eta(eta);
  if (w.size() != set.n)
    throw divergence_error("mixing matrix size does not match agent count");
  if (static_cast<int>(xbar0.size()) != set.d)
    throw divergence_error("initial point dimension mismatch");
  if (gossip_rounds < 0) throw divergence_error("gossip round count must be >= 0");

  const int n = set.n;
  const int d = set.d;
  RunRecord rec;
  rec.solver = name;
  rec.eta = eta;
  rec.gossip_rounds = gossip_rounds;
  rec.lambda2 = w.lambda2;
  rec.rho = gossip_contraction_factor(w.lambda2, gossip_rounds);

  RandomStream rs(seed);

  DenseMatrix x(n, d);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < d; ++j) x(i, j) = xbar0[j];

  DenseMatrix g(n, d);
  for (int i = 0; i < n; ++i) metered_gradient(set, meter, i, x.row_span(i), g.row_span(i));
  meter.record_computation_step();
  DenseMatrix s = g;

  DenseMatrix cache = g;
  std::vector<long long> cache_version(n, 0);

  rec.rows.push_back(aggregate_snapshot(set, x, s, g, meter, 0, eta, mode.p, rec.rho, opt));
  const double initial_gap = set.f_star ? rec.rows[0].fvalue - *set.f_star : 0.0;

  DenseMatrix work(n, d), g_next(n, d);
  std::vector<double> fresh(d), old(d);

  for (int t = 0; t < iterations; ++t) {
    int refresh = 1;
    std::vector<int> draws;
    if (mode.stochastic) {
      refresh = draw_bernoulli(rs, mode.p);
      draws = draw_multinomial(rs, mode.b, n);
    }

    TrackingObservation obs;
    if (opt.observer) {
      obs.iter = t + 1;
      obs.xbar_prev = x.column_means();
      obs.sbar_prev = s.column_means();
    }

    for (int i = 0; i < n; ++i)
      for (int j = 0; j < d; ++j) work(i, j) = x(i, j) - eta * s(i, j);
    DenseMatrix x_next = acc_gossip(work, w, gossip_rounds, &meter);

    meter.record_computation_step();
    g_next = g;
    if (refresh == 1) {
      for (int i = 0; i < n; ++i) {
        metered_gradient(set, meter, i, x_next.row_span(i), g_next.row_span(i));
        std::copy(g_next.row(i), g_next.row(i) + d, cache.row(i));
        cache_version[i] = t + 1;
      }
    } else {
      for (int i = 0; i < n; ++i) {
        if (draws[i] == 0) continue;
        metered_gradient(set, meter, i, x_next.row_span(i), fresh);
        const double* prev_grad;
        if (cache_version[i] == t) {
          prev_grad = cache.row(i);
        } else {
          metered_gradient(set, meter, i, x.row_span(i), old);
          prev_grad = old.data();
        }
        // xi_i / (b q) with q = 1/n
        const double scale = static_cast<double>(draws[i]) * n / mode.b;
        double* gi = g_next.row(i);
        for (int j = 0; j < d; ++j) gi[j] = g(i, j) + scale * (fresh[j] - prev_grad[j]);
        std::copy(fresh.begin(), fresh.end(), cache.row(i));
        cache_version[i] = t + 1;
      }
    }

    for (int i = 0; i < n; ++i)
      for (int j = 0; j < d; ++j) work(i, j) = s(i, j) + (g_next(i, j) - g(i, j));
    s = acc_gossip(work, w, gossip_rounds, &meter);

    x = std::move(x_next);
    g = g_next;

    if (opt.observer) {
      obs.xbar = x.column_means();
      obs.sbar = s.column_means();
      obs.gbar = g.column_means();
      opt.observer(obs);
    }

    rec.rows.push_back(
        aggregate_snapshot(set, x, s, g, meter, t + 1, eta, mode.p, rec.rho, opt));
    guard(rec.rows.back().fvalue, initial_gap, set.f_star, opt.divergence_factor,
          t + 1, rec.solver);
    if (opt.stop_at_gap && set.f_star && rec.rows.back().gap <= *opt.stop_at_gap)
      break;
  }

  rec.final_mean = x.column_means();
  rec.output_agent = static_cast<int>(RandomStream(seed + 1).next_below(n));
  rec.final_output.assign(x.row(rec.output_agent), x.row(rec.output_agent) + d);
  return rec;
}

}  // namespace

RunRecord gd(const LocalObjectiveSet& set, std::span<const double> x0, double eta,
             int iterations, OracleMeter& meter, const RunOptions& opt) {
  return run_centralized("gd", false, set, x0, eta, iterations, meter, opt);
}

RunRecord cgd(const LocalObjectiveSet& set, std::span<const double> x0, double eta,
              int iterations, OracleMeter& meter, const RunOptions& opt) {
  return run_centralized("cgd", true, set, x0, eta, iterations, meter, opt);
}

RunRecord dgd_gt(const LocalObjectiveSet& set, const MixingMatrix& w,
                 std::span<const double> xbar0, double eta, int gossip_rounds,
                 int iterations, OracleMeter& meter, uint64_t seed,
                 const RunOptions& opt) {
  TrackingLoopMode mode;
  mode.stochastic = false;
  return run_tracking("dgd-gt", set, w, xbar0, eta, gossip_rounds, iterations, meter,
                      seed, opt, mode);
}

RunRecord drone(const LocalObjectiveSet& set, const MixingMatrix& w,
                std::span<const double> xbar0, const SolverParams& params,
                OracleMeter& meter, const RunOptions& opt) {
  if (!(params.restart_prob > 0.0) || params.restart_prob > 1.0)
    throw divergence_error("drone: p must lie in (0, 1]");
  if (params.minibatch < 1 || params.minibatch > set.n)
    throw divergence_error("drone: b must be an integer in [1, n]");
  TrackingLoopMode mode;
  mode.stochastic = true;
  mode.p = params.restart_prob;
  mode.b = params.minibatch;
  return run_tracking("drone", set, w, xbar0, params.eta, params.gossip_rounds,
                      params.iterations, meter, params.seed, opt, mode);
}

DefaultParamsResult drone_default_params(int n, double L, double mu, double gamma,
                                         double phi0, double eps) {
  if (n < 1 || !(L > 0.0) || !(mu > 0.0) || !(phi0 > 0.0) || !(eps > 0.0))
    throw divergence_error("drone_default_params: inputs must be positive");
  if (!(gamma > 0.0) || gamma > 1.0)
    throw divergence_error("drone_default_params: gamma must lie in (0, 1]");

  DefaultParamsResult res;
  const double kappa = L / mu;
  double p = 1.0 / (std::min(std::sqrt(static_cast<double>(n)), kappa) + 1.0);
  const double p_lo = 1.0 / (n + 1.0);
  if (p < p_lo || p > 0.5) {
    res.clamped = true;
    const double raw = p;
    p = std::clamp(p, p_lo, 0.5);
    res.note = "p clamped from " + std::to_string(raw) + " to " + std::to_string(p);
  }
  const int b = std::min<int>(
      n, static_cast<int>(std::ceil((1.0 - p) / p - 1e-12)));
  res.params.restart_prob = p;
  res.params.minibatch = std::max(1, b);
  res.params.eta = std::min(1.0 / (20.0 * L), p / (2.0 * mu));
  res.params.gossip_rounds = default_round_count(n, gamma);
  res.params.iterations = static_cast<int>(
      std::ceil(std::log(phi0 / eps) / (mu * res.params.eta)));
  return res;
}

LyapunovComponents lyapunov_components(const LocalObjectiveSet& set,
                                       const DenseMatrix& x, const DenseMatrix& s,
                                       const DenseMatrix& g, double eta, double p,
                                       double rho, double L, double gap) {
  const int n = set.n;
  const int d = set.d;
  LyapunovComponents out;

  std::vector<double> gi(d), mean_err(d, 0.0);
  double frob_err = 0.0;
  for (int i = 0; i < n; ++i) {
    set.gradient(i, x.row_span(i), gi);
    const double* grow = g.row(i);
    for (int j = 0; j < d; ++j) {
      const double e = grow[j] - gi[j];
      mean_err[j] += e;
      frob_err += e * e;
    }
  }
  for (auto& v : mean_err) v /= n;
  out.u = dot(mean_err, mean_err);
  out.v = frob_err / n;

  const double dev_x = x.deviation_from_mean();
  const double dev_s = s.deviation_from_mean();
  out.c = dev_x * dev_x + eta * eta * dev_s * dev_s;

  const double alpha = 2.0 * eta / p;
  const double beta = 8.0 * L * rho * rho * n * eta * eta;
  out.phi = gap + alpha * out.u + beta * out.v + L * out.c;
  return out;
}

}  // namespace plbench
