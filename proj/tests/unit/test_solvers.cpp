#include <doctest.h>

#include <cmath>

#include "plbench/instances.hpp"
#include "plbench/solvers.hpp"

using namespace plbench;

namespace {

// single-agent f(x) = ||x||^2 / 2
LocalObjectiveSet simple_quadratic(int d) {
  LocalObjectiveSet set;
  set.n = 1;
  set.d = d;
  set.value = [](int, std::span<const double> x) { return 0.5 * dot(x, x); };
  set.gradient = [](int, std::span<const double> x, std::span<double> out) {
    for (size_t j = 0; j < x.size(); ++j) out[j] = x[j];
  };
  set.smoothness = 1.0;
  set.pl_constant = 1.0;
  set.f_star = 0.0;
  return set;
}

double trajectory_distance(const RunRecord& a, const RunRecord& b) {
  REQUIRE(a.rows.size() == b.rows.size());
  double worst = 0.0;
  for (size_t r = 0; r < a.rows.size(); ++r)
    worst = std::max(worst, std::abs(a.rows[r].fvalue - b.rows[r].fvalue));
  double end = 0.0;
  REQUIRE(a.final_mean.size() == b.final_mean.size());
  for (size_t j = 0; j < a.final_mean.size(); ++j)
    end = std::max(end, std::abs(a.final_mean[j] - b.final_mean[j]));
  return std::max(worst, end);
}

}  // namespace

TEST_CASE("gd solves the unit quadratic in one step") {
  const auto set = simple_quadratic(3);
  OracleMeter meter(1, 0.0);
  const std::vector<double> x0 = {3.0, -1.0, 0.5};
  const auto rec = gd(set, x0, 1.0, 1, meter);
  CHECK(rec.rows.back().gap == doctest::Approx(0.0).epsilon(1e-15));
  for (double v : rec.final_mean) CHECK(v == 0.0);
}

TEST_CASE("zero iterations produce only the initial row and no oracle traffic") {
  const auto set = simple_quadratic(2);
  OracleMeter meter(1, 3.0);
  const auto rec = gd(set, std::vector<double>{1.0, 1.0}, 0.1, 0, meter);
  CHECK(rec.rows.size() == 1);
  CHECK(meter.lfo_total() == 0);
  CHECK(meter.time_units() == 0.0);
}

TEST_CASE("gd on the linear-span instance obeys the PL rate") {
  const double L = 1.0, mu = 0.1, delta = 1.0;
  const auto set = linear_span_instance(L, mu, 8, delta);
  OracleMeter meter(8, 0.0);
  const auto rec =
      gd(set, std::vector<double>(set.d, 0.0), 1.0 / L, 200, meter);
  const double gap0 = rec.rows[0].gap;
  for (int t = 1; t <= 200; ++t) {
    const double bound = std::pow(1.0 - mu / L, t) * gap0 * (1.0 + 1e-9);
    CHECK(rec.rows[t].gap <= bound);
  }
}

TEST_CASE("cgd matches gd iterates but pays communication") {
  const auto set = linear_span_instance(1.0, 0.1, 4, 1.0);
  const std::vector<double> x0(set.d, 0.25);
  OracleMeter m1(4, 2.0), m2(4, 2.0);
  const auto a = gd(set, x0, 0.3, 10, m1);
  const auto b = cgd(set, x0, 0.3, 10, m2);
  CHECK(trajectory_distance(a, b) == 0.0);
  CHECK(m1.comm_rounds() == 0);
  CHECK(m2.comm_rounds() == 10);
  CHECK(m1.time_units() == doctest::Approx(10.0));
  CHECK(m2.time_units() == doctest::Approx(30.0));
}

TEST_CASE("dgd-gt meters n oracle calls and 2K rounds per iteration") {
  const auto set = linear_span_instance(1.0, 0.1, 6, 1.0);
  const auto w = laplacian_mixing(Graph::path(6));
  OracleMeter meter(6, 1.5);
  const int K = 9, T = 7;
  const auto rec = dgd_gt(set, w, std::vector<double>(set.d, 0.0), 0.5, K, T, meter);
  REQUIRE(rec.rows.size() == size_t(T + 1));
  CHECK(rec.rows[0].lfo_total == 6);  // tracker initialization
  for (int t = 1; t <= T; ++t) {
    CHECK(rec.rows[t].lfo_total - rec.rows[t - 1].lfo_total == 6);
    CHECK(rec.rows[t].comm_rounds - rec.rows[t - 1].comm_rounds == 2 * K);
    CHECK(rec.rows[t].time_units - rec.rows[t - 1].time_units ==
          doctest::Approx(1.0 + 2 * K * 1.5));
  }
}

TEST_CASE("dgd-gt keeps the mean recursion and tracking conservation") {
  const auto set = linear_span_instance(1.0, 0.1, 5, 1.0);
  const auto w = laplacian_mixing(Graph::ring(5));
  const double eta = 0.4;
  OracleMeter meter(5, 0.0);
  const int K = 6, T = 40;
  RunOptions opt;
  double worst_recursion = 0.0, worst_tracking = 0.0;
  opt.observer = [&](const TrackingObservation& obs) {
    for (size_t j = 0; j < obs.xbar.size(); ++j) {
      const double want = obs.xbar_prev[j] - eta * obs.sbar_prev[j];
      worst_recursion = std::max(worst_recursion, std::abs(obs.xbar[j] - want));
      worst_tracking = std::max(worst_tracking, std::abs(obs.sbar[j] - obs.gbar[j]));
    }
  };
  const auto rec =
      dgd_gt(set, w, std::vector<double>(set.d, 0.1), eta, K, T, meter, 0, opt);
  CHECK(worst_recursion <= 1e-10);
  CHECK(worst_tracking <= 1e-10);
  CHECK(rec.rows.back().gap < rec.rows.front().gap);
}

TEST_CASE("drone with p=1 replays dgd-gt exactly") {
  const auto set = linear_span_instance(1.0, 0.1, 6, 1.0);
  const auto w = laplacian_mixing(Graph::path(6));
  OracleMeter m1(6, 0.0), m2(6, 0.0);
  const int K = 5, T = 200;
  const auto a = dgd_gt(set, w, std::vector<double>(set.d, 0.0), 0.5, K, T, m1, 3);
  SolverParams params;
  params.eta = 0.5;
  params.iterations = T;
  params.gossip_rounds = K;
  params.restart_prob = 1.0;
  params.minibatch = 2;
  params.seed = 77;  // seed must not matter when p = 1
  const auto b = drone(set, w, std::vector<double>(set.d, 0.0), params, m2);
  CHECK(trajectory_distance(a, b) <= 1e-12);
  CHECK(m1.lfo_total() == m2.lfo_total());
}

TEST_CASE("single-agent drone reduces to gd") {
  const auto set = simple_quadratic(4);
  MixingMatrix w;
  w.w = DenseMatrix(1, 1, 1.0);
  w.lambda2 = 0.0;
  w.gap = 1.0;
  OracleMeter m1(1, 0.0), m2(1, 0.0);
  const std::vector<double> x0 = {1.0, -2.0, 0.5, 3.0};
  const auto a = gd(set, x0, 0.7, 50, m1);
  SolverParams params;
  params.eta = 0.7;
  params.iterations = 50;
  params.gossip_rounds = 11;
  params.restart_prob = 1.0;
  params.minibatch = 1;
  const auto b = drone(set, w, x0, params, m2);
  CHECK(trajectory_distance(a, b) <= 1e-12);
}

TEST_CASE("dgd-gt mean trajectory equals gd on the averaging matrix") {
  // equal local Hessians make the mean iterate follow gd exactly; the step
  // size keeps the per-agent deviation recursion contractive so round-off
  // in the means stays small
  const auto set = linear_span_instance(1.0, 0.1, 8, 1.0);
  MixingMatrix avg;
  avg.w = DenseMatrix(8, 8, 1.0 / 8.0);
  avg.lambda2 = 0.0;
  avg.gap = 1.0;
  OracleMeter m1(8, 0.0), m2(8, 0.0);
  const auto a = gd(set, std::vector<double>(set.d, 0.0), 0.2, 120, m1);
  const auto b =
      dgd_gt(set, avg, std::vector<double>(set.d, 0.0), 0.2, 1, 120, m2);
  double worst = 0.0;
  for (size_t t = 0; t < a.rows.size(); ++t)
    worst = std::max(worst, std::abs(a.rows[t].fvalue - b.rows[t].fvalue));
  CHECK(worst <= 1e-10);
  for (size_t j = 0; j < a.final_mean.size(); ++j)
    CHECK(std::abs(a.final_mean[j] - b.final_mean[j]) <= 1e-10);
}

TEST_CASE("drone draws are consumed in a fixed order, so streams align across p") {
  const auto set = linear_span_instance(1.0, 0.1, 4, 1.0);
  const auto w = laplacian_mixing(Graph::complete(4));
  SolverParams params;
  params.eta = 0.2;
  params.iterations = 30;
  params.gossip_rounds = 4;
  params.minibatch = 2;
  params.seed = 5;
  OracleMeter m1(4, 0.0), m2(4, 0.0);
  params.restart_prob = 0.4;
  const auto a = drone(set, w, std::vector<double>(set.d, 0.0), params, m1);
  const auto b = [&] {
    OracleMeter m(4, 0.0);
    return drone(set, w, std::vector<double>(set.d, 0.0), params, m);
  }();
  CHECK(trajectory_distance(a, b) == 0.0);  // determinism
  params.restart_prob = 0.9;
  const auto c = drone(set, w, std::vector<double>(set.d, 0.0), params, m2);
  CHECK(std::isfinite(c.rows.back().fvalue));
}

TEST_CASE("drone validates its sampling parameters") {
  const auto set = linear_span_instance(1.0, 0.1, 4, 1.0);
  const auto w = laplacian_mixing(Graph::complete(4));
  SolverParams params;
  params.eta = 0.2;
  params.iterations = 2;
  params.gossip_rounds = 2;
  params.seed = 1;
  OracleMeter m0(4, 0.0), m1(4, 0.0);
  params.restart_prob = 0.0;
  CHECK_THROWS_AS(drone(set, w, std::vector<double>(set.d, 0.0), params, m0),
                  divergence_error);
  params.restart_prob = 0.5;
  params.minibatch = 5;
  CHECK_THROWS_AS(drone(set, w, std::vector<double>(set.d, 0.0), params, m1),
                  divergence_error);
}

TEST_CASE("divergence guard names the iteration") {
  const auto set = linear_span_instance(1.0, 0.1, 4, 1.0);
  OracleMeter meter(4, 0.0);
  try {
    gd(set, std::vector<double>(set.d, 0.0), 5.0, 500, meter);  // eta >> 2/L
    FAIL("expected divergence");
  } catch (const divergence_error& e) {
    CHECK(std::string(e.what()).find("iteration") != std::string::npos);
  }
}

TEST_CASE("default solver parameter rule") {
  SUBCASE("n=4, kappa=10") {
    const auto res = drone_default_params(4, 10.0, 1.0, 0.5, 1.0, 1e-6);
    CHECK(res.params.restart_prob == doctest::Approx(1.0 / 3.0));
    CHECK(res.params.minibatch == 2);
    CHECK_FALSE(res.clamped);
  }
  SUBCASE("n=10000, kappa=10") {
    const auto res = drone_default_params(10000, 10.0, 1.0, 0.5, 1.0, 1e-6);
    CHECK(res.params.restart_prob == doctest::Approx(1.0 / 11.0));
    CHECK(res.params.minibatch == 10);
  }
  SUBCASE("eta formula") {
    const auto res = drone_default_params(16, 100.0, 2.0, 0.3, 1.0, 1e-6);
    const double p = res.params.restart_prob;
    CHECK(res.params.eta ==
          doctest::Approx(std::min(1.0 / 2000.0, p / 4.0)));
    CHECK(res.params.gossip_rounds == default_round_count(16, 0.3));
  }
  SUBCASE("kappa below one clamps p with a note") {
    const auto res = drone_default_params(9, 1.0, 2.0, 1.0, 1.0, 1e-3);
    CHECK(res.clamped);
    CHECK(res.params.restart_prob == doctest::Approx(0.5));
    CHECK(res.params.minibatch >= 1);
  }
}

TEST_CASE("lyapunov components at a freshly initialized state") {
  const auto set = linear_span_instance(1.0, 0.1, 4, 1.0);
  const int n = 4, d = set.d;
  DenseMatrix x(n, d, 0.0);
  DenseMatrix g(n, d);
  std::vector<double> gi(d);
  for (int i = 0; i < n; ++i) {
    set.gradient(i, x.row_span(i), gi);
    std::copy(gi.begin(), gi.end(), g.row(i));
  }
  DenseMatrix s = g;
  const double gap = mean_objective_gap(set, std::vector<double>(d, 0.0));
  const auto lyap = lyapunov_components(set, x, s, g, 0.1, 0.5, 0.01, 1.0, gap);
  CHECK(lyap.u == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(lyap.v == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(lyap.c > 0.0);  // trackers start unmixed, so S deviates from its mean

  // consensual S and X zero out the consensus term
  DenseMatrix s_flat(n, d, 0.0);
  const auto lyap2 = lyapunov_components(set, x, s_flat, g, 0.1, 0.5, 0.01, 1.0, gap);
  CHECK(lyap2.c == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(lyap2.phi == doctest::Approx(gap).epsilon(1e-12));
}

TEST_CASE("tracking solvers converge log-linearly on the benchmark instance") {
  const auto inst = experiment_instance(32);
  const auto w = laplacian_mixing(Graph::path(32));
  const auto defaults = drone_default_params(
      32, *inst.set.smoothness, *inst.set.pl_constant, w.gap, 1.0, 1e-6);
  SolverParams params = defaults.params;
  params.eta = 1.0 / (74.0 * kChainA);  // full step for the preset's global f
  params.iterations = 40000;
  params.seed = 42;
  RunOptions opt;
  opt.stop_at_gap = 1e-6;
  OracleMeter meter(32, 1.0);
  const std::vector<double> x0(inst.set.d, 0.0);
  const auto rec = drone(inst.set, w, x0, params, meter, opt);
  REQUIRE(rec.rows.back().gap <= 1e-6);

  std::vector<double> ts, ys;
  for (const auto& row : rec.rows)
    if (row.gap > 0.0) {
      ts.push_back(row.iter);
      ys.push_back(std::log(row.gap));
    }
  double mx = 0, my = 0;
  for (size_t i = 0; i < ts.size(); ++i) {
    mx += ts[i];
    my += ys[i];
  }
  mx /= ts.size();
  my /= ts.size();
  double sxx = 0, sxy = 0, syy = 0;
  for (size_t i = 0; i < ts.size(); ++i) {
    sxx += (ts[i] - mx) * (ts[i] - mx);
    sxy += (ts[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  CHECK(sxy / sxx < 0.0);
  CHECK(sxy * sxy / (sxx * syy) >= 0.9);
}

TEST_CASE("early stop at the gap target truncates the record") {
  const auto set = simple_quadratic(2);
  OracleMeter meter(1, 0.0);
  RunOptions opt;
  opt.stop_at_gap = 1e-8;
  const auto rec = gd(set, std::vector<double>{1.0, 1.0}, 0.5, 1000, meter, opt);
  CHECK(rec.rows.size() < 1001);
  CHECK(rec.rows.back().gap <= 1e-8);
}
