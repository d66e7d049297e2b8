#include "plbench/objectives.hpp"

#include <numeric>

namespace plbench {

double LocalObjectiveSet::mean_value(std::span<const double> x) const {
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += value(i, x);
  return s / n;
}

void LocalObjectiveSet::mean_gradient(std::span<const double> x,
                                      std::span<double> out) const {
  std::vector<double> g(d, 0.0);
  std::fill(out.begin(), out.end(), 0.0);
  for (int i = 0; i < n; ++i) {
    gradient(i, x, g);
    for (int j = 0; j < d; ++j) out[j] += g[j];
  }
  for (int j = 0; j < d; ++j) out[j] /= n;
}

long long OracleMeter::lfo_total() const {
  return std::accumulate(lfo_.begin(), lfo_.end(), 0LL);
}

void metered_gradient(const LocalObjectiveSet& set, OracleMeter& meter, int agent,
                      std::span<const double> x, std::span<double> out) {
  if (agent < 0 || agent >= set.n)
    throw oracle_error("metered_gradient: agent index out of range");
  set.gradient(agent, x, out);
  meter.record_lfo(agent);
}

double mean_objective_gap(const LocalObjectiveSet& set, std::span<const double> xbar) {
  if (!set.f_star)
    throw oracle_error("mean_objective_gap: f_star is unknown for this objective");
  return set.mean_value(xbar) - *set.f_star;
}

}  // namespace plbench
