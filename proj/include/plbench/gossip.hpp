#pragma once

#include "plbench/numkit.hpp"
#include "plbench/objectives.hpp"
#include "plbench/topology.hpp"

namespace plbench {

// Momentum for the accelerated gossip recursion, from the lambda2 of the
// matrix actually used (clamped to [0,1] to absorb eigensolve noise).
double gossip_momentum(double lambda2);

// sqrt(14) * (1 - (1 - 1/sqrt(2)) * sqrt(1 - lambda2))^K
double gossip_contraction_factor(double lambda2, int rounds);

// Chebyshev-accelerated consensus: K multiplications of
//   Y^{k+1} = (1+eta_y) W Y^k - eta_y Y^{k-1},  Y^{-1} = Y^0,
// returning Y^K. Column means are preserved. Each multiplication is one
// communication round on the meter.
DenseMatrix acc_gossip(const DenseMatrix& y0, const MixingMatrix& w, int rounds,
                       OracleMeter* meter = nullptr);

// ceil(sqrt(2) (4 + ln n) / ((sqrt(2)-1) sqrt(gamma)))
int default_round_count(int n, double gamma);

}  // namespace plbench
