#pragma once

#include <string>
#include <vector>

#include "plbench/objectives.hpp"

namespace plbench {

struct parse_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Loss { kSquare, kLogistic };

// Sparse sample rows with labels; feature indices are 1-based on disk and
// 0-based in memory.
struct Dataset {
  int m = 0;
  int d = 0;
  std::vector<std::vector<std::pair<int, double>>> rows;
  std::vector<double> labels;
  std::vector<double> x_true;  // set by the synthetic generator
};

// "label idx:val idx:val ..." per line, strictly increasing 1-based indices.
// d defaults to the largest index seen.
Dataset parse_libsvm(const std::string& text, int dim_override = 0);

// Contiguous blocks of ceil(m/n) samples per agent, each local objective
// carrying the n/m prefactor; the ragged tail keeps the same prefactor so
// (1/n) sum f_i == (1/m) sum losses exactly.
LocalObjectiveSet partitioned_regression_set(const Dataset& ds, int n, Loss loss);

// Gaussian features, labels a^T x_true + noise * g (square mode) or
// sign(a^T x_true) (logistic mode).
Dataset synth_regression(int m, int d, double noise, uint64_t seed,
                         Loss loss = Loss::kSquare);

// Power-iteration estimate of the declared mean-squared smoothness of the
// partitioned square-loss set, and the PL constant of f from the Gram
// spectrum. Used where presets need concrete constants.
double estimate_square_loss_smoothness(const Dataset& ds, int n);
double estimate_square_loss_pl(const Dataset& ds);

}  // namespace plbench
