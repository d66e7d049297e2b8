#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace plbench {

struct numeric_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Dense row-major matrix. The workhorse container for iterate blocks
// (n x d) and mixing matrices (n x n).
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(int rows, int cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * cols, fill) {}

  static DenseMatrix identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  double& operator()(int i, int j) { return data_[static_cast<size_t>(i) * cols_ + j]; }
  double operator()(int i, int j) const { return data_[static_cast<size_t>(i) * cols_ + j]; }

  double* row(int i) { return data_.data() + static_cast<size_t>(i) * cols_; }
  const double* row(int i) const { return data_.data() + static_cast<size_t>(i) * cols_; }
  std::span<double> row_span(int i) { return {row(i), static_cast<size_t>(cols_)}; }
  std::span<const double> row_span(int i) const { return {row(i), static_cast<size_t>(cols_)}; }

  std::vector<double>& data() { return data_; }
  const std::vector<double>& data() const { return data_; }

  bool all_finite() const;
  double frobenius_norm() const;

  // 1/n * 1^T X, the column means as a length-cols vector.
  std::vector<double> column_means() const;

  // ||X - 1 xbar||_F with xbar the column means.
  double deviation_from_mean() const;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> data_;
};

// Deterministic seeded random stream: xoshiro256** seeded via splitmix64.
// Same seed gives the same draw sequence on every platform (all integer
// arithmetic; uniform doubles take the top 53 bits).
class RandomStream {
 public:
  explicit RandomStream(uint64_t seed);

  uint64_t next_u64();
  // uniform on [0, 1), resolution 2^-53
  double next_double();
  // exact uniform on {0, ..., n-1} via rejection
  uint64_t next_below(uint64_t n);
  // standard normal via Box-Muller (uses libm, so only ulp-stable across libms)
  double next_normal();

  uint64_t seed() const { return seed_; }
  uint64_t draws() const { return counter_; }

 private:
  uint64_t state_[4];
  uint64_t seed_ = 0;
  uint64_t counter_ = 0;
  bool have_spare_normal_ = false;
  double spare_normal_ = 0.0;
};

int draw_bernoulli(RandomStream& rs, double p);

// b independent uniform categorical draws over n categories, counted.
std::vector<int> draw_multinomial(RandomStream& rs, int b, int n);

struct EigenResult {
  std::vector<double> values;  // descending
  DenseMatrix vectors;         // column k pairs with values[k]
};

// Cyclic Jacobi eigensolve for a symmetric matrix. Throws numeric_error
// if M is not square or not symmetric within tol.
EigenResult symmetric_eigen(const DenseMatrix& m, double tol = 1e-12);
std::vector<double> symmetric_eigenvalues(const DenseMatrix& m, double tol = 1e-12);

using ScalarFn = std::function<double(std::span<const double>)>;

double default_fd_step(std::span<const double> x);

// component j: (f(x + h e_j) - f(x - h e_j)) / (2h)
std::vector<double> central_difference_gradient(const ScalarFn& f,
                                                std::span<const double> x,
                                                double h);

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);
double inf_norm(std::span<const double> a);

}  // namespace plbench
