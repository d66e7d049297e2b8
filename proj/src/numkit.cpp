#include "plbench/numkit.hpp"

#include <algorithm>
#include <cmath>

namespace plbench {

DenseMatrix DenseMatrix::identity(int n) {
  DenseMatrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

bool DenseMatrix::all_finite() const {
  for (double v : data_)
    if (!std::isfinite(v)) return false;
  return true;
}

double DenseMatrix::frobenius_norm() const {
  double s = 0.0;
  for (double v : data_) s += v * v;
  return std::sqrt(s);
}

std::vector<double> DenseMatrix::column_means() const {
  std::vector<double> mean(cols_, 0.0);
  for (int i = 0; i < rows_; ++i) {
    const double* r = row(i);
    for (int j = 0; j < cols_; ++j) mean[j] += r[j];
  }
  for (double& v : mean) v /= rows_;
  return mean;
}

double DenseMatrix::deviation_from_mean() const {
  std::vector<double> mean = column_means();
  double s = 0.0;
  for (int i = 0; i < rows_; ++i) {
    const double* r = row(i);
    for (int j = 0; j < cols_; ++j) {
      double d = r[j] - mean[j];
      s += d * d;
    }
  }
  return std::sqrt(s);
}

namespace {

uint64_t splitmix64(uint64_t& x) {
  x += 0x9e3779b97f4a7c15ull;
  uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

RandomStream::RandomStream(uint64_t seed) : seed_(seed) {
  uint64_t s = seed;
  for (auto& w : state_) w = splitmix64(s);
}

uint64_t RandomStream::next_u64() {
  const uint64_t result = rotl(state_[1] * 5, 7) * 9;
  const uint64_t t = state_[1] << 17;
  state_[2] ^= state_[0];
  state_[3] ^= state_[1];
  state_[1] ^= state_[2];
  state_[0] ^= state_[3];
  state_[2] ^= t;
  state_[3] = rotl(state_[3], 45);
  ++counter_;
  return result;
}

double RandomStream::next_double() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

uint64_t RandomStream::next_below(uint64_t n) {
  if (n == 0) throw numeric_error("next_below: n must be positive");
  const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  uint64_t v = next_u64();
  while (v >= limit) v = next_u64();
  return v % n;
}

double RandomStream::next_normal() {
  if (have_spare_normal_) {
    have_spare_normal_ = false;
    return spare_normal_;
  }
  double u1 = next_double();
  while (u1 <= 0.0) u1 = next_double();
  const double u2 = next_double();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * M_PI * u2;
  spare_normal_ = r * std::sin(a);
  have_spare_normal_ = true;
  return r * std::cos(a);
}

int draw_bernoulli(RandomStream& rs, double p) {
  if (p < 0.0 || p > 1.0) throw numeric_error("draw_bernoulli: p outside [0,1]");
  return rs.next_double() < p ? 1 : 0;
}

std::vector<int> draw_multinomial(RandomStream& rs, int b, int n) {
  if (b < 1) throw numeric_error("draw_multinomial: trials must be >= 1");
  if (n < 1) throw numeric_error("draw_multinomial: categories must be >= 1");
  std::vector<int> counts(n, 0);
  for (int k = 0; k < b; ++k) counts[rs.next_below(static_cast<uint64_t>(n))] += 1;
  return counts;
}

EigenResult symmetric_eigen(const DenseMatrix& m, double tol) {
  const int n = m.rows();
  if (n != m.cols()) throw numeric_error("symmetric_eigen: matrix not square");
  double scale = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) scale = std::max(scale, std::abs(m(i, j)));
  const double sym_tol = tol * std::max(1.0, scale);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (std::abs(m(i, j) - m(j, i)) > sym_tol)
        throw numeric_error("symmetric_eigen: matrix not symmetric within tol");

  DenseMatrix a = m;
  DenseMatrix v = DenseMatrix::identity(n);

  const int max_sweeps = 64;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) off += a(i, j) * a(i, j);
    off = std::sqrt(2.0 * off);
    if (off <= tol * std::max(1.0, a.frobenius_norm())) break;

    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (std::abs(apq) <= 1e-300) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        double t = 1.0 / (std::abs(theta) + std::sqrt(1.0 + theta * theta));
        if (theta < 0.0) t = -t;
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        const double tau = s / (1.0 + c);

        const double app = a(p, p), aqq = a(q, q);
        a(p, p) = app - t * apq;
        a(q, q) = aqq + t * apq;
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (int k = 0; k < n; ++k) {
          if (k == p || k == q) continue;
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = akp - s * (akq + tau * akp);
          a(p, k) = a(k, p);
          a(k, q) = akq + s * (akp - tau * akq);
          a(q, k) = a(k, q);
        }
        for (int k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = vkp - s * (vkq + tau * vkp);
          v(k, q) = vkq + s * (vkp - tau * vkq);
        }
      }
    }
  }

  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](int x, int y) { return a(x, x) > a(y, y); });

  EigenResult res;
  res.values.resize(n);
  res.vectors = DenseMatrix(n, n);
  for (int k = 0; k < n; ++k) {
    res.values[k] = a(order[k], order[k]);
    for (int i = 0; i < n; ++i) res.vectors(i, k) = v(i, order[k]);
  }
  return res;
}

std::vector<double> symmetric_eigenvalues(const DenseMatrix& m, double tol) {
  return symmetric_eigen(m, tol).values;
}

double default_fd_step(std::span<const double> x) {
  return 1e-6 * std::max(1.0, inf_norm(x));
}

std::vector<double> central_difference_gradient(const ScalarFn& f,
                                                std::span<const double> x,
                                                double h) {
  if (!(h > 0.0)) throw numeric_error("central_difference_gradient: h must be positive");
  std::vector<double> p(x.begin(), x.end());
  std::vector<double> g(x.size());
  for (size_t j = 0; j < x.size(); ++j) {
    const double xj = p[j];
    p[j] = xj + h;
    const double fp = f(p);
    p[j] = xj - h;
    const double fm = f(p);
    p[j] = xj;
    if (!std::isfinite(fp) || !std::isfinite(fm))
      throw numeric_error("central_difference_gradient: non-finite evaluation");
    g[j] = (fp - fm) / (2.0 * h);
  }
  return g;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

double inf_norm(std::span<const double> a) {
  double s = 0.0;
  for (double v : a) s = std::max(s, std::abs(v));
  return s;
}

}  // namespace plbench
