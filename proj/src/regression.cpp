#include "plbench/regression.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>

namespace plbench {

namespace {

double parse_double_token(const std::string& tok, int line_no, const char* what) {
  size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(tok, &pos);
  } catch (...) {
    throw parse_error("line " + std::to_string(line_no) + ": bad " + what + " '" +
                      tok + "'");
  }
  if (pos != tok.size())
    throw parse_error("line " + std::to_string(line_no) + ": trailing junk in " +
                      what + " '" + tok + "'");
  return v;
}

double sparse_dot(const std::vector<std::pair<int, double>>& row,
                  std::span<const double> x) {
  double s = 0.0;
  for (auto [idx, val] : row) s += val * x[idx];
  return s;
}

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double log1p_exp(double z) {
  if (z > 0.0) return z + std::log1p(std::exp(-z));
  return std::log1p(std::exp(z));
}

}  // namespace

Dataset parse_libsvm(const std::string& text, int dim_override) {
  Dataset ds;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  int max_idx = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok)) continue;
    const double label = parse_double_token(tok, line_no, "label");
    std::vector<std::pair<int, double>> row;
    int prev_idx = 0;
    while (ls >> tok) {
      const auto colon = tok.find(':');
      if (colon == std::string::npos || colon == 0 || colon + 1 == tok.size())
        throw parse_error("line " + std::to_string(line_no) +
                          ": expected idx:val, got '" + tok + "'");
      int idx = 0;
      try {
        size_t pos = 0;
        idx = std::stoi(tok.substr(0, colon), &pos);
        if (pos != colon) throw parse_error("");
      } catch (...) {
        throw parse_error("line " + std::to_string(line_no) + ": bad index in '" +
                          tok + "'");
      }
      if (idx < 1)
        throw parse_error("line " + std::to_string(line_no) + ": indices are 1-based");
      if (idx == prev_idx)
        throw parse_error("line " + std::to_string(line_no) + ": duplicate index " +
                          std::to_string(idx));
      if (idx < prev_idx)
        throw parse_error("line " + std::to_string(line_no) +
                          ": indices must be strictly increasing");
      const double val = parse_double_token(tok.substr(colon + 1), line_no, "value");
      row.emplace_back(idx - 1, val);
      prev_idx = idx;
    }
    if (!std::isfinite(label))
      throw parse_error("line " + std::to_string(line_no) + ": non-finite label");
    max_idx = std::max(max_idx, prev_idx);
    ds.rows.push_back(std::move(row));
    ds.labels.push_back(label);
  }
  ds.m = static_cast<int>(ds.rows.size());
  ds.d = dim_override > 0 ? dim_override : max_idx;
  if (dim_override > 0 && max_idx > dim_override)
    throw parse_error("feature index " + std::to_string(max_idx) +
                      " exceeds requested dimension");
  return ds;
}

LocalObjectiveSet partitioned_regression_set(const Dataset& ds, int n, Loss loss) {
  if (n < 1) throw oracle_error("partitioned_regression_set: n must be >= 1");
  if (n > ds.m)
    throw oracle_error("partitioned_regression_set: more agents than samples");
  if (loss == Loss::kLogistic)
    for (double b : ds.labels)
      if (b != 1.0 && b != -1.0)
        throw oracle_error("logistic loss requires labels in {-1, +1}");

  const int block = (ds.m + n - 1) / n;
  const double prefactor = static_cast<double>(n) / ds.m;
  // shared_ptr so the set may outlive the caller's Dataset
  auto data = std::make_shared<Dataset>(ds);

  LocalObjectiveSet set;
  set.n = n;
  set.d = ds.d;
  set.value = [data, block, prefactor, loss](int i, std::span<const double> x) {
    const int lo = block * i;
    const int hi = std::min(block * (i + 1), data->m);
    double s = 0.0;
    for (int j = lo; j < hi; ++j) {
      const double t = sparse_dot(data->rows[j], x);
      if (loss == Loss::kSquare) {
        const double r = t - data->labels[j];
        s += r * r;
      } else {
        s += log1p_exp(-data->labels[j] * t);
      }
    }
    return prefactor * s;
  };
  set.gradient = [data, block, prefactor, loss](int i, std::span<const double> x,
                                                std::span<double> out) {
    std::fill(out.begin(), out.end(), 0.0);
    const int lo = block * i;
    const int hi = std::min(block * (i + 1), data->m);
    for (int j = lo; j < hi; ++j) {
      const double t = sparse_dot(data->rows[j], x);
      double coeff;
      if (loss == Loss::kSquare) {
        coeff = 2.0 * (t - data->labels[j]);
      } else {
        const double b = data->labels[j];
        coeff = -b * sigmoid(-b * t);
      }
      for (auto [idx, val] : data->rows[j]) out[idx] += coeff * val;
    }
    for (auto& v : out) v *= prefactor;
  };
  set.metadata["loss"] = loss == Loss::kSquare ? "square" : "logistic";
  set.metadata["samples"] = std::to_string(ds.m);
  return set;
}

Dataset synth_regression(int m, int d, double noise, uint64_t seed, Loss loss) {
  if (m < 1 || d < 1) throw oracle_error("synth_regression: m, d must be >= 1");
  RandomStream rs(seed);
  Dataset ds;
  ds.m = m;
  ds.d = d;
  ds.x_true.resize(d);
  const double scale = 1.0 / std::sqrt(static_cast<double>(d));
  for (auto& v : ds.x_true) v = rs.next_normal() * scale;
  ds.rows.resize(m);
  ds.labels.resize(m);
  for (int j = 0; j < m; ++j) {
    auto& row = ds.rows[j];
    row.reserve(d);
    for (int k = 0; k < d; ++k) row.emplace_back(k, rs.next_normal());
    const double t = sparse_dot(row, ds.x_true);
    if (loss == Loss::kSquare)
      ds.labels[j] = t + noise * rs.next_normal();
    else
      ds.labels[j] = t >= 0.0 ? 1.0 : -1.0;
  }
  return ds;
}

double estimate_square_loss_smoothness(const Dataset& ds, int n) {
  const int block = (ds.m + n - 1) / n;
  const double prefactor = 2.0 * static_cast<double>(n) / ds.m;
  double sum_sq = 0.0;
  RandomStream rs(7);
  for (int i = 0; i < n; ++i) {
    const int lo = block * i;
    const int hi = std::min(block * (i + 1), ds.m);
    if (lo >= hi) continue;  // ragged tail can leave empty agents
    std::vector<double> v(ds.d);
    for (auto& e : v) e = rs.next_normal();
    const double nv = norm2(v);
    for (auto& e : v) e /= nv;
    double lam = 0.0;
    for (int it = 0; it < 200; ++it) {
      std::vector<double> w(ds.d, 0.0);
      for (int j = lo; j < hi; ++j) {
        const double t = sparse_dot(ds.rows[j], v);
        for (auto [idx, val] : ds.rows[j]) w[idx] += t * val;
      }
      const double nrm = norm2(w);
      if (nrm == 0.0) {
        lam = 0.0;
        break;
      }
      lam = dot(v, w);
      for (int k = 0; k < ds.d; ++k) v[k] = w[k] / nrm;
    }
    const double li = prefactor * lam;
    sum_sq += li * li;
  }
  return std::sqrt(sum_sq / n);
}

double estimate_square_loss_pl(const Dataset& ds) {
  // spectrum of the Gram side with the smaller dimension
  const bool use_features = ds.d <= ds.m;
  const int k = use_features ? ds.d : ds.m;
  DenseMatrix gram(k, k);
  if (use_features) {
    for (int j = 0; j < ds.m; ++j)
      for (auto [a, va] : ds.rows[j])
        for (auto [b, vb] : ds.rows[j]) gram(a, b) += va * vb;
  } else {
    for (int a = 0; a < ds.m; ++a)
      for (int b = 0; b < ds.m; ++b) {
        double s = 0.0;
        size_t ia = 0, ib = 0;
        const auto &ra = ds.rows[a], &rb = ds.rows[b];
        while (ia < ra.size() && ib < rb.size()) {
          if (ra[ia].first == rb[ib].first)
            s += ra[ia++].second * rb[ib++].second;
          else if (ra[ia].first < rb[ib].first)
            ++ia;
          else
            ++ib;
        }
        gram(a, b) = s;
      }
  }
  const auto eig = symmetric_eigenvalues(gram, 1e-11);
  const double lam_max = eig.front();
  double lam_min_pos = lam_max;
  for (double v : eig)
    if (v > 1e-10 * std::max(1.0, lam_max)) lam_min_pos = v;
  return 2.0 * lam_min_pos / ds.m;
}

}  // namespace plbench
