#include "ehtcp/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace ehtcp {

namespace {

void require(bool cond, const std::string& what) {
  if (!cond) throw std::invalid_argument(what);
}

}  // namespace

Tensor::Tensor(int order, int dim, std::vector<TensorEntry> entries)
    : order_(order), dim_(dim), entries_(std::move(entries)) {
  require(order_ >= 2, "tensor order must be >= 2");
  require(dim_ >= 1, "tensor dimension must be >= 1");
  for (const auto& e : entries_) {
    require(static_cast<int>(e.index.size()) == order_,
            "tensor entry index tuple must have exactly `order` components");
    for (int c : e.index)
      require(c >= 0 && c < dim_, "tensor entry index out of range");
    require(std::isfinite(e.value), "tensor coefficient must be finite");
  }
  std::sort(entries_.begin(), entries_.end(),
            [](const TensorEntry& a, const TensorEntry& b) {
              return a.index < b.index;
            });
  for (std::size_t i = 1; i < entries_.size(); ++i)
    require(entries_[i - 1].index != entries_[i].index,
            "duplicate tensor entry index tuple");
}

double Tensor::max_abs_coeff() const {
  double m = 0.0;
  for (const auto& e : entries_) m = std::max(m, std::abs(e.value));
  return m;
}

Tensor Tensor::identity(int order, int dim) {
  std::vector<TensorEntry> entries;
  entries.reserve(dim);
  for (int i = 0; i < dim; ++i)
    entries.push_back({std::vector<int>(order, i), 1.0});
  return Tensor(order, dim, std::move(entries));
}

Tensor Tensor::from_matrix(const Matrix& a) {
  if (a.rows() != a.cols() || a.rows() < 1)
    throw std::invalid_argument("from_matrix requires a square matrix");
  std::vector<TensorEntry> entries;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      if (a(i, j) != 0.0) entries.push_back({{i, j}, a(i, j)});
  return Tensor(2, static_cast<int>(a.rows()), std::move(entries));
}

Tensor tensor_sum(const Tensor& a, const Tensor& b) {
  if (a.order() != b.order() || a.dim() != b.dim())
    throw std::invalid_argument("tensor_sum: shape mismatch");
  std::vector<TensorEntry> merged = a.entries();
  for (const auto& e : b.entries()) {
    auto it = std::find_if(merged.begin(), merged.end(), [&](const TensorEntry& m) {
      return m.index == e.index;
    });
    if (it == merged.end())
      merged.push_back(e);
    else
      it->value += e.value;
  }
  merged.erase(std::remove_if(merged.begin(), merged.end(),
                              [](const TensorEntry& m) { return m.value == 0.0; }),
               merged.end());
  return Tensor(a.order(), a.dim(), std::move(merged));
}

Vec apply_power(const Tensor& a, const Vec& x) {
  if (x.size() != a.dim())
    throw std::invalid_argument("apply_power: vector dimension mismatch");
  Vec out = Vec::Zero(a.dim());
  const int m = a.order();
  for (const auto& e : a.entries()) {
    double prod = e.value;
    for (int p = 1; p < m; ++p) prod *= x[e.index[p]];
    out[e.index[0]] += prod;
  }
  return out;
}

Matrix jacobian(const Tensor& a, const Vec& x) {
  if (x.size() != a.dim())
    throw std::invalid_argument("jacobian: vector dimension mismatch");
  Matrix out = Matrix::Zero(a.dim(), a.dim());
  const int m = a.order();
  for (const auto& e : a.entries()) {
    for (int p = 1; p < m; ++p) {
      double prod = e.value;
      for (int r = 1; r < m; ++r)
        if (r != p) prod *= x[e.index[r]];
      out(e.index[0], e.index[p]) += prod;
    }
  }
  return out;
}

Vec min_map(const Vec& x, const Vec& y) {
  if (x.size() != y.size())
    throw std::invalid_argument("min_map: dimension mismatch");
  return x.cwiseMin(y);
}

Vec hadamard(const Vec& x, const Vec& y) {
  if (x.size() != y.size())
    throw std::invalid_argument("hadamard: dimension mismatch");
  return x.cwiseProduct(y);
}

Vec elementwise_power(const Vec& x, int p) {
  Vec out(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) out[i] = std::pow(x[i], p);
  return out;
}

double real_nth_root(double t, int p) {
  if (p < 1) throw std::invalid_argument("real_nth_root: p must be >= 1");
  if (p == 1) return t;
  if (t >= 0.0) return std::pow(t, 1.0 / p);
  if (p % 2 == 1) return -std::pow(-t, 1.0 / p);
  throw std::domain_error("real_nth_root: even root of a negative number");
}

}  // namespace ehtcp
