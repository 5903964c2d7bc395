#pragma once

#include <Eigen/Dense>
#include <vector>

namespace ehtcp {

using Vec = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// One nonzero coefficient a_{i1 i2 ... im}. Indices are 0-based internally;
/// the file format uses 1-based tuples.
struct TensorEntry {
  std::vector<int> index;  // length = order
  double value = 0.0;
};

/// Real tensor of order m >= 2 and dimension n >= 1 in sparse coordinate
/// form. Entries are canonicalized to lexicographic index order on
/// construction; duplicate index tuples and non-finite coefficients are
/// rejected. Immutable after construction.
class Tensor {
 public:
  Tensor(int order, int dim, std::vector<TensorEntry> entries);

  int order() const { return order_; }
  int dim() const { return dim_; }
  const std::vector<TensorEntry>& entries() const { return entries_; }

  /// Largest |coefficient|, 0 for the zero tensor.
  double max_abs_coeff() const;

  /// Identity tensor: a_{ii...i} = 1, so that apply_power(I, x) = x^[m-1].
  static Tensor identity(int order, int dim);

  /// Order-2 tensor with a_{ij} = a(i,j).
  static Tensor from_matrix(const Matrix& a);

 private:
  int order_;
  int dim_;
  std::vector<TensorEntry> entries_;
};

/// Coefficient-wise sum; coincident index tuples merge (exact zeros drop).
Tensor tensor_sum(const Tensor& a, const Tensor& b);

/// The contraction (A x^{m-1})_i = sum a_{i i2...im} x_{i2} ... x_{im}.
Vec apply_power(const Tensor& a, const Vec& x);

/// Exact gradient of apply_power with respect to x (multilinear product
/// rule): J_{ij} = sum over entries and factor positions p with i_p = j of
/// a_{i i2...im} * prod_{r != p} x_{i_r}.
Matrix jacobian(const Tensor& a, const Vec& x);

/// Componentwise minimum.
Vec min_map(const Vec& x, const Vec& y);

/// Componentwise product.
Vec hadamard(const Vec& x, const Vec& y);

/// Componentwise integer power.
Vec elementwise_power(const Vec& x, int p);

/// Real p-th root; for odd p and t < 0 returns the negative real root.
double real_nth_root(double t, int p);

}  // namespace ehtcp
