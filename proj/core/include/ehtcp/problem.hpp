#pragma once

#include <string>
#include <vector>

#include "ehtcp/tensor.hpp"

namespace ehtcp {

/// Ordered tuple (A_0, ..., A_k) of tensors sharing order and dimension,
/// with k >= 1.
class TensorTuple {
 public:
  explicit TensorTuple(std::vector<Tensor> tensors);

  int order() const { return tensors_.front().order(); }
  int dim() const { return tensors_.front().dim(); }
  int k() const { return static_cast<int>(tensors_.size()) - 1; }
  std::size_t size() const { return tensors_.size(); }
  const Tensor& operator[](std::size_t i) const { return tensors_[i]; }
  const std::vector<Tensor>& tensors() const { return tensors_; }

 private:
  std::vector<Tensor> tensors_;
};

/// A full problem datum (A-hat, d-hat, q): find x_0..x_k with
///   A_0 x_0^{m-1} = q + sum_j A_j x_j^{m-1},
///   x_0 /\ x_1 = 0,  (d_j - x_j) /\ x_{j+1} = 0 for j in [k-1].
/// Every d_j must be strictly positive componentwise.
class EhtcpInstance {
 public:
  EhtcpInstance(TensorTuple tuple, std::vector<Vec> d, Vec q,
                std::string label = {});

  const TensorTuple& tuple() const { return tuple_; }
  const std::vector<Vec>& d() const { return d_; }
  const Vec& q() const { return q_; }
  const std::string& label() const { return label_; }
  int order() const { return tuple_.order(); }
  int dim() const { return tuple_.dim(); }
  int k() const { return tuple_.k(); }

 private:
  TensorTuple tuple_;
  std::vector<Vec> d_;  // d_1..d_{k-1}; empty when k == 1
  Vec q_;
  std::string label_;
};

/// A candidate point x = (x_0, ..., x_k) with residual diagnostics.
struct CandidateSolution {
  std::vector<Vec> blocks;
  double residual_inf = 0.0;         // inf-norm of the stacked q-shifted map
  double complementarity_inf = 0.0;  // max_i ||x_0 /\ x_i||_inf
};

/// Flattens blocks into one stacked vector (block-major) and back.
Vec flatten(const std::vector<Vec>& blocks);
std::vector<Vec> unflatten(const Vec& stacked, int block_count, int dim);

/// Builds a CandidateSolution for `blocks` with diagnostics filled in.
CandidateSolution make_candidate(const EhtcpInstance& inst,
                                 std::vector<Vec> blocks);

/// Stacked q-shifted residual: rows x_0 /\ x_1, (d_j - x_j) /\ x_{j+1} for
/// j in [k-1], then A_0 x_0^{m-1} - sum_j A_j x_j^{m-1} - q. Zero exactly at
/// the instance's solutions; with q = 0 this is the plain paired map.
Vec residual_psi_d(const EhtcpInstance& inst, const CandidateSolution& x);

/// Stacked leading-block map: rows x_0 /\ x_i for i in [k], then
/// A_0 x_0^{m-1} - sum_j A_j x_j^{m-1}. Always zero at x = 0.
Vec residual_psi_a(const TensorTuple& tuple, const CandidateSolution& x);

/// True iff ||residual_psi_d||_inf <= tol.
bool is_solution(const EhtcpInstance& inst, const CandidateSolution& x,
                 double tol);

/// Verifies x_0 /\ x_i = 0 for every i in [k] within tol. Holds at every
/// exact solution; a failure on an accepted solution signals a solver bug
/// or a tolerance leak.
bool has_leading_complementarity(const EhtcpInstance& inst,
                                 const CandidateSolution& x, double tol);

inline constexpr double kDefaultFeasTol = 1e-9;

}  // namespace ehtcp
