#include "ehtcp/problem.hpp"

#include <cmath>
#include <stdexcept>

namespace ehtcp {

TensorTuple::TensorTuple(std::vector<Tensor> tensors)
    : tensors_(std::move(tensors)) {
  if (tensors_.size() < 2)
    throw std::invalid_argument("tensor tuple needs at least two tensors (k >= 1)");
  for (const auto& t : tensors_)
    if (t.order() != tensors_.front().order() ||
        t.dim() != tensors_.front().dim())
      throw std::invalid_argument("tensor tuple must share order and dimension");
}

EhtcpInstance::EhtcpInstance(TensorTuple tuple, std::vector<Vec> d, Vec q,
                             std::string label)
    : tuple_(std::move(tuple)),
      d_(std::move(d)),
      q_(std::move(q)),
      label_(std::move(label)) {
  const int n = tuple_.dim();
  if (static_cast<int>(d_.size()) != tuple_.k() - 1)
    throw std::invalid_argument("instance needs exactly k-1 d-vectors");
  for (const auto& dj : d_) {
    if (dj.size() != n)
      throw std::invalid_argument("d-vector dimension mismatch");
    for (Eigen::Index i = 0; i < dj.size(); ++i)
      if (!(dj[i] > 0.0))
        throw std::invalid_argument("every d-vector must be strictly positive");
  }
  if (q_.size() != n) throw std::invalid_argument("q dimension mismatch");
  for (Eigen::Index i = 0; i < q_.size(); ++i)
    if (!std::isfinite(q_[i]))
      throw std::invalid_argument("q components must be finite");
}

Vec flatten(const std::vector<Vec>& blocks) {
  Eigen::Index total = 0;
  for (const auto& b : blocks) total += b.size();
  Vec out(total);
  Eigen::Index at = 0;
  for (const auto& b : blocks) {
    out.segment(at, b.size()) = b;
    at += b.size();
  }
  return out;
}

std::vector<Vec> unflatten(const Vec& stacked, int block_count, int dim) {
  if (stacked.size() != static_cast<Eigen::Index>(block_count) * dim)
    throw std::invalid_argument("unflatten: size mismatch");
  std::vector<Vec> blocks(block_count);
  for (int b = 0; b < block_count; ++b)
    blocks[b] = stacked.segment(static_cast<Eigen::Index>(b) * dim, dim);
  return blocks;
}

namespace {

void check_blocks(const TensorTuple& tuple, const CandidateSolution& x) {
  if (static_cast<int>(x.blocks.size()) != tuple.k() + 1)
    throw std::invalid_argument("candidate needs exactly k+1 blocks");
  for (const auto& b : x.blocks)
    if (b.size() != tuple.dim())
      throw std::invalid_argument("candidate block dimension mismatch");
}

/// A_0 x_0^{m-1} - sum_j A_j x_j^{m-1}
Vec tensor_row_value(const TensorTuple& tuple, const std::vector<Vec>& blocks) {
  Vec out = apply_power(tuple[0], blocks[0]);
  for (int j = 1; j <= tuple.k(); ++j) out -= apply_power(tuple[j], blocks[j]);
  return out;
}

}  // namespace

Vec residual_psi_d(const EhtcpInstance& inst, const CandidateSolution& x) {
  check_blocks(inst.tuple(), x);
  const int n = inst.dim();
  const int k = inst.k();
  Vec out((k + 1) * static_cast<Eigen::Index>(n));
  out.segment(0, n) = min_map(x.blocks[0], x.blocks[1]);
  for (int j = 1; j <= k - 1; ++j)
    out.segment(static_cast<Eigen::Index>(j) * n, n) =
        min_map(inst.d()[j - 1] - x.blocks[j], x.blocks[j + 1]);
  out.segment(static_cast<Eigen::Index>(k) * n, n) =
      tensor_row_value(inst.tuple(), x.blocks) - inst.q();
  return out;
}

Vec residual_psi_a(const TensorTuple& tuple, const CandidateSolution& x) {
  check_blocks(tuple, x);
  const int n = tuple.dim();
  const int k = tuple.k();
  Vec out((k + 1) * static_cast<Eigen::Index>(n));
  for (int i = 1; i <= k; ++i)
    out.segment(static_cast<Eigen::Index>(i - 1) * n, n) =
        min_map(x.blocks[0], x.blocks[i]);
  out.segment(static_cast<Eigen::Index>(k) * n, n) =
      tensor_row_value(tuple, x.blocks);
  return out;
}

CandidateSolution make_candidate(const EhtcpInstance& inst,
                                 std::vector<Vec> blocks) {
  CandidateSolution c;
  c.blocks = std::move(blocks);
  check_blocks(inst.tuple(), c);
  c.residual_inf = residual_psi_d(inst, c).lpNorm<Eigen::Infinity>();
  double comp = 0.0;
  for (int i = 1; i <= inst.k(); ++i)
    comp = std::max(comp, min_map(c.blocks[0], c.blocks[i])
                              .lpNorm<Eigen::Infinity>());
  c.complementarity_inf = comp;
  return c;
}

bool is_solution(const EhtcpInstance& inst, const CandidateSolution& x,
                 double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("is_solution: tol must be > 0");
  return residual_psi_d(inst, x).lpNorm<Eigen::Infinity>() <= tol;
}

bool has_leading_complementarity(const EhtcpInstance& inst,
                                 const CandidateSolution& x, double tol) {
  check_blocks(inst.tuple(), x);
  for (int i = 1; i <= inst.k(); ++i)
    if (min_map(x.blocks[0], x.blocks[i]).lpNorm<Eigen::Infinity>() > tol)
      return false;
  return true;
}

}  // namespace ehtcp
