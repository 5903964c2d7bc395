#include "ehtcp/fixtures.hpp"

namespace ehtcp::fixtures {

namespace {

// 1-based index shorthand for readability against the usual subscript form.
TensorEntry e3(int i, int j, int k, double v) {
  return {{i - 1, j - 1, k - 1}, v};
}
TensorEntry e4(int i, int j, int k, int l, double v) {
  return {{i - 1, j - 1, k - 1, l - 1}, v};
}

Vec vec2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

}  // namespace

TensorTuple swap_squares_trio() {
  Tensor a0(3, 2, {e3(1, 2, 2, 1.0), e3(2, 1, 1, 1.0)});
  Tensor a1(3, 2, {e3(1, 2, 2, -1.0), e3(2, 1, 1, 1.0)});
  Tensor a2(3, 2, {e3(1, 2, 2, -1.0), e3(2, 1, 1, 1.0)});
  return TensorTuple({a0, a1, a2});
}

TensorTuple nondegenerate_parts_trio() {
  Tensor a0(3, 2, {e3(1, 1, 1, 1.0), e3(2, 1, 1, 1.0), e3(2, 2, 2, 1.0)});
  Tensor a1(3, 2, {e3(1, 1, 1, 1.0), e3(1, 2, 2, 1.0), e3(2, 2, 2, 1.0)});
  Tensor a2(3, 2, {e3(1, 1, 1, 1.0), e3(1, 2, 2, 1.0), e3(2, 1, 1, 1.0),
                   e3(2, 2, 2, 1.0)});
  return TensorTuple({a0, a1, a2});
}

TensorTuple alternating_cubes_trio() {
  Tensor a0(4, 2, {e4(1, 2, 2, 2, 1.0), e4(2, 1, 1, 1, 1.0)});
  Tensor a1(4, 2, {e4(1, 2, 2, 2, -1.0), e4(2, 1, 1, 1, 1.0)});
  Tensor a2(4, 2, {e4(1, 2, 2, 2, 1.0), e4(2, 1, 1, 1, -1.0)});
  return TensorTuple({a0, a1, a2});
}

TensorTuple triangular_cubes_pair() {
  Tensor a0(4, 2, {e4(1, 1, 1, 1, 1.0), e4(2, 2, 2, 2, 1.0)});
  Tensor a1(4, 2, {e4(1, 1, 1, 1, 1.0), e4(1, 2, 2, 2, 1.0),
                   e4(2, 2, 2, 2, 1.0)});
  return TensorTuple({a0, a1});
}

TensorTuple odd_order_gap_pair() {
  Tensor a0(3, 2, {e3(1, 1, 1, 1.0), e3(1, 2, 2, 1.0), e3(2, 2, 2, 1.0)});
  Tensor a1(3, 2, {e3(1, 1, 1, -1.0), e3(2, 2, 2, -1.0)});
  return TensorTuple({a0, a1});
}

TensorTuple circle_family_trio() {
  Tensor a0(3, 3, {e3(1, 1, 1, 1.0), e3(1, 2, 2, 1.0)});
  Tensor a1(3, 3, {e3(2, 1, 1, -1.0), e3(2, 2, 2, -1.0)});
  Tensor a2(3, 3, {e3(3, 1, 1, 1.0), e3(3, 2, 2, 1.0)});
  return TensorTuple({a0, a1, a2});
}

TensorTuple mixed_cubes_pair() {
  Tensor a0(4, 2, {e4(1, 1, 1, 1, 1.0), e4(2, 2, 2, 2, 1.0)});
  Tensor a1(4, 2, {e4(1, 1, 1, 1, 1.0), e4(1, 2, 2, 2, 1.0),
                   e4(2, 2, 2, 2, -1.0), e4(2, 2, 2, 1, -1.0)});
  return TensorTuple({a0, a1});
}

TensorTuple identity_tuple(int order, int dim, int k) {
  std::vector<Tensor> parts(k + 1, Tensor::identity(order, dim));
  return TensorTuple(std::move(parts));
}

EhtcpInstance instance_with(const TensorTuple& tuple, Vec q) {
  std::vector<Vec> d(tuple.k() - 1, Vec::Ones(tuple.dim()));
  return EhtcpInstance(tuple, std::move(d), std::move(q));
}

EhtcpInstance circle_family_instance() {
  Vec q(3);
  q << 1.0, 0.0, 0.0;
  return instance_with(circle_family_trio(), q);
}

EhtcpInstance odd_order_gap_instance() {
  return instance_with(odd_order_gap_pair(), vec2(-1.0, -1.0));
}

}  // namespace ehtcp::fixtures
