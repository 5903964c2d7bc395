#pragma once

#include "ehtcp/problem.hpp"

namespace ehtcp::fixtures {

/// Order 3, dim 2, k = 2. A_0 x^2 = (x2^2, x1^2), the others are signed
/// swaps. The tuple kills the homogeneous complementarity system (EHR0,
/// EHND) although no single part is an R0 tensor, and it admits an exact
/// mixed-sign balance point, so it is not EHE.
TensorTuple swap_squares_trio();

/// Order 3, dim 2, k = 2. Every part is non-degenerate on its own, yet the
/// tuple admits a nonzero point with pairwise-vanishing products (not EHND,
/// not EHR0).
TensorTuple nondegenerate_parts_trio();

/// Order 4, dim 2, k = 2. Signed swapped cubes: the tuple is EHND and
/// strong EHND while no part is non-degenerate; the homogeneous min system
/// still has a nonzero solution (not EHR0).
TensorTuple alternating_cubes_trio();

/// Order 4, dim 2, k = 1. Diagonal cubes vs. a triangular part; a strong
/// EHP pair, so every q has exactly one solution.
TensorTuple triangular_cubes_pair();

/// Order 3, dim 2, k = 1. An EHE pair of odd order: q = (-1,-1) has no
/// solution, showing the even-order existence guarantee fails for odd m.
TensorTuple odd_order_gap_pair();

/// Order 3, dim 3, k = 2. With q = (1,0,0) the solutions contain the whole
/// quarter circle x_0 = (cos t, sin t, 0): an EHND tuple whose solution set
/// is infinite.
TensorTuple circle_family_trio();

/// Order 4, dim 2, k = 1. Not EHND, yet every q has finitely many
/// solutions, all available in closed form by a complementarity case split.
TensorTuple mixed_cubes_pair();

/// (I, I, ..., I) with k+1 parts.
TensorTuple identity_tuple(int order, int dim, int k = 1);

/// Instance helpers with the canonical data used by the built-in suite.
EhtcpInstance circle_family_instance();               // d = (1,1,1), q = (1,0,0)
EhtcpInstance instance_with(const TensorTuple& tuple, Vec q);  // d_j = ones
EhtcpInstance odd_order_gap_instance();               // q = (-1,-1)

}  // namespace ehtcp::fixtures
