#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "ehtcp/problem.hpp"

namespace ehtcp {

enum class InstanceFamily {
  SparseRandom,  // s random nonzeros per tensor
  Diagonal,      // positive a_{ii...i} only
  IdentityLed,   // A_0 = identity, the rest sparse-random
};

const char* to_string(InstanceFamily family);
std::optional<InstanceFamily> family_from_string(const std::string& name);

struct GeneratorConfig {
  int m = 3;
  int n = 2;
  int k = 1;
  InstanceFamily family = InstanceFamily::SparseRandom;
  std::uint64_t seed = 1;
  int nnz_per_tensor = 0;  // 0 picks the default 2*n
};

/// Deterministic per seed. d components are drawn from [0.5, 2], q from
/// [-1, 1]; diagonal coefficients from [0.5, 2].
EhtcpInstance generate_instance(const GeneratorConfig& config);

}  // namespace ehtcp
