#include "ehtcp/generator.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "ehtcp/util.hpp"

namespace ehtcp {

const char* to_string(InstanceFamily family) {
  switch (family) {
    case InstanceFamily::SparseRandom: return "sparse-random";
    case InstanceFamily::Diagonal: return "diagonal";
    case InstanceFamily::IdentityLed: return "identity-led";
  }
  return "?";
}

std::optional<InstanceFamily> family_from_string(const std::string& name) {
  for (InstanceFamily f : {InstanceFamily::SparseRandom, InstanceFamily::Diagonal,
                           InstanceFamily::IdentityLed})
    if (name == to_string(f)) return f;
  return std::nullopt;
}

namespace {

Tensor sparse_random_tensor(int m, int n, int nnz, Rng& rng) {
  std::vector<TensorEntry> entries;
  int guard = 0;
  while (static_cast<int>(entries.size()) < nnz && guard++ < 64 * nnz) {
    TensorEntry e;
    e.index.reserve(m);
    for (int p = 0; p < m; ++p)
      e.index.push_back(static_cast<int>(rng.next_u64() % n));
    if (std::any_of(entries.begin(), entries.end(), [&](const TensorEntry& x) {
          return x.index == e.index;
        }))
      continue;
    e.value = rng.uniform(-1.0, 1.0);
    if (e.value == 0.0) e.value = 0.5;
    entries.push_back(std::move(e));
  }
  return Tensor(m, n, std::move(entries));
}

Tensor diagonal_tensor(int m, int n, Rng& rng) {
  std::vector<TensorEntry> entries;
  for (int i = 0; i < n; ++i)
    entries.push_back({std::vector<int>(m, i), rng.uniform(0.5, 2.0)});
  return Tensor(m, n, std::move(entries));
}

}  // namespace

EhtcpInstance generate_instance(const GeneratorConfig& config) {
  if (config.m < 2 || config.n < 1 || config.k < 1)
    throw std::invalid_argument("generate_instance: need m >= 2, n >= 1, k >= 1");
  const int nnz =
      config.nnz_per_tensor > 0 ? config.nnz_per_tensor : 2 * config.n;

  Rng rng = Rng(config.seed).fork(0x6e6eull);
  std::vector<Tensor> tensors;
  for (int t = 0; t <= config.k; ++t) {
    switch (config.family) {
      case InstanceFamily::SparseRandom:
        tensors.push_back(sparse_random_tensor(config.m, config.n, nnz, rng));
        break;
      case InstanceFamily::Diagonal:
        tensors.push_back(diagonal_tensor(config.m, config.n, rng));
        break;
      case InstanceFamily::IdentityLed:
        if (t == 0)
          tensors.push_back(Tensor::identity(config.m, config.n));
        else
          tensors.push_back(sparse_random_tensor(config.m, config.n, nnz, rng));
        break;
    }
  }

  std::vector<Vec> d;
  for (int j = 0; j < config.k - 1; ++j) {
    Vec dj(config.n);
    for (int i = 0; i < config.n; ++i) dj[i] = rng.uniform(0.5, 2.0);
    d.push_back(std::move(dj));
  }
  Vec q(config.n);
  for (int i = 0; i < config.n; ++i) q[i] = rng.uniform(-1.0, 1.0);

  std::ostringstream label;
  label << to_string(config.family) << "-m" << config.m << "-n" << config.n
        << "-k" << config.k << "-seed" << config.seed;
  return EhtcpInstance(TensorTuple(std::move(tensors)), std::move(d),
                       std::move(q), label.str());
}

}  // namespace ehtcp
