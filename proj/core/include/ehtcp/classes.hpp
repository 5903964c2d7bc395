#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ehtcp/problem.hpp"

namespace ehtcp {

/// The structured tuple classes, each defined by a "premise system implies
/// zero" (plain) or "premise system implies equal points" (strong)
/// implication on the tuple.
enum class ClassName { EHR0, EHP, StrongEHP, EHE, EHND, StrongEHND };

inline constexpr std::array<ClassName, 6> kAllClasses = {
    ClassName::EHR0, ClassName::EHP,  ClassName::StrongEHP,
    ClassName::EHE,  ClassName::EHND, ClassName::StrongEHND};

const char* to_string(ClassName cls);
std::optional<ClassName> class_from_string(const std::string& name);
bool is_strong_class(ClassName cls);

/// A normalized point (strong classes: a pair of points) that satisfies a
/// class premise, thereby refuting membership.
struct Witness {
  std::vector<Vec> point;      // x blocks
  std::vector<Vec> point_bar;  // second point, strong classes only
  double premise_residual = 0.0;
  /// ||x||_2 for plain classes, ||x - x_bar||_2 for strong ones.
  double norm_certificate = 0.0;
};

enum class VerdictStatus { Refuted, NoWitnessAtBudget };

struct ClassVerdict {
  ClassName cls = ClassName::EHR0;
  VerdictStatus status = VerdictStatus::NoWitnessAtBudget;
  std::optional<Witness> witness;
  long restarts_used = 0;
  long structured_candidates = 0;
};

struct FalsifyOptions {
  long restarts = 2000;  // random multistart budget
  double tol = 1e-9;     // premise_residual acceptance threshold
  std::uint64_t seed = 1;
  int threads = 1;
  int descent_iters = 120;
};

/// Sum of squared violations of the class premise at the point: the squared
/// tensor-equation residual plus, per class, squared min-map rows, squared
/// positive parts of inequality violations, or squared Hadamard products.
/// Zero exactly on the premise set. Strong classes require x_bar.
double premise_residual(ClassName cls, const TensorTuple& tuple,
                        const std::vector<Vec>& x,
                        const std::vector<Vec>& x_bar = {});

/// Searches for a premise witness: a deterministic scan over normalized sign
/// patterns first, then projected local minimization of premise_residual
/// over the unit sphere from seeded random restarts. NoWitnessAtBudget is
/// not a membership proof.
ClassVerdict falsify(ClassName cls, const TensorTuple& tuple,
                     const FalsifyOptions& opts);

/// Nonzero x with ||x /\ A x^{m-1}|| <= tol (normalized), or absent.
std::optional<Vec> componentwise_r0_witness(const Tensor& a,
                                            const FalsifyOptions& opts);

/// Nonzero x with ||x * A x^{m-1}|| <= tol (normalized), or absent.
std::optional<Vec> componentwise_nondegenerate_witness(
    const Tensor& a, const FalsifyOptions& opts);

/// Converts a witness along the class-inclusion hierarchy: a point refuting
/// a class with a weaker premise also refutes every class whose premise it
/// still satisfies. Supported conversions: EHR0 -> EHE or EHP (and EHND when
/// k <= 1), EHE -> EHP, EHND -> EHP, strong EHND -> strong EHP. Returns the
/// re-validated witness, or absent when no implication applies.
std::optional<Witness> propagate_witness(const TensorTuple& tuple,
                                         const Witness& witness,
                                         ClassName from, ClassName to,
                                         double tol = 1e-9);

/// For odd order, the pair x = (x_0, 0, ..., 0), x_bar = -x satisfies the
/// strong non-degeneracy premise exactly (even powers cancel), so no
/// odd-order tuple is strong EHND. Throws for even order.
Witness odd_order_strong_witness(const TensorTuple& tuple);

struct CollisionPair {
  Vec x;
  Vec x_bar;
  double gap = 0.0;  // ||F(x) - F(x_bar)||_2
};

/// Probes F(x) = A x^{m-1} for collisions F(x) = F(x_bar) with
/// ||x - x_bar|| = 1. Odd order always collides (F(-x) = F(x)).
std::optional<CollisionPair> injectivity_probe(const Tensor& a, int samples,
                                               std::uint64_t seed);

}  // namespace ehtcp
