#include "ehtcp/patterns.hpp"

#include <stdexcept>

namespace ehtcp {

Pattern::Pattern(int n, int k, std::uint32_t bits) : n_(n), k_(k), bits_(bits) {
  if (n < 1 || k < 1) throw std::invalid_argument("pattern needs n,k >= 1");
  if (n * k > kMaxPatternBits)
    throw std::invalid_argument("pattern budget guard: n*k too large");
}

Branch Pattern::tag(int pair, int i) const {
  return (bits_ >> (pair * n_ + i)) & 1u ? Branch::RightZero
                                         : Branch::LeftZero;
}

PatternRange::PatternRange(int n, int k) : n_(n), k_(k) {
  if (n < 1 || k < 1) throw std::invalid_argument("enumerate_patterns: n,k >= 1");
  if (n * k > kMaxPatternBits)
    throw std::invalid_argument(
        "enumerate_patterns: n*k exceeds the pattern budget guard");
}

Pattern PatternRange::at(std::uint64_t code) const {
  return Pattern(n_, k_, static_cast<std::uint32_t>(code));
}

PatternRange enumerate_patterns(int n, int k) { return PatternRange(n, k); }

}  // namespace ehtcp
