#pragma once

#include <cstdint>
#include <vector>

namespace ehtcp {

/// Which side of one min-pair is pinned to its boundary value.
/// Pair 0 is (x_0, x_1); pair j >= 1 is (d_j - x_j, x_{j+1}).
///   LeftZero on pair 0 pins x_{0,i} = 0 (x_{1,i} >= 0 stays free);
///   RightZero on pair 0 pins x_{1,i} = 0 (x_{0,i} >= 0);
///   LeftZero on pair j pins x_{j,i} = d_{j,i} (x_{j+1,i} >= 0);
///   RightZero on pair j pins x_{j+1,i} = 0 (0 <= x_{j,i} <= d_{j,i}).
enum class Branch : std::uint8_t { LeftZero = 0, RightZero = 1 };

/// One complementarity case split: a branch tag per pair and index.
class Pattern {
 public:
  Pattern(int n, int k, std::uint32_t bits);

  int n() const { return n_; }
  int k() const { return k_; }
  std::uint32_t bits() const { return bits_; }
  /// Tag for pair p in [0, k) and component i in [0, n).
  Branch tag(int pair, int i) const;

 private:
  int n_;
  int k_;
  std::uint32_t bits_;
};

/// Budget guard: pattern enumeration refuses n*k beyond this many bits.
inline constexpr int kMaxPatternBits = 24;

/// Lazily yields all 2^{n*k} patterns, each exactly once.
class PatternRange {
 public:
  PatternRange(int n, int k);

  std::uint64_t size() const { return std::uint64_t{1} << (n_ * k_); }
  Pattern at(std::uint64_t code) const;

  class Iterator {
   public:
    Iterator(const PatternRange* range, std::uint64_t code)
        : range_(range), code_(code) {}
    Pattern operator*() const { return range_->at(code_); }
    Iterator& operator++() {
      ++code_;
      return *this;
    }
    bool operator!=(const Iterator& other) const { return code_ != other.code_; }

   private:
    const PatternRange* range_;
    std::uint64_t code_;
  };

  Iterator begin() const { return Iterator(this, 0); }
  Iterator end() const { return Iterator(this, size()); }

 private:
  int n_;
  int k_;
};

/// Streams every complementarity pattern for dimensions (n, k).
/// Throws when n*k exceeds kMaxPatternBits.
PatternRange enumerate_patterns(int n, int k);

}  // namespace ehtcp
