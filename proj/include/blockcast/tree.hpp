#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace blockcast {

// Exact enumeration is allowed while 4^(d^n) <= 2^24, i.e. d^n <= 12 leaves
// (d=2 up to n=3, d=3 up to n=2, d<=12 at n=1). Keeps the oracle under a
// minute on commodity hardware.
constexpr std::int64_t kEnumBudgetConfigs = std::int64_t{1} << 24;
constexpr std::int64_t kEnumBudgetLeaves = 12;  // log_4 of the above

struct BudgetExceeded : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct TreeShape {
  int d = 2;  // offspring count, >= 2
  int n = 0;  // depth, >= 0

  std::int64_t leaf_count() const {
    std::int64_t c = 1;
    for (int k = 0; k < n; ++k) {
      c *= d;
      if (c > (std::int64_t{1} << 40)) return std::int64_t{1} << 40;  // saturate
    }
    return c;
  }

  bool within_enumeration_budget() const { return leaf_count() <= kEnumBudgetLeaves; }

  std::int64_t config_count() const { return std::int64_t{1} << (2 * leaf_count()); }
};

inline void check_shape(const TreeShape& s) {
  if (s.d < 2) throw std::invalid_argument("tree shape: d must be >= 2");
  if (s.n < 0) throw std::invalid_argument("tree shape: n must be >= 0");
}

inline void check_enumeration_budget(const TreeShape& s) {
  check_shape(s);
  if (!s.within_enumeration_budget()) {
    throw BudgetExceeded(
        "enumeration budget exceeded: 4^(d^n) = 4^" + std::to_string(s.leaf_count()) +
        " > 2^24 configurations (d^n must be <= " + std::to_string(kEnumBudgetLeaves) + ")");
  }
}

// Spins on the n-th level, canonical left-to-right leaf order. States are
// 0..3 internally and render as '1'..'4'. The config index treats the
// leftmost leaf as the most significant base-4 digit, so a depth-n index is
// the concatenation of its d depth-(n-1) subtree indices.
struct LeafConfig {
  std::vector<std::uint8_t> states;

  std::string to_string() const {
    std::string s;
    s.reserve(states.size());
    for (auto v : states) s.push_back(static_cast<char>('1' + v));
    return s;
  }

  static LeafConfig from_string(const std::string& s) {
    LeafConfig c;
    c.states.reserve(s.size());
    for (char ch : s) {
      if (ch < '1' || ch > '4') throw std::invalid_argument("leaf config: states must be 1..4");
      c.states.push_back(static_cast<std::uint8_t>(ch - '1'));
    }
    return c;
  }

  std::int64_t index() const {
    std::int64_t idx = 0;
    for (auto v : states) idx = idx * 4 + v;
    return idx;
  }

  static LeafConfig from_index(std::int64_t idx, std::int64_t leaves) {
    LeafConfig c;
    c.states.assign(static_cast<std::size_t>(leaves), 0);
    for (std::int64_t k = leaves - 1; k >= 0; --k) {
      c.states[static_cast<std::size_t>(k)] = static_cast<std::uint8_t>(idx & 3);
      idx >>= 2;
    }
    return c;
  }
};

}  // namespace blockcast
