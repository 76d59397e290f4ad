#include <catch2/catch_amalgamated.hpp>

#include "blockcast/rng.hpp"

using namespace blockcast;

TEST_CASE("SplitMix64 matches the published reference stream") {
  SplitMix64 rng(0);
  REQUIRE(rng.next_u64() == 0xe220a8397b1dcdafULL);
  REQUIRE(rng.next_u64() == 0x6e789e6aa1b965f4ULL);
  REQUIRE(rng.next_u64() == 0x06c45d188009454fULL);
}

TEST_CASE("stream derivation is pinned") {
  // freezing the per-sample key rule: (seed, level, root_state, index)
  REQUIRE(derive_stream(42, 1, 2, 3) == 0x2dec55338f99b052ULL);
  REQUIRE(derive_stream(42, 1, 2, 3) == derive_stream(42, 1, 2, 3));
  REQUIRE(derive_stream(42, 1, 2, 3) != derive_stream(42, 1, 2, 4));
  REQUIRE(derive_stream(42, 1, 2, 3) != derive_stream(43, 1, 2, 3));
}

TEST_CASE("uniform doubles live in [0,1) and fill the range") {
  SplitMix64 rng(7);
  double mn = 1, mx = 0;
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.next_double();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    mn = std::min(mn, u);
    mx = std::max(mx, u);
  }
  REQUIRE(mn < 0.01);
  REQUIRE(mx > 0.99);
}

TEST_CASE("discrete draws follow the row") {
  SplitMix64 rng(123);
  const std::array<double, 4> row{0.1, 0.2, 0.3, 0.4};
  std::array<int, 4> counts{};
  const int N = 200000;
  for (int i = 0; i < N; ++i) ++counts[static_cast<std::size_t>(rng.next_state(row))];
  for (int s = 0; s < 4; ++s) {
    const double p = row[static_cast<std::size_t>(s)];
    const double se = std::sqrt(p * (1 - p) / N);
    REQUIRE(std::fabs(counts[static_cast<std::size_t>(s)] / double(N) - p) < 5 * se);
  }
}

TEST_CASE("child keys separate subtrees") {
  const auto k = root_key(99);
  REQUIRE(child_key(k, 0) != child_key(k, 1));
  REQUIRE(child_key(k, 0) != k);
}
