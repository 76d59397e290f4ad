#include <catch2/catch_amalgamated.hpp>
#include <map>

#include "blockcast/broadcast.hpp"
#include "blockcast/lemma_checks.hpp"

using namespace blockcast;

namespace {
const ChannelParams kRef{0.6, 0.0, 0.2, 0.45, 0.15};
}

TEST_CASE("depth-0 sample is the root itself") {
  for (int r = 1; r <= 4; ++r) {
    const auto c = sample_broadcast(kRef, TreeShape{2, 0}, r, 1);
    REQUIRE(c.states.size() == 1);
    REQUIRE(c.states[0] == r - 1);
  }
  REQUIRE_THROWS_AS(sample_broadcast(kRef, TreeShape{2, 0}, 5, 1), std::invalid_argument);
}

TEST_CASE("identity channel copies the root to every leaf") {
  const auto c = sample_broadcast(ChannelParams::identity(), TreeShape{3, 2}, 2, 99);
  REQUIRE(c.states.size() == 9);
  for (auto s : c.states) REQUIRE(s == 1);
}

TEST_CASE("identical seeds give identical configs") {
  const auto a = sample_broadcast(kRef, TreeShape{2, 3}, 1, 4242);
  const auto b = sample_broadcast(kRef, TreeShape{2, 3}, 1, 4242);
  REQUIRE(a.states == b.states);
  const auto c = sample_broadcast(kRef, TreeShape{2, 3}, 1, 4243);
  REQUIRE(a.states != c.states);
}

TEST_CASE("leaf marginals follow rows of M^n") {
  const TreeShape shape{2, 2};
  const auto m2 = transition_power(kRef, 2);
  const int N = 400000;
  std::array<std::array<std::int64_t, 4>, 4> counts{};  // [leaf position 0..3][state]
  for (int k = 0; k < N; ++k) {
    const auto c = sample_broadcast(kRef, shape, 1, 10000 + static_cast<std::uint64_t>(k));
    for (int pos = 0; pos < 4; ++pos) ++counts[static_cast<std::size_t>(pos)][c.states[static_cast<std::size_t>(pos)]];
  }
  for (int pos = 0; pos < 4; ++pos)
    for (int s = 0; s < 4; ++s) {
      const double p = m2[0][static_cast<std::size_t>(s)];
      const double se = std::sqrt(p * (1 - p) / N);
      const double freq = counts[static_cast<std::size_t>(pos)][static_cast<std::size_t>(s)] / double(N);
      REQUIRE(std::fabs(freq - p) < 5 * se + 1e-9);
    }
}

TEST_CASE("leaf distribution basics") {
  // depth 0: the root config with probability 1
  std::map<std::int64_t, double> dist0;
  leaf_distribution(kRef, TreeShape{2, 0}, 3, [&](std::int64_t i, double p) { dist0[i] = p; });
  REQUIRE(dist0.size() == 4);
  REQUIRE(dist0[2] == 1.0);
  REQUIRE(dist0[0] == 0.0);

  // d=2, n=1, root 1: P(leaves = (1,1)) = p0^2
  std::map<std::int64_t, double> dist;
  leaf_distribution(kRef, TreeShape{2, 1}, 1, [&](std::int64_t i, double p) { dist[i] = p; });
  REQUIRE_THAT(dist[0], Catch::Matchers::WithinAbs(0.36, 1e-14));
}

TEST_CASE("leaf distribution normalizes for every root") {
  for (const auto& ch : random_channel_corpus(10, 77)) {
    for (int r = 1; r <= 4; ++r) {
      Kahan sum;
      leaf_distribution(ch, TreeShape{2, 2}, r, [&](std::int64_t, double p) { sum.add(p); });
      REQUIRE_THAT(sum.value(), Catch::Matchers::WithinAbs(1.0, 1e-12));
    }
  }
}

TEST_CASE("marginalizing the last subtree reproduces the depth-(n-1) mixture") {
  const TreeShape shape{2, 2};
  const auto table = likelihood_table(kRef, shape);
  const auto sub = likelihood_table(kRef, TreeShape{2, 1});
  const auto m = to_matrix(kRef);
  const std::size_t S = sub.size();
  for (int root = 0; root < 4; ++root) {
    for (std::size_t a1 = 0; a1 < S; ++a1) {
      double marg = 0;
      for (std::size_t a2 = 0; a2 < S; ++a2) marg += table[a1 * S + a2][static_cast<std::size_t>(root)];
      double mix = 0;  // sum_s M[root][s] P_{n-1}(a1 | s)
      for (int s = 0; s < 4; ++s) mix += m[static_cast<std::size_t>(root)][static_cast<std::size_t>(s)] * sub[a1][static_cast<std::size_t>(s)];
      REQUIRE_THAT(marg, Catch::Matchers::WithinAbs(mix, 1e-12));
    }
  }
}

TEST_CASE("exchangeability: permuting subtrees preserves the law") {
  const auto table = likelihood_table(kRef, TreeShape{2, 2});
  const std::size_t S = 16;  // depth-1 configs
  for (std::size_t a1 = 0; a1 < S; ++a1)
    for (std::size_t a2 = 0; a2 < S; ++a2)
      for (int root = 0; root < 4; ++root)
        REQUIRE_THAT(table[a1 * S + a2][static_cast<std::size_t>(root)],
                     Catch::Matchers::WithinAbs(table[a2 * S + a1][static_cast<std::size_t>(root)], 1e-15));
}

TEST_CASE("enumeration budget is enforced with a named refusal") {
  REQUIRE(TreeShape{2, 3}.within_enumeration_budget());
  REQUIRE_FALSE(TreeShape{2, 4}.within_enumeration_budget());
  REQUIRE(TreeShape{3, 2}.within_enumeration_budget());
  REQUIRE_FALSE(TreeShape{3, 3}.within_enumeration_budget());
  REQUIRE(TreeShape{12, 1}.within_enumeration_budget());
  REQUIRE_FALSE(TreeShape{13, 1}.within_enumeration_budget());
  try {
    likelihood_table(kRef, TreeShape{2, 4});
    FAIL("expected refusal");
  } catch (const BudgetExceeded& e) {
    REQUIRE(std::string(e.what()).find("budget") != std::string::npos);
  }
}

TEST_CASE("sampler frequencies match the exact distribution at depth 2") {
  const TreeShape shape{2, 2};
  std::vector<double> probs(256);
  leaf_distribution(kRef, shape, 1, [&](std::int64_t i, double p) { probs[static_cast<std::size_t>(i)] = p; });
  const int N = 1000000;
  std::vector<std::int64_t> counts(256, 0);
  for (int k = 0; k < N; ++k)
    ++counts[static_cast<std::size_t>(sample_broadcast(kRef, shape, 1, 555000 + static_cast<std::uint64_t>(k)).index())];
  for (std::size_t i = 0; i < 256; ++i) {
    const double p = probs[i];
    const double se = std::sqrt(std::max(p * (1 - p) / N, 1e-12 / N));
    REQUIRE(std::fabs(counts[i] / double(N) - p) < 5 * se + 2e-6);
  }
}

TEST_CASE("leaf config round trip") {
  const auto c = LeafConfig::from_string("14232");
  REQUIRE(c.states.size() == 5);
  REQUIRE(c.to_string() == "14232");
  REQUIRE(LeafConfig::from_index(c.index(), 5).to_string() == "14232");
  REQUIRE_THROWS_AS(LeafConfig::from_string("105"), std::invalid_argument);
}
