#include <catch2/catch_amalgamated.hpp>

#include "blockcast/exact_oracle.hpp"
#include "blockcast/lemma_checks.hpp"

using namespace blockcast;
using Catch::Matchers::WithinAbs;

namespace {
const ChannelParams kRef{0.6, 0.0, 0.2, 0.45, 0.15};

ChannelParams swap_blocks(const ChannelParams& c) {
  return {c.pbar0, c.pbar1, c.p2, c.p0, c.p1};
}
}  // namespace

TEST_CASE("posterior at depth 0 is an indicator") {
  const auto q = posterior(kRef, TreeShape{2, 0}, LeafConfig::from_string("1"));
  REQUIRE(q[0] == 1.0);
  REQUIRE(q[1] == 0.0);
}

TEST_CASE("uniform channel gives the uniform posterior") {
  const auto q = posterior(ChannelParams::uniform(), TreeShape{2, 2},
                           LeafConfig::from_string("1342"));
  for (int i = 0; i < 4; ++i) REQUIRE_THAT(q[static_cast<std::size_t>(i)], WithinAbs(0.25, 1e-15));
}

TEST_CASE("worked posterior: d=2 n=1 config (1,1)") {
  const auto q = posterior(kRef, TreeShape{2, 1}, LeafConfig::from_string("11"));
  REQUIRE_THAT(q[0], WithinAbs(9.0 / 11, 1e-14));
  REQUIRE_THAT(q[1], WithinAbs(0.0, 1e-15));
  REQUIRE_THAT(q[2], WithinAbs(1.0 / 11, 1e-14));
  REQUIRE_THAT(q[3], WithinAbs(1.0 / 11, 1e-14));
}

TEST_CASE("impossible configs under a degenerate channel are refused") {
  REQUIRE_THROWS_AS(posterior(ChannelParams::identity(), TreeShape{2, 1},
                              LeafConfig::from_string("12")),
                    UnsupportedConfiguration);
}

TEST_CASE("config length must match the shape") {
  REQUIRE_THROWS_AS(posterior(kRef, TreeShape{2, 1}, LeafConfig::from_string("111")),
                    std::invalid_argument);
}

TEST_CASE("level-0 moments are exact") {
  for (const auto& ch : random_channel_corpus(5, 3)) {
    const auto m = exact_moments(ch, TreeShape{2, 0});
    REQUIRE(m.x == 0.75);
    REQUIRE(m.y == -0.25);
    REQUIRE(m.z == -0.25);
    REQUIRE(m.u == 9.0 / 16);
    REQUIRE(m.v == 1.0 / 16);
    REQUIRE(m.w == 1.0 / 16);
    REQUIRE(m.xbar == 0.75);
    REQUIRE(m.zbar == -0.25);
    REQUIRE(m.ubar == 9.0 / 16);
  }
}

TEST_CASE("identity channel keeps indicator posteriors at every depth") {
  for (int n : {1, 2, 3}) {
    const auto m = exact_moments(ChannelParams::identity(), TreeShape{2, n});
    REQUIRE_THAT(m.x, WithinAbs(0.75, 1e-14));
    REQUIRE_THAT(m.u, WithinAbs(9.0 / 16, 1e-14));
    REQUIRE_THAT(m.v, WithinAbs(1.0 / 16, 1e-14));
  }
}

TEST_CASE("frozen moment values for the reference channel") {
  const auto m1 = exact_moments(kRef, TreeShape{2, 1});
  REQUIRE_THAT(m1.x, WithinAbs(0.30992097875437552, 1e-13));
  REQUIRE_THAT(m1.y, WithinAbs(-0.22462447579107891, 1e-13));
  REQUIRE_THAT(m1.z, WithinAbs(-0.042648251481648358, 1e-13));
  REQUIRE_THAT(m1.u, WithinAbs(0.14767628471959898, 1e-13));
  REQUIRE_THAT(m1.v, WithinAbs(0.053957276455136233, 1e-13));
  REQUIRE_THAT(m1.w, WithinAbs(0.054143708789820166, 1e-13));
  REQUIRE_THAT(m1.xbar, WithinAbs(0.125763005580009, 1e-13));
  REQUIRE_THAT(m1.ybar, WithinAbs(-0.040466502616712315, 1e-13));
  REQUIRE_THAT(m1.zbar, WithinAbs(-0.042648251481648358, 1e-13));
  REQUIRE_THAT(m1.ubar, WithinAbs(0.050472424966267894, 1e-13));
  REQUIRE_THAT(m1.vbar, WithinAbs(0.025221148427703004, 1e-13));
  REQUIRE_THAT(m1.wbar, WithinAbs(0.025034716093019053, 1e-13));

  const auto m2 = exact_moments(kRef, TreeShape{2, 2});
  REQUIRE_THAT(m2.x, WithinAbs(0.17357568254227662, 1e-13));
  REQUIRE_THAT(m2.xbar, WithinAbs(0.026167398307127734, 1e-13));
  REQUIRE_THAT(m2.wbar, WithinAbs(0.0064678895996176143, 1e-13));

  const auto m3 = exact_moments(kRef, TreeShape{2, 3}, 2);
  REQUIRE_THAT(m3.x, WithinAbs(0.10902765158458939, 1e-12));
  REQUIRE_THAT(m3.zbar, WithinAbs(-0.0039493045918114, 1e-12));
}

TEST_CASE("likelihoods normalize and the variance form agrees") {
  for (const auto& ch : random_channel_corpus(10, 13)) {
    const auto full = exact_moments_full(ch, TreeShape{2, 2});
    for (int i = 0; i < 4; ++i) REQUIRE_THAT(full.total_prob[static_cast<std::size_t>(i)], WithinAbs(1.0, 1e-12));
    REQUIRE_THAT(full.x_variance_form, WithinAbs(full.moments.x, 1e-12));
  }
}

TEST_CASE("posterior recursion consistency: table vs BP combine") {
  const TreeShape sub{2, 1};
  const auto table = likelihood_table(kRef, sub);
  const auto m = to_matrix(kRef);
  // depth-2 posterior of (A1, A2) must equal the BP combine of the two
  // depth-1 subtree posteriors
  for (std::size_t a1 = 0; a1 < table.size(); ++a1)
    for (std::size_t a2 = 0; a2 < table.size(); ++a2) {
      const auto s1 = table[a1][0] + table[a1][1] + table[a1][2] + table[a1][3];
      const auto s2 = table[a2][0] + table[a2][1] + table[a2][2] + table[a2][3];
      Vec4 q1, q2;
      for (int i = 0; i < 4; ++i) {
        q1[static_cast<std::size_t>(i)] = table[a1][static_cast<std::size_t>(i)] / s1;
        q2[static_cast<std::size_t>(i)] = table[a2][static_cast<std::size_t>(i)] / s2;
      }
      const std::array<Vec4, 2> kids{q1, q2};
      Vec4 combined;
      REQUIRE(combine_children(m, kids, combined));
      LeafConfig cfg = LeafConfig::from_index(
          static_cast<std::int64_t>(a1 * table.size() + a2), 4);
      const auto direct = posterior(kRef, TreeShape{2, 2}, cfg);
      for (int i = 0; i < 4; ++i)
        REQUIRE_THAT(combined[static_cast<std::size_t>(i)], WithinAbs(direct[static_cast<std::size_t>(i)], 1e-12));
    }
}

TEST_CASE("bp weights: N and Z normalize to the same posterior") {
  const TreeShape shape{2, 2};
  for (std::int64_t idx : {std::int64_t{0}, std::int64_t{37}, std::int64_t{200}, std::int64_t{255}}) {
    const auto cfg = LeafConfig::from_index(idx, 4);
    const auto w = bp_weights(kRef, shape, cfg);
    const double sn = w.N[0] + w.N[1] + w.N[2] + w.N[3];
    const double sz = w.Z[0] + w.Z[1] + w.Z[2] + w.Z[3];
    const auto q = posterior(kRef, shape, cfg);
    for (int i = 0; i < 4; ++i) {
      REQUIRE_THAT(w.N[static_cast<std::size_t>(i)] / sn, WithinAbs(q[static_cast<std::size_t>(i)], 1e-12));
      REQUIRE_THAT(w.Z[static_cast<std::size_t>(i)] / sz, WithinAbs(q[static_cast<std::size_t>(i)], 1e-12));
    }
    // Z differs from N exactly by the product of subtree marginals
    REQUIRE(w.Z[0] > 0.0);
    const double ratio = w.N[0] / w.Z[0];
    for (int i = 1; i < 4; ++i)
      if (w.Z[static_cast<std::size_t>(i)] > 0)
        REQUIRE_THAT(w.N[static_cast<std::size_t>(i)] / w.Z[static_cast<std::size_t>(i)], WithinAbs(ratio, 1e-12));
  }
}

TEST_CASE("tv distance") {
  REQUIRE_THAT(tv_distance(ChannelParams::identity(), TreeShape{2, 2}, 1, 2), WithinAbs(1.0, 1e-14));
  REQUIRE_THAT(tv_distance(ChannelParams::uniform(), TreeShape{2, 2}, 1, 3), WithinAbs(0.0, 1e-14));
  REQUIRE_THAT(tv_distance(kRef, TreeShape{2, 1}, 1, 2), WithinAbs(0.84, 1e-13));
  REQUIRE_THAT(tv_distance(kRef, TreeShape{2, 1}, 1, 3), WithinAbs(0.5775, 1e-13));
  REQUIRE_THAT(tv_distance(kRef, TreeShape{2, 2}, 1, 2), WithinAbs(0.67334400000000005, 1e-13));
  REQUIRE_THAT(tv_distance(kRef, TreeShape{2, 3}, 1, 3), WithinAbs(0.29172448269775753, 1e-12));
  REQUIRE_THROWS_AS(tv_distance(kRef, TreeShape{2, 1}, 1, 1), std::invalid_argument);
}

TEST_CASE("tv distance is monotone in depth (data processing)") {
  for (const auto& ch : random_channel_corpus(20, 17)) {
    for (auto [i, j] : {std::pair{1, 2}, std::pair{1, 3}}) {
      const double t1 = tv_distance(ch, TreeShape{2, 1}, i, j);
      const double t2 = tv_distance(ch, TreeShape{2, 2}, i, j);
      REQUIRE(t2 <= t1 + 1e-12);
    }
  }
}

TEST_CASE("block swap exchanges barred and unbarred moments") {
  for (const auto& ch : random_channel_corpus(10, 19)) {
    const auto m = exact_moments(ch, TreeShape{2, 2});
    const auto ms = exact_moments(swap_blocks(ch), TreeShape{2, 2});
    REQUIRE_THAT(ms.x, WithinAbs(m.xbar, 1e-12));
    REQUIRE_THAT(ms.y, WithinAbs(m.ybar, 1e-12));
    REQUIRE_THAT(ms.u, WithinAbs(m.ubar, 1e-12));
    REQUIRE_THAT(ms.v, WithinAbs(m.vbar, 1e-12));
    REQUIRE_THAT(ms.w, WithinAbs(m.wbar, 1e-12));
    REQUIRE_THAT(ms.xbar, WithinAbs(m.x, 1e-12));
    REQUIRE_THAT(ms.z, WithinAbs(m.z, 1e-12));
    REQUIRE_THAT(ms.zbar, WithinAbs(m.zbar, 1e-12));
  }
}

TEST_CASE("moments refuse over-budget shapes") {
  REQUIRE_THROWS_AS(exact_moments(kRef, TreeShape{2, 4}), BudgetExceeded);
  REQUIRE_THROWS_AS(tv_distance(kRef, TreeShape{3, 3}, 1, 2), BudgetExceeded);
}
