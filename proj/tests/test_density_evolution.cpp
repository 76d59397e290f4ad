#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "blockcast/density_evolution.hpp"
#include "blockcast/lemma_checks.hpp"

using namespace blockcast;
using Catch::Matchers::WithinAbs;

namespace {
const ChannelParams kRef{0.6, 0.0, 0.2, 0.45, 0.15};

EvolveConfig small_cfg(std::int64_t pop, int depth, std::uint64_t seed) {
  EvolveConfig cfg;
  cfg.population_size = pop;
  cfg.max_depth = depth;
  cfg.seed = seed;
  cfg.workers = 2;
  return cfg;
}
}  // namespace

TEST_CASE("initial population is indicators with exact level-0 moments") {
  const auto pop = init_population(2000);
  REQUIRE(pop.level == 0);
  REQUIRE(pop.size_per_state() == 2000);
  REQUIRE(pop.per_state[2][17][2] == 1.0);
  const auto est = estimate_moments(pop);
  REQUIRE(est.mean.x == 0.75);
  REQUIRE(est.mean.z == -0.25);
  REQUIRE(est.mean.u == 9.0 / 16);
  REQUIRE(est.stderr_.x == 0.0);
  EvolveConfig bad;
  bad.population_size = 10;
  REQUIRE_THROWS_AS(init_population(bad), std::invalid_argument);
}

TEST_CASE("identity channel populations stay pure indicators") {
  auto cfg = small_cfg(2000, 3, 5);
  auto pop = init_population(cfg);
  for (int l = 0; l < 3; ++l) {
    pop = evolve_step(pop, ChannelParams::identity(), 2, cfg);
    for (int k = 0; k < 4; ++k)
      for (const auto& q : pop.per_state[static_cast<std::size_t>(k)])
        REQUIRE(q[static_cast<std::size_t>(k)] == 1.0);
  }
  REQUIRE(pop.level == 3);
}

TEST_CASE("uniform channel flattens every posterior after one step") {
  auto cfg = small_cfg(2000, 1, 6);
  auto pop = evolve_step(init_population(cfg), ChannelParams::uniform(), 2, cfg);
  for (int k = 0; k < 4; ++k)
    for (const auto& q : pop.per_state[static_cast<std::size_t>(k)])
      for (int i = 0; i < 4; ++i) REQUIRE_THAT(q[static_cast<std::size_t>(i)], WithinAbs(0.25, 1e-12));
}

TEST_CASE("evolution is deterministic in the seed") {
  auto cfg = small_cfg(3000, 2, 99);
  auto p1 = init_population(cfg);
  auto p2 = init_population(cfg);
  for (int l = 0; l < 2; ++l) {
    p1 = evolve_step(p1, kRef, 2, cfg);
    cfg.workers = 1;  // worker count must not change the stream
    p2 = evolve_step(p2, kRef, 2, cfg);
    cfg.workers = 2;
  }
  for (int k = 0; k < 4; ++k) REQUIRE(p1.per_state[static_cast<std::size_t>(k)] == p2.per_state[static_cast<std::size_t>(k)]);

  auto cfg2 = small_cfg(3000, 2, 100);
  auto p3 = evolve_step(evolve_step(init_population(cfg2), kRef, 2, cfg2), kRef, 2, cfg2);
  REQUIRE(p1.per_state[0] != p3.per_state[0]);
}

TEST_CASE("estimates agree with the exact oracle through depth 3") {
  auto cfg = small_cfg(40000, 3, 12345);
  auto pop = init_population(cfg);
  for (int n = 1; n <= 3; ++n) {
    pop = evolve_step(pop, kRef, 2, cfg);
    const auto est = estimate_moments(pop);
    const auto exact = exact_moments(kRef, TreeShape{2, n}, 2);
    const double pairs[12][3] = {
        {est.mean.x, exact.x, est.stderr_.x},       {est.mean.y, exact.y, est.stderr_.y},
        {est.mean.z, exact.z, est.stderr_.z},       {est.mean.u, exact.u, est.stderr_.u},
        {est.mean.v, exact.v, est.stderr_.v},       {est.mean.w, exact.w, est.stderr_.w},
        {est.mean.xbar, exact.xbar, est.stderr_.xbar}, {est.mean.ybar, exact.ybar, est.stderr_.ybar},
        {est.mean.zbar, exact.zbar, est.stderr_.zbar}, {est.mean.ubar, exact.ubar, est.stderr_.ubar},
        {est.mean.vbar, exact.vbar, est.stderr_.vbar}, {est.mean.wbar, exact.wbar, est.stderr_.wbar}};
    for (const auto& p : pairs) {
      REQUIRE(std::fabs(p[0] - p[1]) < 5.0 * p[2] + 1e-3);
    }
  }
}

TEST_CASE("uniform-prior average posterior stays uniform (martingale)") {
  auto cfg = small_cfg(40000, 3, 777);
  auto pop = init_population(cfg);
  for (int n = 1; n <= 3; ++n) {
    pop = evolve_step(pop, kRef, 2, cfg);
    Vec4 avg{0, 0, 0, 0};
    for (int k = 0; k < 4; ++k)
      for (const auto& q : pop.per_state[static_cast<std::size_t>(k)])
        for (int i = 0; i < 4; ++i) avg[static_cast<std::size_t>(i)] += q[static_cast<std::size_t>(i)];
    const double total = 4.0 * static_cast<double>(pop.size_per_state());
    for (int i = 0; i < 4; ++i) {
      // se of the pooled mean is ~ 0.35 / sqrt(total)
      REQUIRE_THAT(avg[static_cast<std::size_t>(i)] / total, WithinAbs(0.25, 5 * 0.35 / std::sqrt(total)));
    }
  }
}

TEST_CASE("moment identities hold statistically on estimates") {
  // |x - (u+v+2w)| within 5 combined sigma; z <= 0 and x+z >= 0 within 5 sigma
  auto cfg = small_cfg(40000, 3, 2024);
  auto pop = init_population(cfg);
  for (int n = 1; n <= 3; ++n) {
    pop = evolve_step(pop, kRef, 2, cfg);
    const auto est = estimate_moments(pop);
    const double comb = std::sqrt(est.stderr_.x * est.stderr_.x + est.stderr_.u * est.stderr_.u +
                                  est.stderr_.v * est.stderr_.v + 4 * est.stderr_.w * est.stderr_.w);
    REQUIRE(std::fabs(est.mean.x - (est.mean.u + est.mean.v + 2 * est.mean.w)) < 5 * comb + 1e-6);
    REQUIRE(est.mean.z <= 5 * est.stderr_.z);
    REQUIRE(est.mean.x + est.mean.z >=
            -5 * std::sqrt(est.stderr_.x * est.stderr_.x + est.stderr_.z * est.stderr_.z));
  }
}

TEST_CASE("fresh child draws satisfy Lemma 2.3(a) statistically") {
  auto cfg = small_cfg(40000, 1, 31);
  auto pop = init_population(cfg);
  pop = evolve_step(pop, kRef, 2, cfg);  // level 1
  const auto est = estimate_moments(pop);
  const auto s = spectrum(kRef);
  const Mat4 m = to_matrix(kRef);
  // draw child states from row 1, then conditional posteriors; mean of
  // (Y1 - 1/4) must be lam1*x + (lam1-lam2)*z
  SplitMix64 rng(derive_stream(987, 55, 0, 0));
  Kahan sum, sumsq;
  const int N = 40000;
  for (int k = 0; k < N; ++k) {
    const int cs = rng.next_state(m[0]);
    const auto& q = detail::conditional_pool_draw(pop, cs, rng);
    const double t = q[0] - 0.25;
    sum.add(t);
    sumsq.add(t * t);
  }
  const double mean = sum.value() / N;
  const double se = std::sqrt((sumsq.value() / N - mean * mean) / N);
  const double predicted = s.lam1 * est.mean.x + (s.lam1 - s.lam2) * est.mean.z;
  REQUIRE_THAT(mean, WithinAbs(predicted, 5 * se + 5 * est.stderr_.x));
}

TEST_CASE("starved conditional draws raise a clear error") {
  Population pop;
  pop.level = 1;
  Vec4 e1{1, 0, 0, 0};
  for (int k = 0; k < 4; ++k) pop.per_state[static_cast<std::size_t>(k)].assign(100, e1);
  SplitMix64 rng(1);
  REQUIRE_THROWS_AS(detail::conditional_pool_draw(pop, 1, rng), std::runtime_error);
}

TEST_CASE("run: identity channel is reconstructible at its exact plateau") {
  auto cfg = small_cfg(2000, 8, 1);
  const auto res = run(ChannelParams::identity(), 2, cfg);
  REQUIRE(res.verdict == Verdict::reconstructible);
  REQUIRE_THAT(res.plateau_x, WithinAbs(0.75, 1e-12));
  REQUIRE(res.plateau_reached);
  REQUIRE_FALSE(res.monotonicity_violation);
}

TEST_CASE("run: uniform channel dies at level 1") {
  auto cfg = small_cfg(2000, 8, 2);
  const auto res = run(ChannelParams::uniform(), 2, cfg);
  REQUIRE(res.verdict == Verdict::non_reconstructible);
  REQUIRE(res.trajectory[1].x_hat == 0.0);
  REQUIRE(res.plateau_x < 1e-12);
}

TEST_CASE("run: supercritical spectrum stays informative") {
  auto cfg = small_cfg(20000, 12, 3);
  const auto ch = from_spectrum({0.78, 0.56, 0.4});  // d lam1^2 = 1.2168
  const auto res = run(ch, 2, cfg);
  REQUIRE(res.verdict == Verdict::reconstructible);
  REQUIRE(res.plateau_x > 0.1);
}

TEST_CASE("run: deep subcritical control dies out") {
  auto cfg = small_cfg(20000, 40, 4);
  const auto ch = from_spectrum({0.3, 0.1, 0.2});  // d lam^2 = 0.18
  const auto res = run(ch, 2, cfg);
  REQUIRE(res.verdict == Verdict::non_reconstructible);
  REQUIRE(res.trajectory.back().x_hat < 1e-3);
}

TEST_CASE("verdict bands: inconclusive sits between the extinction thresholds") {
  // identity channel plateaus at exactly 0.75; move the band around it
  auto cfg = small_cfg(2000, 8, 11);
  cfg.extinction_tol = 0.2;  // band [0.2, 1.0) contains 0.75
  REQUIRE(run(ChannelParams::identity(), 2, cfg).verdict == Verdict::inconclusive);
  cfg.extinction_tol = 0.8;  // 0.75 < 0.8: extinct
  REQUIRE(run(ChannelParams::identity(), 2, cfg).verdict == Verdict::non_reconstructible);
  cfg.extinction_tol = 0.1;  // 0.75 >= 0.5: reconstructible
  REQUIRE(run(ChannelParams::identity(), 2, cfg).verdict == Verdict::reconstructible);
}

TEST_CASE("evolve_step rejects an empty population") {
  Population empty;
  EvolveConfig cfg;
  REQUIRE_THROWS_AS(evolve_step(empty, kRef, 2, cfg), std::invalid_argument);
}
