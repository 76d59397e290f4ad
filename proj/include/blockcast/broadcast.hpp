#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "blockcast/channel.hpp"
#include "blockcast/parallel.hpp"
#include "blockcast/rng.hpp"
#include "blockcast/tree.hpp"

// Forward simulation of the broadcast process and exact likelihood tables
// P(config | root state) for in-budget shapes.

namespace blockcast {

namespace detail {

inline void sample_subtree(const Mat4& m, int d, int depth, int state,
                           std::uint64_t key, std::vector<std::uint8_t>& out) {
  if (depth == 0) {
    out.push_back(static_cast<std::uint8_t>(state));
    return;
  }
  for (int j = 0; j < d; ++j) {
    const std::uint64_t ck = child_key(key, static_cast<std::uint64_t>(j));
    SplitMix64 rng(ck);
    const int cs = rng.next_state(m[static_cast<std::size_t>(state)]);
    sample_subtree(m, d, depth - 1, cs, ck, out);
  }
}

}  // namespace detail

// One draw of the level-n spins given the root state. Identical seeds give
// identical configs; each subtree owns an independent key (see rng.hpp).
inline LeafConfig sample_broadcast(const ChannelParams& params, const TreeShape& shape,
                                   int root_state, std::uint64_t seed) {
  check_shape(shape);
  if (root_state < 1 || root_state > 4)
    throw std::invalid_argument("sample_broadcast: root state must be in 1..4");
  LeafConfig c;
  c.states.reserve(static_cast<std::size_t>(shape.leaf_count()));
  detail::sample_subtree(to_matrix(params), shape.d, shape.n, root_state - 1,
                         root_key(seed), c.states);
  return c;
}

// Likelihood table at depth n: T[c][i] = P(config c | subtree root = i),
// configs in canonical index order. Materialized, so callers keep 4^(d^n)
// within the enumeration budget.
inline std::vector<Vec4> likelihood_table(const ChannelParams& params, const TreeShape& shape) {
  check_enumeration_budget(shape);
  const Mat4 m = to_matrix(params);
  std::vector<Vec4> table(4);
  for (int i = 0; i < 4; ++i) {
    table[static_cast<std::size_t>(i)] = Vec4{0, 0, 0, 0};
    table[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = 1.0;
  }
  for (int level = 1; level <= shape.n; ++level) {
    const auto prev = table;  // depth level-1
    // per-config factor: F[c][i] = sum_s m[i][s] prev[c][s]
    std::vector<Vec4> factor(prev.size());
    for (std::size_t c = 0; c < prev.size(); ++c)
      for (int i = 0; i < 4; ++i) {
        double acc = 0;
        for (int s = 0; s < 4; ++s) acc += m[static_cast<std::size_t>(i)][static_cast<std::size_t>(s)] * prev[c][static_cast<std::size_t>(s)];
        factor[c][static_cast<std::size_t>(i)] = acc;
      }
    const std::size_t sub = prev.size();
    std::size_t count = 1;
    for (int j = 0; j < shape.d; ++j) count *= sub;
    std::vector<Vec4> next(count);
    // config index = concatenated child indices, first child most significant
    std::vector<std::size_t> digits(static_cast<std::size_t>(shape.d), 0);
    for (std::size_t idx = 0; idx < count; ++idx) {
      Vec4 v{1, 1, 1, 1};
      for (int j = 0; j < shape.d; ++j) {
        const Vec4& f = factor[digits[static_cast<std::size_t>(j)]];
        for (int i = 0; i < 4; ++i) v[static_cast<std::size_t>(i)] *= f[static_cast<std::size_t>(i)];
      }
      next[idx] = v;
      for (int j = shape.d - 1; j >= 0; --j) {
        if (++digits[static_cast<std::size_t>(j)] < sub) break;
        digits[static_cast<std::size_t>(j)] = 0;
      }
    }
    table = std::move(next);
  }
  return table;
}

// Streamed enumeration of depth-n likelihood vectors in index order, split in
// `workers` contiguous chunks. fn(chunk, index, L) is invoked with strictly
// increasing index within a chunk; chunks partition [0, 4^(d^n)). Only the
// depth-(n-1) table is materialized, so memory stays tiny at the budget
// boundary.
template <typename Fn>
void enumerate_likelihoods(const ChannelParams& params, const TreeShape& shape, int workers,
                           Fn&& fn) {
  check_enumeration_budget(shape);
  if (shape.n == 0) {
    for (int i = 0; i < 4; ++i) {
      Vec4 v{0, 0, 0, 0};
      v[static_cast<std::size_t>(i)] = 1.0;
      fn(0, static_cast<std::int64_t>(i), v);
    }
    return;
  }
  const TreeShape sub{shape.d, shape.n - 1};
  const auto prev = likelihood_table(params, sub);
  const Mat4 m = to_matrix(params);
  std::vector<Vec4> factor(prev.size());
  for (std::size_t c = 0; c < prev.size(); ++c)
    for (int i = 0; i < 4; ++i) {
      double acc = 0;
      for (int s = 0; s < 4; ++s) acc += m[static_cast<std::size_t>(i)][static_cast<std::size_t>(s)] * prev[c][static_cast<std::size_t>(s)];
      factor[c][static_cast<std::size_t>(i)] = acc;
    }
  const std::int64_t sub_count = static_cast<std::int64_t>(prev.size());
  std::int64_t total = 1;
  for (int j = 0; j < shape.d; ++j) total *= sub_count;

  parallel_chunks(0, total, workers, [&](std::int64_t chunk, std::int64_t lo, std::int64_t hi) {
    std::vector<std::int64_t> digits(static_cast<std::size_t>(shape.d), 0);
    std::int64_t rem = lo;
    for (int j = shape.d - 1; j >= 0; --j) {
      digits[static_cast<std::size_t>(j)] = rem % sub_count;
      rem /= sub_count;
    }
    for (std::int64_t idx = lo; idx < hi; ++idx) {
      Vec4 v{1, 1, 1, 1};
      for (int j = 0; j < shape.d; ++j) {
        const Vec4& f = factor[static_cast<std::size_t>(digits[static_cast<std::size_t>(j)])];
        for (int i = 0; i < 4; ++i) v[static_cast<std::size_t>(i)] *= f[static_cast<std::size_t>(i)];
      }
      fn(chunk, idx, v);
      for (int j = shape.d - 1; j >= 0; --j) {
        if (++digits[static_cast<std::size_t>(j)] < sub_count) break;
        digits[static_cast<std::size_t>(j)] = 0;
      }
    }
  });
}

// Exact law of the level-n spins given the root state: sink(index, p) in
// index order. Refuses over-budget shapes.
template <typename Sink>
void leaf_distribution(const ChannelParams& params, const TreeShape& shape, int root_state,
                       Sink&& sink) {
  if (root_state < 1 || root_state > 4)
    throw std::invalid_argument("leaf_distribution: root state must be in 1..4");
  enumerate_likelihoods(params, shape, 1,
                        [&](std::int64_t, std::int64_t idx, const Vec4& L) {
                          sink(idx, L[static_cast<std::size_t>(root_state - 1)]);
                        });
}

}  // namespace blockcast
