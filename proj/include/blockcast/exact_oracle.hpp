#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "blockcast/accum.hpp"
#include "blockcast/broadcast.hpp"
#include "blockcast/channel.hpp"
#include "blockcast/tree.hpp"

// Exact posterior recursion and exact moment/Z-statistic evaluation at small
// (d, n). Ground truth for density evolution, the truncated dynamics and the
// lemma suite.
//
// Conditioning conventions (pinned against the moment definitions in the
// analysis; "barred" = second block):
//   x = E(f(1,.)-1/4)   under root 1      xbar = E(f(3,.)-1/4)   under root 3
//   y = E(f(2,.)-1/4)   under root 1      ybar = E(f(4,.)-1/4)   under root 3
//   z = E(f(1,.)-1/4)   under root 3      zbar = E(f(3,.)-1/4)   under root 1
//   u = E(f(1,.)-1/4)^2 under root 1      ubar = E(f(3,.)-1/4)^2 under root 3
//   v = E(f(2,.)-1/4)^2 under root 1      vbar = E(f(4,.)-1/4)^2 under root 3
//   w = E(f(1,.)-1/4)^2 under root 3      wbar = E(f(3,.)-1/4)^2 under root 1

namespace blockcast {

struct UnsupportedConfiguration : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using PosteriorVector = Vec4;  // length-4 probability vector, sums to 1

struct MomentSet {
  int n = 0;
  double x = 0, y = 0, z = 0, u = 0, v = 0, w = 0;
  double xbar = 0, ybar = 0, zbar = 0, ubar = 0, vbar = 0, wbar = 0;
};

// level-0 values: indicator posteriors
inline MomentSet level0_moments() {
  MomentSet m;
  m.n = 0;
  m.x = m.xbar = 0.75;
  m.y = m.z = m.ybar = m.zbar = -0.25;
  m.u = m.ubar = 9.0 / 16;
  m.v = m.w = m.vbar = m.wbar = 1.0 / 16;
  return m;
}

namespace detail {

struct ScaledVec {
  Vec4 v{0, 0, 0, 0};   // max-normalized, entries in [0,1]
  double log_scale = 0;  // true vector = v * exp(log_scale)
  bool zero = false;
};

// Subtree likelihood for one config slice, log-domain with per-node max
// normalization (d^n per-child factors can underflow in linear space for
// deep, non-enumerable shapes).
inline ScaledVec likelihood_rec(const Mat4& m, int d, int depth,
                                std::span<const std::uint8_t> slice) {
  ScaledVec r;
  if (depth == 0) {
    r.v[slice[0]] = 1.0;
    return r;
  }
  const std::size_t sub = slice.size() / static_cast<std::size_t>(d);
  r.v = Vec4{1, 1, 1, 1};
  for (int j = 0; j < d; ++j) {
    const auto child = likelihood_rec(m, d, depth - 1, slice.subspan(static_cast<std::size_t>(j) * sub, sub));
    if (child.zero) {
      r.zero = true;
      return r;
    }
    r.log_scale += child.log_scale;
    for (int i = 0; i < 4; ++i) {
      double f = 0;
      for (int s = 0; s < 4; ++s) f += m[static_cast<std::size_t>(i)][static_cast<std::size_t>(s)] * child.v[static_cast<std::size_t>(s)];
      r.v[static_cast<std::size_t>(i)] *= f;
    }
  }
  double mx = 0;
  for (double e : r.v) mx = std::max(mx, e);
  if (mx == 0) {
    r.zero = true;
    return r;
  }
  for (double& e : r.v) e /= mx;
  r.log_scale += std::log(mx);
  return r;
}

}  // namespace detail

// Bayes posterior of the root given the level-n spins, uniform prior.
// Works for any shape whose config fits in memory (no enumeration budget).
inline PosteriorVector posterior(const ChannelParams& params, const TreeShape& shape,
                                 const LeafConfig& config) {
  check_shape(shape);
  if (static_cast<std::int64_t>(config.states.size()) != shape.leaf_count())
    throw std::invalid_argument("posterior: config length != d^n");
  const auto r = detail::likelihood_rec(to_matrix(params), shape.d, shape.n,
                                        std::span<const std::uint8_t>(config.states));
  if (r.zero)
    throw UnsupportedConfiguration("unsupported configuration: zero likelihood under every root state");
  double sum = 0;
  for (double e : r.v) sum += e;
  PosteriorVector q;
  for (int i = 0; i < 4; ++i) q[static_cast<std::size_t>(i)] = r.v[static_cast<std::size_t>(i)] / sum;
  return q;
}

// BP combine: children posteriors -> parent posterior, log domain.
// N_k = prod_j sum_i p_{ki} q^{(j)}_i, normalized. Returns false when every
// N_k vanishes (possible only with degenerate channels).
inline bool combine_children(const Mat4& m, std::span<const Vec4> children, Vec4& out) {
  Vec4 lg{0, 0, 0, 0};
  bool dead[4] = {false, false, false, false};
  for (const auto& q : children) {
    for (int k = 0; k < 4; ++k) {
      if (dead[k]) continue;
      double f = 0;
      for (int i = 0; i < 4; ++i) f += m[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)] * q[static_cast<std::size_t>(i)];
      if (f <= 0)
        dead[k] = true;
      else
        lg[static_cast<std::size_t>(k)] += std::log(f);
    }
  }
  double mx = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < 4; ++k)
    if (!dead[k]) mx = std::max(mx, lg[static_cast<std::size_t>(k)]);
  if (!std::isfinite(mx)) return false;
  double sum = 0;
  for (int k = 0; k < 4; ++k) {
    out[static_cast<std::size_t>(k)] = dead[k] ? 0.0 : std::exp(lg[static_cast<std::size_t>(k)] - mx);
    sum += out[static_cast<std::size_t>(k)];
  }
  for (double& e : out) e /= sum;
  return true;
}

// Subtree likelihood products for one level-(n+1) configuration: N_k is the
// un-normalized product over the root's children, Z_k the variant normalized
// by the per-subtree marginals. f_{n+1}(k, A) = N_k / sum N = Z_k / sum Z.
struct BPWeights {
  Vec4 N{0, 0, 0, 0};
  Vec4 Z{0, 0, 0, 0};
};

inline BPWeights bp_weights(const ChannelParams& params, const TreeShape& shape,
                            const LeafConfig& config) {
  check_shape(shape);
  if (shape.n < 1) throw std::invalid_argument("bp_weights: depth must be >= 1");
  if (static_cast<std::int64_t>(config.states.size()) != shape.leaf_count())
    throw std::invalid_argument("bp_weights: config length != d^n");
  const Mat4 m = to_matrix(params);
  const std::size_t sub = config.states.size() / static_cast<std::size_t>(shape.d);
  BPWeights w;
  w.N = Vec4{1, 1, 1, 1};
  double pden = 1.0;
  const std::span<const std::uint8_t> all(config.states);
  for (int j = 0; j < shape.d; ++j) {
    const auto child =
        detail::likelihood_rec(m, shape.d, shape.n - 1, all.subspan(static_cast<std::size_t>(j) * sub, sub));
    const double scale = child.zero ? 0.0 : std::exp(child.log_scale);
    Vec4 L{0, 0, 0, 0};
    for (int i = 0; i < 4; ++i) L[static_cast<std::size_t>(i)] = child.v[static_cast<std::size_t>(i)] * scale;
    pden *= 0.25 * (L[0] + L[1] + L[2] + L[3]);
    for (int k = 0; k < 4; ++k) {
      double f = 0;
      for (int i = 0; i < 4; ++i) f += m[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)] * L[static_cast<std::size_t>(i)];
      w.N[static_cast<std::size_t>(k)] *= f;
    }
  }
  for (int k = 0; k < 4; ++k)
    w.Z[static_cast<std::size_t>(k)] = pden > 0 ? w.N[static_cast<std::size_t>(k)] / pden : 0.0;
  return w;
}

struct ExactMomentsResult {
  MomentSet moments;
  Vec4 total_prob{0, 0, 0, 0};  // sum_A P(A|i), each should be 1
  double x_variance_form = 0;   // 4 E(X1 - 1/4)^2 under the unconditional law
  double tv12 = 0, tv13 = 0;    // d_TV(sigma^1, sigma^2), d_TV(sigma^1, sigma^3)
};

// All twelve moments in one enumeration sweep, compensated per chunk and
// merged in chunk order.
inline ExactMomentsResult exact_moments_full(const ChannelParams& params, const TreeShape& shape,
                                             int workers = 1) {
  check_enumeration_budget(shape);
  struct Acc {
    Kahan x, y, z, u, v, w, xb, yb, zb, ub, vb, wb;
    Kahan p0, p1, p2, p3, xvar, tv12, tv13;
  };
  const int nw = workers < 1 ? 1 : workers;
  std::vector<Acc> acc(static_cast<std::size_t>(nw) + 1);
  enumerate_likelihoods(params, shape, nw, [&](std::int64_t chunk, std::int64_t, const Vec4& L) {
    Acc& a = acc[static_cast<std::size_t>(chunk)];
    const double S = L[0] + L[1] + L[2] + L[3];
    a.p0.add(L[0]);
    a.p1.add(L[1]);
    a.p2.add(L[2]);
    a.p3.add(L[3]);
    a.tv12.add(std::fabs(L[0] - L[1]));
    a.tv13.add(std::fabs(L[0] - L[2]));
    if (S <= 0) return;  // impossible under every root (degenerate channel)
    const double q1 = L[0] / S, q2 = L[1] / S, q3 = L[2] / S, q4 = L[3] / S;
    const double t1 = q1 - 0.25, t2 = q2 - 0.25, t3 = q3 - 0.25, t4 = q4 - 0.25;
    a.x.add(L[0] * t1);
    a.y.add(L[0] * t2);
    a.z.add(L[2] * t1);
    a.u.add(L[0] * t1 * t1);
    a.v.add(L[0] * t2 * t2);
    a.w.add(L[2] * t1 * t1);
    a.xb.add(L[2] * t3);
    a.yb.add(L[2] * t4);
    a.zb.add(L[0] * t3);
    a.ub.add(L[2] * t3 * t3);
    a.vb.add(L[2] * t4 * t4);
    a.wb.add(L[0] * t3 * t3);
    // unconditional law: P(A) = S/4
    a.xvar.add(S * t1 * t1);  // 4 * (S/4) * t1^2
  });
  Acc total;
  for (int c = 0; c < nw; ++c) {
    Acc& a = acc[static_cast<std::size_t>(c)];
    total.x.merge(a.x);
    total.y.merge(a.y);
    total.z.merge(a.z);
    total.u.merge(a.u);
    total.v.merge(a.v);
    total.w.merge(a.w);
    total.xb.merge(a.xb);
    total.yb.merge(a.yb);
    total.zb.merge(a.zb);
    total.ub.merge(a.ub);
    total.vb.merge(a.vb);
    total.wb.merge(a.wb);
    total.p0.merge(a.p0);
    total.p1.merge(a.p1);
    total.p2.merge(a.p2);
    total.p3.merge(a.p3);
    total.xvar.merge(a.xvar);
    total.tv12.merge(a.tv12);
    total.tv13.merge(a.tv13);
  }
  ExactMomentsResult r;
  r.moments.n = shape.n;
  r.moments.x = total.x.value();
  r.moments.y = total.y.value();
  r.moments.z = total.z.value();
  r.moments.u = total.u.value();
  r.moments.v = total.v.value();
  r.moments.w = total.w.value();
  r.moments.xbar = total.xb.value();
  r.moments.ybar = total.yb.value();
  r.moments.zbar = total.zb.value();
  r.moments.ubar = total.ub.value();
  r.moments.vbar = total.vb.value();
  r.moments.wbar = total.wb.value();
  r.total_prob = Vec4{total.p0.value(), total.p1.value(), total.p2.value(), total.p3.value()};
  r.x_variance_form = total.xvar.value();
  r.tv12 = 0.5 * total.tv12.value();
  r.tv13 = 0.5 * total.tv13.value();
  return r;
}

inline MomentSet exact_moments(const ChannelParams& params, const TreeShape& shape,
                               int workers = 1) {
  return exact_moments_full(params, shape, workers).moments;
}

// 1/2 sum_A |P(A|i) - P(A|j)|
inline double tv_distance(const ChannelParams& params, const TreeShape& shape, int i, int j,
                          int workers = 1) {
  if (i < 1 || i > 4 || j < 1 || j > 4 || i == j)
    throw std::invalid_argument("tv_distance: states must be distinct, in 1..4");
  check_enumeration_budget(shape);
  const int nw = workers < 1 ? 1 : workers;
  std::vector<Kahan> acc(static_cast<std::size_t>(nw) + 1);
  enumerate_likelihoods(params, shape, nw, [&](std::int64_t chunk, std::int64_t, const Vec4& L) {
    acc[static_cast<std::size_t>(chunk)].add(std::fabs(L[static_cast<std::size_t>(i - 1)] - L[static_cast<std::size_t>(j - 1)]));
  });
  Kahan total;
  for (int c = 0; c < nw; ++c) total.merge(acc[static_cast<std::size_t>(c)]);
  return 0.5 * total.value();
}

// ---------------------------------------------------------------------------
// Y moments: Y_i(n) = f_n(i, sigma_j^1(n+1)) is the posterior of one depth-n
// child subtree whose config law is the row-1 mixture over the child state.

struct YMoments {
  Vec4 mean{};                   // E(Y_i - 1/4)
  Vec4 second{};                 // E(Y_i - 1/4)^2
  double y12 = 0, y13 = 0, y14 = 0, y23 = 0, y24 = 0, y34 = 0;  // E(Y_i-1/4)(Y_j-1/4)
};

inline YMoments y_moments(const ChannelParams& params, const TreeShape& shape, int workers = 1) {
  check_enumeration_budget(shape);
  const Mat4 m = to_matrix(params);
  struct Acc {
    Kahan mean[4], second[4];
    Kahan y12, y13, y14, y23, y24, y34;
  };
  const int nw = workers < 1 ? 1 : workers;
  std::vector<Acc> acc(static_cast<std::size_t>(nw) + 1);
  enumerate_likelihoods(params, shape, nw, [&](std::int64_t chunk, std::int64_t, const Vec4& L) {
    Acc& a = acc[static_cast<std::size_t>(chunk)];
    const double S = L[0] + L[1] + L[2] + L[3];
    if (S <= 0) return;
    double wmix = 0;  // P(child config | tree root = 1) = sum_i p_{1i} L_i
    for (int i = 0; i < 4; ++i) wmix += m[0][static_cast<std::size_t>(i)] * L[static_cast<std::size_t>(i)];
    double t[4];
    for (int i = 0; i < 4; ++i) t[i] = L[static_cast<std::size_t>(i)] / S - 0.25;
    for (int i = 0; i < 4; ++i) {
      a.mean[i].add(wmix * t[i]);
      a.second[i].add(wmix * t[i] * t[i]);
    }
    a.y12.add(wmix * t[0] * t[1]);
    a.y13.add(wmix * t[0] * t[2]);
    a.y14.add(wmix * t[0] * t[3]);
    a.y23.add(wmix * t[1] * t[2]);
    a.y24.add(wmix * t[1] * t[3]);
    a.y34.add(wmix * t[2] * t[3]);
  });
  Acc total;
  for (int c = 0; c < nw; ++c) {
    Acc& a = acc[static_cast<std::size_t>(c)];
    for (int i = 0; i < 4; ++i) {
      total.mean[i].merge(a.mean[i]);
      total.second[i].merge(a.second[i]);
    }
    total.y12.merge(a.y12);
    total.y13.merge(a.y13);
    total.y14.merge(a.y14);
    total.y23.merge(a.y23);
    total.y24.merge(a.y24);
    total.y34.merge(a.y34);
  }
  YMoments r;
  for (int i = 0; i < 4; ++i) {
    r.mean[static_cast<std::size_t>(i)] = total.mean[i].value();
    r.second[static_cast<std::size_t>(i)] = total.second[i].value();
  }
  r.y12 = total.y12.value();
  r.y13 = total.y13.value();
  r.y14 = total.y14.value();
  r.y23 = total.y23.value();
  r.y24 = total.y24.value();
  r.y34 = total.y34.value();
  return r;
}

// ---------------------------------------------------------------------------
// Z statistics at level n (they live on level n+1: shape+1 must be in budget).
// Z_i = N_i / prod_j P(A_j); per-child factor g_i = 4 sum_k p_{ik} Y_k.

struct ZStatistics {
  Vec4 means{};                                  // E Z_i
  Vec4 second{};                                 // E Z_i^2
  double ez12 = 0, ez13 = 0, ez23 = 0, ez34 = 0; // E Z_i Z_j
  double Rx = 0, Rz = 0;                         // exact remainder expectations
  double v_bracket = 0;                          // computable bound bracket for |V_x|,|V_z|
  Vec4 pc_mean{};                                // per-child E g_i
  Vec4 pc_second{};                              // per-child E g_i^2
  double pc12 = 0, pc13 = 0, pc23 = 0, pc34 = 0; // per-child E g_i g_j
};

inline ZStatistics z_statistics(const ChannelParams& params, const TreeShape& shape,
                                int workers = 1) {
  check_shape(shape);
  const TreeShape up{shape.d, shape.n + 1};
  check_enumeration_budget(up);  // joint enumeration happens at level n+1
  const Mat4 m = to_matrix(params);

  // per-child pass over depth-n configs
  struct PcAcc {
    Kahan mean[4], second[4], g12, g13, g23, g34;
  };
  const int nw = workers < 1 ? 1 : workers;
  std::vector<PcAcc> pcacc(static_cast<std::size_t>(nw) + 1);
  enumerate_likelihoods(params, shape, nw, [&](std::int64_t chunk, std::int64_t, const Vec4& L) {
    PcAcc& a = pcacc[static_cast<std::size_t>(chunk)];
    const double S = L[0] + L[1] + L[2] + L[3];
    if (S <= 0) return;
    double wmix = 0;
    for (int i = 0; i < 4; ++i) wmix += m[0][static_cast<std::size_t>(i)] * L[static_cast<std::size_t>(i)];
    double g[4];
    for (int k = 0; k < 4; ++k) {
      double s = 0;
      for (int i = 0; i < 4; ++i) s += m[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)] * L[static_cast<std::size_t>(i)] / S;
      g[k] = 4.0 * s;
    }
    for (int k = 0; k < 4; ++k) {
      a.mean[k].add(wmix * g[k]);
      a.second[k].add(wmix * g[k] * g[k]);
    }
    a.g12.add(wmix * g[0] * g[1]);
    a.g13.add(wmix * g[0] * g[2]);
    a.g23.add(wmix * g[1] * g[2]);
    a.g34.add(wmix * g[2] * g[3]);
  });
  PcAcc pct;
  for (int c = 0; c < nw; ++c) {
    PcAcc& a = pcacc[static_cast<std::size_t>(c)];
    for (int k = 0; k < 4; ++k) {
      pct.mean[k].merge(a.mean[k]);
      pct.second[k].merge(a.second[k]);
    }
    pct.g12.merge(a.g12);
    pct.g13.merge(a.g13);
    pct.g23.merge(a.g23);
    pct.g34.merge(a.g34);
  }

  // joint pass over level-(n+1) configs: the listed monomials plus R_x, R_z
  const auto sub_table = likelihood_table(params, shape);
  const std::int64_t sub_count = static_cast<std::int64_t>(sub_table.size());
  std::vector<Vec4> factor(sub_table.size());
  std::vector<double> psub(sub_table.size());
  for (std::size_t c = 0; c < sub_table.size(); ++c) {
    psub[c] = 0.25 * (sub_table[c][0] + sub_table[c][1] + sub_table[c][2] + sub_table[c][3]);
    for (int i = 0; i < 4; ++i) {
      double f = 0;
      for (int s = 0; s < 4; ++s) f += m[static_cast<std::size_t>(i)][static_cast<std::size_t>(s)] * sub_table[c][static_cast<std::size_t>(s)];
      factor[c][static_cast<std::size_t>(i)] = f;
    }
  }
  std::int64_t total = 1;
  for (int j = 0; j < shape.d; ++j) total *= sub_count;
  struct JAcc {
    Kahan mean[4], second[4], z12, z13, z23, z34, rx, rz;
  };
  std::vector<JAcc> jacc(static_cast<std::size_t>(nw) + 1);
  parallel_chunks(0, total, nw, [&](std::int64_t chunk, std::int64_t lo, std::int64_t hi) {
    JAcc& a = jacc[static_cast<std::size_t>(chunk)];
    std::vector<std::int64_t> digits(static_cast<std::size_t>(shape.d), 0);
    std::int64_t rem = lo;
    for (int j = shape.d - 1; j >= 0; --j) {
      digits[static_cast<std::size_t>(j)] = rem % sub_count;
      rem /= sub_count;
    }
    for (std::int64_t idx = lo; idx < hi; ++idx) {
      Vec4 N{1, 1, 1, 1};
      double pden = 1.0;
      for (int j = 0; j < shape.d; ++j) {
        const auto c = static_cast<std::size_t>(digits[static_cast<std::size_t>(j)]);
        pden *= psub[c];
        for (int i = 0; i < 4; ++i) N[static_cast<std::size_t>(i)] *= factor[c][static_cast<std::size_t>(i)];
      }
      for (int j = shape.d - 1; j >= 0; --j) {
        if (++digits[static_cast<std::size_t>(j)] < sub_count) break;
        digits[static_cast<std::size_t>(j)] = 0;
      }
      if (pden <= 0) continue;  // unconditionally impossible config
      const double w = N[0];    // P(A | root = 1)
      Vec4 Zv;
      for (int i = 0; i < 4; ++i) Zv[static_cast<std::size_t>(i)] = N[static_cast<std::size_t>(i)] / pden;
      const double zsum = Zv[0] + Zv[1] + Zv[2] + Zv[3];
      for (int i = 0; i < 4; ++i) {
        a.mean[i].add(w * Zv[static_cast<std::size_t>(i)]);
        a.second[i].add(w * Zv[static_cast<std::size_t>(i)] * Zv[static_cast<std::size_t>(i)]);
      }
      a.z12.add(w * Zv[0] * Zv[1]);
      a.z13.add(w * Zv[0] * Zv[2]);
      a.z23.add(w * Zv[1] * Zv[2]);
      a.z34.add(w * Zv[2] * Zv[3]);
      if (w > 0) {
        const double SN = N[0] + N[1] + N[2] + N[3];
        const double r2 = (zsum - 4.0) * (zsum - 4.0) / 16.0;
        a.rx.add(w * (N[0] / SN - 0.25) * r2);
        a.rz.add(w * (N[2] / SN - 0.25) * r2);
      }
    }
  });
  JAcc jt;
  for (int c = 0; c < nw; ++c) {
    JAcc& a = jacc[static_cast<std::size_t>(c)];
    for (int k = 0; k < 4; ++k) {
      jt.mean[k].merge(a.mean[k]);
      jt.second[k].merge(a.second[k]);
    }
    jt.z12.merge(a.z12);
    jt.z13.merge(a.z13);
    jt.z23.merge(a.z23);
    jt.z34.merge(a.z34);
    jt.rx.merge(a.rx);
    jt.rz.merge(a.rz);
  }

  ZStatistics r;
  for (int k = 0; k < 4; ++k) {
    r.means[static_cast<std::size_t>(k)] = jt.mean[k].value();
    r.second[static_cast<std::size_t>(k)] = jt.second[k].value();
    r.pc_mean[static_cast<std::size_t>(k)] = pct.mean[k].value();
    r.pc_second[static_cast<std::size_t>(k)] = pct.second[k].value();
  }
  r.ez12 = jt.z12.value();
  r.ez13 = jt.z13.value();
  r.ez23 = jt.z23.value();
  r.ez34 = jt.z34.value();
  r.pc12 = pct.g12.value();
  r.pc13 = pct.g13.value();
  r.pc23 = pct.g23.value();
  r.pc34 = pct.g34.value();
  r.Rx = jt.rx.value();
  r.Rz = jt.rz.value();

  const MomentSet mom = exact_moments(params, shape, workers);
  const double ax = std::fabs(mom.x) > 0 ? mom.x : 1.0;
  const double axb = std::fabs(mom.xbar) > 0 ? mom.xbar : 1.0;
  r.v_bracket =
      mom.x * mom.x *
          (std::fabs(mom.u / ax - 0.25) + std::fabs(mom.w / ax - 0.25) + mom.x) +
      mom.xbar * mom.xbar * (std::fabs(mom.wbar / axb - 0.25) + mom.xbar);
  return r;
}

}  // namespace blockcast
