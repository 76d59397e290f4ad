#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "blockcast/channel.hpp"
#include "blockcast/parallel.hpp"

// The truncated second-order dynamical system in (X, Xbar, Z):
//
//   X'    = d*l1^2*X    + D*(-4*l1^4*X^2    + 8*l1^2*l2^2*X*Z)
//   Xbar' = d*l3^2*Xbar + D*(-4*l3^4*Xbar^2 + 8*l3^2*l2^2*Xbar*Z)
//   Z'    = d*l2^2*Z    + D*( l1^4*X^2 - 8*l2^4*Z^2 + l3^4*Xbar^2 )
//
// with D = d(d-1)/2. X = x + zbar, Xbar = xbar + zbar, Z = -zbar; the
// (xbar - ybar)^2 term is closed as (2*Xbar)^2 via xbar + zbar =
// (xbar - ybar)/2, which makes the system autonomous. Remainder terms R, V
// are dropped; the exact oracle quantifies them at small scale.

namespace blockcast {

struct DynParams {
  int d = 2;
  double lam1 = 0, lam2 = 0, lam3 = 0;

  double coupling() const { return 0.5 * d * (d - 1); }
};

// |lam1| >= |lam3| is presumed by the analysis; swap if violated.
struct DynNormalized {
  DynParams params;
  bool swapped = false;
  bool tied = false;
};

inline DynNormalized normalize_dyn(const DynParams& p) {
  DynNormalized r{p, false, std::fabs(p.lam1) == std::fabs(p.lam3)};
  if (std::fabs(p.lam3) > std::fabs(p.lam1)) {
    r.params.lam1 = p.lam3;
    r.params.lam3 = p.lam1;
    r.swapped = true;
  }
  return r;
}

struct DynState {
  double X = 0, Xbar = 0, Z = 0;

  bool in_cone(double tol = 0.0) const { return X >= -tol && Xbar >= -tol && Z >= -tol; }
  double max_norm() const { return std::max({std::fabs(X), std::fabs(Xbar), std::fabs(Z)}); }
};

inline DynState physical_initial_state() {
  // level-0 moments: x = xbar = 3/4, zbar = -1/4
  return {0.5, 0.5, 0.25};
}

inline DynState step(const DynState& s, const DynParams& p) {
  const double l1s = p.lam1 * p.lam1, l2s = p.lam2 * p.lam2, l3s = p.lam3 * p.lam3;
  const double D = p.coupling();
  DynState r;
  r.X = p.d * l1s * s.X + D * (-4 * l1s * l1s * s.X * s.X + 8 * l1s * l2s * s.X * s.Z);
  r.Xbar = p.d * l3s * s.Xbar +
           D * (-4 * l3s * l3s * s.Xbar * s.Xbar + 8 * l3s * l2s * s.Xbar * s.Z);
  r.Z = p.d * l2s * s.Z +
        D * (l1s * l1s * s.X * s.X - 8 * l2s * l2s * s.Z * s.Z + l3s * l3s * s.Xbar * s.Xbar);
  return r;
}

using Mat3 = std::array<std::array<double, 3>, 3>;

// Closed-form partials of the step map; diag(d*l1^2, d*l3^2, d*l2^2) at the
// origin.
inline Mat3 jacobian(const DynState& s, const DynParams& p) {
  const double l1s = p.lam1 * p.lam1, l2s = p.lam2 * p.lam2, l3s = p.lam3 * p.lam3;
  const double D = p.coupling();
  Mat3 j{};
  j[0][0] = p.d * l1s + D * (-8 * l1s * l1s * s.X + 8 * l1s * l2s * s.Z);
  j[0][1] = 0;
  j[0][2] = D * 8 * l1s * l2s * s.X;
  j[1][0] = 0;
  j[1][1] = p.d * l3s + D * (-8 * l3s * l3s * s.Xbar + 8 * l3s * l2s * s.Z);
  j[1][2] = D * 8 * l3s * l2s * s.Xbar;
  j[2][0] = D * 2 * l1s * l1s * s.X;
  j[2][1] = D * 2 * l3s * l3s * s.Xbar;
  j[2][2] = p.d * l2s - D * 16 * l2s * l2s * s.Z;
  return j;
}

inline double spectral_radius(const Mat3& m) {
  Eigen::Matrix3d em;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) em(i, j) = m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  const auto ev = em.eigenvalues();
  double r = 0;
  for (int i = 0; i < 3; ++i) r = std::max(r, std::abs(ev(i)));
  return r;
}

struct Trajectory {
  std::vector<DynState> states;  // states[0] = initial state
  int first_cone_exit = -1;      // index of first state outside the nonnegative cone
  bool diverged = false;         // truncated on overflow
};

inline Trajectory iterate(const DynState& s0, const DynParams& p, int steps) {
  if (steps < 1) throw std::invalid_argument("iterate: steps must be >= 1");
  Trajectory t;
  t.states.reserve(static_cast<std::size_t>(steps) + 1);
  t.states.push_back(s0);
  if (!s0.in_cone(1e-15)) t.first_cone_exit = 0;
  DynState s = s0;
  for (int k = 0; k < steps; ++k) {
    s = step(s, p);
    if (!std::isfinite(s.X) || !std::isfinite(s.Xbar) || !std::isfinite(s.Z) ||
        s.max_norm() > 1e12) {
      t.diverged = true;
      break;
    }
    t.states.push_back(s);
    if (t.first_cone_exit < 0 && !s.in_cone(1e-15)) {
      t.first_cone_exit = static_cast<int>(t.states.size()) - 1;
    }
  }
  return t;
}

enum class FpClass { attracting, repelling, marginal, origin, not_found };

inline const char* to_string(FpClass c) {
  switch (c) {
    case FpClass::attracting: return "attracting";
    case FpClass::repelling: return "repelling";
    case FpClass::marginal: return "marginal";
    case FpClass::origin: return "origin";
    case FpClass::not_found: return "not_found";
  }
  return "?";
}

struct FixedPointReport {
  DynState location{};
  double residual = 0;                  // max-norm of step(s) - s
  double jacobian_spectral_radius = 0;
  FpClass classification = FpClass::not_found;
  int iterations = 0;
};

constexpr double kMarginalBand = 1e-6;  // spectral radius within this of 1

inline FpClass classify_radius(double rho) {
  if (std::fabs(rho - 1.0) <= kMarginalBand) return FpClass::marginal;
  return rho < 1.0 ? FpClass::attracting : FpClass::repelling;
}

// Damped fixed-point iteration followed by a Newton polish on
// F(s) = step(s) - s.
inline FixedPointReport find_fixed_point(const DynParams& p, const DynState& init,
                                         double tol = 1e-12, int max_iter = 2000) {
  if (!(tol > 0)) throw std::invalid_argument("find_fixed_point: tol must be > 0");
  FixedPointReport rep;
  DynState s = init;
  auto resid = [&](const DynState& q) {
    const DynState f = step(q, p);
    return DynState{f.X - q.X, f.Xbar - q.Xbar, f.Z - q.Z};
  };
  int it = 0;
  const double damp = 0.7;
  const int damped_cap = std::min(max_iter, 1500);
  for (; it < damped_cap; ++it) {
    const DynState f = step(s, p);
    DynState ns{s.X + damp * (f.X - s.X), s.Xbar + damp * (f.Xbar - s.Xbar),
                s.Z + damp * (f.Z - s.Z)};
    if (!std::isfinite(ns.X) || !std::isfinite(ns.Xbar) || !std::isfinite(ns.Z) ||
        ns.max_norm() > 1e9) {
      rep.location = s;
      rep.iterations = it;
      rep.classification = FpClass::not_found;
      rep.residual = DynState{resid(s)}.max_norm();
      return rep;
    }
    const double move = DynState{ns.X - s.X, ns.Xbar - s.Xbar, ns.Z - s.Z}.max_norm();
    s = ns;
    if (move < 1e-9) break;
  }
  // Newton polish (near-critical damped iteration stalls; Newton always runs)
  for (int k = 0; k < 60; ++k, ++it) {
    const DynState F = resid(s);
    if (F.max_norm() < tol) break;
    const Mat3 J = jacobian(s, p);
    Eigen::Matrix3d A;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) A(i, j) = J[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    A -= Eigen::Matrix3d::Identity();
    const Eigen::Vector3d rhs(-F.X, -F.Xbar, -F.Z);
    const Eigen::Vector3d delta = A.fullPivLu().solve(rhs);
    if (!delta.allFinite()) break;
    s.X += delta(0);
    s.Xbar += delta(1);
    s.Z += delta(2);
  }
  rep.location = s;
  rep.iterations = it;
  rep.residual = resid(s).max_norm();
  rep.jacobian_spectral_radius = spectral_radius(jacobian(s, p));
  if (rep.residual >= std::max(tol, 1e-9) || !std::isfinite(rep.residual)) {
    rep.classification = FpClass::not_found;
  } else {
    rep.classification = classify_radius(rep.jacobian_spectral_radius);
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Non-tightness scan

struct ScanRow {
  DynParams params;        // block-normalized
  bool swapped = false;
  bool feasible = false;
  std::string skip_reason;
  bool hypothesis_ok = false;  // |l1| != |l3| and 0 < |l2| < |l1|
  double ks_value = 0;
  bool origin_stable = false;
  bool nonzero_attractor = false;
  std::optional<DynState> attractor;
  double attractor_residual = 0;
  double attractor_radius = 0;
  bool growth_ok = false;      // Z-growth bound along the approach trajectory
  int growth_checked = 0;
  double zx_ratio = 0;         // empirical Z/X late in a physical-init trajectory
};

struct ScanOptions {
  double fp_tol = 1e-12;
  int fp_max_iter = 4000;
  int workers = 1;
  double origin_tol = 1e-9;    // attractors closer than this are the trivial fixed point
  // When false, spectrally infeasible points are analyzed as bare dynamics
  // parameters instead of being skipped (the truncated system needs no
  // channel); they stay marked infeasible in the row.
  bool require_channel_feasibility = true;
};

// Lattice of cone-interior fixed-point search initializations:
// 5x5x5 logarithmic grid over [1e-6, 0.5]^3 (attractors near criticality sit
// at O(1 - d*l1^2) scale, spanning decades).
inline std::vector<DynState> fp_search_lattice() {
  std::vector<double> g;
  const double lo = 1e-6, hi = 0.5;
  for (int i = 0; i < 5; ++i) g.push_back(lo * std::pow(hi / lo, i / 4.0));
  std::vector<DynState> out;
  out.reserve(125);
  for (double a : g)
    for (double b : g)
      for (double c : g) out.push_back(DynState{a, b, c});
  return out;
}

// Z' >= Z * (d*l2^2 + D*l1^4*X), checked where its derivation preconditions
// hold (X >= 4Z and |l1| >= |l2|).
inline std::pair<bool, int> growth_inequality_along(const std::vector<DynState>& traj,
                                                    const DynParams& p) {
  const double l1s = p.lam1 * p.lam1, l2s = p.lam2 * p.lam2;
  bool ok = true;
  int checked = 0;
  if (std::fabs(p.lam1) < std::fabs(p.lam2)) return {true, 0};
  for (std::size_t k = 0; k + 1 < traj.size(); ++k) {
    const DynState& s = traj[k];
    if (!(s.X >= 4 * s.Z) || !s.in_cone()) continue;
    ++checked;
    const double bound = s.Z * (p.d * l2s + p.coupling() * l1s * l1s * s.X);
    if (traj[k + 1].Z + 1e-15 < bound) ok = false;
  }
  return {ok, checked};
}

inline ScanRow scan_point(const DynParams& raw, const ScanOptions& opt) {
  ScanRow row;
  const auto norm = normalize_dyn(raw);
  row.params = norm.params;
  row.swapped = norm.swapped;
  const DynParams& p = row.params;

  std::string why;
  row.feasible = try_from_spectrum({p.lam1, p.lam2, p.lam3}, &why).has_value();
  if (!row.feasible) {
    row.skip_reason = why;
    if (opt.require_channel_feasibility) return row;
  }
  row.hypothesis_ok = !norm.tied && std::fabs(p.lam2) > 0 &&
                      std::fabs(p.lam2) < std::fabs(p.lam1);
  row.ks_value = ks_parameter({p.lam1, p.lam2, p.lam3}, p.d).ks_value;
  const double rho0 = std::max({p.d * p.lam1 * p.lam1, p.d * p.lam2 * p.lam2,
                                p.d * p.lam3 * p.lam3});
  row.origin_stable = rho0 < 1.0;

  // nonzero attracting fixed point search
  DynState best{};
  bool found = false;
  double best_res = 0, best_rho = 0;
  DynState best_init{};
  for (const DynState& init : fp_search_lattice()) {
    const auto rep = find_fixed_point(p, init, opt.fp_tol, opt.fp_max_iter);
    if (rep.classification != FpClass::attracting) continue;
    if (rep.location.max_norm() < opt.origin_tol) continue;  // trivial fixed point
    if (!rep.location.in_cone(1e-12) || rep.location.X <= opt.origin_tol) continue;
    if (!found || rep.location.X > best.X) {
      best = rep.location;
      best_res = rep.residual;
      best_rho = rep.jacobian_spectral_radius;
      best_init = init;
      found = true;
    }
  }
  row.nonzero_attractor = found;
  if (found) {
    row.attractor = best;
    row.attractor_residual = best_res;
    row.attractor_radius = best_rho;
    const auto traj = iterate(best_init, p, 4000);
    const auto [ok, checked] = growth_inequality_along(traj.states, p);
    row.growth_ok = ok;
    row.growth_checked = checked;
  }

  // empirical tangency ratio from the physical initial state
  const auto traj = iterate(physical_initial_state(), p, 200);
  const DynState& last = traj.states.back();
  row.zx_ratio = last.X > 0 ? last.Z / last.X : 0.0;
  return row;
}

inline std::vector<ScanRow> nontightness_scan(const std::vector<int>& ds,
                                              const std::vector<double>& lam1s,
                                              const std::vector<double>& lam2s,
                                              const std::vector<double>& lam3s,
                                              const ScanOptions& opt = {}) {
  std::vector<DynParams> grid;
  for (int d : ds)
    for (double a : lam1s)
      for (double b : lam2s)
        for (double c : lam3s) grid.push_back(DynParams{d, a, b, c});
  if (grid.empty()) throw std::invalid_argument("nontightness_scan: empty grid");
  std::vector<ScanRow> rows(grid.size());
  parallel_chunks(0, static_cast<std::int64_t>(grid.size()), opt.workers,
                  [&](std::int64_t, std::int64_t lo, std::int64_t hi) {
                    for (std::int64_t i = lo; i < hi; ++i)
                      rows[static_cast<std::size_t>(i)] =
                          scan_point(grid[static_cast<std::size_t>(i)], opt);
                  });
  if (opt.require_channel_feasibility) {
    bool any_feasible = false;
    for (const auto& r : rows) any_feasible = any_feasible || r.feasible;
    if (!any_feasible) throw std::invalid_argument("nontightness_scan: no feasible grid point");
  }
  return rows;
}

}  // namespace blockcast
