#pragma once

#include <array>
#include <cmath>
#include <cstdio>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

// The blocked 4-state transition matrix
//
//      [ p0  p1  | p2  p2  ]
//      [ p1  p0  | p2  p2  ]
//      [ p2  p2  | q0  q1  ]
//      [ p2  p2  | q1  q0  ]        (q = pbar)
//
// with eigenvalues 1, lam1 = p0-p1, lam2 = p0+p1-2*p2, lam3 = q0-q1 and
// uniform stationary distribution. States are 1..4 externally, 0..3 in code.

namespace blockcast {

using Vec4 = std::array<double, 4>;
using Mat4 = std::array<Vec4, 4>;

struct ChannelParams {
  double p0 = 1, p1 = 0, p2 = 0, pbar0 = 1, pbar1 = 0;

  static ChannelParams identity() { return {1, 0, 0, 1, 0}; }
  static ChannelParams uniform() { return {0.25, 0.25, 0.25, 0.25, 0.25}; }
};

struct SpectrumT {
  double lam1 = 0, lam2 = 0, lam3 = 0;
};

struct KSReport {
  double lambda_star = 0;  // second-largest eigenvalue by absolute value
  double ks_value = 0;     // d * lambda_star^2
  bool ks_reconstructible = false;
};

struct ValidationResult {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

inline ValidationResult validate(const ChannelParams& c, double tol = 1e-12) {
  ValidationResult r;
  if (!(tol > 0)) throw std::invalid_argument("validate: tol must be > 0");
  auto entry = [&](const char* name, double v) {
    if (v < -tol || v > 1 + tol) {
      std::ostringstream os;
      os << "entry " << name << " = " << v << " outside [0,1]";
      r.violations.push_back(os.str());
    }
  };
  entry("p0", c.p0);
  entry("p1", c.p1);
  entry("p2", c.p2);
  entry("pbar0", c.pbar0);
  entry("pbar1", c.pbar1);
  const double row1 = c.p0 + c.p1 + 2 * c.p2;
  const double row2 = c.pbar0 + c.pbar1 + 2 * c.p2;
  if (std::fabs(row1 - 1.0) > tol) {
    std::ostringstream os;
    os << "block-1 row sum = " << row1 << " != 1";
    r.violations.push_back(os.str());
  }
  if (std::fabs(row2 - 1.0) > tol) {
    std::ostringstream os;
    os << "block-2 row sum = " << row2 << " != 1";
    r.violations.push_back(os.str());
  }
  return r;
}

inline SpectrumT spectrum(const ChannelParams& c) {
  return {c.p0 - c.p1, c.p0 + c.p1 - 2 * c.p2, c.pbar0 - c.pbar1};
}

// Algebraic inverse of the spectrum map (uses lam2 = 1 - 4*p2).
inline std::optional<ChannelParams> try_from_spectrum(const SpectrumT& s,
                                                      std::string* why = nullptr) {
  ChannelParams c;
  c.p2 = (1 - s.lam2) / 4;
  c.p0 = (1 + s.lam2) / 4 + s.lam1 / 2;
  c.p1 = (1 + s.lam2) / 4 - s.lam1 / 2;
  c.pbar0 = (1 + s.lam2) / 4 + s.lam3 / 2;
  c.pbar1 = (1 + s.lam2) / 4 - s.lam3 / 2;
  const std::pair<const char*, double> entries[] = {
      {"p0", c.p0}, {"p1", c.p1}, {"p2", c.p2}, {"pbar0", c.pbar0}, {"pbar1", c.pbar1}};
  for (const auto& [name, v] : entries) {
    if (v < 0.0 || v > 1.0) {
      if (why) {
        std::ostringstream os;
        os << "infeasible spectrum (" << s.lam1 << ", " << s.lam2 << ", " << s.lam3
           << "): " << name << " = " << v << " outside [0,1]";
        *why = os.str();
      }
      return std::nullopt;
    }
  }
  return c;
}

inline ChannelParams from_spectrum(const SpectrumT& s) {
  std::string why;
  auto c = try_from_spectrum(s, &why);
  if (!c) throw std::invalid_argument(why);
  return *c;
}

inline KSReport ks_parameter(const SpectrumT& s, int d) {
  if (d < 2) throw std::invalid_argument("ks_parameter: d must be >= 2");
  KSReport r;
  r.lambda_star = std::max({std::fabs(s.lam1), std::fabs(s.lam2), std::fabs(s.lam3)});
  r.ks_value = d * r.lambda_star * r.lambda_star;
  r.ks_reconstructible = r.ks_value > 1.0;
  return r;
}

inline Mat4 to_matrix(const ChannelParams& c) {
  return Mat4{Vec4{c.p0, c.p1, c.p2, c.p2},
              Vec4{c.p1, c.p0, c.p2, c.p2},
              Vec4{c.p2, c.p2, c.pbar0, c.pbar1},
              Vec4{c.p2, c.p2, c.pbar1, c.pbar0}};
}

inline Mat4 mat_mul(const Mat4& a, const Mat4& b) {
  Mat4 r{};
  for (int i = 0; i < 4; ++i)
    for (int k = 0; k < 4; ++k) {
      const double aik = a[i][k];
      for (int j = 0; j < 4; ++j) r[i][j] += aik * b[k][j];
    }
  return r;
}

inline Mat4 mat_identity() {
  Mat4 r{};
  for (int i = 0; i < 4; ++i) r[i][i] = 1.0;
  return r;
}

// M^s. The contract includes (M^s)_{11} - (M^s)_{12} = lam1^s.
inline Mat4 transition_power(const ChannelParams& c, int s) {
  if (s < 0) throw std::invalid_argument("transition_power: s must be >= 0");
  Mat4 r = mat_identity();
  const Mat4 m = to_matrix(c);
  for (int k = 0; k < s; ++k) r = mat_mul(r, m);
  return r;
}

// Block normalization: the analysis presumes |lam1| >= |lam3|; when the input
// violates that, exchanging the two blocks swaps lam1 and lam3 and leaves
// lam2 fixed. Ties are accepted but callers should flag them (outside the
// Main Theorem hypothesis).
struct BlockNormalized {
  ChannelParams channel;
  bool swapped = false;
  bool tied = false;  // |lam1| == |lam3|
};

inline BlockNormalized normalize_blocks(const ChannelParams& c) {
  const SpectrumT s = spectrum(c);
  BlockNormalized r{c, false, std::fabs(s.lam1) == std::fabs(s.lam3)};
  if (std::fabs(s.lam3) > std::fabs(s.lam1)) {
    r.channel = ChannelParams{c.pbar0, c.pbar1, c.p2, c.p0, c.p1};
    r.swapped = true;
  }
  return r;
}

// --- text records -----------------------------------------------------------
// Channels serialize as five decimal fields "p0 p1 p2 pbar0 pbar1" or as a
// spectral record "d lam1 lam2 lam3"; both are accepted wherever a channel is
// expected (commas also tolerated as separators).

struct ChannelRecord {
  ChannelParams channel;
  std::optional<int> d;  // present when the record was spectral
};

inline std::vector<double> split_fields(const std::string& text) {
  std::string cleaned = text;
  for (auto& ch : cleaned)
    if (ch == ',') ch = ' ';
  std::istringstream is(cleaned);
  std::vector<double> out;
  double v;
  while (is >> v) out.push_back(v);
  return out;
}

inline ChannelRecord parse_channel_record(const std::string& text) {
  const auto f = split_fields(text);
  if (f.size() == 5) {
    ChannelParams c{f[0], f[1], f[2], f[3], f[4]};
    auto v = validate(c);
    if (!v.ok()) throw std::invalid_argument("invalid channel record: " + v.violations.front());
    return {c, std::nullopt};
  }
  if (f.size() == 4) {
    const int d = static_cast<int>(f[0]);
    if (d < 2 || f[0] != d) throw std::invalid_argument("spectral record: d must be an integer >= 2");
    return {from_spectrum({f[1], f[2], f[3]}), d};
  }
  throw std::invalid_argument(
      "channel record must have 5 fields (p0 p1 p2 pbar0 pbar1) or 4 (d lam1 lam2 lam3)");
}

inline std::string format_double17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string format_channel(const ChannelParams& c) {
  return format_double17(c.p0) + " " + format_double17(c.p1) + " " + format_double17(c.p2) +
         " " + format_double17(c.pbar0) + " " + format_double17(c.pbar1);
}

}  // namespace blockcast
