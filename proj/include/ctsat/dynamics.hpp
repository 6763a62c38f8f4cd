#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ctsat/cnf.hpp"

namespace ctsat {

// ---------------------------------------------------------------------------
// Options and parameters
// ---------------------------------------------------------------------------

/// Driver of the analog-SAT auxiliary variables.
enum class AuxMode {
  AK2, ///< da_m = a_m K_m^2 (default)
  AK,  ///< da_m = a_m K_m
  K,   ///< da_m = K_m
  K2,  ///< da_m = K_m^2
};

inline std::string_view to_string(AuxMode m) {
  switch (m) {
  case AuxMode::AK2: return "aK2";
  case AuxMode::AK: return "aK";
  case AuxMode::K: return "K";
  case AuxMode::K2: return "K2";
  }
  return "?";
}

inline AuxMode aux_mode_from_string(std::string_view s) {
  if (s == "aK2") return AuxMode::AK2;
  if (s == "aK") return AuxMode::AK;
  if (s == "K") return AuxMode::K;
  if (s == "K2") return AuxMode::K2;
  throw std::invalid_argument("unknown aux mode '" + std::string(s) + "' (aK2, aK, K, K2)");
}

struct AnalogOptions {
  /// Scale K_m (and K_mi) by 1/2^3. Turning it off is a uniform time
  /// rescaling in aK2 mode; netlists generated without it run 64x faster.
  bool include_one_eighth_factor = true;
  AuxMode aux_mode = AuxMode::AK2;
};

struct MemParams {
  double alpha = 5.0;
  double beta = 20.0;
  double gamma = 0.25;
  double delta = 0.05;
  double epsilon = 0.001;
  double zeta = 0.01;
};

/// Which literals of a clause receive the rigidity term when several attain
/// the clause minimum.
enum class RTiePolicy {
  AllMinimizers, ///< every literal whose slack equals the minimum
  LowestIndex,   ///< only the first minimizer in clause order
};

inline std::string_view to_string(RTiePolicy p) {
  return p == RTiePolicy::AllMinimizers ? "all" : "lowest";
}

inline RTiePolicy r_tie_policy_from_string(std::string_view s) {
  if (s == "all") return RTiePolicy::AllMinimizers;
  if (s == "lowest") return RTiePolicy::LowestIndex;
  throw std::invalid_argument("unknown tie policy '" + std::string(s) + "' (all, lowest)");
}

struct MemOptions {
  bool clamp_v = true;
  RTiePolicy r_ties = RTiePolicy::AllMinimizers;
};

// ---------------------------------------------------------------------------
// States
// ---------------------------------------------------------------------------

struct AnalogSatState {
  std::vector<double> s; ///< continuous spins, [-1, 1]
  std::vector<double> a; ///< clause weights, (0, inf)
};

struct MemState {
  std::vector<double> v;  ///< voltages, [-1, 1]
  std::vector<double> xs; ///< short memory, [0, 1]
  std::vector<double> xl; ///< long memory, [1, 1e4 M]
};

struct AnalogDerivative {
  std::vector<double> ds, da;
};

struct MemDerivative {
  std::vector<double> dv, dxs, dxl;
};

inline constexpr double kSpinLower = -1.0;
inline constexpr double kSpinUpper = 1.0;
inline constexpr double kShortLower = 0.0;
inline constexpr double kShortUpper = 1.0;
inline constexpr double kLongLower = 1.0;
inline double long_memory_upper(std::size_t num_clauses) { return 1e4 * static_cast<double>(num_clauses); }

// ---------------------------------------------------------------------------
// Primitives
// ---------------------------------------------------------------------------

/// Zeroes a derivative that would push `value` out of [lower, upper].
inline constexpr double clamp_mask(double value, double lower, double upper, double derivative) noexcept {
  if (value >= upper && derivative > 0.0) return 0.0;
  if (value <= lower && derivative < 0.0) return 0.0;
  return derivative;
}

/// x_i = TRUE iff value > 0.
inline Assignment readout(std::span<const double> values) {
  Assignment a(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) a.set(i, values[i] > 0.0);
  return a;
}

inline std::size_t count_unsatisfied_readout(const Problem &p, std::span<const double> values) {
  std::size_t n = 0;
  for (const auto &c : p.clauses()) {
    bool sat = false;
    for (const auto &l : c) sat = sat || ((values[l.var] > 0.0) == (l.sign > 0));
    n += sat ? 0 : 1;
  }
  return n;
}

inline double k_m(const Problem &p, std::size_t m, std::span<const double> s,
                  bool include_one_eighth_factor = true) {
  double k = include_one_eighth_factor ? 0.125 : 1.0;
  for (const auto &l : p.clause(m)) k *= 1.0 - l.sign * s[l.var];
  return k;
}

/// Analog-SAT right-hand side on flat storage. K_mi is formed from the two
/// partner factors, never by dividing K_m, so it is finite at the poles.
/// The s-derivative is masked at the [-1, 1] boundary; a is unbounded.
inline void analog_rhs(const Problem &p, std::span<const double> s, std::span<const double> a,
                       std::span<double> ds, std::span<double> da, const AnalogOptions &opt) {
  const double pre = opt.include_one_eighth_factor ? 0.125 : 1.0;
  std::fill(ds.begin(), ds.end(), 0.0);
  for (std::size_t m = 0; m < p.num_clauses(); ++m) {
    const auto &c = p.clause(m);
    std::array<double, 3> f{};
    for (std::size_t j = 0; j < 3; ++j) f[j] = 1.0 - c[j].sign * s[c[j].var];
    const double km = pre * f[0] * f[1] * f[2];
    const double w = 2.0 * a[m] * km;
    ds[c[0].var] += w * c[0].sign * (pre * f[1] * f[2]);
    ds[c[1].var] += w * c[1].sign * (pre * f[0] * f[2]);
    ds[c[2].var] += w * c[2].sign * (pre * f[0] * f[1]);
    switch (opt.aux_mode) {
    case AuxMode::AK2: da[m] = a[m] * km * km; break;
    case AuxMode::AK: da[m] = a[m] * km; break;
    case AuxMode::K: da[m] = km; break;
    case AuxMode::K2: da[m] = km * km; break;
    }
  }
  for (std::size_t i = 0; i < ds.size(); ++i) ds[i] = clamp_mask(s[i], kSpinLower, kSpinUpper, ds[i]);
}

inline AnalogDerivative analog_rhs(const Problem &p, const AnalogSatState &state,
                                   const AnalogOptions &opt = {}) {
  AnalogDerivative d{std::vector<double>(p.num_vars()), std::vector<double>(p.num_clauses())};
  analog_rhs(p, state.s, state.a, d.ds, d.da, opt);
  return d;
}

/// V(s, a) = sum_m a_m K_m(s)^2.
inline double energy(const Problem &p, const AnalogSatState &state, const AnalogOptions &opt = {}) {
  double v = 0.0;
  for (std::size_t m = 0; m < p.num_clauses(); ++m) {
    const double k = k_m(p, m, state.s, opt.include_one_eighth_factor);
    v += state.a[m] * k * k;
  }
  return v;
}

/// C_m = 1/2 min_j (1 - q_j v_j).
inline double clause_value(const Problem &p, std::size_t m, std::span<const double> v) {
  const auto &c = p.clause(m);
  double t = 1.0 - c[0].sign * v[c[0].var];
  t = std::min(t, 1.0 - c[1].sign * v[c[1].var]);
  t = std::min(t, 1.0 - c[2].sign * v[c[2].var]);
  return 0.5 * t;
}

/// Per-clause pieces of the memcomputing vector field, literal-indexed.
struct MemClauseTerms {
  double c = 0.0;
  std::array<double, 3> g{}; ///< gradient-like terms G_{n,m}
  std::array<double, 3> r{}; ///< rigidity terms R_{n,m}
};

inline MemClauseTerms mem_clause_terms(const Clause &c, std::span<const double> v, RTiePolicy ties) {
  MemClauseTerms out;
  std::array<double, 3> t{};
  for (std::size_t j = 0; j < 3; ++j) t[j] = 1.0 - c[j].sign * v[c[j].var];
  const double tmin = std::min(t[0], std::min(t[1], t[2]));
  out.c = 0.5 * tmin;
  out.g[0] = 0.5 * c[0].sign * std::min(t[1], t[2]);
  out.g[1] = 0.5 * c[1].sign * std::min(t[0], t[2]);
  out.g[2] = 0.5 * c[2].sign * std::min(t[0], t[1]);
  bool taken = false;
  for (std::size_t j = 0; j < 3; ++j) {
    // tmin is one of the t[j] bit-for-bit, so the comparison is exact.
    if (t[j] == tmin && !taken) {
      out.r[j] = 0.5 * (c[j].sign - v[c[j].var]);
      taken = ties == RTiePolicy::LowestIndex;
    }
  }
  return out;
}

inline MemClauseTerms mem_clause_terms(const Problem &p, std::size_t m, std::span<const double> v,
                                       const MemOptions &opt = {}) {
  return mem_clause_terms(p.clause(m), v, opt.r_ties);
}

inline void mem_rhs(const Problem &p, std::span<const double> v, std::span<const double> xs,
                    std::span<const double> xl, std::span<double> dv, std::span<double> dxs,
                    std::span<double> dxl, const MemParams &prm, const MemOptions &opt) {
  std::fill(dv.begin(), dv.end(), 0.0);
  const double xl_max = long_memory_upper(p.num_clauses());
  for (std::size_t m = 0; m < p.num_clauses(); ++m) {
    const auto &c = p.clause(m);
    const auto terms = mem_clause_terms(c, v, opt.r_ties);
    const double gw = xl[m] * xs[m];
    const double rw = (1.0 + prm.zeta * xl[m]) * (1.0 - xs[m]);
    for (std::size_t j = 0; j < 3; ++j) dv[c[j].var] += gw * terms.g[j] + rw * terms.r[j];
    dxs[m] = clamp_mask(xs[m], kShortLower, kShortUpper,
                        prm.beta * (xs[m] + prm.epsilon) * (terms.c - prm.gamma));
    dxl[m] = clamp_mask(xl[m], kLongLower, xl_max, prm.alpha * (terms.c - prm.delta));
  }
  if (opt.clamp_v)
    for (std::size_t i = 0; i < dv.size(); ++i) dv[i] = clamp_mask(v[i], kSpinLower, kSpinUpper, dv[i]);
}

inline MemDerivative mem_rhs(const Problem &p, const MemState &state, const MemParams &prm = {},
                             const MemOptions &opt = {}) {
  MemDerivative d{std::vector<double>(p.num_vars()), std::vector<double>(p.num_clauses()),
                  std::vector<double>(p.num_clauses())};
  mem_rhs(p, state.v, state.xs, state.xl, d.dv, d.dxs, d.dxl, prm, opt);
  return d;
}

struct ControlSignals {
  double contra = 0.0;      ///< sum_m C_m
  std::size_t contrd = 0;   ///< clauses unsatisfied by the sign readout
};

inline ControlSignals control_signals(const Problem &p, std::span<const double> v) {
  ControlSignals out;
  for (std::size_t m = 0; m < p.num_clauses(); ++m) out.contra += clause_value(p, m, v);
  out.contrd = count_unsatisfied_readout(p, v);
  return out;
}

} // namespace ctsat
