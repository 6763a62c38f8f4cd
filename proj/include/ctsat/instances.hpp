#pragma once

#include <array>
#include <bit>
#include <span>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "ctsat/cnf.hpp"
#include "ctsat/rng.hpp"

namespace ctsat {

class GeneratorError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Barthel et al. planted ensemble. `p0` is the weight of the sign pattern
/// whose three literals all hold under the plant.
struct BarthelParams {
  std::size_t num_vars = 0;
  double ratio = 4.3;
  double p0 = 0.08;
  std::uint64_t seed = 0;

  std::size_t num_clauses() const { return static_cast<std::size_t>(std::llround(ratio * num_vars)); }
};

/// Per-pattern weights, indexed by the number of literals the plant satisfies.
/// The fully violated pattern has weight zero. p1 and p2 follow from
/// normalisation (p0 + 3 p1 + 3 p2 = 1) and equal expected positive/negative
/// occurrence of every plant literal (p2 = p0 + p1).
struct BarthelWeights {
  double p0, p1, p2;
  static BarthelWeights from_p0(double p0) {
    return {p0, (1.0 - 4.0 * p0) / 6.0, (1.0 + 2.0 * p0) / 6.0};
  }
  /// Weight of one pattern with `satisfied` literals true under the plant.
  double pattern_weight(int satisfied) const {
    switch (satisfied) {
    case 3: return p0;
    case 2: return p1;
    case 1: return p2;
    default: return 0.0;
    }
  }
};

/// (l1 xor l2 xor l3) = rhs, where l_j is x_{vars[j]} negated when negate[j].
struct XorEquation {
  std::array<std::uint32_t, 3> vars{};
  std::array<bool, 3> negate{};
  bool rhs = false;

  bool holds(const Assignment &a) const {
    bool acc = false;
    for (std::size_t j = 0; j < 3; ++j) acc ^= (a[vars[j]] != negate[j]);
    return acc == rhs;
  }
};

struct PlantedInstance {
  Problem problem;
  Assignment plant;
  /// Source equations for XORSAT instances, empty otherwise.
  std::vector<XorEquation> equations;
};

/// The four clauses that forbid exactly the violating assignments of `eq`.
/// Clauses are listed in lexicographic order of the forbidden assignment.
inline std::array<Clause, 4> xor_to_cnf(const XorEquation &eq) {
  if (eq.vars[0] == eq.vars[1] || eq.vars[0] == eq.vars[2] || eq.vars[1] == eq.vars[2])
    throw GeneratorError("xor equation repeats a variable");
  std::vector<Clause> out;
  out.reserve(4);
  for (unsigned bits = 0; bits < 8; ++bits) {
    std::array<bool, 3> x{(bits & 4) != 0, (bits & 2) != 0, (bits & 1) != 0};
    bool parity = false;
    for (std::size_t j = 0; j < 3; ++j) parity ^= (x[j] != eq.negate[j]);
    if (parity == eq.rhs) continue;
    // A literal false exactly at x: positive where x_j is FALSE.
    std::array<Literal, 3> lits;
    for (std::size_t j = 0; j < 3; ++j)
      lits[j] = Literal{eq.vars[j], static_cast<std::int8_t>(x[j] ? -1 : 1)};
    out.emplace_back(lits[0], lits[1], lits[2]);
  }
  return {out[0], out[1], out[2], out[3]};
}

inline Assignment random_assignment(std::size_t n, Rng &rng) {
  Assignment a(n);
  for (std::size_t i = 0; i < n; ++i) a.set(i, rng.coin());
  return a;
}

/// Three distinct variables, uniformly, in draw order.
inline std::array<std::uint32_t, 3> sample_triple(std::size_t n, Rng &rng) {
  std::array<std::uint32_t, 3> t{};
  t[0] = static_cast<std::uint32_t>(rng.below(n));
  do t[1] = static_cast<std::uint32_t>(rng.below(n)); while (t[1] == t[0]);
  do t[2] = static_cast<std::uint32_t>(rng.below(n)); while (t[2] == t[0] || t[2] == t[1]);
  return t;
}

inline PlantedInstance gen_barthel(const BarthelParams &params) {
  if (params.num_vars < 3) throw GeneratorError("Barthel generator needs N >= 3");
  if (!(params.ratio > 0.0)) throw GeneratorError("clause ratio must be positive");
  if (!(params.p0 >= 0.0 && params.p0 <= 0.25)) throw GeneratorError("p0 must lie in [0, 0.25]");
  const std::size_t m = params.num_clauses();
  if (m < 1) throw GeneratorError("ratio * N rounds to zero clauses");

  Rng rng(params.seed);
  const Assignment plant = random_assignment(params.num_vars, rng);
  const auto w = BarthelWeights::from_p0(params.p0);

  // Pattern bit j set means literal j is satisfied by the plant.
  std::array<double, 8> cumulative{};
  double acc = 0.0;
  for (unsigned pat = 0; pat < 8; ++pat) {
    acc += w.pattern_weight(std::popcount(pat));
    cumulative[pat] = acc;
  }

  std::vector<Clause> clauses;
  clauses.reserve(m);
  for (std::size_t k = 0; k < m; ++k) {
    const auto vars = sample_triple(params.num_vars, rng);
    const double r = rng.uniform01() * acc;
    unsigned pat = 1;
    while (pat < 7 && r >= cumulative[pat]) ++pat;
    std::array<Literal, 3> lits;
    for (std::size_t j = 0; j < 3; ++j) {
      const bool sat = (pat >> j) & 1u;
      const bool plant_value = plant[vars[j]];
      lits[j] = Literal{vars[j], static_cast<std::int8_t>((plant_value == sat) ? 1 : -1)};
    }
    clauses.emplace_back(lits[0], lits[1], lits[2]);
  }
  return {Problem(params.num_vars, std::move(clauses)), plant, {}};
}

/// Number of literals of `c` satisfied by `a` (the Barthel clause type).
inline int satisfied_literals(const Clause &c, const Assignment &a) {
  int t = 0;
  for (const auto &l : c) t += l.satisfied_by(a[l.var]) ? 1 : 0;
  return t;
}

/// 3-regular 3-XORSAT: N equations over N variables, each variable in exactly
/// three equations, sampled by the configuration model and encoded as 4N
/// clauses. Rejects matchings that put a variable twice in one equation.
inline PlantedInstance gen_xorsat_3r(std::size_t num_vars, std::uint64_t seed,
                                     std::size_t retry_budget = 10000) {
  if (num_vars < 4) throw GeneratorError("3-regular 3-XORSAT needs N >= 4");
  Rng rng(seed);
  const Assignment plant = random_assignment(num_vars, rng);

  std::vector<std::uint32_t> stubs(3 * num_vars);
  bool ok = false;
  for (std::size_t attempt = 0; attempt < retry_budget && !ok; ++attempt) {
    for (std::size_t i = 0; i < stubs.size(); ++i) stubs[i] = static_cast<std::uint32_t>(i / 3);
    rng.shuffle(std::span<std::uint32_t>(stubs));
    ok = true;
    for (std::size_t e = 0; e < num_vars && ok; ++e) {
      const auto a = stubs[3 * e], b = stubs[3 * e + 1], c = stubs[3 * e + 2];
      ok = a != b && a != c && b != c;
    }
  }
  if (!ok)
    throw GeneratorError("no simple 3-regular configuration found within " +
                         std::to_string(retry_budget) + " re-matchings");

  std::vector<XorEquation> equations(num_vars);
  std::vector<Clause> clauses;
  clauses.reserve(4 * num_vars);
  for (std::size_t e = 0; e < num_vars; ++e) {
    auto &eq = equations[e];
    bool parity = false;
    for (std::size_t j = 0; j < 3; ++j) {
      eq.vars[j] = stubs[3 * e + j];
      eq.negate[j] = rng.coin();
      parity ^= (plant[eq.vars[j]] != eq.negate[j]);
    }
    eq.rhs = parity;
    for (const auto &c : xor_to_cnf(eq)) clauses.push_back(c);
  }
  return {Problem(num_vars, std::move(clauses)), plant, std::move(equations)};
}

/// Rank over GF(2) of the equations' variable-incidence matrix. A full-rank
/// system (rank N) has the plant as its unique solution.
inline std::size_t gf2_rank(const std::vector<XorEquation> &equations, std::size_t num_vars) {
  std::vector<std::vector<bool>> rows;
  rows.reserve(equations.size());
  for (const auto &eq : equations) {
    std::vector<bool> r(num_vars, false);
    for (auto v : eq.vars) r[v] = !r[v];
    rows.push_back(std::move(r));
  }
  std::size_t rank = 0;
  for (std::size_t col = 0; col < num_vars && rank < rows.size(); ++col) {
    std::size_t piv = rank;
    while (piv < rows.size() && !rows[piv][col]) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[piv], rows[rank]);
    for (std::size_t r = 0; r < rows.size(); ++r)
      if (r != rank && rows[r][col])
        for (std::size_t c = 0; c < num_vars; ++c) rows[r][c] = rows[r][c] != rows[rank][c];
    ++rank;
  }
  return rank;
}

/// Relabels polarity of variable `var` in every clause and in the plant.
/// Satisfiability structure is unchanged; used to align plants in tests and
/// network constructions.
inline PlantedInstance flip_variable(const PlantedInstance &inst, std::uint32_t var) {
  std::vector<Clause> clauses;
  clauses.reserve(inst.problem.num_clauses());
  for (const auto &c : inst.problem.clauses()) {
    auto lits = c.literals();
    for (auto &l : lits)
      if (l.var == var) l.sign = static_cast<std::int8_t>(-l.sign);
    clauses.emplace_back(lits[0], lits[1], lits[2]);
  }
  Assignment plant = inst.plant;
  plant.set(var, !plant[var]);
  auto eqs = inst.equations;
  for (auto &eq : eqs)
    for (std::size_t j = 0; j < 3; ++j)
      if (eq.vars[j] == var) eq.negate[j] = !eq.negate[j];
  return {Problem(inst.problem.num_vars(), std::move(clauses)), std::move(plant), std::move(eqs)};
}

} // namespace ctsat
