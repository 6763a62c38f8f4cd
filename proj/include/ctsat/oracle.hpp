#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "ctsat/cnf.hpp"

namespace ctsat {

struct OracleResult {
  bool satisfiable = false;
  std::optional<Assignment> witness;
  std::uint64_t nodes_explored = 0;
};

inline constexpr std::size_t kExhaustiveMaxVars = 26;

/// Enumerates all 2^N assignments in lexicographic order (x1 most
/// significant, FALSE before TRUE) and returns the first model.
inline OracleResult solve_exhaustive(const Problem &p) {
  const std::size_t n = p.num_vars();
  if (n > kExhaustiveMaxVars)
    throw std::invalid_argument("exhaustive search is capped at N=" + std::to_string(kExhaustiveMaxVars));
  // Clause c is violated by mask x iff (x & vars) == falsifying pattern.
  struct Packed {
    std::uint32_t vars, pattern;
  };
  std::vector<Packed> packed;
  packed.reserve(p.num_clauses());
  for (const auto &c : p.clauses()) {
    Packed pk{0, 0};
    for (const auto &l : c) {
      const std::uint32_t bit = 1u << (n - 1 - l.var);
      pk.vars |= bit;
      if (l.sign < 0) pk.pattern |= bit; // negative literal is false when x is TRUE
    }
    packed.push_back(pk);
  }
  OracleResult res;
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t x = 0; x < total; ++x) {
    ++res.nodes_explored;
    const auto xx = static_cast<std::uint32_t>(x);
    bool ok = true;
    for (const auto &pk : packed)
      if ((xx & pk.vars) == pk.pattern) {
        ok = false;
        break;
      }
    if (ok) {
      Assignment a(n);
      for (std::size_t i = 0; i < n; ++i) a.set(i, (xx >> (n - 1 - i)) & 1u);
      res.satisfiable = true;
      res.witness = std::move(a);
      return res;
    }
  }
  return res;
}

namespace detail {

class Dpll {
public:
  explicit Dpll(const Problem &p) : p_(p), value_(p.num_vars(), kUnset), occurs_(2 * p.num_vars()) {
    for (std::size_t m = 0; m < p.num_clauses(); ++m)
      for (const auto &l : p.clause(m)) occurs_[code(l)].push_back(static_cast<std::uint32_t>(m));
  }

  OracleResult solve() {
    // Input clauses all have three literals, so the root has nothing to propagate.
    OracleResult res;
    for (;;) {
      const int var = pick();
      if (var < 0) return finish(res, true);
      ++res.nodes_explored;
      decisions_.push_back({trail_.size(), static_cast<std::uint32_t>(var), false});
      if (assign_and_propagate(static_cast<std::uint32_t>(var), true)) continue;
      // Backtrack: flip the most recent decision not yet flipped.
      for (;;) {
        if (decisions_.empty()) return finish(res, false);
        auto d = decisions_.back();
        decisions_.pop_back();
        undo_to(d.trail_size);
        if (d.flipped) continue;
        ++res.nodes_explored;
        decisions_.push_back({trail_.size(), d.var, true});
        if (assign_and_propagate(d.var, false)) break;
      }
    }
  }

private:
  static constexpr std::int8_t kUnset = -1;
  struct Decision {
    std::size_t trail_size;
    std::uint32_t var;
    bool flipped;
  };

  static std::size_t code(const Literal &l) { return 2 * l.var + (l.sign > 0 ? 0 : 1); }

  // 1 true, 0 false, -1 unassigned
  int lit_value(const Literal &l) const {
    const auto v = value_[l.var];
    if (v == kUnset) return -1;
    return (v == 1) == (l.sign > 0) ? 1 : 0;
  }

  bool assign_and_propagate(std::uint32_t var, bool val) {
    queue_.clear();
    set(var, val);
    return propagate();
  }

  void set(std::uint32_t var, bool val) {
    value_[var] = val ? 1 : 0;
    trail_.push_back(var);
    queue_.push_back(var);
  }

  bool propagate() {
    for (std::size_t qi = 0; qi < queue_.size(); ++qi) {
      const auto var = queue_[qi];
      // Clauses where the literal just became false.
      const Literal falsified{var, static_cast<std::int8_t>(value_[var] == 1 ? -1 : 1)};
      for (auto m : occurs_[code(falsified)]) {
        int unassigned = 0;
        const Literal *last = nullptr;
        bool sat = false;
        for (const auto &l : p_.clause(m)) {
          const int lv = lit_value(l);
          if (lv == 1) {
            sat = true;
            break;
          }
          if (lv < 0) {
            ++unassigned;
            last = &l;
          }
        }
        if (sat) continue;
        if (unassigned == 0) return false;
        if (unassigned == 1) set(last->var, last->sign > 0);
      }
    }
    return true;
  }

  void undo_to(std::size_t size) {
    while (trail_.size() > size) {
      value_[trail_.back()] = kUnset;
      trail_.pop_back();
    }
  }

  /// Most frequent unassigned variable in clauses not yet satisfied.
  int pick() {
    counts_.assign(p_.num_vars(), 0);
    bool any = false;
    for (const auto &c : p_.clauses()) {
      bool sat = false;
      for (const auto &l : c) sat = sat || lit_value(l) == 1;
      if (sat) continue;
      for (const auto &l : c)
        if (value_[l.var] == kUnset) {
          ++counts_[l.var];
          any = true;
        }
    }
    if (!any) {
      // Every clause satisfied; fix remaining free variables to TRUE.
      for (std::uint32_t v = 0; v < value_.size(); ++v)
        if (value_[v] == kUnset) {
          value_[v] = 1;
          trail_.push_back(v);
        }
      return -1;
    }
    int best = -1;
    std::uint32_t best_count = 0;
    for (std::uint32_t v = 0; v < counts_.size(); ++v)
      if (counts_[v] > best_count) {
        best_count = counts_[v];
        best = static_cast<int>(v);
      }
    return best;
  }

  OracleResult &finish(OracleResult &res, bool sat) {
    res.satisfiable = sat;
    if (sat) {
      Assignment a(p_.num_vars());
      for (std::size_t i = 0; i < value_.size(); ++i) a.set(i, value_[i] == 1);
      res.witness = std::move(a);
    }
    return res;
  }

  const Problem &p_;
  std::vector<std::int8_t> value_;
  std::vector<std::vector<std::uint32_t>> occurs_;
  std::vector<std::uint32_t> trail_, queue_, counts_;
  std::vector<Decision> decisions_;
};

} // namespace detail

/// Complete backtracking search with unit propagation. Branches on the most
/// frequent variable among unsatisfied clauses, TRUE first.
inline OracleResult solve_dpll(const Problem &p) { return detail::Dpll(p).solve(); }

} // namespace ctsat
