#pragma once

#include <array>
#include <cstdint>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ctsat {

class CnfError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A signed reference to a variable. `var` is 0-based; DIMACS indices are
/// 1-based and only appear at the parser/writer boundary.
struct Literal {
  std::uint32_t var = 0;
  std::int8_t sign = 1;

  static Literal from_dimacs(long long code) {
    if (code == 0) throw CnfError("literal 0 is the clause terminator");
    return Literal{static_cast<std::uint32_t>(std::llabs(code) - 1),
                   static_cast<std::int8_t>(code > 0 ? 1 : -1)};
  }
  long long to_dimacs() const noexcept { return sign * (static_cast<long long>(var) + 1); }

  /// True when the literal holds under `value` assigned to its variable.
  bool satisfied_by(bool value) const noexcept { return value == (sign > 0); }

  friend bool operator==(const Literal &, const Literal &) = default;
};

/// Exactly three literals over three distinct variables.
class Clause {
public:
  Clause(Literal a, Literal b, Literal c) : lits_{a, b, c} {
    for (const auto &l : lits_)
      if (l.sign != 1 && l.sign != -1) throw CnfError("literal sign must be +1 or -1");
    if (a.var == b.var || a.var == c.var || b.var == c.var)
      throw CnfError("clause repeats a variable");
  }

  static Clause from_dimacs(long long a, long long b, long long c) {
    return Clause(Literal::from_dimacs(a), Literal::from_dimacs(b), Literal::from_dimacs(c));
  }

  const Literal &operator[](std::size_t j) const noexcept { return lits_[j]; }
  const std::array<Literal, 3> &literals() const noexcept { return lits_; }
  auto begin() const noexcept { return lits_.begin(); }
  auto end() const noexcept { return lits_.end(); }

  friend bool operator==(const Clause &, const Clause &) = default;

private:
  std::array<Literal, 3> lits_;
};

class Assignment {
public:
  Assignment() = default;
  explicit Assignment(std::size_t n, bool value = false) : values_(n, value) {}
  explicit Assignment(std::vector<bool> values) : values_(std::move(values)) {}

  /// "0101..." with x1 first.
  static Assignment from_bits(std::string_view bits) {
    Assignment a(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) {
      if (bits[i] != '0' && bits[i] != '1') throw CnfError("assignment string must be 0/1");
      a.values_[i] = bits[i] == '1';
    }
    return a;
  }

  std::size_t size() const noexcept { return values_.size(); }
  bool operator[](std::size_t i) const { return values_[i]; }
  void set(std::size_t i, bool v) { values_[i] = v; }
  const std::vector<bool> &values() const noexcept { return values_; }

  std::string to_bits() const {
    std::string s(values_.size(), '0');
    for (std::size_t i = 0; i < values_.size(); ++i)
      if (values_[i]) s[i] = '1';
    return s;
  }

  friend bool operator==(const Assignment &, const Assignment &) = default;

private:
  std::vector<bool> values_;
};

/// A 3-SAT instance. Clause order is stable and defines the clause index
/// used by every downstream module.
class Problem {
public:
  Problem(std::size_t num_vars, std::vector<Clause> clauses)
      : num_vars_(num_vars), clauses_(std::move(clauses)) {
    if (clauses_.empty()) throw CnfError("problem must contain at least one clause");
    for (const auto &c : clauses_)
      for (const auto &l : c)
        if (l.var >= num_vars_)
          throw CnfError("variable " + std::to_string(l.var + 1) + " exceeds N=" +
                         std::to_string(num_vars_));
  }

  std::size_t num_vars() const noexcept { return num_vars_; }
  std::size_t num_clauses() const noexcept { return clauses_.size(); }
  const std::vector<Clause> &clauses() const noexcept { return clauses_; }
  const Clause &clause(std::size_t m) const { return clauses_[m]; }

  friend bool operator==(const Problem &, const Problem &) = default;

private:
  std::size_t num_vars_;
  std::vector<Clause> clauses_;
};

inline bool clause_satisfied(const Clause &c, const Assignment &a) {
  for (const auto &l : c)
    if (l.satisfied_by(a[l.var])) return true;
  return false;
}

inline std::size_t count_unsatisfied(const Problem &p, const Assignment &a) {
  if (a.size() != p.num_vars())
    throw CnfError("assignment has " + std::to_string(a.size()) + " values, problem has N=" +
                   std::to_string(p.num_vars()));
  std::size_t n = 0;
  for (const auto &c : p.clauses())
    if (!clause_satisfied(c, a)) ++n;
  return n;
}

namespace detail {

inline bool parse_integer(std::string_view tok, long long &out) {
  if (tok.empty()) return false;
  std::size_t i = (tok[0] == '-' || tok[0] == '+') ? 1 : 0;
  if (i == tok.size()) return false;
  long long v = 0;
  for (; i < tok.size(); ++i) {
    if (tok[i] < '0' || tok[i] > '9') return false;
    v = v * 10 + (tok[i] - '0');
    if (v > (1LL << 40)) return false;
  }
  out = tok[0] == '-' ? -v : v;
  return true;
}

} // namespace detail

/// Reads DIMACS CNF. Every clause must have exactly three literals over
/// distinct variables. SATLIB's `%` trailer ends the clause section.
inline Problem parse_dimacs(std::istream &in) {
  std::string line;
  long long n = -1, m = -1;
  std::size_t lineno = 0;
  auto fail = [&](const std::string &msg) -> CnfError {
    return CnfError("line " + std::to_string(lineno) + ": " + msg);
  };

  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream ss(line);
    std::string tok;
    if (!(ss >> tok) || tok[0] == 'c') continue;
    if (tok != "p") throw fail("expected 'p cnf N M' header before clauses");
    std::string fmt, ns, ms, extra;
    if (!(ss >> fmt >> ns >> ms) || fmt != "cnf" || (ss >> extra) ||
        !detail::parse_integer(ns, n) || !detail::parse_integer(ms, m) || n < 1 || m < 1)
      throw fail("malformed header '" + line + "'");
    break;
  }
  if (n < 0) throw CnfError("missing 'p cnf N M' header");

  std::vector<Clause> clauses;
  clauses.reserve(static_cast<std::size_t>(m));
  std::vector<long long> pending;
  bool trailer = false;
  while (!trailer && std::getline(in, line)) {
    ++lineno;
    std::istringstream ss(line);
    std::string tok;
    while (ss >> tok) {
      if (pending.empty() && tok[0] == 'c') break;
      if (tok == "%") {
        trailer = true;
        break;
      }
      if (tok == "p") throw fail("duplicate header");
      long long code = 0;
      if (!detail::parse_integer(tok, code)) throw fail("bad literal token '" + tok + "'");
      if (code == 0) {
        if (pending.empty()) {
          if (static_cast<long long>(clauses.size()) == m) continue; // legacy trailer
          throw fail("empty clause");
        }
        if (pending.size() != 3)
          throw fail("clause has " + std::to_string(pending.size()) +
                     " literals; only 3-literal clauses are supported");
        for (auto lit : pending)
          if (std::llabs(lit) > n)
            throw fail("variable " + std::to_string(std::llabs(lit)) + " out of range 1.." +
                       std::to_string(n));
        try {
          clauses.push_back(Clause::from_dimacs(pending[0], pending[1], pending[2]));
        } catch (const CnfError &e) {
          throw fail(e.what());
        }
        pending.clear();
        continue;
      }
      pending.push_back(code);
      if (pending.size() > 3)
        throw fail("clause has more than 3 literals; only 3-literal clauses are supported");
    }
  }
  if (!pending.empty()) throw CnfError("unterminated final clause");
  if (static_cast<long long>(clauses.size()) != m)
    throw CnfError("header declares M=" + std::to_string(m) + " but file has " +
                   std::to_string(clauses.size()) + " clauses");
  return Problem(static_cast<std::size_t>(n), std::move(clauses));
}

inline Problem parse_dimacs(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_dimacs(in);
}

inline void write_dimacs(std::ostream &out, const Problem &p,
                         const std::vector<std::string> &comments = {}) {
  for (const auto &c : comments) out << "c " << c << '\n';
  out << "p cnf " << p.num_vars() << ' ' << p.num_clauses() << '\n';
  for (const auto &c : p.clauses())
    out << c[0].to_dimacs() << ' ' << c[1].to_dimacs() << ' ' << c[2].to_dimacs() << " 0\n";
}

inline std::string write_dimacs(const Problem &p, const std::vector<std::string> &comments = {}) {
  std::ostringstream out;
  write_dimacs(out, p, comments);
  return out.str();
}

} // namespace ctsat
