#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "ctsat/cnf.hpp"
#include "ctsat/dynamics.hpp"
#include "ctsat/integrate.hpp"

namespace ctsat {

class NetlistError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Document model
// ---------------------------------------------------------------------------

namespace card {
struct Comment { std::string text; };
struct Capacitor { std::string name, pos, neg; double farads; std::optional<double> ic; };
struct Resistor { std::string name, pos, neg; double ohms; };
/// Behavioral current source; current flows from `from` through the source into `to`.
struct CurrentB { std::string name, from, to, expr; };
struct VoltageB { std::string name, pos, neg, expr; };
struct VoltageSource { std::string name, pos, neg, value; };
struct Func { std::string name, body; };
struct Instance { std::string name; std::vector<std::string> nodes; std::string subckt; };
struct SubcktBegin { std::string name; std::vector<std::string> pins; };
struct SubcktEnd {};
struct InitialConditions { std::vector<std::pair<std::string, std::string>> values; };
struct Directive { std::string text; };
} // namespace card

using Card = std::variant<card::Comment, card::Capacitor, card::Resistor, card::CurrentB, card::VoltageB,
                          card::VoltageSource, card::Func, card::Instance, card::SubcktBegin,
                          card::SubcktEnd, card::InitialConditions, card::Directive>;

struct NetlistDocument {
  std::string title;
  std::vector<Card> cards;

  template <class T> std::size_t count() const {
    return static_cast<std::size_t>(
        std::count_if(cards.begin(), cards.end(), [](const Card &c) { return std::holds_alternative<T>(c); }));
  }
  template <class T> void add(T c) { cards.emplace_back(std::move(c)); }
  void append(const NetlistDocument &other) { cards.insert(cards.end(), other.cards.begin(), other.cards.end()); }
};

struct SubcircuitSpec {
  std::string name = "SOLVER";
  std::vector<std::uint32_t> inputs;  ///< 0-based variable indices
  std::vector<std::uint32_t> outputs; ///< 0-based variable indices
  bool expose_contrd = true;
};

struct NetlistOptions {
  double t_ev = 300.0;
  double shunt_resistance = 1e9;
  AnalogOptions analog{};
  MemParams mem{};
  MemOptions mem_options{};
  /// Emit explicit initial values drawn by init_analog/init_mem with `seed`.
  /// When false, main variables start from the simulator's flat() random
  /// source; LTspice then needs "Use the clock to reseed the MC generator".
  bool explicit_ic = true;
  std::uint64_t seed = 1;
  std::optional<SubcircuitSpec> subcircuit;
};

// ---------------------------------------------------------------------------
// Dialect
// ---------------------------------------------------------------------------

/// LTspice spelling of the expression primitives and cards. Document
/// construction goes through this type only, so a different simulator needs
/// a sibling with the same members.
struct LtspiceDialect {
  static std::string num(double x) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, p);
  }
  static std::string node(std::string_view n) { return "V(" + std::string(n) + ")"; }
  static std::string step(std::string_view x) { return "u(" + std::string(x) + ")"; }
  static std::string min(std::string_view a, std::string_view b) {
    return "min(" + std::string(a) + "," + std::string(b) + ")";
  }
  static std::string call(std::string_view f) { return std::string(f) + "()"; }
  static std::string random_unit() { return "{flat(1)}"; }
  /// d masked so that x stays inside [lo, hi], built from unit steps:
  /// d * (1 - u(d) * [x >= hi]) * (1 - u(-d) * [x <= lo]).
  static std::string masked(std::string_view d, std::string_view x, double lo, double hi) {
    const std::string ds(d), xs(x);
    const std::string at_hi = "(1-" + step(num(hi) + "-" + xs) + ")";
    const std::string at_lo = "(1-" + step(xs + "-" + num(lo)) + ")";
    return ds + "*(1-" + step(ds) + "*" + at_hi + ")*(1-" + step("-" + ds) + "*" + at_lo + ")";
  }
  static constexpr std::size_t line_width = 100;
};

namespace detail {

/// Breaks a card at spaces into '+' continuation lines.
inline void emit_wrapped(std::ostream &out, const std::string &line, std::size_t width) {
  if (line.size() <= width) {
    out << line << '\n';
    return;
  }
  std::size_t start = 0;
  bool first = true;
  while (start < line.size()) {
    const std::size_t budget = first ? width : width - 2;
    std::size_t end = line.size();
    if (end - start > budget) {
      end = line.rfind(' ', start + budget);
      if (end == std::string::npos || end <= start) end = line.find(' ', start + budget);
      if (end == std::string::npos) end = line.size();
    }
    out << (first ? "" : "+ ") << line.substr(start, end - start) << '\n';
    start = end;
    while (start < line.size() && line[start] == ' ') ++start;
    first = false;
  }
}

inline std::string ohms(double r) {
  if (r >= 1e9 && r == static_cast<double>(static_cast<long long>(r / 1e9)) * 1e9)
    return std::to_string(static_cast<long long>(r / 1e9)) + "G";
  return LtspiceDialect::num(r);
}

} // namespace detail

/// Writes the document as deck text: deterministic, ASCII, newline-terminated.
template <class Dialect = LtspiceDialect>
void serialize(std::ostream &out, const NetlistDocument &doc) {
  out << "* " << doc.title << '\n';
  for (const auto &c : doc.cards) {
    std::string line;
    std::visit(
        [&](const auto &x) {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, card::Comment>) line = "* " + x.text;
          else if constexpr (std::is_same_v<T, card::Capacitor>) {
            line = x.name + " " + x.pos + " " + x.neg + " " + Dialect::num(x.farads);
            if (x.ic) line += " ic=" + Dialect::num(*x.ic);
          } else if constexpr (std::is_same_v<T, card::Resistor>)
            line = x.name + " " + x.pos + " " + x.neg + " " + detail::ohms(x.ohms);
          else if constexpr (std::is_same_v<T, card::CurrentB>)
            line = x.name + " " + x.from + " " + x.to + " I=" + x.expr;
          else if constexpr (std::is_same_v<T, card::VoltageB>)
            line = x.name + " " + x.pos + " " + x.neg + " V=" + x.expr;
          else if constexpr (std::is_same_v<T, card::VoltageSource>)
            line = x.name + " " + x.pos + " " + x.neg + " " + x.value;
          else if constexpr (std::is_same_v<T, card::Func>)
            line = ".func " + x.name + "() {" + x.body + "}";
          else if constexpr (std::is_same_v<T, card::Instance>) {
            line = x.name;
            for (const auto &n : x.nodes) line += " " + n;
            line += " " + x.subckt;
          } else if constexpr (std::is_same_v<T, card::SubcktBegin>) {
            line = ".subckt " + x.name;
            for (const auto &p : x.pins) line += " " + p;
          } else if constexpr (std::is_same_v<T, card::SubcktEnd>) line = ".ends";
          else if constexpr (std::is_same_v<T, card::InitialConditions>) {
            line = ".ic";
            for (const auto &[n, v] : x.values) line += " " + Dialect::node(n) + "=" + v;
          } else if constexpr (std::is_same_v<T, card::Directive>) line = x.text;
        },
        c);
    detail::emit_wrapped(out, line, Dialect::line_width);
  }
}

template <class Dialect = LtspiceDialect> std::string serialize(const NetlistDocument &doc) {
  std::ostringstream out;
  serialize<Dialect>(out, doc);
  return out.str();
}

// ---------------------------------------------------------------------------
// Construction
// ---------------------------------------------------------------------------

namespace detail {

using D = LtspiceDialect;

/// "(1-V(x))" or "(1+V(x))": the slack 1 - q x of a literal.
inline std::string slack(const Literal &l, const std::string &prefix) {
  return std::string("(1") + (l.sign > 0 ? "-" : "+") + D::node(prefix + std::to_string(l.var + 1)) + ")";
}

inline std::string join_sum(const std::vector<std::string> &terms) {
  if (terms.empty()) return "0";
  std::string s = terms[0];
  for (std::size_t i = 1; i < terms.size(); ++i) {
    if (terms[i][0] == '-') s += " - " + terms[i].substr(1);
    else s += " + " + terms[i];
  }
  return s;
}

/// Clause unsatisfied by the sign readout: every literal false, with x_i TRUE iff V > 0.
inline std::string unsat_indicator(const Clause &c, const std::string &prefix) {
  std::string s;
  for (std::size_t j = 0; j < 3; ++j) {
    const std::string v = D::node(prefix + std::to_string(c[j].var + 1));
    if (j) s += "*";
    s += c[j].sign > 0 ? "(1-" + D::step(v) + ")" : D::step(v);
  }
  return s;
}

inline std::string clause_min_expr(const Clause &c, const std::string &prefix) {
  return "0.5*" + D::min(D::min(slack(c[0], prefix), slack(c[1], prefix)), slack(c[2], prefix));
}

/// Capacitor + shunt + behavioral source for one state variable.
inline void add_cell(NetlistDocument &doc, const std::string &node, const std::string &source_expr,
                     const NetlistOptions &opt, bool cap_ic, std::optional<double> ic) {
  card::Capacitor cap{"C" + node, node, "0", 1.0, std::nullopt};
  if (cap_ic) cap.ic = ic;
  doc.add(cap);
  doc.add(card::Resistor{"R" + node, node, "0", opt.shunt_resistance});
  doc.add(card::CurrentB{"B" + node, "0", node, source_expr});
}

inline void check_subcircuit(const Problem &p, const SubcircuitSpec &sc) {
  std::set<std::uint32_t> in(sc.inputs.begin(), sc.inputs.end()), out(sc.outputs.begin(), sc.outputs.end());
  if (in.size() != sc.inputs.size() || out.size() != sc.outputs.size())
    throw NetlistError("subcircuit pin lists repeat a variable");
  for (auto v : in) {
    if (v >= p.num_vars()) throw NetlistError("input variable out of range");
    if (out.count(v)) throw NetlistError("variable " + std::to_string(v + 1) + " is both input and output");
  }
  for (auto v : out)
    if (v >= p.num_vars()) throw NetlistError("output variable out of range");
  if (in.size() + out.size() > p.num_vars()) throw NetlistError("P + Q exceeds N");
  if (sc.name.empty()) throw NetlistError("subcircuit needs a name");
}

struct Layout {
  std::vector<bool> is_input;
  bool subckt = false;
};

inline Layout begin_document(NetlistDocument &doc, const Problem &p, const NetlistOptions &opt,
                             const std::string &main_prefix) {
  Layout lay;
  lay.is_input.assign(p.num_vars(), false);
  if (opt.subcircuit) {
    const auto &sc = *opt.subcircuit;
    check_subcircuit(p, sc);
    lay.subckt = true;
    card::SubcktBegin b{sc.name, {}};
    auto ins = sc.inputs, outs = sc.outputs;
    std::sort(ins.begin(), ins.end());
    std::sort(outs.begin(), outs.end());
    for (auto v : ins) {
      b.pins.push_back(main_prefix + std::to_string(v + 1));
      lay.is_input[v] = true;
    }
    for (auto v : outs) b.pins.push_back(main_prefix + std::to_string(v + 1));
    if (sc.expose_contrd) b.pins.push_back("contrd");
    doc.add(std::move(b));
  }
  return lay;
}

inline void end_document(NetlistDocument &doc, const Layout &lay, const NetlistOptions &opt,
                         card::InitialConditions ic) {
  if (lay.subckt) {
    doc.add(card::SubcktEnd{});
    return;
  }
  doc.add(std::move(ic));
  doc.add(card::Directive{".tran 0 " + D::num(opt.t_ev) + " 0 uic"});
  doc.add(card::Directive{".end"});
}

} // namespace detail

/// Analog-SAT deck: N + M capacitor cells, per-clause K functions, and the
/// contra/contrd control sources.
inline NetlistDocument emit_analog(const Problem &p, const NetlistOptions &opt = {}) {
  using detail::D;
  NetlistDocument doc;
  doc.title = "analog SAT solver, N=" + std::to_string(p.num_vars()) + " M=" + std::to_string(p.num_clauses()) +
              (opt.analog.include_one_eighth_factor ? "" : " (1/8 factor omitted)") + ", aux mode " +
              std::string(to_string(opt.analog.aux_mode));
  const auto lay = detail::begin_document(doc, p, opt, "s");
  const std::string pre = opt.analog.include_one_eighth_factor ? "0.125*" : "";
  const std::size_t n = p.num_vars(), m = p.num_clauses();
  const auto init = init_analog(p, opt.seed);

  for (std::size_t k = 0; k < m; ++k) {
    const auto &c = p.clause(k);
    doc.add(card::Func{"K" + std::to_string(k + 1),
                       pre + detail::slack(c[0], "s") + "*" + detail::slack(c[1], "s") + "*" + detail::slack(c[2], "s")});
  }
  std::vector<std::vector<std::string>> terms(n);
  for (std::size_t k = 0; k < m; ++k) {
    const auto &c = p.clause(k);
    const std::string a = D::node("a" + std::to_string(k + 1));
    const std::string km = D::call("K" + std::to_string(k + 1));
    for (std::size_t j = 0; j < 3; ++j) {
      // Partner factors in clause order, matching the native kernel.
      const auto &lo = (j == 0) ? c[1] : c[0];
      const auto &hi = (j == 2) ? c[1] : c[2];
      std::string t = std::string(c[j].sign > 0 ? "" : "-") + "2*" + a + "*" + pre + detail::slack(lo, "s") + "*" +
                      detail::slack(hi, "s") + "*" + km;
      terms[c[j].var].push_back(t);
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    if (!lay.is_input[i]) doc.add(card::Func{"fs" + std::to_string(i + 1), detail::join_sum(terms[i])});
  for (std::size_t k = 0; k < m; ++k) {
    const std::string a = D::node("a" + std::to_string(k + 1));
    const std::string km = D::call("K" + std::to_string(k + 1));
    std::string body;
    switch (opt.analog.aux_mode) {
    case AuxMode::AK2: body = a + "*" + km + "*" + km; break;
    case AuxMode::AK: body = a + "*" + km; break;
    case AuxMode::K: body = km; break;
    case AuxMode::K2: body = km + "*" + km; break;
    }
    doc.add(card::Func{"fa" + std::to_string(k + 1), body});
  }

  card::InitialConditions ic;
  for (std::size_t i = 0; i < n; ++i) {
    if (lay.is_input[i]) continue;
    const std::string node = "s" + std::to_string(i + 1);
    const std::string f = D::call("f" + node);
    detail::add_cell(doc, node, D::masked(f, D::node(node), kSpinLower, kSpinUpper), opt, lay.subckt,
                     opt.explicit_ic ? std::optional<double>(init.s[i]) : std::nullopt);
    ic.values.emplace_back(node, opt.explicit_ic ? D::num(init.s[i]) : D::random_unit());
  }
  for (std::size_t k = 0; k < m; ++k) {
    const std::string node = "a" + std::to_string(k + 1);
    detail::add_cell(doc, node, D::call("f" + node), opt, lay.subckt, 1.0);
    ic.values.emplace_back(node, "1");
  }

  std::vector<std::string> contra, contrd;
  for (const auto &c : p.clauses()) {
    contra.push_back(detail::clause_min_expr(c, "s"));
    contrd.push_back(detail::unsat_indicator(c, "s"));
  }
  doc.add(card::VoltageB{"Bcontra", "contra", "0", detail::join_sum(contra)});
  doc.add(card::VoltageB{"Bcontrd", "contrd", "0", detail::join_sum(contrd)});
  detail::end_document(doc, lay, opt, std::move(ic));
  return doc;
}

/// Memcomputing deck: N + 2M capacitor cells, per-clause C/G/R functions, and
/// the contra/contrd control sources.
inline NetlistDocument emit_mem(const Problem &p, const NetlistOptions &opt = {}) {
  using detail::D;
  NetlistDocument doc;
  doc.title = "digital memcomputing solver, N=" + std::to_string(p.num_vars()) + " M=" +
              std::to_string(p.num_clauses()) + (opt.mem_options.clamp_v ? "" : " (v unconstrained)");
  const auto lay = detail::begin_document(doc, p, opt, "v");
  const std::size_t n = p.num_vars(), m = p.num_clauses();
  const auto &prm = opt.mem;
  const auto init = init_mem(p, opt.seed);

  std::vector<std::vector<std::string>> terms(n);
  for (std::size_t k = 0; k < m; ++k) {
    const auto &c = p.clause(k);
    const std::string id = std::to_string(k + 1);
    doc.add(card::Func{"C" + id, detail::clause_min_expr(c, "v")});
    std::array<std::string, 3> t;
    for (std::size_t j = 0; j < 3; ++j) t[j] = detail::slack(c[j], "v");
    for (std::size_t j = 0; j < 3; ++j) {
      const std::string jj = std::to_string(j + 1);
      const std::string &ta = t[j == 0 ? 1 : 0], &tb = t[j == 2 ? 1 : 2];
      doc.add(card::Func{"G" + id + "_" + jj,
                         std::string(c[j].sign > 0 ? "0.5" : "-0.5") + "*" + D::min(ta, tb)});
      // Rigidity gate: literal j attains the clause minimum.
      std::string gate;
      if (opt.mem_options.r_ties == RTiePolicy::AllMinimizers) {
        gate = "(1-" + D::step(t[j] + "-" + D::min(ta, tb)) + ")";
      } else if (j == 0) {
        gate = "(1-" + D::step(t[0] + "-" + D::min(t[1], t[2])) + ")";
      } else if (j == 1) {
        gate = D::step(t[0] + "-" + t[1]) + "*(1-" + D::step(t[1] + "-" + t[2]) + ")";
      } else {
        gate = D::step(t[0] + "-" + t[2]) + "*" + D::step(t[1] + "-" + t[2]);
      }
      const std::string v = D::node("v" + std::to_string(c[j].var + 1));
      doc.add(card::Func{"R" + id + "_" + jj,
                         "0.5*(" + std::string(c[j].sign > 0 ? "1" : "-1") + "-" + v + ")*" + gate});
      const std::string xs = D::node("xs" + id), xl = D::node("xl" + id);
      terms[c[j].var].push_back(xl + "*" + xs + "*" + D::call("G" + id + "_" + jj) + " + (1+" + D::num(prm.zeta) +
                                "*" + xl + ")*(1-" + xs + ")*" + D::call("R" + id + "_" + jj));
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    if (!lay.is_input[i]) doc.add(card::Func{"fv" + std::to_string(i + 1), detail::join_sum(terms[i])});
  for (std::size_t k = 0; k < m; ++k) {
    const std::string id = std::to_string(k + 1);
    doc.add(card::Func{"fxs" + id, D::num(prm.beta) + "*(" + D::node("xs" + id) + "+" + D::num(prm.epsilon) + ")*(" +
                                       D::call("C" + id) + "-" + D::num(prm.gamma) + ")"});
    doc.add(card::Func{"fxl" + id, D::num(prm.alpha) + "*(" + D::call("C" + id) + "-" + D::num(prm.delta) + ")"});
  }

  card::InitialConditions ic;
  for (std::size_t i = 0; i < n; ++i) {
    if (lay.is_input[i]) continue;
    const std::string node = "v" + std::to_string(i + 1);
    const std::string f = D::call("f" + node);
    const std::string src = opt.mem_options.clamp_v ? D::masked(f, D::node(node), kSpinLower, kSpinUpper) : f;
    detail::add_cell(doc, node, src, opt, lay.subckt,
                     opt.explicit_ic ? std::optional<double>(init.v[i]) : std::nullopt);
    ic.values.emplace_back(node, opt.explicit_ic ? D::num(init.v[i]) : D::random_unit());
  }
  const double xl_max = long_memory_upper(m);
  for (std::size_t k = 0; k < m; ++k) {
    const std::string node = "xs" + std::to_string(k + 1);
    detail::add_cell(doc, node, D::masked(D::call("f" + node), D::node(node), kShortLower, kShortUpper), opt,
                     lay.subckt, 0.5);
    ic.values.emplace_back(node, "0.5");
  }
  for (std::size_t k = 0; k < m; ++k) {
    const std::string node = "xl" + std::to_string(k + 1);
    detail::add_cell(doc, node, D::masked(D::call("f" + node), D::node(node), kLongLower, xl_max), opt, lay.subckt,
                     1.0);
    ic.values.emplace_back(node, "1");
  }

  std::vector<std::string> contra, contrd;
  for (std::size_t k = 0; k < m; ++k) {
    contra.push_back(D::call("C" + std::to_string(k + 1)));
    contrd.push_back(detail::unsat_indicator(p.clause(k), "v"));
  }
  doc.add(card::VoltageB{"Bcontra", "contra", "0", detail::join_sum(contra)});
  doc.add(card::VoltageB{"Bcontrd", "contrd", "0", detail::join_sum(contrd)});
  detail::end_document(doc, lay, opt, std::move(ic));
  return doc;
}

/// `.subckt` block for one solver. Input variables lose their cell and become
/// pins; outputs are pins aliasing the internal nodes; contrd is optional.
inline NetlistDocument emit_subcircuit(const Problem &p, SolverKind kind, const NetlistOptions &opt) {
  if (!opt.subcircuit) throw NetlistError("emit_subcircuit needs NetlistOptions::subcircuit");
  return kind == SolverKind::Analog ? emit_analog(p, opt) : emit_mem(p, opt);
}

/// LTspice PULSE card for a square wave that is high on [phase, phase + duty*period).
inline std::string square_wave_source(double low, double high, double period, double duty, double phase) {
  using detail::D;
  const double edge = std::min(1e-9, period * 1e-6);
  // PULSE(V1 V2 Tdelay Trise Tfall Ton Tperiod): start at low, go high at Tdelay.
  double delay = phase;
  while (delay < 0) delay += period;
  return "PULSE(" + D::num(low) + " " + D::num(high) + " " + D::num(delay) + " " + D::num(edge) + " " + D::num(edge) +
         " " + D::num(duty * period) + " " + D::num(period) + ")";
}

/// Two-solver ring: each subcircuit has pins (input, output, contrd) and the
/// output of one feeds the input of the other.
inline NetlistDocument emit_ring_deck(const NetlistDocument &sub_a, const NetlistDocument &sub_b, double t_ev) {
  auto pins_of = [](const NetlistDocument &d) -> const card::SubcktBegin & {
    for (const auto &c : d.cards)
      if (auto *b = std::get_if<card::SubcktBegin>(&c)) return *b;
    throw NetlistError("document has no .subckt block");
  };
  const auto &pa = pins_of(sub_a), &pb = pins_of(sub_b);
  if (pa.pins.size() != 3 || pb.pins.size() != 3)
    throw NetlistError("ring deck expects subcircuits with pins (input, output, contrd)");
  NetlistDocument doc;
  doc.title = "ring of two solvers " + pa.name + " and " + pb.name;
  doc.append(sub_a);
  doc.append(sub_b);
  doc.add(card::Instance{"XA", {"nb", "na", "contrdA"}, pa.name});
  doc.add(card::Instance{"XB", {"na", "nb", "contrdB"}, pb.name});
  doc.add(card::Resistor{"Rna", "na", "0", 1e9});
  doc.add(card::Resistor{"Rnb", "nb", "0", 1e9});
  doc.add(card::Directive{".tran 0 " + detail::D::num(t_ev) + " 0 uic"});
  doc.add(card::Directive{".end"});
  return doc;
}

/// A subcircuit whose single input pin is driven by a square wave.
inline NetlistDocument emit_driven_deck(const NetlistDocument &sub, double period, double duty, double phase,
                                        double t_ev) {
  const card::SubcktBegin *b = nullptr;
  for (const auto &c : sub.cards)
    if ((b = std::get_if<card::SubcktBegin>(&c))) break;
  if (!b || b->pins.empty()) throw NetlistError("document has no .subckt block with pins");
  NetlistDocument doc;
  doc.title = "square-wave drive of " + b->name;
  doc.append(sub);
  std::vector<std::string> nodes{"drive"};
  for (std::size_t i = 1; i < b->pins.size(); ++i) nodes.push_back("o_" + b->pins[i]);
  doc.add(card::VoltageSource{"Vdrive", "drive", "0", square_wave_source(-1.0, 1.0, period, duty, phase)});
  doc.add(card::Instance{"X1", nodes, b->name});
  doc.add(card::Directive{".tran 0 " + detail::D::num(t_ev) + " 0 uic"});
  doc.add(card::Directive{".end"});
  return doc;
}

} // namespace ctsat
