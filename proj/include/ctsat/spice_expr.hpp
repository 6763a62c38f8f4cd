#pragma once

// Reader and evaluator for the subset of LTspice behavioral-source syntax the
// netlist emitter produces: numbers, V(node), + - * /, comparisons, and the
// functions u, min, max, abs, if plus zero-argument .func definitions.

#include <cctype>
#include <charconv>
#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ctsat::spice {

class ExprError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  enum class Kind { Number, Node, Call, Unary, Binary } kind;
  double number = 0.0;
  std::string name; // node name, function name, or operator
  std::vector<ExprPtr> args;
};

class Parser {
public:
  explicit Parser(std::string_view text) : s_(text) {}

  ExprPtr parse() {
    auto e = comparison();
    skip();
    if (pos_ != s_.size()) throw error("trailing input");
    return e;
  }

private:
  ExprError error(const std::string &what) const {
    return ExprError(what + " at offset " + std::to_string(pos_) + " in '" + std::string(s_) + "'");
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(std::string_view tok) {
    skip();
    if (s_.substr(pos_, tok.size()) == tok) {
      pos_ += tok.size();
      return true;
    }
    return false;
  }
  static ExprPtr binary(std::string op, ExprPtr a, ExprPtr b) {
    return std::make_shared<Expr>(Expr{Expr::Kind::Binary, 0.0, std::move(op), {std::move(a), std::move(b)}});
  }

  ExprPtr comparison() {
    auto lhs = additive();
    for (std::string_view op : {"<=", ">=", "==", "<", ">"}) {
      if (eat(op)) return binary(std::string(op), lhs, additive());
    }
    return lhs;
  }
  ExprPtr additive() {
    auto lhs = multiplicative();
    for (;;) {
      if (eat("+")) lhs = binary("+", lhs, multiplicative());
      else if (eat("-")) lhs = binary("-", lhs, multiplicative());
      else return lhs;
    }
  }
  ExprPtr multiplicative() {
    auto lhs = unary();
    for (;;) {
      if (eat("*")) lhs = binary("*", lhs, unary());
      else if (eat("/")) lhs = binary("/", lhs, unary());
      else return lhs;
    }
  }
  ExprPtr unary() {
    if (eat("-"))
      return std::make_shared<Expr>(Expr{Expr::Kind::Unary, 0.0, "-", {unary()}});
    if (eat("+")) return unary();
    return primary();
  }
  ExprPtr primary() {
    skip();
    if (pos_ >= s_.size()) throw error("unexpected end of expression");
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      auto e = comparison();
      if (!eat(")")) throw error("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(s_.data() + pos_, s_.data() + s_.size(), v);
      if (ec != std::errc()) throw error("bad number");
      pos_ = static_cast<std::size_t>(ptr - s_.data());
      return std::make_shared<Expr>(Expr{Expr::Kind::Number, v, {}, {}});
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
      std::string ident(s_.substr(start, pos_ - start));
      if (!eat("(")) throw error("expected '(' after '" + ident + "'");
      if (ident == "V" || ident == "v") {
        skip();
        const std::size_t ns = pos_;
        while (pos_ < s_.size() && s_[pos_] != ')' && s_[pos_] != ',' &&
               !std::isspace(static_cast<unsigned char>(s_[pos_])))
          ++pos_;
        std::string node(s_.substr(ns, pos_ - ns));
        if (node.empty()) throw error("empty node name");
        if (!eat(")")) throw error("expected ')' after node name");
        return std::make_shared<Expr>(Expr{Expr::Kind::Node, 0.0, std::move(node), {}});
      }
      std::vector<ExprPtr> args;
      if (!eat(")")) {
        do args.push_back(comparison());
        while (eat(","));
        if (!eat(")")) throw error("expected ')' closing call to " + ident);
      }
      return std::make_shared<Expr>(Expr{Expr::Kind::Call, 0.0, std::move(ident), std::move(args)});
    }
    throw error(std::string("unexpected character '") + c + "'");
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

inline ExprPtr parse_expression(std::string_view text) { return Parser(text).parse(); }

inline bool is_builtin(std::string_view f) {
  return f == "u" || f == "min" || f == "max" || f == "abs" || f == "if" || f == "flat";
}

/// Evaluation context: node voltages and zero-argument user functions.
struct Scope {
  std::map<std::string, double> nodes;
  std::map<std::string, ExprPtr> functions;
};

inline double evaluate(const Expr &e, const Scope &scope) {
  switch (e.kind) {
  case Expr::Kind::Number: return e.number;
  case Expr::Kind::Node: {
    if (e.name == "0") return 0.0;
    auto it = scope.nodes.find(e.name);
    if (it == scope.nodes.end()) throw ExprError("undefined node '" + e.name + "'");
    return it->second;
  }
  case Expr::Kind::Unary: return -evaluate(*e.args[0], scope);
  case Expr::Kind::Binary: {
    const double a = evaluate(*e.args[0], scope), b = evaluate(*e.args[1], scope);
    const auto &op = e.name;
    if (op == "+") return a + b;
    if (op == "-") return a - b;
    if (op == "*") return a * b;
    if (op == "/") return a / b;
    if (op == "<") return a < b ? 1.0 : 0.0;
    if (op == "<=") return a <= b ? 1.0 : 0.0;
    if (op == ">") return a > b ? 1.0 : 0.0;
    if (op == ">=") return a >= b ? 1.0 : 0.0;
    if (op == "==") return a == b ? 1.0 : 0.0;
    throw ExprError("unknown operator " + op);
  }
  case Expr::Kind::Call: {
    const auto &f = e.name;
    auto arg = [&](std::size_t i) { return evaluate(*e.args.at(i), scope); };
    auto need = [&](std::size_t n) {
      if (e.args.size() != n) throw ExprError(f + "() expects " + std::to_string(n) + " arguments");
    };
    if (f == "u") { need(1); return arg(0) > 0.0 ? 1.0 : 0.0; }
    if (f == "min") { need(2); return std::min(arg(0), arg(1)); }
    if (f == "max") { need(2); return std::max(arg(0), arg(1)); }
    if (f == "abs") { need(1); return std::abs(arg(0)); }
    if (f == "if") { need(3); return arg(0) != 0.0 ? arg(1) : arg(2); }
    if (f == "flat") throw ExprError("flat() is a simulator-side random source");
    auto it = scope.functions.find(f);
    if (it == scope.functions.end()) throw ExprError("undefined function '" + f + "'");
    need(0);
    return evaluate(*it->second, scope);
  }
  }
  return 0.0;
}

/// Node and function names an expression refers to.
inline void collect_names(const Expr &e, std::set<std::string> &nodes, std::set<std::string> &funcs) {
  if (e.kind == Expr::Kind::Node) nodes.insert(e.name);
  if (e.kind == Expr::Kind::Call) funcs.insert(e.name);
  for (const auto &a : e.args) collect_names(*a, nodes, funcs);
}

// ---------------------------------------------------------------------------
// Deck reader
// ---------------------------------------------------------------------------

struct BehavioralCard {
  std::string name, node_a, node_b;
  bool is_current = true; // I= or V=
  ExprPtr expr;
  std::string text;
};

/// One deck scope: the top level or a single .subckt body.
struct DeckScope {
  std::string name; // empty at top level
  std::vector<std::string> pins;
  std::set<std::string> nodes;
  std::map<std::string, ExprPtr> functions;
  std::map<std::string, std::string> function_text;
  std::vector<BehavioralCard> behavioral;
  std::map<char, std::size_t> card_counts; // first letter -> count
  std::vector<std::string> directives;
};

struct Deck {
  std::string title;
  std::vector<std::string> logical_lines;
  DeckScope top;
  std::vector<DeckScope> subcircuits;
};

/// Joins '+' continuation lines onto the preceding line.
inline std::vector<std::string> logical_lines(std::string_view text) {
  std::vector<std::string> out;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty() && line[0] == '+' && !out.empty()) {
      out.back() += ' ';
      out.back() += line.substr(1);
    } else {
      out.push_back(line);
    }
  }
  return out;
}

inline Deck read_deck(std::string_view text) {
  Deck deck;
  deck.logical_lines = logical_lines(text);
  DeckScope *cur = &deck.top;
  bool first = true;
  for (const auto &raw : deck.logical_lines) {
    if (first) {
      deck.title = raw;
      first = false;
      continue;
    }
    std::istringstream ss(raw);
    std::string head;
    if (!(ss >> head) || head[0] == '*' || head[0] == ';') continue;
    const char kind = static_cast<char>(std::toupper(static_cast<unsigned char>(head[0])));
    if (head[0] == '.') {
      std::string low = head;
      for (auto &ch : low) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
      if (low == ".subckt") {
        deck.subcircuits.emplace_back();
        cur = &deck.subcircuits.back();
        ss >> cur->name;
        for (std::string p; ss >> p;) {
          cur->pins.push_back(p);
          cur->nodes.insert(p);
        }
      } else if (low == ".ends") {
        cur = &deck.top;
      } else if (low == ".func") {
        const auto open = raw.find('{');
        const auto close = raw.rfind('}');
        std::string sig;
        ss >> sig;
        const auto paren = sig.find('(');
        if (open == std::string::npos || close == std::string::npos || paren == std::string::npos)
          throw ExprError("malformed .func: " + raw);
        const std::string fname = sig.substr(0, paren);
        const std::string body = raw.substr(open + 1, close - open - 1);
        cur->functions[fname] = parse_expression(body);
        cur->function_text[fname] = body;
      } else {
        cur->directives.push_back(raw);
      }
      continue;
    }
    ++cur->card_counts[kind];
    std::vector<std::string> fields;
    for (std::string f; ss >> f;) fields.push_back(f);
    if (kind == 'X') {
      // Instance: all fields but the last are nodes.
      for (std::size_t i = 0; i + 1 < fields.size(); ++i) cur->nodes.insert(fields[i]);
      continue;
    }
    if (fields.size() < 2) throw ExprError("card with fewer than two nodes: " + raw);
    cur->nodes.insert(fields[0]);
    cur->nodes.insert(fields[1]);
    if (kind == 'B') {
      const auto eq = raw.find('=');
      if (eq == std::string::npos || eq == 0) throw ExprError("behavioral source without I=/V=: " + raw);
      BehavioralCard b;
      b.name = head;
      b.node_a = fields[0];
      b.node_b = fields[1];
      const char which = static_cast<char>(std::toupper(static_cast<unsigned char>(raw[eq - 1])));
      if (which != 'I' && which != 'V') throw ExprError("behavioral source must be I= or V=: " + raw);
      b.is_current = which == 'I';
      b.text = raw.substr(eq + 1);
      b.expr = parse_expression(b.text);
      cur->behavioral.push_back(std::move(b));
    }
  }
  return deck;
}

/// Names referenced by behavioral cards and functions that the scope does
/// not declare. Empty when the scope is closed.
inline std::vector<std::string> undeclared_names(const DeckScope &scope) {
  std::set<std::string> nodes, funcs;
  for (const auto &b : scope.behavioral) collect_names(*b.expr, nodes, funcs);
  for (const auto &[_, f] : scope.functions) collect_names(*f, nodes, funcs);
  std::vector<std::string> missing;
  for (const auto &n : nodes)
    if (n != "0" && !scope.nodes.count(n)) missing.push_back("node " + n);
  for (const auto &f : funcs)
    if (!is_builtin(f) && !scope.functions.count(f)) missing.push_back("function " + f);
  return missing;
}

} // namespace ctsat::spice
