#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <memory>
#include <numeric>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "ctsat/cnf.hpp"
#include "ctsat/integrate.hpp"

namespace ctsat {

class NetworkError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Periodic two-level waveform, high on [phase, phase + duty*period) modulo
/// the period. A transition instant takes the new level.
struct SquareWave {
  double low = -1.0;
  double high = 1.0;
  double period = 10.0;
  double duty = 0.5;
  double phase = 0.0;
};

inline double eval_drive(const SquareWave &w, double t) {
  double tau = std::fmod(t - w.phase, w.period);
  if (tau < 0) tau += w.period;
  return tau < w.duty * w.period ? w.high : w.low;
}

struct SolverNode {
  std::string name;
  std::shared_ptr<const Problem> problem;
  SolverSpec solver{};
  std::vector<std::uint32_t> inputs;  ///< 0-based variables set from outside
  std::vector<std::uint32_t> outputs; ///< 0-based variables offered to other nodes
  bool expose_contrd = true;
  std::uint64_t seed = 0;
};

struct SignalRef {
  enum class Kind { NodeOutput, Drive } kind = Kind::NodeOutput;
  std::size_t index = 0;  ///< node index or drive index
  std::uint32_t var = 0;  ///< output variable when kind == NodeOutput

  static SignalRef output(std::size_t node, std::uint32_t var) { return {Kind::NodeOutput, node, var}; }
  static SignalRef drive(std::size_t d) { return {Kind::Drive, d, 0}; }
};

struct Edge {
  SignalRef from;
  std::size_t to_node = 0;
  std::uint32_t to_var = 0;
};

struct Wiring {
  std::vector<Edge> edges;
  std::vector<SquareWave> drives;
};

struct NetworkConfig {
  IntegratorConfig integrator{};
  /// Stop a connected group once all its nodes are unsatisfied-free together
  /// for the solve window.
  bool stop_when_all_solved = true;
};

struct NetworkResult {
  std::vector<RunRecord> records; ///< one per node, in node order
  /// Per connected group: time at which all its nodes were first jointly
  /// solved (start of the confirmation window).
  std::vector<std::optional<double>> joint_solved;
  std::vector<std::vector<std::size_t>> groups;

  bool all_jointly_solved() const {
    for (const auto &j : joint_solved)
      if (!j) return false;
    return true;
  }
};

inline void validate_network(const std::vector<SolverNode> &nodes, const Wiring &wiring) {
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    const auto &nd = nodes[k];
    if (!nd.problem) throw NetworkError("node " + nd.name + " has no problem");
    std::set<std::uint32_t> in(nd.inputs.begin(), nd.inputs.end());
    for (auto v : nd.inputs)
      if (v >= nd.problem->num_vars()) throw NetworkError("node " + nd.name + ": input out of range");
    for (auto v : nd.outputs) {
      if (v >= nd.problem->num_vars()) throw NetworkError("node " + nd.name + ": output out of range");
      if (in.count(v)) throw NetworkError("node " + nd.name + ": variable is both input and output");
    }
  }
  std::vector<std::vector<int>> fed(nodes.size());
  for (std::size_t k = 0; k < nodes.size(); ++k) fed[k].assign(nodes[k].problem->num_vars(), 0);
  for (const auto &e : wiring.edges) {
    if (e.to_node >= nodes.size()) throw NetworkError("edge targets unknown node");
    const auto &dst = nodes[e.to_node];
    if (std::find(dst.inputs.begin(), dst.inputs.end(), e.to_var) == dst.inputs.end())
      throw NetworkError("edge targets non-input variable " + std::to_string(e.to_var + 1) + " of " + dst.name);
    ++fed[e.to_node][e.to_var];
    if (e.from.kind == SignalRef::Kind::Drive) {
      if (e.from.index >= wiring.drives.size()) throw NetworkError("edge from unknown drive");
      const auto &w = wiring.drives[e.from.index];
      if (!(w.low < w.high) || !(w.period > 0) || !(w.duty > 0 && w.duty < 1))
        throw NetworkError("invalid square wave");
    } else {
      if (e.from.index >= nodes.size()) throw NetworkError("edge from unknown node");
      const auto &src = nodes[e.from.index];
      if (std::find(src.outputs.begin(), src.outputs.end(), e.from.var) == src.outputs.end())
        throw NetworkError("edge reads non-output variable " + std::to_string(e.from.var + 1) + " of " + src.name);
    }
  }
  for (std::size_t k = 0; k < nodes.size(); ++k)
    for (auto v : nodes[k].inputs) {
      if (fed[k][v] == 0) throw NetworkError("input " + std::to_string(v + 1) + " of " + nodes[k].name + " is unwired");
      if (fed[k][v] > 1)
        throw NetworkError("input " + std::to_string(v + 1) + " of " + nodes[k].name + " has several sources");
    }
}

/// Connected groups of nodes under node-to-node edges (drives do not join groups).
inline std::vector<std::vector<std::size_t>> network_groups(std::size_t n, const Wiring &wiring) {
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto &e : wiring.edges)
    if (e.from.kind == SignalRef::Kind::NodeOutput) parent[find(e.from.index)] = find(e.to_node);
  std::vector<std::vector<std::size_t>> groups;
  std::vector<long> slot(n, -1);
  for (std::size_t k = 0; k < n; ++k) {
    const auto r = find(k);
    if (slot[r] < 0) {
      slot[r] = static_cast<long>(groups.size());
      groups.emplace_back();
    }
    groups[static_cast<std::size_t>(slot[r])].push_back(k);
  }
  return groups;
}

namespace detail {

/// The nodes of one connected group integrated as a single system on one clock.
/// Input variables are overwritten from their sources before every step
/// (sources read at the end of the previous step) and have zero derivative.
class GroupSystem {
public:
  GroupSystem(const std::vector<SolverNode> &nodes, const Wiring &wiring, const std::vector<std::size_t> &members)
      : wiring_(&wiring) {
    std::vector<long> local(nodes.size(), -1);
    std::size_t off = 0;
    for (std::size_t i = 0; i < members.size(); ++i) {
      const auto &nd = nodes[members[i]];
      local[members[i]] = static_cast<long>(i);
      systems_.emplace_back(*nd.problem, nd.solver);
      systems_.back().freeze(nd.inputs);
      offsets_.push_back(off);
      off += systems_.back().dim();
    }
    offsets_.push_back(off);
    for (const auto &e : wiring.edges) {
      if (local[e.to_node] < 0) continue;
      Link l;
      l.dst = offsets_[static_cast<std::size_t>(local[e.to_node])] + e.to_var;
      if (e.from.kind == SignalRef::Kind::Drive) {
        l.drive = static_cast<long>(e.from.index);
      } else {
        l.src = offsets_[static_cast<std::size_t>(local[e.from.index])] + e.from.var;
      }
      links_.push_back(l);
    }
  }

  std::size_t dim() const { return offsets_.back(); }
  std::size_t size() const { return systems_.size(); }
  bool has_inputs() const { return !links_.empty(); }
  const SolverSystem &node(std::size_t i) const { return systems_[i]; }
  std::span<const double> slice(std::span<const double> y, std::size_t i) const {
    return y.subspan(offsets_[i], offsets_[i + 1] - offsets_[i]);
  }

  void rhs(double t, std::span<const double> y, std::span<double> dy) const {
    for (std::size_t i = 0; i < systems_.size(); ++i) {
      const auto len = offsets_[i + 1] - offsets_[i];
      systems_[i].rhs(t, y.subspan(offsets_[i], len), dy.subspan(offsets_[i], len));
    }
  }

  bool prepare(double t, std::span<double> y) const {
    bool changed = false;
    for (const auto &l : links_) {
      const double v = l.drive >= 0 ? eval_drive(wiring_->drives[static_cast<std::size_t>(l.drive)], t) : y[l.src];
      changed = changed || y[l.dst] != v;
      y[l.dst] = v;
    }
    return changed;
  }

  bool project(std::span<double> y) const {
    bool changed = false;
    for (std::size_t i = 0; i < systems_.size(); ++i) {
      const auto len = offsets_[i + 1] - offsets_[i];
      changed = systems_[i].project(y.subspan(offsets_[i], len)) || changed;
    }
    return changed;
  }

private:
  struct Link {
    std::size_t dst = 0, src = 0;
    long drive = -1;
  };
  const Wiring *wiring_;
  std::vector<SolverSystem> systems_;
  std::vector<std::size_t> offsets_;
  std::vector<Link> links_;
};

} // namespace detail

/// Simulates every connected group of the network natively. Each group has
/// its own adaptive clock (the error norm is the max over member nodes), so a
/// group of one undriven node reproduces `run` exactly.
inline NetworkResult simulate_network(const std::vector<SolverNode> &nodes, const Wiring &wiring,
                                      const NetworkConfig &cfg) {
  cfg.integrator.validate();
  validate_network(nodes, wiring);
  NetworkResult out;
  out.records.resize(nodes.size());
  out.groups = network_groups(nodes.size(), wiring);
  out.joint_solved.assign(out.groups.size(), std::nullopt);
  const auto &icfg = cfg.integrator;

  for (std::size_t g = 0; g < out.groups.size(); ++g) {
    const auto &members = out.groups[g];
    const auto t0 = std::chrono::steady_clock::now();
    detail::GroupSystem sys(nodes, wiring, members);
    std::vector<double> y;
    std::vector<RunMonitor> monitors;
    monitors.reserve(members.size());
    for (std::size_t i = 0; i < members.size(); ++i) {
      const auto &nd = nodes[members[i]];
      auto &rec = out.records[members[i]];
      rec.seed = nd.seed;
      rec.solver = nd.solver;
      rec.config = icfg;
      rec.num_vars = nd.problem->num_vars();
      rec.num_clauses = nd.problem->num_clauses();
      const auto yi = initial_state(*nd.problem, nd.solver, nd.seed);
      y.insert(y.end(), yi.begin(), yi.end());
      monitors.emplace_back(sys.node(i), icfg, rec);
    }

    double joint_since = -1.0;
    auto observe = [&](double t, std::span<const double> yy) {
      bool all_final = true, all_sat = true;
      for (std::size_t i = 0; i < monitors.size(); ++i) {
        all_final = monitors[i].observe(t, sys.slice(yy, i)) && all_final;
        all_sat = all_sat && monitors[i].current_unsat() == 0;
      }
      if (all_sat) {
        if (joint_since < 0) joint_since = t;
        if (!out.joint_solved[g] && t - joint_since >= icfg.solve_window) out.joint_solved[g] = joint_since;
      } else {
        joint_since = -1.0;
      }
      if (!sys.has_inputs() && all_final) return true;
      return cfg.stop_when_all_solved && out.joint_solved[g].has_value();
    };
    const auto res = integrate(sys, y, 0.0, icfg.t_ev, icfg.stepper, observe);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    for (std::size_t i = 0; i < members.size(); ++i) {
      auto &rec = out.records[members[i]];
      if (!monitors[i].done()) apply_stop_reason(rec, res);
      else rec.stats = res.stats;
      monitors[i].close();
      rec.wall_seconds = wall;
    }
  }
  return out;
}

} // namespace ctsat
