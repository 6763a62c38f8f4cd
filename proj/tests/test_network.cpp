#include <gtest/gtest.h>

#include "ctsat/instances.hpp"
#include "ctsat/network.hpp"

using namespace ctsat;

namespace {

SolverNode make_node(std::string name, const Problem &p, SolverKind kind, std::uint64_t seed,
                     std::vector<std::uint32_t> in = {}, std::vector<std::uint32_t> out = {}) {
  SolverNode n;
  n.name = std::move(name);
  n.problem = std::make_shared<const Problem>(p);
  n.solver.kind = kind;
  n.solver.analog.include_one_eighth_factor = false;
  n.inputs = std::move(in);
  n.outputs = std::move(out);
  n.seed = seed;
  return n;
}

void expect_same_record(const RunRecord &a, const RunRecord &b) {
  EXPECT_EQ(a.outcome, b.outcome);
  EXPECT_EQ(a.t_outcome, b.t_outcome);
  EXPECT_EQ(a.assignment, b.assignment);
  EXPECT_EQ(a.aborted, b.aborted);
  EXPECT_EQ(a.stats.accepted, b.stats.accepted);
  EXPECT_EQ(a.stats.rejected, b.stats.rejected);
  ASSERT_EQ(a.trajectory.size(), b.trajectory.size());
  for (std::size_t i = 0; i < a.trajectory.size(); ++i) {
    EXPECT_EQ(a.trajectory[i].t, b.trajectory[i].t);
    EXPECT_EQ(a.trajectory[i].contrd, b.trajectory[i].contrd);
    EXPECT_EQ(a.trajectory[i].state, b.trajectory[i].state);
  }
}

} // namespace

TEST(EvalDrive, HighFirstHalfPeriod) {
  const SquareWave w{-1, 1, 10, 0.5, 0};
  EXPECT_EQ(eval_drive(w, 0), 1.0);
  EXPECT_EQ(eval_drive(w, 2), 1.0);
  EXPECT_EQ(eval_drive(w, 5), -1.0);
  EXPECT_EQ(eval_drive(w, 9.999), -1.0);
  EXPECT_EQ(eval_drive(w, 10), 1.0);
  EXPECT_EQ(eval_drive(w, 17), -1.0);
}

TEST(EvalDrive, PhaseAndDuty) {
  const SquareWave w{0, 2, 4, 0.25, 1};
  EXPECT_EQ(eval_drive(w, 0.5), 0.0);
  EXPECT_EQ(eval_drive(w, 1.0), 2.0);
  EXPECT_EQ(eval_drive(w, 2.0), 0.0);
  EXPECT_EQ(eval_drive(w, 5.5), 2.0);
}

TEST(Validate, RejectsBadWiring) {
  const auto inst = gen_xorsat_3r(10, 1);
  const auto a = make_node("A", inst.problem, SolverKind::Mem, 1, {0}, {1});
  const auto b = make_node("B", inst.problem, SolverKind::Mem, 2, {1}, {0});
  Wiring ok{{Edge{SignalRef::output(1, 0), 0, 0}, Edge{SignalRef::output(0, 1), 1, 1}}, {}};
  EXPECT_NO_THROW(validate_network({a, b}, ok));

  Wiring missing{{Edge{SignalRef::output(1, 0), 0, 0}}, {}};
  EXPECT_THROW(validate_network({a, b}, missing), NetworkError);
  Wiring twice = ok;
  twice.edges.push_back(Edge{SignalRef::output(1, 0), 0, 0});
  EXPECT_THROW(validate_network({a, b}, twice), NetworkError);
  Wiring not_output{{Edge{SignalRef::output(1, 5), 0, 0}, Edge{SignalRef::output(0, 1), 1, 1}}, {}};
  EXPECT_THROW(validate_network({a, b}, not_output), NetworkError);
  Wiring to_non_input{{Edge{SignalRef::output(1, 0), 0, 2}}, {}};
  EXPECT_THROW(validate_network({a, b}, to_non_input), NetworkError);
  Wiring bad_drive{{Edge{SignalRef::drive(0), 0, 0}, Edge{SignalRef::output(0, 1), 1, 1}}, {SquareWave{-1, 1, 0}}};
  EXPECT_THROW(validate_network({a, b}, bad_drive), NetworkError);
  auto overlap = make_node("C", inst.problem, SolverKind::Mem, 3, {0}, {0});
  EXPECT_THROW(validate_network({overlap}, Wiring{{Edge{SignalRef::output(0, 0), 0, 0}}, {}}), NetworkError);
}

TEST(Groups, ConnectedComponents) {
  Wiring w{{Edge{SignalRef::output(2, 0), 0, 0}, Edge{SignalRef::drive(0), 1, 0}}, {SquareWave{}}};
  const auto g = network_groups(3, w);
  ASSERT_EQ(g.size(), 2u);
  EXPECT_EQ(g[0], (std::vector<std::size_t>{0, 2}));
  EXPECT_EQ(g[1], (std::vector<std::size_t>{1}));
}

TEST(Network, DisconnectedEqualsIndependentRuns) {
  const auto x = gen_xorsat_3r(12, 3);
  const auto b = gen_barthel({15, 4.3, 0.08, 4});
  std::vector<SolverNode> nodes{make_node("X", x.problem, SolverKind::Analog, 5),
                                make_node("B", b.problem, SolverKind::Mem, 6),
                                make_node("C", b.problem, SolverKind::Analog, 7)};
  NetworkConfig cfg;
  cfg.integrator.t_ev = 40;
  const auto res = simulate_network(nodes, Wiring{}, cfg);
  ASSERT_EQ(res.groups.size(), 3u);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const auto solo = run(*nodes[i].problem, nodes[i].solver, cfg.integrator, nodes[i].seed);
    expect_same_record(res.records[i], solo);
  }
}

TEST(Network, DrivenInputTracksSource) {
  const auto inst = gen_xorsat_3r(10, 8);
  auto node = make_node("D", inst.problem, SolverKind::Mem, 1, {0}, {});
  node.solver.mem.alpha = 0.0;
  const SquareWave w{-1, 1, 4, 0.5, 0};
  NetworkConfig cfg;
  cfg.integrator.t_ev = 20;
  cfg.stop_when_all_solved = false;
  const auto res = simulate_network({node}, Wiring{{Edge{SignalRef::drive(0), 0, 0}}, {w}}, cfg);
  const auto &traj = res.records[0].trajectory;
  ASSERT_GT(traj.size(), 150u);
  EXPECT_EQ(traj.back().t, 20.0);
  for (const auto &row : traj) EXPECT_EQ(row.state[0], eval_drive(w, row.t)) << "t=" << row.t;
  for (const auto &row : traj)
    for (std::size_t i = 0; i < 10; ++i) {
      EXPECT_GE(row.state[i], -1.0);
      EXPECT_LE(row.state[i], 1.0);
    }
}

TEST(Network, RingCopiesInputsFromOutputs) {
  const auto inst = gen_xorsat_3r(10, 4);
  std::vector<SolverNode> nodes{make_node("A", inst.problem, SolverKind::Mem, 1, {0}, {1}),
                                make_node("B", inst.problem, SolverKind::Mem, 2, {1}, {0})};
  Wiring w{{Edge{SignalRef::output(1, 0), 0, 0}, Edge{SignalRef::output(0, 1), 1, 1}}, {}};
  NetworkConfig cfg;
  cfg.integrator.t_ev = 10;
  cfg.stop_when_all_solved = false;
  const auto res = simulate_network(nodes, w, cfg);
  ASSERT_EQ(res.groups.size(), 1u);
  const auto &ta = res.records[0].trajectory, &tb = res.records[1].trajectory;
  ASSERT_EQ(ta.size(), tb.size());
  // One shared clock; each input equals the partner's output at the same sample.
  for (std::size_t k = 0; k < ta.size(); ++k) {
    EXPECT_EQ(ta[k].t, tb[k].t);
    EXPECT_EQ(ta[k].state[0], tb[k].state[0]);
    EXPECT_EQ(tb[k].state[1], ta[k].state[1]);
  }
}

TEST(Network, SquareWaveGatesSolvability) {
  // Unique solution with x1 = FALSE: solvable only while the drive is low.
  std::uint64_t s = 30;
  while (gf2_rank(gen_xorsat_3r(10, s).equations, 10) < 10) ++s;
  auto inst = gen_xorsat_3r(10, s);
  if (inst.plant[0]) inst = flip_variable(inst, 0);
  const SquareWave w{-1, 1, 40, 0.5, 0};
  NetworkConfig cfg;
  cfg.integrator.t_ev = 160;
  cfg.stop_when_all_solved = false;
  std::size_t low_solves = 0;
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const auto node = make_node("D", inst.problem, SolverKind::Mem, seed, {0}, {});
    const auto res = simulate_network({node}, Wiring{{Edge{SignalRef::drive(0), 0, 0}}, {w}}, cfg);
    bool solved_low = false;
    for (const auto &row : res.records[0].trajectory) {
      if (eval_drive(w, row.t) > 0) {
        EXPECT_GT(row.contrd, 0u) << "seed " << seed << " t=" << row.t;
      } else {
        solved_low = solved_low || row.contrd == 0;
      }
    }
    low_solves += solved_low;
  }
  EXPECT_GE(low_solves, 1u);
}
