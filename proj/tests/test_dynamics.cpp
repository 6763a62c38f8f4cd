#include <gtest/gtest.h>

#include <cmath>

#include "ctsat/dynamics.hpp"
#include "ctsat/instances.hpp"

using namespace ctsat;

namespace {

const Problem kOne(3, {Clause::from_dimacs(1, 2, 3)});

// Energy written out from the clause literals, independent of the library.
double naive_energy(const Problem &p, const std::vector<double> &s, const std::vector<double> &a, double pre) {
  double v = 0;
  for (std::size_t m = 0; m < p.num_clauses(); ++m) {
    double k = pre;
    for (const auto &l : p.clause(m)) k *= 1.0 - (l.sign > 0 ? s[l.var] : -s[l.var]);
    v += a[m] * k * k;
  }
  return v;
}

} // namespace

TEST(KmFactor, Examples) {
  const std::vector<double> s1{1, -0.3, 0.7}, s2{-1, -1, -1}, s3{0, 0, 0};
  EXPECT_EQ(k_m(kOne, 0, s1), 0.0);
  EXPECT_EQ(k_m(kOne, 0, s2), 1.0);
  EXPECT_EQ(k_m(kOne, 0, s2, false), 8.0);
  EXPECT_EQ(k_m(kOne, 0, s3), 0.125);
}

TEST(AnalogRhs, Midpoint) {
  const auto d = analog_rhs(kOne, AnalogSatState{{0, 0, 0}, {1}});
  for (double x : d.ds) EXPECT_NEAR(x, 0.03125, 1e-15);
  EXPECT_NEAR(d.da[0], 0.015625, 1e-15);
}

TEST(AnalogRhs, SatisfyingCornerIsFixed) {
  const auto d = analog_rhs(kOne, AnalogSatState{{1, -0.4, 0.2}, {3.0}});
  for (double x : d.ds) EXPECT_EQ(x, 0.0);
  EXPECT_EQ(d.da[0], 0.0);
  EXPECT_EQ(energy(kOne, AnalogSatState{{1, -0.4, 0.2}, {3.0}}), 0.0);
}

TEST(AnalogRhs, AuxModes) {
  const AnalogSatState st{{0, 0, 0}, {2.0}};
  auto da = [&](AuxMode m) { return analog_rhs(kOne, st, AnalogOptions{true, m}).da[0]; };
  EXPECT_NEAR(da(AuxMode::AK2), 2.0 / 64, 1e-15);
  EXPECT_NEAR(da(AuxMode::AK), 2.0 / 8, 1e-15);
  EXPECT_NEAR(da(AuxMode::K), 1.0 / 8, 1e-15);
  EXPECT_NEAR(da(AuxMode::K2), 1.0 / 64, 1e-15);
}

TEST(AnalogRhs, GradientIdentity) {
  Rng rng(42);
  const double h = 1e-5;
  for (int sample = 0; sample < 50; ++sample) {
    const std::size_t n = 5 + rng.below(20);
    const auto inst = gen_barthel({n, 2.0 + 5.0 * rng.uniform01(), 0.08, rng.next()});
    const auto &p = inst.problem;
    const bool factor = sample % 2 == 0;
    AnalogSatState st;
    for (std::size_t i = 0; i < n; ++i) st.s.push_back(rng.uniform(-0.95, 0.95));
    for (std::size_t m = 0; m < p.num_clauses(); ++m) st.a.push_back(rng.uniform(0.5, 5.0));
    const auto d = analog_rhs(p, st, AnalogOptions{factor, AuxMode::AK2});
    const double pre = factor ? 0.125 : 1.0;
    double err = 0, norm = 0;
    for (std::size_t i = 0; i < n; ++i) {
      auto sp = st.s, sm = st.s;
      sp[i] += h;
      sm[i] -= h;
      const double grad = (naive_energy(p, sp, st.a, pre) - naive_energy(p, sm, st.a, pre)) / (2 * h);
      err += (d.ds[i] + grad) * (d.ds[i] + grad);
      norm += grad * grad;
    }
    EXPECT_LT(std::sqrt(err / norm), 1e-6) << "sample " << sample;
    EXPECT_NEAR(energy(p, st, AnalogOptions{factor, AuxMode::AK2}), naive_energy(p, st.s, st.a, pre),
                1e-12 * (1 + naive_energy(p, st.s, st.a, pre)));
  }
}

TEST(AnalogRhs, FiniteAtPoles) {
  const auto inst = gen_barthel({20, 4.3, 0.08, 5});
  Rng rng(1);
  for (int t = 0; t < 100; ++t) {
    AnalogSatState st;
    for (std::size_t i = 0; i < 20; ++i) st.s.push_back(rng.coin() ? 1.0 : -1.0);
    st.a.assign(inst.problem.num_clauses(), 1e6);
    const auto d = analog_rhs(inst.problem, st);
    for (double x : d.ds) EXPECT_TRUE(std::isfinite(x));
    for (double x : d.da) EXPECT_TRUE(std::isfinite(x) && x >= 0);
  }
}

TEST(AnalogRhs, MaskedAtBounds) {
  // s1 = -1 wants to grow, s2 = +1 in the violated clause (-2 ...) wants to shrink.
  const Problem p(3, {Clause::from_dimacs(-1, -2, 3)});
  const auto d = analog_rhs(p, AnalogSatState{{1.0, 1.0, -1.0}, {1.0}});
  for (double x : d.ds) EXPECT_NE(x, 0.0);
  const auto q = analog_rhs(kOne, AnalogSatState{{-1.0, 0.2, 0.2}, {1.0}});
  EXPECT_GT(q.ds[0], 0.0);
  const Problem r(3, {Clause::from_dimacs(-1, 2, 3)});
  // The push on s1 is toward -1 and vanishes there, so the flow never leaves the box.
  EXPECT_EQ(analog_rhs(r, AnalogSatState{{-1.0, 0.2, 0.2}, {1.0}}).ds[0], 0.0);
}

TEST(Energy, Examples) {
  EXPECT_NEAR(energy(kOne, AnalogSatState{{0, 0, 0}, {1}}), 1.0 / 64, 1e-16);
}

TEST(Energy, DecreasesAlongFlow) {
  const auto inst = gen_barthel({15, 4.3, 0.08, 8});
  Rng rng(3);
  AnalogSatState st;
  for (int i = 0; i < 15; ++i) st.s.push_back(rng.uniform(-0.9, 0.9));
  st.a.assign(inst.problem.num_clauses(), 1.0);
  double prev = energy(inst.problem, st);
  for (int step = 0; step < 200; ++step) {
    const auto d = analog_rhs(inst.problem, st);
    for (int i = 0; i < 15; ++i) st.s[i] += 1e-2 * d.ds[i];
    const double now = energy(inst.problem, st);
    EXPECT_LT(now, prev);
    prev = now;
  }
}

TEST(ClauseValue, Examples) {
  const std::vector<double> a{1, -1, -1}, b{-1, -1, -1}, c{0.5, -0.2, 0.1};
  EXPECT_EQ(clause_value(kOne, 0, a), 0.0);
  EXPECT_EQ(clause_value(kOne, 0, b), 1.0);
  EXPECT_DOUBLE_EQ(clause_value(kOne, 0, c), 0.25);
}

TEST(MemRhs, SatisfiedClause) {
  const auto d = mem_rhs(kOne, MemState{{1, 1, 1}, {0.5}, {1.0}});
  for (double x : d.dv) EXPECT_EQ(x, 0.0);
  EXPECT_NEAR(d.dxs[0], -2.505, 1e-12);
  EXPECT_EQ(d.dxl[0], 0.0); // at the lower bound, pushing down
}

TEST(MemRhs, FullyViolatedClause) {
  const auto d = mem_rhs(kOne, MemState{{-1, -1, -1}, {0.5}, {1.0}});
  for (double x : d.dv) EXPECT_NEAR(x, 1.005, 1e-12);
  EXPECT_NEAR(d.dxs[0], 7.515, 1e-12);
  EXPECT_NEAR(d.dxl[0], 4.75, 1e-12);
}

TEST(MemRhs, RigidityOnMinimizer) {
  const std::vector<double> v{0.9, 0.2, -0.5};
  const auto t = mem_clause_terms(kOne, 0, v);
  EXPECT_NEAR(t.c, 0.05, 1e-15);
  EXPECT_NEAR(t.r[0], 0.05, 1e-15);
  EXPECT_EQ(t.r[1], 0.0);
  EXPECT_EQ(t.r[2], 0.0);
  // G_n = q/2 * min of the other two slacks.
  EXPECT_NEAR(t.g[0], 0.5 * std::min(0.8, 1.5), 1e-15);
  EXPECT_NEAR(t.g[1], 0.5 * 0.1, 1e-15);
  EXPECT_NEAR(t.g[2], 0.5 * 0.1, 1e-15);
}

TEST(MemRhs, TiePolicies) {
  const std::vector<double> v{-1, -1, -1};
  const auto all = mem_clause_terms(kOne, 0, v, MemOptions{true, RTiePolicy::AllMinimizers});
  const auto low = mem_clause_terms(kOne, 0, v, MemOptions{true, RTiePolicy::LowestIndex});
  for (int j = 0; j < 3; ++j) EXPECT_EQ(all.r[j], 1.0);
  EXPECT_EQ(low.r[0], 1.0);
  EXPECT_EQ(low.r[1], 0.0);
  EXPECT_EQ(low.r[2], 0.0);
}

TEST(MemRhs, ClampVOption) {
  // v1 = +1 in a clause wanting it larger: masked only when clamping is on.
  const Problem p(3, {Clause::from_dimacs(1, 2, 3)});
  const MemState st{{1.0, -1.0, -1.0}, {0.5}, {1.0}};
  const auto on = mem_rhs(p, st, {}, MemOptions{true});
  const auto off = mem_rhs(p, st, {}, MemOptions{false});
  EXPECT_EQ(on.dv[0], 0.0);
  EXPECT_GT(off.dv[0], 0.0);
  EXPECT_EQ(on.dv[1], off.dv[1]);
}

TEST(MemRhs, LongMemoryUpperBound) {
  const MemState st{{-1, -1, -1}, {0.5}, {long_memory_upper(1)}};
  EXPECT_EQ(mem_rhs(kOne, st).dxl[0], 0.0);
  const MemState top{{-1, -1, -1}, {1.0}, {1.0}};
  EXPECT_EQ(mem_rhs(kOne, top).dxs[0], 0.0);
}

TEST(ClampMask, Examples) {
  EXPECT_EQ(clamp_mask(1.0, -1, 1, 0.7), 0.0);
  EXPECT_EQ(clamp_mask(1.0, -1, 1, -0.7), -0.7);
  EXPECT_EQ(clamp_mask(0.3, -1, 1, 0.4), 0.4);
  EXPECT_EQ(clamp_mask(0.3, -1, 1, -0.4), -0.4);
  EXPECT_EQ(clamp_mask(-1.0, -1, 1, -0.4), 0.0);
  EXPECT_EQ(clamp_mask(-1.0, -1, 1, 0.4), 0.4);
}

TEST(Readout, SignConvention) {
  const std::vector<double> v{0.2, -0.9, 0.0};
  EXPECT_EQ(readout(v).to_bits(), "100");
  const auto inst = gen_barthel({12, 4.3, 0.08, 2});
  std::vector<double> pm;
  for (std::size_t i = 0; i < 12; ++i) pm.push_back(inst.plant[i] ? 1.0 : -1.0);
  EXPECT_EQ(readout(pm), inst.plant);
}

TEST(ControlSignals, Examples) {
  const auto inst = gen_barthel({12, 4.3, 0.08, 2});
  std::vector<double> pm;
  for (std::size_t i = 0; i < 12; ++i) pm.push_back(inst.plant[i] ? 1.0 : -1.0);
  auto sig = control_signals(inst.problem, pm);
  EXPECT_EQ(sig.contra, 0.0);
  EXPECT_EQ(sig.contrd, 0u);

  const Problem p(3, {Clause::from_dimacs(1, 2, 3), Clause::from_dimacs(-1, 2, 3)});
  const std::vector<double> zero(3, 0.0);
  sig = control_signals(p, zero);
  EXPECT_EQ(sig.contra, 1.0);
  EXPECT_EQ(sig.contrd, 1u); // all-FALSE readout violates only the all-positive clause
}

TEST(Invariants, SquaredDriversNonNegative) {
  const auto inst = gen_xorsat_3r(10, 1);
  Rng rng(9);
  for (int t = 0; t < 200; ++t) {
    AnalogSatState st;
    for (int i = 0; i < 10; ++i) st.s.push_back(rng.uniform(-1, 1));
    for (std::size_t m = 0; m < inst.problem.num_clauses(); ++m) st.a.push_back(rng.uniform(0.1, 10));
    for (auto mode : {AuxMode::AK2, AuxMode::K2, AuxMode::AK, AuxMode::K})
      for (double x : analog_rhs(inst.problem, st, AnalogOptions{true, mode}).da) EXPECT_GE(x, 0.0);
    for (std::size_t m = 0; m < inst.problem.num_clauses(); ++m) {
      const double k = k_m(inst.problem, m, st.s);
      EXPECT_GE(k, 0.0);
      EXPECT_LE(k, 1.0);
      const double c = clause_value(inst.problem, m, st.s);
      EXPECT_GE(c, 0.0);
      EXPECT_LE(c, 1.0);
    }
  }
}
