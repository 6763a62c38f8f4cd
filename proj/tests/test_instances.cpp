#include <gtest/gtest.h>

#include <cmath>

#include "ctsat/instances.hpp"

using namespace ctsat;

namespace {
Clause C(long long a, long long b, long long c) { return Clause::from_dimacs(a, b, c); }
} // namespace

TEST(XorToCnf, OddParity) {
  XorEquation eq{{0, 1, 2}, {false, false, false}, true};
  const auto cs = xor_to_cnf(eq);
  EXPECT_EQ(cs[0], C(1, 2, 3));
  EXPECT_EQ(cs[1], C(1, -2, -3));
  EXPECT_EQ(cs[2], C(-1, 2, -3));
  EXPECT_EQ(cs[3], C(-1, -2, 3));
}

TEST(XorToCnf, EvenParity) {
  XorEquation eq{{0, 1, 2}, {false, false, false}, false};
  const auto cs = xor_to_cnf(eq);
  EXPECT_EQ(cs[0], C(1, 2, -3));
  EXPECT_EQ(cs[1], C(1, -2, 3));
  EXPECT_EQ(cs[2], C(-1, 2, 3));
  EXPECT_EQ(cs[3], C(-1, -2, -3));
}

TEST(XorToCnf, ExhaustiveEquivalence) {
  for (int mask = 0; mask < 16; ++mask) {
    XorEquation eq{{2, 0, 1}, {bool(mask & 1), bool(mask & 2), bool(mask & 4)}, bool(mask & 8)};
    const auto cs = xor_to_cnf(eq);
    for (int x = 0; x < 8; ++x) {
      Assignment a(3);
      for (int i = 0; i < 3; ++i) a.set(i, (x >> i) & 1);
      bool all = true;
      for (const auto &c : cs) all = all && clause_satisfied(c, a);
      EXPECT_EQ(all, eq.holds(a)) << "mask " << mask << " x " << x;
    }
  }
}

TEST(XorToCnf, RepeatedVariable) {
  EXPECT_THROW(xor_to_cnf(XorEquation{{1, 1, 2}, {}, false}), GeneratorError);
}

TEST(Barthel, RatioSeven) {
  const auto inst = gen_barthel({10, 7.0, 0.08, 3});
  EXPECT_EQ(inst.problem.num_clauses(), 70u);
  EXPECT_EQ(count_unsatisfied(inst.problem, inst.plant), 0u);
}

TEST(Barthel, RatioFourPointThree) {
  const auto inst = gen_barthel({40, 4.3, 0.08, 11});
  EXPECT_EQ(inst.problem.num_clauses(), 172u);
  EXPECT_EQ(count_unsatisfied(inst.problem, inst.plant), 0u);
}

TEST(Barthel, WeightsNormalisedAndBalanced) {
  for (double p0 : {0.0, 0.08, 0.2, 0.25}) {
    const auto w = BarthelWeights::from_p0(p0);
    EXPECT_NEAR(w.p0 + 3 * w.p1 + 3 * w.p2, 1.0, 1e-15);
    EXPECT_NEAR(w.p2, w.p0 + w.p1, 1e-15);
    EXPECT_GE(w.p1, 0.0);
  }
  // Reference values at p0 = 0.08: p1 = 0.68/6, p2 = 1.16/6.
  const auto w = BarthelWeights::from_p0(0.08);
  EXPECT_NEAR(w.p1, 0.11333333333333333, 1e-15);
  EXPECT_NEAR(w.p2, 0.19333333333333333, 1e-15);
}

TEST(Barthel, PatternFrequencies) {
  // Seven patterns keyed by which literal positions the plant satisfies.
  const double p0 = 0.08, p1 = 0.68 / 6, p2 = 1.16 / 6;
  const double expected[8] = {0, p2, p2, p1, p2, p1, p1, p0};
  std::array<std::size_t, 8> counts{};
  std::size_t total = 0, sat_lits = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto inst = gen_barthel({1000, 10.0, 0.08, 500 + seed});
    for (const auto &c : inst.problem.clauses()) {
      int key = 0;
      for (int j = 0; j < 3; ++j)
        if (c[j].satisfied_by(inst.plant[c[j].var])) {
          key |= 1 << j;
          ++sat_lits;
        }
      ++counts[key];
      ++total;
    }
  }
  ASSERT_EQ(total, 100000u);
  EXPECT_EQ(counts[0], 0u);
  double chi2 = 0.0;
  for (int k = 1; k < 8; ++k) {
    const double mean = expected[k] * total, sd = std::sqrt(total * expected[k] * (1 - expected[k]));
    EXPECT_LT(std::abs(counts[k] - mean), 3 * sd) << "pattern " << k;
    chi2 += (counts[k] - mean) * (counts[k] - mean) / mean;
  }
  EXPECT_LT(chi2, 22.458); // chi-square, 6 dof, p = 0.001
  const double frac = double(sat_lits) / (3.0 * total);
  EXPECT_LT(std::abs(frac - 0.5), 3 * std::sqrt(0.25 / (3.0 * total)) * 2);
}

TEST(Barthel, PlantAlwaysSatisfies) {
  for (std::uint64_t s = 0; s < 50; ++s) {
    const auto inst = gen_barthel({10 + s, s % 2 ? 7.0 : 4.3, 0.08, s});
    EXPECT_EQ(count_unsatisfied(inst.problem, inst.plant), 0u);
  }
}

TEST(Barthel, Deterministic) {
  const auto a = gen_barthel({30, 4.3, 0.08, 9}), b = gen_barthel({30, 4.3, 0.08, 9});
  EXPECT_EQ(a.problem, b.problem);
  EXPECT_EQ(a.plant, b.plant);
  EXPECT_NE(gen_barthel({30, 4.3, 0.08, 10}).problem, a.problem);
}

TEST(Barthel, InvalidParams) {
  EXPECT_THROW(gen_barthel({2, 4.3, 0.08, 1}), GeneratorError);
  EXPECT_THROW(gen_barthel({10, 4.3, 0.3, 1}), GeneratorError);
  EXPECT_THROW(gen_barthel({10, 4.3, -0.1, 1}), GeneratorError);
}

TEST(Xorsat, TenVariables) {
  const auto inst = gen_xorsat_3r(10, 4);
  EXPECT_EQ(inst.equations.size(), 10u);
  EXPECT_EQ(inst.problem.num_clauses(), 40u);
  std::vector<int> deg(10, 0);
  for (const auto &c : inst.problem.clauses())
    for (const auto &l : c) ++deg[l.var];
  for (int d : deg) EXPECT_EQ(d, 12);
}

TEST(Xorsat, RegularityAndPlant) {
  for (std::uint64_t s = 0; s < 40; ++s) {
    const std::size_t n = 4 + s;
    const auto inst = gen_xorsat_3r(n, s);
    EXPECT_EQ(inst.problem.num_clauses(), 4 * n);
    std::vector<int> eq_deg(n, 0);
    for (const auto &eq : inst.equations) {
      EXPECT_TRUE(eq.holds(inst.plant));
      for (auto v : eq.vars) ++eq_deg[v];
    }
    for (int d : eq_deg) EXPECT_EQ(d, 3);
    EXPECT_EQ(count_unsatisfied(inst.problem, inst.plant), 0u);
    EXPECT_LE(gf2_rank(inst.equations, n), n);
  }
  EXPECT_EQ(gen_xorsat_3r(20, 1).problem.num_clauses(), 80u);
}

TEST(Xorsat, InvalidSize) { EXPECT_THROW(gen_xorsat_3r(3, 1), GeneratorError); }

TEST(Xorsat, RetryBudget) { EXPECT_THROW(gen_xorsat_3r(4, 1, 0), GeneratorError); }

TEST(Gf2Rank, SmallSystems) {
  std::vector<XorEquation> eqs{{{0, 1, 2}, {}, false}, {{0, 1, 2}, {}, true}, {{1, 2, 3}, {}, false}};
  EXPECT_EQ(gf2_rank(eqs, 4), 2u);
}

TEST(FlipVariable, KeepsPlantSatisfying) {
  const auto inst = gen_xorsat_3r(12, 5);
  const auto f = flip_variable(inst, 3);
  EXPECT_EQ(count_unsatisfied(f.problem, f.plant), 0u);
  EXPECT_NE(f.plant[3], inst.plant[3]);
  for (const auto &eq : f.equations) EXPECT_TRUE(eq.holds(f.plant));
}
