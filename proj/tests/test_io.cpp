#include <gtest/gtest.h>

#include <filesystem>

#include "ctsat/instances.hpp"
#include "ctsat/io.hpp"

using namespace ctsat;
namespace fs = std::filesystem;

namespace {
fs::path scratch(const std::string &name) {
  auto d = fs::temp_directory_path() / ("ctsat_io_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}
} // namespace

TEST(Json, SolverSpecRoundTrip) {
  SolverSpec s;
  s.kind = SolverKind::Analog;
  s.analog = AnalogOptions{false, AuxMode::K2};
  s.mem.alpha = 0.0;
  s.mem.zeta = 0.02;
  s.mem_options = MemOptions{false, RTiePolicy::LowestIndex};
  SolverSpec back;
  update_from_json(back, to_json_value(s));
  EXPECT_EQ(back.kind, s.kind);
  EXPECT_EQ(back.analog.include_one_eighth_factor, false);
  EXPECT_EQ(back.analog.aux_mode, AuxMode::K2);
  EXPECT_EQ(back.mem.alpha, 0.0);
  EXPECT_EQ(back.mem.zeta, 0.02);
  EXPECT_FALSE(back.mem_options.clamp_v);
  EXPECT_EQ(back.mem_options.r_ties, RTiePolicy::LowestIndex);
}

TEST(Json, PartialOverride) {
  IntegratorConfig c;
  update_from_json(c, json{{"t_ev", 50.0}, {"method", "euler"}});
  EXPECT_EQ(c.t_ev, 50.0);
  EXPECT_EQ(c.stepper.method, Method::Euler);
  EXPECT_EQ(c.sample_interval, 0.1);
  SolverSpec s;
  update_from_json(s, json{{"mem", {{"beta", 30.0}}}});
  EXPECT_EQ(s.mem.beta, 30.0);
  EXPECT_EQ(s.mem.alpha, 5.0);
  EXPECT_THROW(update_from_json(s, json{{"kind", "quantum"}}), std::invalid_argument);
}

TEST(Doubles, ShortestRoundTrip) {
  for (double x : {0.1, 1.0 / 3.0, -2.5e-300, 123456.789, 0.0}) {
    const auto s = format_double(x);
    EXPECT_EQ(std::stod(s), x) << s;
  }
}

TEST(RunFiles, SaveAndLoad) {
  const auto inst = gen_barthel({12, 4.3, 0.08, 3});
  SolverSpec spec;
  IntegratorConfig cfg;
  cfg.t_ev = 20;
  const auto rec = run(inst.problem, spec, cfg, 9);
  const auto dir = scratch("run");
  save_run(dir / "r", rec);
  EXPECT_TRUE(fs::exists(dir / "r.json"));
  EXPECT_TRUE(fs::exists(dir / "r.csv"));
  const auto back = load_run(dir / "r");
  EXPECT_EQ(back.seed, rec.seed);
  EXPECT_EQ(back.outcome, rec.outcome);
  EXPECT_EQ(back.t_outcome, rec.t_outcome);
  EXPECT_EQ(back.assignment, rec.assignment);
  EXPECT_EQ(back.num_vars, 12u);
  EXPECT_EQ(back.num_clauses, rec.num_clauses);
  EXPECT_EQ(back.stats.accepted, rec.stats.accepted);
  ASSERT_EQ(back.trajectory.size(), rec.trajectory.size());
  for (std::size_t i = 0; i < rec.trajectory.size(); ++i) {
    EXPECT_EQ(back.trajectory[i].t, rec.trajectory[i].t);
    EXPECT_EQ(back.trajectory[i].contra, rec.trajectory[i].contra);
    EXPECT_EQ(back.trajectory[i].contrd, rec.trajectory[i].contrd);
    EXPECT_EQ(back.trajectory[i].state, rec.trajectory[i].state);
  }
  const auto meta = json::parse(std::ifstream(dir / "r.json"));
  EXPECT_EQ(meta.at("readout").get<std::string>(), std::string(kReadoutConvention));
}

TEST(RunFiles, CsvHeader) {
  const auto inst = gen_barthel({4, 4.3, 0.08, 3});
  IntegratorConfig cfg;
  cfg.t_ev = 0.2;
  const auto rec = run(inst.problem, SolverSpec{}, cfg, 1);
  std::ostringstream out;
  write_trajectory_csv(out, rec);
  const auto text = out.str();
  EXPECT_EQ(text.substr(0, text.find('\n')), "t,contra,contrd,v1,v2,v3,v4," + [&] {
    std::string s;
    for (std::size_t k = 1; k <= rec.num_clauses; ++k) s += "xs" + std::to_string(k) + ",";
    for (std::size_t k = 1; k <= rec.num_clauses; ++k) s += "xl" + std::to_string(k) + (k < rec.num_clauses ? "," : "");
    return s;
  }());
}

TEST(Dimacs, FileHelpers) {
  const auto dir = scratch("dimacs");
  const auto inst = gen_xorsat_3r(8, 2);
  save_text(dir / "x.cnf", write_dimacs(inst.problem));
  EXPECT_EQ(load_dimacs(dir / "x.cnf"), inst.problem);
  EXPECT_THROW(load_dimacs(dir / "missing.cnf"), std::runtime_error);
  const auto side = plant_sidecar(inst, "xorsat", 2);
  EXPECT_EQ(side.at("plant").get<std::string>(), inst.plant.to_bits());
  EXPECT_EQ(side.at("equations").size(), 8u);
}
