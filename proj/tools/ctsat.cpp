// Command-line front end: instance generation, single runs, netlists,
// oracle checks, networks, batch experiments, and plot data.

#include <cstring>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "ctsat/harness.hpp"
#include "ctsat/netlist.hpp"

namespace fs = std::filesystem;
using namespace ctsat;

namespace {

struct Defaults {
  SolverSpec analog, mem;
  IntegratorConfig integrator;
  std::uint64_t seed = 1;
  std::string out_dir = ".";
  double ratio = 4.3, p0 = 0.08;
};

// Reads the defaults file named by --config, if any. For `network`, only a
// --config given before the subcommand is a defaults file.
Defaults load_defaults(int argc, char **argv) {
  Defaults d;
  d.analog.kind = SolverKind::Analog;
  d.mem.kind = SolverKind::Mem;
  std::optional<std::string> path;
  bool in_network = false;
  for (int i = 1; i < argc; ++i) {
    std::string a = argv[i];
    if (a == "network") in_network = true;
    if (in_network) continue;
    if (a == "--config" && i + 1 < argc) path = argv[++i];
    else if (a.rfind("--config=", 0) == 0) path = a.substr(9);
  }
  if (!path) return d;
  std::ifstream in(*path);
  if (!in) throw std::runtime_error("cannot open config " + *path);
  const json j = json::parse(in);
  if (j.contains("solver")) {
    update_from_json(d.analog, j.at("solver"));
    update_from_json(d.mem, j.at("solver"));
    d.analog.kind = SolverKind::Analog;
    d.mem.kind = SolverKind::Mem;
  }
  if (j.contains("integrator")) update_from_json(d.integrator, j.at("integrator"));
  d.seed = j.value("seed", d.seed);
  d.out_dir = j.value("out_dir", d.out_dir);
  if (j.contains("generator")) {
    d.ratio = j.at("generator").value("ratio", d.ratio);
    d.p0 = j.at("generator").value("p0", d.p0);
  }
  return d;
}

void add_analog_flags(CLI::App *app, SolverSpec &s) {
  app->add_flag("--eighth-factor,!--no-eighth-factor", s.analog.include_one_eighth_factor,
                "keep the 1/8 prefactor of K_m")
      ->capture_default_str();
  app->add_option_function<std::string>(
         "--aux-mode", [&s](const std::string &v) { s.analog.aux_mode = aux_mode_from_string(v); },
         "aux dynamics")
      ->check(CLI::IsMember({"aK2", "aK", "K", "K2"}))
      ->default_str(std::string(to_string(s.analog.aux_mode)));
}

void add_mem_flags(CLI::App *app, SolverSpec &s) {
  app->add_option("--alpha", s.mem.alpha)->capture_default_str();
  app->add_option("--beta", s.mem.beta)->capture_default_str();
  app->add_option("--gamma", s.mem.gamma)->capture_default_str();
  app->add_option("--delta", s.mem.delta)->capture_default_str();
  app->add_option("--epsilon", s.mem.epsilon)->capture_default_str();
  app->add_option("--zeta", s.mem.zeta)->capture_default_str();
  app->add_flag("--clamp-v,!--no-clamp-v", s.mem_options.clamp_v, "hold v inside [-1,1]")->capture_default_str();
  app->add_option_function<std::string>(
         "--r-ties", [&s](const std::string &v) { s.mem_options.r_ties = r_tie_policy_from_string(v); },
         "rigidity on tied minima")
      ->check(CLI::IsMember({"all", "lowest"}))
      ->default_str(std::string(to_string(s.mem_options.r_ties)));
}

void add_integrator_flags(CLI::App *app, IntegratorConfig &c) {
  app->add_option("--t-ev", c.t_ev, "evaluation horizon")->capture_default_str();
  app->add_option_function<std::string>(
         "--method", [&c](const std::string &v) { c.stepper.method = method_from_string(v); }, "stepper")
      ->check(CLI::IsMember({"dopri45", "euler"}))
      ->default_str(std::string(to_string(c.stepper.method)));
  app->add_option("--tol", c.stepper.error_tol, "local error tolerance")->capture_default_str();
  app->add_option("--dt-init", c.stepper.dt_init)->capture_default_str();
  app->add_option("--dt-min", c.stepper.dt_min)->capture_default_str();
  app->add_option("--dt-max", c.stepper.dt_max)->capture_default_str();
  app->add_option("--max-steps", c.stepper.max_steps)->capture_default_str();
  app->add_option("--sample-interval", c.sample_interval)->capture_default_str();
  app->add_option("--solve-window", c.solve_window)->capture_default_str();
  app->add_option("--zero-eps", c.zero_eps)->capture_default_str();
  app->add_option("--zero-window", c.zero_window)->capture_default_str();
}

void print_record(const std::string &name, const RunRecord &r) {
  std::cout << name << ": " << to_string(r.outcome) << " t=" << r.t_outcome;
  if (r.aborted) std::cout << " aborted (" << r.diagnostic << ")";
  std::cout << " steps=" << r.stats.accepted << "/" << r.stats.rejected << '\n';
}

std::vector<std::uint32_t> to_zero_based(const std::vector<std::uint32_t> &v) {
  std::vector<std::uint32_t> out;
  for (auto x : v) {
    if (x == 0) throw std::invalid_argument("variable indices are 1-based");
    out.push_back(x - 1);
  }
  return out;
}

} // namespace

int main(int argc, char **argv) {
  Defaults d;
  try {
    d = load_defaults(argc, argv);
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }

  CLI::App app{"continuous-time SAT solvers: analog SAT and memcomputing dynamics"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string config_path;
  app.add_option("--config", config_path, "JSON file overriding defaults");
  app.add_option("--seed", d.seed, "seed")->capture_default_str();
  app.add_option("--out-dir", d.out_dir, "output directory")->capture_default_str();

  // gen
  auto *gen = app.add_subcommand("gen", "generate a planted instance");
  gen->require_subcommand(1);
  std::size_t gen_n = 20;
  std::string gen_out;
  auto *gb = gen->add_subcommand("barthel", "planted 3-SAT with tunable hardness");
  gb->add_option("--n", gen_n, "variables")->capture_default_str();
  gb->add_option("--ratio", d.ratio, "clauses per variable")->capture_default_str();
  gb->add_option("--p0", d.p0, "weight of fully satisfied clauses")->capture_default_str();
  gb->add_option("--out", gen_out, "DIMACS path");
  auto *gx = gen->add_subcommand("xorsat", "3-regular 3-XORSAT");
  gx->add_option("--n", gen_n, "variables")->capture_default_str();
  gx->add_option("--out", gen_out, "DIMACS path");

  // solve
  auto *solve = app.add_subcommand("solve", "integrate one solver on one instance");
  std::string solve_in, solve_kind = "mem";
  bool no_states = false;
  SolverSpec solve_analog = d.analog, solve_mem = d.mem;
  IntegratorConfig solve_cfg = d.integrator;
  solve->add_option("--in", solve_in, "DIMACS file")->required();
  solve->add_option("--solver", solve_kind, "analog or mem")->capture_default_str();
  solve->add_flag("--no-states", no_states, "record contra/contrd only");
  add_analog_flags(solve, solve_analog);
  add_mem_flags(solve, solve_mem);
  add_integrator_flags(solve, solve_cfg);

  // netlist
  auto *net = app.add_subcommand("netlist", "write a SPICE deck");
  std::string net_in, net_out, net_kind = "mem", subckt_name;
  std::vector<std::uint32_t> sub_inputs, sub_outputs;
  bool no_contrd = false, random_ic = false;
  NetlistOptions nopt;
  nopt.analog = d.analog.analog;
  nopt.mem = d.mem.mem;
  nopt.mem_options = d.mem.mem_options;
  nopt.t_ev = d.integrator.t_ev;
  SolverSpec net_spec_a = d.analog, net_spec_m = d.mem;
  net->add_option("--in", net_in, "DIMACS file")->required();
  net->add_option("--out", net_out, "netlist path (stdout when absent)");
  net->add_option("--solver", net_kind, "analog or mem")->capture_default_str();
  net->add_option("--t-ev", nopt.t_ev, "transient length")->capture_default_str();
  net->add_option("--shunt", nopt.shunt_resistance, "shunt resistance per node")->capture_default_str();
  net->add_flag("--random-ic", random_ic, "start from the simulator's random source instead of explicit values");
  net->add_option("--subckt", subckt_name, "emit a .subckt block with this name");
  net->add_option("--inputs", sub_inputs, "1-based input variables")->delimiter(',');
  net->add_option("--outputs", sub_outputs, "1-based output variables")->delimiter(',');
  net->add_flag("--no-contrd", no_contrd, "omit the contrd pin");
  add_analog_flags(net, net_spec_a);
  add_mem_flags(net, net_spec_m);

  // oracle
  auto *orc = app.add_subcommand("oracle", "decide satisfiability exactly");
  std::string orc_in, orc_method = "auto";
  orc->add_option("--in", orc_in, "DIMACS file")->required();
  orc->add_option("--method", orc_method, "auto, exhaustive, dpll")->capture_default_str();

  // network
  auto *netw = app.add_subcommand("network", "simulate coupled solvers");
  std::string net_config;
  netw->add_option("--config", net_config, "network JSON")->required();

  // bench
  auto *bench = app.add_subcommand("bench", "batch experiment over families and sizes");
  std::vector<std::string> families{"B4.3", "B7", "X"}, solvers{"analog", "mem"};
  std::vector<std::size_t> sizes{10, 20, 30, 40, 50};
  std::size_t per_cell = 10, workers = 0;
  bool keep = false;
  SolverSpec bench_analog = d.analog, bench_mem = d.mem;
  IntegratorConfig bench_cfg = d.integrator;
  bench_cfg.record_states = true;
  bench_analog.analog.include_one_eighth_factor = false;
  bench->add_option("--families", families, "B4.3, B7, X")->delimiter(',');
  bench->add_option("--sizes", sizes)->delimiter(',');
  bench->add_option("--instances", per_cell, "instances per cell")->capture_default_str();
  bench->add_option("--solvers", solvers, "analog, mem")->delimiter(',');
  bench->add_option("--workers", workers, "0 = hardware threads")->capture_default_str();
  bench->add_flag("--keep-trajectories", keep);
  add_analog_flags(bench, bench_analog);
  add_mem_flags(bench, bench_mem);
  add_integrator_flags(bench, bench_cfg);

  // plotdata
  auto *plot = app.add_subcommand("plotdata", "tidy CSV from saved runs");
  std::vector<std::string> plot_runs;
  std::string plot_sel = "contrd", plot_out;
  plot->add_option("--run", plot_runs, "run stem (stem.json + stem.csv); repeatable")->required();
  plot->add_option("--select", plot_sel, "contra, contrd, s:*, a:3, v:1-4, xs:*, xl:*")->capture_default_str();
  plot->add_option("--out", plot_out, "CSV path (stdout when absent)");

  CLI11_PARSE(app, argc, argv);

  try {
    const fs::path out_dir = d.out_dir;
    if (*gen) {
      const bool barthel = gb->parsed();
      PlantedInstance inst = barthel ? gen_barthel({gen_n, d.ratio, d.p0, d.seed}) : gen_xorsat_3r(gen_n, d.seed);
      const std::string family = barthel ? "barthel" : "xorsat";
      fs::path path = gen_out.empty() ? out_dir / (family + "_N" + std::to_string(gen_n) + "_s" +
                                                   std::to_string(d.seed) + ".cnf")
                                      : fs::path(gen_out);
      if (path.has_parent_path()) fs::create_directories(path.parent_path());
      json params = barthel ? json{{"ratio", d.ratio}, {"p0", d.p0}} : json{{"rank", gf2_rank(inst.equations, gen_n)}};
      save_text(path, write_dimacs(inst.problem, {family + " N=" + std::to_string(gen_n) + " seed=" +
                                                  std::to_string(d.seed)}));
      fs::path side = path;
      side.replace_extension(".json");
      save_text(side, plant_sidecar(inst, family, d.seed, params).dump(2) + "\n");
      std::cout << path.string() << '\n';
    } else if (*solve) {
      const auto kind = solver_kind_from_string(solve_kind);
      SolverSpec spec = kind == SolverKind::Analog ? solve_analog : solve_mem;
      spec.kind = kind;
      solve_cfg.record_states = !no_states;
      const Problem p = load_dimacs(solve_in);
      const RunRecord r = run(p, spec, solve_cfg, d.seed);
      fs::create_directories(out_dir);
      const auto stem = out_dir / (fs::path(solve_in).stem().string() + "_" + std::string(to_string(kind)));
      save_run(stem, r);
      print_record(stem.string(), r);
      return r.outcome == Outcome::Solved ? 0 : 1;
    } else if (*net) {
      const auto kind = solver_kind_from_string(net_kind);
      nopt.analog = net_spec_a.analog;
      nopt.mem = net_spec_m.mem;
      nopt.mem_options = net_spec_m.mem_options;
      nopt.explicit_ic = !random_ic;
      nopt.seed = d.seed;
      if (!subckt_name.empty() || !sub_inputs.empty() || !sub_outputs.empty())
        nopt.subcircuit = SubcircuitSpec{subckt_name.empty() ? "SOLVER" : subckt_name, to_zero_based(sub_inputs),
                                         to_zero_based(sub_outputs), !no_contrd};
      const Problem p = load_dimacs(net_in);
      const auto doc = kind == SolverKind::Analog ? emit_analog(p, nopt) : emit_mem(p, nopt);
      const auto text = serialize(doc);
      if (net_out.empty()) std::cout << text;
      else save_text(net_out, text);
    } else if (*orc) {
      const Problem p = load_dimacs(orc_in);
      const bool exhaustive =
          orc_method == "exhaustive" || (orc_method == "auto" && p.num_vars() <= kExhaustiveMaxVars);
      if (orc_method != "auto" && orc_method != "exhaustive" && orc_method != "dpll")
        throw std::invalid_argument("unknown oracle method " + orc_method);
      const auto res = exhaustive ? solve_exhaustive(p) : solve_dpll(p);
      std::cout << "s " << (res.satisfiable ? "SATISFIABLE" : "UNSATISFIABLE") << '\n';
      if (res.witness) {
        std::cout << 'v';
        for (std::size_t i = 0; i < p.num_vars(); ++i) std::cout << ' ' << ((*res.witness)[i] ? "" : "-") << i + 1;
        std::cout << " 0\n";
      }
      return res.satisfiable ? 10 : 20;
    } else if (*netw) {
      std::ifstream in(net_config);
      if (!in) throw std::runtime_error("cannot open " + net_config);
      const auto setup = network_from_json(json::parse(in), fs::path(net_config).parent_path());
      const auto res = simulate_network(setup.nodes, setup.wiring, setup.config);
      fs::create_directories(out_dir / "runs");
      json summary{{"groups", json::array()}};
      for (std::size_t g = 0; g < res.groups.size(); ++g) {
        json names = json::array();
        for (auto n : res.groups[g]) names.push_back(setup.nodes[n].name);
        summary["groups"].push_back(json{{"nodes", names}, {"jointly_solved", bool(res.joint_solved[g])}});
      }
      for (std::size_t i = 0; i < setup.nodes.size(); ++i) {
        save_run(out_dir / "runs" / setup.nodes[i].name, res.records[i]);
        print_record(setup.nodes[i].name, res.records[i]);
      }
      save_text(out_dir / "network.json", summary.dump(2) + "\n");
      std::cout << "jointly solved: " << (res.all_jointly_solved() ? "yes" : "no") << '\n';
      return res.all_jointly_solved() ? 0 : 1;
    } else if (*bench) {
      ExperimentPlan plan;
      plan.families.clear();
      for (const auto &f : families) plan.families.push_back(family_from_string(f));
      plan.sizes = sizes;
      plan.instances_per_cell = per_cell;
      plan.solvers.clear();
      for (const auto &s : solvers) {
        const auto kind = solver_kind_from_string(s);
        SolverSpec spec = kind == SolverKind::Analog ? bench_analog : bench_mem;
        spec.kind = kind;
        plan.solvers.push_back({std::string(to_string(kind)), spec});
      }
      plan.integrator = bench_cfg;
      plan.seed_base = d.seed;
      plan.p0 = d.p0;
      plan.workers = workers;
      plan.keep_trajectories = keep;
      plan.out_dir = out_dir;
      const auto res = run_experiment(plan);
      std::cout << res.table.to_markdown();
    } else if (*plot) {
      std::vector<RunRecord> recs;
      for (const auto &r : plot_runs) recs.push_back(load_run(r));
      std::vector<std::pair<std::string, const RunRecord *>> refs;
      for (std::size_t i = 0; i < recs.size(); ++i)
        refs.emplace_back(recs.size() > 1 ? fs::path(plot_runs[i]).filename().string() : "", &recs[i]);
      if (plot_out.empty()) emit_plot_data(std::cout, refs, plot_sel);
      else {
        std::ofstream out(plot_out);
        if (!out) throw std::runtime_error("cannot write " + plot_out);
        emit_plot_data(out, refs, plot_sel);
      }
    }
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
