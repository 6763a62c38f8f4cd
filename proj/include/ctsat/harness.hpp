#pragma once

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "ctsat/instances.hpp"
#include "ctsat/integrate.hpp"
#include "ctsat/io.hpp"
#include "ctsat/network.hpp"
#include "ctsat/oracle.hpp"
#include "ctsat/rng.hpp"

namespace ctsat {

enum class Family { Barthel43, Barthel7, Xorsat };

inline std::string_view to_string(Family f) {
  switch (f) {
  case Family::Barthel43: return "B4.3";
  case Family::Barthel7: return "B7";
  case Family::Xorsat: return "X";
  }
  return "?";
}

inline Family family_from_string(std::string_view s) {
  if (s == "B4.3") return Family::Barthel43;
  if (s == "B7") return Family::Barthel7;
  if (s == "X" || s == "3R3X") return Family::Xorsat;
  throw std::invalid_argument("unknown family '" + std::string(s) + "' (B4.3, B7, X)");
}

inline PlantedInstance make_instance(Family f, std::size_t n, std::uint64_t seed, double p0 = 0.08) {
  switch (f) {
  case Family::Barthel43: return gen_barthel({n, 4.3, p0, seed});
  case Family::Barthel7: return gen_barthel({n, 7.0, p0, seed});
  case Family::Xorsat: return gen_xorsat_3r(n, seed);
  }
  throw std::logic_error("unreachable");
}

inline std::uint64_t instance_seed(std::uint64_t base, Family f, std::size_t n, std::size_t idx) {
  return derive_seed(base, {hash_label(to_string(f)), n, idx});
}

inline std::uint64_t run_seed(std::uint64_t base, Family f, std::size_t n, std::size_t idx, std::string_view solver) {
  return derive_seed(base, {hash_label(to_string(f)), n, idx, hash_label(solver)});
}

struct SolverEntry {
  std::string label;
  SolverSpec spec;
};

/// Analog SAT as the reference netlists run it (1/8 factor omitted) and
/// memcomputing with its default parameters.
inline std::vector<SolverEntry> default_solvers() {
  SolverSpec analog;
  analog.kind = SolverKind::Analog;
  analog.analog.include_one_eighth_factor = false;
  SolverSpec mem;
  mem.kind = SolverKind::Mem;
  return {{"analog", analog}, {"mem", mem}};
}

struct ExperimentPlan {
  std::vector<Family> families{Family::Barthel43, Family::Barthel7, Family::Xorsat};
  std::vector<std::size_t> sizes{10, 20, 30, 40, 50};
  std::size_t instances_per_cell = 10;
  std::vector<SolverEntry> solvers = default_solvers();
  IntegratorConfig integrator{};
  std::uint64_t seed_base = 2024;
  double p0 = 0.08;
  /// 0 means one worker per hardware thread.
  std::size_t workers = 0;
  /// Persist instances, runs, and the summary here when set.
  std::optional<std::filesystem::path> out_dir;
  /// Keep trajectories in memory after persisting.
  bool keep_trajectories = false;
  /// Confirm Solved runs with the exhaustive oracle when N <= this.
  std::size_t oracle_max_vars = 20;

  void validate() const {
    if (families.empty() || sizes.empty() || solvers.empty())
      throw std::invalid_argument("experiment needs at least one family, size, and solver");
    if (instances_per_cell == 0) throw std::invalid_argument("instances_per_cell must be positive");
    std::set<std::string> labels;
    for (const auto &s : solvers)
      if (!labels.insert(s.label).second) throw std::invalid_argument("duplicate solver label " + s.label);
    integrator.validate();
  }
};

struct ExperimentRun {
  Family family;
  std::size_t size = 0;
  std::size_t instance = 0;
  std::string solver;
  std::uint64_t instance_seed = 0;
  RunRecord record;
  /// Solved and N small enough: whether an independent check confirmed it.
  std::optional<bool> oracle_confirmed;
  /// Solved: the recorded assignment satisfies the instance.
  bool verified = false;
};

struct SummaryCell {
  Family family;
  std::size_t size = 0;
  std::string solver;
  std::size_t instances = 0;
  std::size_t solved = 0;
  std::size_t unsolved = 0;
  std::size_t converged_to_zero = 0;
  std::size_t aborted = 0;
  std::optional<double> median_time_to_solution;
};

struct SummaryTable {
  std::vector<SummaryCell> cells;

  const SummaryCell *find(Family f, std::size_t n, std::string_view solver) const {
    for (const auto &c : cells)
      if (c.family == f && c.size == n && c.solver == solver) return &c;
    return nullptr;
  }

  json to_json() const {
    json arr = json::array();
    for (const auto &c : cells)
      arr.push_back({{"family", to_string(c.family)},
                     {"size", c.size},
                     {"solver", c.solver},
                     {"instances", c.instances},
                     {"solved", c.solved},
                     {"unsolved", c.unsolved},
                     {"converged_to_zero", c.converged_to_zero},
                     {"aborted", c.aborted},
                     {"median_time_to_solution",
                      c.median_time_to_solution ? json(*c.median_time_to_solution) : json(nullptr)}});
    return {{"cells", arr}};
  }

  /// Rows per (size, solver), one column per family: "unsolved (zero)".
  std::string to_markdown() const {
    std::vector<Family> fams;
    std::vector<std::size_t> sizes;
    std::vector<std::string> solvers;
    for (const auto &c : cells) {
      if (std::find(fams.begin(), fams.end(), c.family) == fams.end()) fams.push_back(c.family);
      if (std::find(sizes.begin(), sizes.end(), c.size) == sizes.end()) sizes.push_back(c.size);
      if (std::find(solvers.begin(), solvers.end(), c.solver) == solvers.end()) solvers.push_back(c.solver);
    }
    std::ostringstream out;
    out << "| N | solver |";
    for (auto f : fams) out << ' ' << to_string(f) << " |";
    out << "\n|---|---|";
    for (std::size_t i = 0; i < fams.size(); ++i) out << "---|";
    out << '\n';
    for (auto n : sizes)
      for (const auto &s : solvers) {
        out << "| " << n << " | " << s << " |";
        for (auto f : fams) {
          const auto *c = find(f, n, s);
          if (!c) {
            out << " - |";
            continue;
          }
          out << ' ' << c->unsolved;
          if (c->converged_to_zero) out << " (" << c->converged_to_zero << ")";
          out << " |";
        }
        out << '\n';
      }
    return out.str();
  }
};

/// Aggregates runs into a table; cell order follows first appearance.
inline SummaryTable summarize(const std::vector<ExperimentRun> &runs) {
  SummaryTable t;
  std::map<std::tuple<int, std::size_t, std::string>, std::vector<double>> times;
  for (const auto &r : runs) {
    SummaryCell *cell = nullptr;
    for (auto &c : t.cells)
      if (c.family == r.family && c.size == r.size && c.solver == r.solver) cell = &c;
    if (!cell) {
      SummaryCell c;
      c.family = r.family;
      c.size = r.size;
      c.solver = r.solver;
      t.cells.push_back(c);
      cell = &t.cells.back();
    }
    ++cell->instances;
    if (r.record.aborted) ++cell->aborted;
    if (r.record.outcome == Outcome::Solved) {
      ++cell->solved;
      times[{static_cast<int>(r.family), r.size, r.solver}].push_back(r.record.t_outcome);
    } else {
      ++cell->unsolved;
      if (r.record.outcome == Outcome::ConvergedToZero) ++cell->converged_to_zero;
    }
  }
  for (auto &c : t.cells) {
    auto it = times.find({static_cast<int>(c.family), c.size, c.solver});
    if (it == times.end() || it->second.empty()) continue;
    auto v = it->second;
    std::sort(v.begin(), v.end());
    const auto k = v.size();
    c.median_time_to_solution = k % 2 ? v[k / 2] : 0.5 * (v[k / 2 - 1] + v[k / 2]);
  }
  return t;
}

struct ExperimentResult {
  SummaryTable table;
  std::vector<ExperimentRun> runs;
};

inline std::string instance_stem(Family f, std::size_t n, std::size_t idx) {
  return std::string(to_string(f)) + "_N" + std::to_string(n) + "_" + std::to_string(idx);
}

/// Runs `work(i)` for i in [0, count) on a bounded pool. Each index writes
/// only its own result slot, so outputs do not depend on scheduling.
template <class F> void parallel_for(std::size_t count, std::size_t workers, F &&work) {
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) work(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex mu;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < count;) {
        try {
          work(i);
        } catch (...) {
          std::lock_guard lock(mu);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  for (auto &t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

/// Generates every instance of the plan, runs each solver once per instance,
/// and aggregates. Individual run failures are recorded, not fatal.
inline ExperimentResult run_experiment(const ExperimentPlan &plan) {
  plan.validate();
  namespace fs = std::filesystem;
  struct Inst {
    Family family;
    std::size_t size, idx;
    std::uint64_t seed;
    PlantedInstance planted;
  };
  std::vector<Inst> instances;
  for (auto f : plan.families)
    for (auto n : plan.sizes)
      for (std::size_t k = 0; k < plan.instances_per_cell; ++k) {
        const auto seed = instance_seed(plan.seed_base, f, n, k);
        instances.push_back({f, n, k, seed, make_instance(f, n, seed, plan.p0)});
      }

  if (plan.out_dir) {
    fs::create_directories(*plan.out_dir / "instances");
    fs::create_directories(*plan.out_dir / "runs");
    for (const auto &in : instances) {
      const auto stem = *plan.out_dir / "instances" / instance_stem(in.family, in.size, in.idx);
      save_text(stem.string() + ".cnf",
                write_dimacs(in.planted.problem, {std::string(to_string(in.family)) + " N=" + std::to_string(in.size) +
                                                  " seed=" + std::to_string(in.seed)}));
      save_text(stem.string() + ".json", plant_sidecar(in.planted, to_string(in.family), in.seed).dump(2) + "\n");
    }
  }

  ExperimentResult result;
  result.runs.resize(instances.size() * plan.solvers.size());
  parallel_for(result.runs.size(), plan.workers, [&](std::size_t task) {
    const auto &in = instances[task / plan.solvers.size()];
    const auto &solver = plan.solvers[task % plan.solvers.size()];
    auto &out = result.runs[task];
    out.family = in.family;
    out.size = in.size;
    out.instance = in.idx;
    out.solver = solver.label;
    out.instance_seed = in.seed;
    const auto seed = run_seed(plan.seed_base, in.family, in.size, in.idx, solver.label);
    try {
      out.record = run(in.planted.problem, solver.spec, plan.integrator, seed);
    } catch (const std::exception &e) {
      out.record.seed = seed;
      out.record.solver = solver.spec;
      out.record.config = plan.integrator;
      out.record.num_vars = in.planted.problem.num_vars();
      out.record.num_clauses = in.planted.problem.num_clauses();
      out.record.aborted = true;
      out.record.diagnostic = e.what();
    }
    if (out.record.outcome == Outcome::Solved && out.record.assignment) {
      out.verified = count_unsatisfied(in.planted.problem, *out.record.assignment) == 0;
      if (in.size <= plan.oracle_max_vars) {
        const auto oracle = solve_exhaustive(in.planted.problem);
        out.oracle_confirmed = oracle.satisfiable && oracle.witness &&
                               count_unsatisfied(in.planted.problem, *oracle.witness) == 0 && out.verified;
      }
    }
    if (plan.out_dir)
      save_run(*plan.out_dir / "runs" / (instance_stem(in.family, in.size, in.idx) + "_" + solver.label), out.record);
    if (!plan.keep_trajectories) {
      out.record.trajectory.clear();
      out.record.trajectory.shrink_to_fit();
    }
  });

  result.table = summarize(result.runs);
  if (plan.out_dir) {
    json summary = result.table.to_json();
    summary["seed_base"] = plan.seed_base;
    summary["instances_per_cell"] = plan.instances_per_cell;
    summary["integrator"] = to_json_value(plan.integrator);
    json solvers = json::array();
    for (const auto &s : plan.solvers) solvers.push_back({{"label", s.label}, {"spec", to_json_value(s.spec)}});
    summary["solvers"] = solvers;
    save_text(*plan.out_dir / "summary.json", summary.dump(2) + "\n");
    save_text(*plan.out_dir / "summary.md", result.table.to_markdown());
  }
  return result;
}

/// Reloads a persisted experiment directory (instances and run metadata).
inline std::vector<ExperimentRun> load_experiment_runs(const std::filesystem::path &dir,
                                                       const std::vector<std::string> &solver_labels) {
  namespace fs = std::filesystem;
  std::vector<ExperimentRun> runs;
  std::vector<fs::path> cnfs;
  for (const auto &e : fs::directory_iterator(dir / "instances"))
    if (e.path().extension() == ".cnf") cnfs.push_back(e.path());
  std::sort(cnfs.begin(), cnfs.end());
  for (const auto &cnf : cnfs) {
    const auto stem = cnf.stem().string();
    const auto us1 = stem.find("_N"), us2 = stem.rfind('_');
    ExperimentRun base;
    base.family = family_from_string(stem.substr(0, us1));
    base.size = std::stoul(stem.substr(us1 + 2, us2 - us1 - 2));
    base.instance = std::stoul(stem.substr(us2 + 1));
    const auto problem = load_dimacs(cnf);
    for (const auto &label : solver_labels) {
      const auto run_stem = dir / "runs" / (stem + "_" + label);
      if (!fs::exists(run_stem.string() + ".json")) continue;
      ExperimentRun r = base;
      r.solver = label;
      r.record = load_run(run_stem);
      if (r.record.outcome == Outcome::Solved && r.record.assignment)
        r.verified = count_unsatisfied(problem, *r.record.assignment) == 0;
      runs.push_back(std::move(r));
    }
  }
  return runs;
}

// ---------------------------------------------------------------------------
// Plot data
// ---------------------------------------------------------------------------

/// Tidy CSV (t, series, value). `selection` is a comma-separated list of
/// "contra", "contrd", "<prefix>:*", "<prefix>:<i>", or "<prefix>:<i>-<j>"
/// with prefixes s, a (analog) or v, xs, xl (mem); indices are 1-based.
inline void emit_plot_data(std::ostream &out, const std::vector<std::pair<std::string, const RunRecord *>> &records,
                           std::string_view selection) {
  struct Column {
    std::string series;
    int kind; // 0 contra, 1 contrd, 2 state column
    std::size_t index;
  };
  out << "t,series,value\n";
  for (const auto &[label, rec] : records) {
    const auto cols = rec->state_columns();
    std::vector<Column> chosen;
    std::string_view rest = selection;
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      std::string item(rest.substr(0, comma));
      rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
      item.erase(std::remove(item.begin(), item.end(), ' '), item.end());
      if (item.empty()) continue;
      if (item == "contra") {
        chosen.push_back({"contra", 0, 0});
        continue;
      }
      if (item == "contrd") {
        chosen.push_back({"contrd", 1, 0});
        continue;
      }
      const auto colon = item.find(':');
      if (colon == std::string::npos) throw std::invalid_argument("unknown selection '" + item + "'");
      const std::string prefix = item.substr(0, colon), range = item.substr(colon + 1);
      std::vector<std::size_t> matches;
      for (std::size_t c = 0; c < cols.size(); ++c) {
        const auto &name = cols[c];
        std::size_t digit = 0;
        while (digit < name.size() && !std::isdigit(static_cast<unsigned char>(name[digit]))) ++digit;
        if (name.substr(0, digit) != prefix) continue;
        const std::size_t idx = std::stoul(name.substr(digit));
        bool take = false;
        if (range == "*") take = true;
        else if (auto dash = range.find('-'); dash != std::string::npos)
          take = idx >= std::stoul(range.substr(0, dash)) && idx <= std::stoul(range.substr(dash + 1));
        else
          take = idx == std::stoul(range);
        if (take) matches.push_back(c);
      }
      if (matches.empty())
        throw std::invalid_argument("selection '" + item + "' matches no columns of this " +
                                    std::string(to_string(rec->solver.kind)) + " run");
      for (auto c : matches) chosen.push_back({cols[c], 2, c});
    }
    if (chosen.empty()) throw std::invalid_argument("empty selection");
    const std::string tag = label.empty() ? "" : label + "/";
    for (const auto &col : chosen)
      for (const auto &row : rec->trajectory) {
        double v = 0.0;
        if (col.kind == 0) v = row.contra;
        else if (col.kind == 1) v = static_cast<double>(row.contrd);
        else {
          if (row.state.size() <= col.index)
            throw std::invalid_argument("run has no recorded states for '" + col.series + "'");
          v = row.state[col.index];
        }
        out << format_double(row.t) << ',' << tag << col.series << ',' << format_double(v) << '\n';
      }
  }
}

inline std::string emit_plot_data(const RunRecord &rec, std::string_view selection) {
  std::ostringstream out;
  emit_plot_data(out, {{"", &rec}}, selection);
  return out.str();
}

// ---------------------------------------------------------------------------
// Network configuration
// ---------------------------------------------------------------------------

struct NetworkSetup {
  std::vector<SolverNode> nodes;
  Wiring wiring;
  NetworkConfig config;
};

/// Network JSON:
///   { "integrator": {...}, "stop_when_all_solved": bool,
///     "drives": [ {"name", "period", "duty", "phase", "low", "high"} ],
///     "nodes":  [ {"name", "cnf", "solver": {...}, "inputs": [1-based],
///                  "outputs": [1-based], "expose_contrd", "seed"} ],
///     "edges":  [ {"from": "B.v2" | "drive:name", "to": "A.v1"} ] }
/// CNF paths are relative to `base_dir`.
inline NetworkSetup network_from_json(const json &j, const std::filesystem::path &base_dir) {
  NetworkSetup s;
  if (j.contains("integrator")) update_from_json(s.config.integrator, j.at("integrator"));
  s.config.stop_when_all_solved = j.value("stop_when_all_solved", true);
  std::map<std::string, std::size_t> drive_index, node_index;
  for (const auto &d : j.value("drives", json::array())) {
    SquareWave w;
    w.period = d.value("period", w.period);
    w.duty = d.value("duty", w.duty);
    w.phase = d.value("phase", w.phase);
    w.low = d.value("low", w.low);
    w.high = d.value("high", w.high);
    drive_index[d.at("name").get<std::string>()] = s.wiring.drives.size();
    s.wiring.drives.push_back(w);
  }
  for (const auto &n : j.at("nodes")) {
    SolverNode nd;
    nd.name = n.at("name").get<std::string>();
    auto path = std::filesystem::path(n.at("cnf").get<std::string>());
    if (path.is_relative()) path = base_dir / path;
    nd.problem = std::make_shared<const Problem>(load_dimacs(path));
    if (n.contains("solver")) update_from_json(nd.solver, n.at("solver"));
    for (auto v : n.value("inputs", std::vector<std::uint32_t>{})) nd.inputs.push_back(v - 1);
    for (auto v : n.value("outputs", std::vector<std::uint32_t>{})) nd.outputs.push_back(v - 1);
    nd.expose_contrd = n.value("expose_contrd", true);
    nd.seed = n.value("seed", std::uint64_t{node_index.size() + 1});
    if (!node_index.emplace(nd.name, s.nodes.size()).second) throw NetworkError("duplicate node " + nd.name);
    s.nodes.push_back(std::move(nd));
  }
  auto parse_port = [&](const std::string &ref) -> std::pair<std::size_t, std::uint32_t> {
    const auto dot = ref.find('.');
    if (dot == std::string::npos || dot + 2 > ref.size() || ref[dot + 1] != 'v')
      throw NetworkError("port reference must look like NODE.vK: " + ref);
    auto it = node_index.find(ref.substr(0, dot));
    if (it == node_index.end()) throw NetworkError("unknown node in " + ref);
    return {it->second, static_cast<std::uint32_t>(std::stoul(ref.substr(dot + 2)) - 1)};
  };
  for (const auto &e : j.value("edges", json::array())) {
    Edge edge;
    const auto from = e.at("from").get<std::string>();
    if (from.rfind("drive:", 0) == 0) {
      auto it = drive_index.find(from.substr(6));
      if (it == drive_index.end()) throw NetworkError("unknown drive " + from);
      edge.from = SignalRef::drive(it->second);
    } else {
      const auto [node, var] = parse_port(from);
      edge.from = SignalRef::output(node, var);
    }
    const auto [node, var] = parse_port(e.at("to").get<std::string>());
    edge.to_node = node;
    edge.to_var = var;
    s.wiring.edges.push_back(edge);
  }
  validate_network(s.nodes, s.wiring);
  return s;
}

} // namespace ctsat
