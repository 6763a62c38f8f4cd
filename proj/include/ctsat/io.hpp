#pragma once

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "json.hpp"

#include "ctsat/cnf.hpp"
#include "ctsat/instances.hpp"
#include "ctsat/integrate.hpp"

namespace ctsat {

using json = nlohmann::json;

inline constexpr std::string_view kReadoutConvention = "x_i = TRUE iff value > 0 (0 maps to FALSE)";

// ---------------------------------------------------------------------------
// Options <-> JSON. Every reader starts from the defaults and overrides only
// the keys present, so partial config files work.
// ---------------------------------------------------------------------------

inline json to_json_value(const SolverSpec &s) {
  return {{"kind", to_string(s.kind)},
          {"analog",
           {{"include_one_eighth_factor", s.analog.include_one_eighth_factor},
            {"aux_mode", to_string(s.analog.aux_mode)}}},
          {"mem",
           {{"alpha", s.mem.alpha},
            {"beta", s.mem.beta},
            {"gamma", s.mem.gamma},
            {"delta", s.mem.delta},
            {"epsilon", s.mem.epsilon},
            {"zeta", s.mem.zeta},
            {"clamp_v", s.mem_options.clamp_v},
            {"r_ties", to_string(s.mem_options.r_ties)}}}};
}

inline void update_from_json(SolverSpec &s, const json &j) {
  if (j.contains("kind")) s.kind = solver_kind_from_string(j.at("kind").get<std::string>());
  if (j.contains("analog")) {
    const auto &a = j.at("analog");
    s.analog.include_one_eighth_factor = a.value("include_one_eighth_factor", s.analog.include_one_eighth_factor);
    if (a.contains("aux_mode")) s.analog.aux_mode = aux_mode_from_string(a.at("aux_mode").get<std::string>());
  }
  if (j.contains("mem")) {
    const auto &m = j.at("mem");
    s.mem.alpha = m.value("alpha", s.mem.alpha);
    s.mem.beta = m.value("beta", s.mem.beta);
    s.mem.gamma = m.value("gamma", s.mem.gamma);
    s.mem.delta = m.value("delta", s.mem.delta);
    s.mem.epsilon = m.value("epsilon", s.mem.epsilon);
    s.mem.zeta = m.value("zeta", s.mem.zeta);
    s.mem_options.clamp_v = m.value("clamp_v", s.mem_options.clamp_v);
    if (m.contains("r_ties")) s.mem_options.r_ties = r_tie_policy_from_string(m.at("r_ties").get<std::string>());
  }
}

inline json to_json_value(const IntegratorConfig &c) {
  return {{"method", to_string(c.stepper.method)},
          {"dt_init", c.stepper.dt_init},
          {"dt_min", c.stepper.dt_min},
          {"dt_max", c.stepper.dt_max},
          {"error_tol", c.stepper.error_tol},
          {"max_steps", c.stepper.max_steps},
          {"t_ev", c.t_ev},
          {"sample_interval", c.sample_interval},
          {"solve_window", c.solve_window},
          {"zero_eps", c.zero_eps},
          {"zero_window", c.zero_window},
          {"record_states", c.record_states}};
}

inline void update_from_json(IntegratorConfig &c, const json &j) {
  if (j.contains("method")) c.stepper.method = method_from_string(j.at("method").get<std::string>());
  c.stepper.dt_init = j.value("dt_init", c.stepper.dt_init);
  c.stepper.dt_min = j.value("dt_min", c.stepper.dt_min);
  c.stepper.dt_max = j.value("dt_max", c.stepper.dt_max);
  c.stepper.error_tol = j.value("error_tol", c.stepper.error_tol);
  c.stepper.max_steps = j.value("max_steps", c.stepper.max_steps);
  c.t_ev = j.value("t_ev", c.t_ev);
  c.sample_interval = j.value("sample_interval", c.sample_interval);
  c.solve_window = j.value("solve_window", c.solve_window);
  c.zero_eps = j.value("zero_eps", c.zero_eps);
  c.zero_window = j.value("zero_window", c.zero_window);
  c.record_states = j.value("record_states", c.record_states);
}

// ---------------------------------------------------------------------------
// RunRecord: JSON metadata + CSV trajectory
// ---------------------------------------------------------------------------

inline json run_metadata(const RunRecord &r) {
  json j{{"seed", r.seed},
         {"solver", to_json_value(r.solver)},
         {"integrator", to_json_value(r.config)},
         {"num_vars", r.num_vars},
         {"num_clauses", r.num_clauses},
         {"outcome", to_string(r.outcome)},
         {"t_outcome", r.t_outcome},
         {"aborted", r.aborted},
         {"diagnostic", r.diagnostic},
         {"readout", kReadoutConvention},
         {"samples", r.trajectory.size()},
         {"steps",
          {{"accepted", r.stats.accepted},
           {"rejected", r.stats.rejected},
           {"rhs_evals", r.stats.rhs_evals},
           {"dt_smallest", r.stats.dt_smallest},
           {"dt_largest", r.stats.dt_largest}}},
         {"wall_seconds", r.wall_seconds}};
  j["assignment"] = r.assignment ? json(r.assignment->to_bits()) : json(nullptr);
  return j;
}

inline RunRecord run_from_metadata(const json &j) {
  RunRecord r;
  r.seed = j.at("seed").get<std::uint64_t>();
  update_from_json(r.solver, j.at("solver"));
  update_from_json(r.config, j.at("integrator"));
  r.num_vars = j.at("num_vars").get<std::size_t>();
  r.num_clauses = j.at("num_clauses").get<std::size_t>();
  r.outcome = outcome_from_string(j.at("outcome").get<std::string>());
  r.t_outcome = j.at("t_outcome").get<double>();
  r.aborted = j.value("aborted", false);
  r.diagnostic = j.value("diagnostic", std::string());
  if (j.contains("assignment") && !j.at("assignment").is_null())
    r.assignment = Assignment::from_bits(j.at("assignment").get<std::string>());
  if (j.contains("steps")) {
    const auto &s = j.at("steps");
    r.stats.accepted = s.value("accepted", std::uint64_t{0});
    r.stats.rejected = s.value("rejected", std::uint64_t{0});
    r.stats.rhs_evals = s.value("rhs_evals", std::uint64_t{0});
    r.stats.dt_smallest = s.value("dt_smallest", 0.0);
    r.stats.dt_largest = s.value("dt_largest", 0.0);
  }
  r.wall_seconds = j.value("wall_seconds", 0.0);
  return r;
}

inline std::string format_double(double x) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, p);
}

/// CSV columns: t, contra, contrd, then the state columns when recorded.
inline void write_trajectory_csv(std::ostream &out, const RunRecord &r) {
  const bool states = !r.trajectory.empty() && !r.trajectory.front().state.empty();
  out << "t,contra,contrd";
  if (states)
    for (const auto &c : r.state_columns()) out << ',' << c;
  out << '\n';
  for (const auto &row : r.trajectory) {
    out << format_double(row.t) << ',' << format_double(row.contra) << ',' << row.contrd;
    for (double x : row.state) out << ',' << format_double(x);
    out << '\n';
  }
}

inline std::vector<TrajectoryRow> read_trajectory_csv(std::istream &in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("t,contra,contrd", 0) != 0)
    throw std::runtime_error("trajectory CSV must start with 't,contra,contrd'");
  std::vector<TrajectoryRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    TrajectoryRow row;
    std::size_t start = 0, col = 0;
    while (start <= line.size()) {
      auto end = line.find(',', start);
      if (end == std::string::npos) end = line.size();
      const std::string_view tok(line.data() + start, end - start);
      double v = 0.0;
      auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
      if (ec != std::errc()) throw std::runtime_error("bad number in trajectory CSV: " + std::string(tok));
      if (col == 0) row.t = v;
      else if (col == 1) row.contra = v;
      else if (col == 2) row.contrd = static_cast<std::size_t>(v);
      else row.state.push_back(v);
      ++col;
      start = end + 1;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

/// Writes <stem>.json and <stem>.csv.
inline void save_run(const std::filesystem::path &stem, const RunRecord &r) {
  std::filesystem::create_directories(stem.parent_path().empty() ? "." : stem.parent_path());
  std::ofstream js(stem.string() + ".json");
  js << run_metadata(r).dump(2) << '\n';
  std::ofstream csv(stem.string() + ".csv");
  write_trajectory_csv(csv, r);
  if (!js || !csv) throw std::runtime_error("cannot write run files for " + stem.string());
}

inline RunRecord load_run(const std::filesystem::path &stem) {
  std::ifstream js(stem.string() + ".json");
  if (!js) throw std::runtime_error("cannot read " + stem.string() + ".json");
  auto r = run_from_metadata(json::parse(js));
  std::ifstream csv(stem.string() + ".csv");
  if (csv) r.trajectory = read_trajectory_csv(csv);
  return r;
}

// ---------------------------------------------------------------------------
// Instances
// ---------------------------------------------------------------------------

inline Problem load_dimacs(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return parse_dimacs(in);
}

inline void save_text(const std::filesystem::path &path, const std::string &text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

/// Sidecar for a generated instance: family, parameters, seed, and plant bits.
inline json plant_sidecar(const PlantedInstance &inst, std::string_view family, std::uint64_t seed,
                          const json &params = json::object()) {
  json j{{"family", family},
         {"seed", seed},
         {"num_vars", inst.problem.num_vars()},
         {"num_clauses", inst.problem.num_clauses()},
         {"plant", inst.plant.to_bits()},
         {"params", params}};
  if (!inst.equations.empty()) {
    json eqs = json::array();
    for (const auto &e : inst.equations)
      eqs.push_back({{"vars", {e.vars[0] + 1, e.vars[1] + 1, e.vars[2] + 1}},
                     {"negate", {e.negate[0], e.negate[1], e.negate[2]}},
                     {"rhs", e.rhs}});
    j["equations"] = std::move(eqs);
  }
  return j;
}

} // namespace ctsat
