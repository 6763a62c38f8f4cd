#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ctsat/cnf.hpp"
#include "ctsat/dynamics.hpp"
#include "ctsat/ode.hpp"
#include "ctsat/rng.hpp"

namespace ctsat {

enum class SolverKind { Analog, Mem };

inline std::string_view to_string(SolverKind k) { return k == SolverKind::Analog ? "analog" : "mem"; }

inline SolverKind solver_kind_from_string(std::string_view s) {
  if (s == "analog") return SolverKind::Analog;
  if (s == "mem" || s == "memcomputing") return SolverKind::Mem;
  throw std::invalid_argument("unknown solver '" + std::string(s) + "' (analog, mem)");
}

/// Which dynamical system to run and how it is configured.
struct SolverSpec {
  SolverKind kind = SolverKind::Mem;
  AnalogOptions analog{};
  MemParams mem{};
  MemOptions mem_options{};
};

struct IntegratorConfig {
  StepperConfig stepper{};
  double t_ev = 300.0;
  double sample_interval = 0.1;
  /// Solved once the readout satisfies every clause for this long.
  double solve_window = 1.0;
  /// Analog only: converged to zero once max_i |s_i| < zero_eps for zero_window.
  double zero_eps = 0.01;
  double zero_window = 5.0;
  /// Keep state columns in the trajectory (contra/contrd are always kept).
  bool record_states = true;

  void validate() const {
    const auto &s = stepper;
    if (!(s.dt_min > 0 && s.dt_min <= s.dt_init && s.dt_init <= s.dt_max))
      throw std::invalid_argument("require 0 < dt_min <= dt_init <= dt_max");
    if (!(s.error_tol > 0)) throw std::invalid_argument("error_tol must be positive");
    if (!(t_ev > 0)) throw std::invalid_argument("t_ev must be positive");
    if (!(sample_interval > 0)) throw std::invalid_argument("sample_interval must be positive");
    if (solve_window < 0 || zero_window < 0 || !(zero_eps > 0))
      throw std::invalid_argument("detection windows must be >= 0 and zero_eps > 0");
  }
};

enum class Outcome { Solved, ConvergedToZero, Timeout };

inline std::string_view to_string(Outcome o) {
  switch (o) {
  case Outcome::Solved: return "solved";
  case Outcome::ConvergedToZero: return "converged_to_zero";
  case Outcome::Timeout: return "timeout";
  }
  return "?";
}

inline Outcome outcome_from_string(std::string_view s) {
  if (s == "solved") return Outcome::Solved;
  if (s == "converged_to_zero") return Outcome::ConvergedToZero;
  if (s == "timeout") return Outcome::Timeout;
  throw std::invalid_argument("unknown outcome '" + std::string(s) + "'");
}

struct TrajectoryRow {
  double t = 0.0;
  double contra = 0.0;
  std::size_t contrd = 0;
  /// Analog: s then a. Mem: v, then x_s, then x_l. Empty if states are not recorded.
  std::vector<double> state;
};

struct RunRecord {
  std::uint64_t seed = 0;
  SolverSpec solver{};
  IntegratorConfig config{};
  std::size_t num_vars = 0;
  std::size_t num_clauses = 0;

  Outcome outcome = Outcome::Timeout;
  /// Solved: first entry into the confirmation window. ConvergedToZero: the
  /// detection time. Timeout: end of integration.
  double t_outcome = 0.0;
  std::optional<Assignment> assignment;
  /// Integration ended abnormally (underflow, budget, non-finite state).
  bool aborted = false;
  std::string diagnostic;

  std::vector<TrajectoryRow> trajectory;
  StepStats stats{};
  double wall_seconds = 0.0;

  /// Columns in a trajectory state vector, in order.
  std::vector<std::string> state_columns() const {
    std::vector<std::string> cols;
    auto add = [&](const char *prefix, std::size_t n) {
      for (std::size_t i = 1; i <= n; ++i) cols.push_back(std::string(prefix) + std::to_string(i));
    };
    if (solver.kind == SolverKind::Analog) {
      add("s", num_vars);
      add("a", num_clauses);
    } else {
      add("v", num_vars);
      add("xs", num_clauses);
      add("xl", num_clauses);
    }
    return cols;
  }
};

inline AnalogSatState init_analog(const Problem &p, std::uint64_t seed) {
  Rng rng(seed);
  AnalogSatState st{std::vector<double>(p.num_vars()), std::vector<double>(p.num_clauses(), 1.0)};
  for (auto &x : st.s) x = rng.uniform(-1.0, 1.0);
  return st;
}

inline MemState init_mem(const Problem &p, std::uint64_t seed) {
  Rng rng(seed);
  MemState st{std::vector<double>(p.num_vars()), std::vector<double>(p.num_clauses(), 0.5),
              std::vector<double>(p.num_clauses(), 1.0)};
  for (auto &x : st.v) x = rng.uniform(-1.0, 1.0);
  return st;
}

/// Flat state vector for a solver: analog [s, a], mem [v, x_s, x_l].
inline std::vector<double> initial_state(const Problem &p, const SolverSpec &spec, std::uint64_t seed) {
  std::vector<double> y;
  if (spec.kind == SolverKind::Analog) {
    auto st = init_analog(p, seed);
    y = std::move(st.s);
    y.insert(y.end(), st.a.begin(), st.a.end());
  } else {
    auto st = init_mem(p, seed);
    y = std::move(st.v);
    y.insert(y.end(), st.xs.begin(), st.xs.end());
    y.insert(y.end(), st.xl.begin(), st.xl.end());
  }
  return y;
}

/// One solver's vector field over its flat state, with optional frozen
/// (externally driven) variables whose derivatives are forced to zero.
class SolverSystem {
public:
  SolverSystem(const Problem &p, SolverSpec spec) : p_(&p), spec_(spec) {
    n_ = p.num_vars();
    m_ = p.num_clauses();
    xl_max_ = long_memory_upper(m_);
  }

  std::size_t dim() const { return spec_.kind == SolverKind::Analog ? n_ + m_ : n_ + 2 * m_; }
  std::size_t num_vars() const { return n_; }
  const Problem &problem() const { return *p_; }
  const SolverSpec &spec() const { return spec_; }

  void freeze(std::vector<std::uint32_t> vars) { frozen_ = std::move(vars); }
  const std::vector<std::uint32_t> &frozen() const { return frozen_; }

  void rhs(double, std::span<const double> y, std::span<double> dy) const {
    if (spec_.kind == SolverKind::Analog) {
      analog_rhs(*p_, y.subspan(0, n_), y.subspan(n_, m_), dy.subspan(0, n_), dy.subspan(n_, m_),
                 spec_.analog);
    } else {
      mem_rhs(*p_, y.subspan(0, n_), y.subspan(n_, m_), y.subspan(n_ + m_, m_), dy.subspan(0, n_),
              dy.subspan(n_, m_), dy.subspan(n_ + m_, m_), spec_.mem, spec_.mem_options);
    }
    for (auto v : frozen_) dy[v] = 0.0;
  }

  /// Projects overshoot back onto the variable intervals. Frozen variables
  /// are left as their source set them.
  bool project(std::span<double> y) const {
    bool changed = false;
    auto clampv = [&](double &x, double lo, double hi) {
      const double c = std::clamp(x, lo, hi);
      changed = changed || c != x;
      x = c;
    };
    const bool clamp_main = spec_.kind == SolverKind::Analog || spec_.mem_options.clamp_v;
    if (clamp_main)
      for (std::size_t i = 0; i < n_; ++i)
        if (!is_frozen(i)) clampv(y[i], kSpinLower, kSpinUpper);
    if (spec_.kind == SolverKind::Mem) {
      for (std::size_t m = 0; m < m_; ++m) clampv(y[n_ + m], kShortLower, kShortUpper);
      for (std::size_t m = 0; m < m_; ++m) clampv(y[n_ + m_ + m], kLongLower, xl_max_);
    }
    return changed;
  }

  std::span<const double> main_vars(std::span<const double> y) const { return y.subspan(0, n_); }

  ControlSignals signals(std::span<const double> y) const { return control_signals(*p_, main_vars(y)); }

  double max_abs_main(std::span<const double> y) const {
    double mx = 0.0;
    for (std::size_t i = 0; i < n_; ++i) mx = std::max(mx, std::abs(y[i]));
    return mx;
  }

private:
  bool is_frozen(std::size_t i) const {
    return std::find(frozen_.begin(), frozen_.end(), i) != frozen_.end();
  }

  const Problem *p_;
  SolverSpec spec_;
  std::size_t n_ = 0, m_ = 0;
  double xl_max_ = 0.0;
  std::vector<std::uint32_t> frozen_;
};

/// Tracks one solver's outcome windows and trajectory as integration proceeds.
class RunMonitor {
public:
  RunMonitor(const SolverSystem &sys, const IntegratorConfig &cfg, RunRecord &rec)
      : sys_(&sys), cfg_(&cfg), rec_(&rec) {}

  /// Returns true once an outcome is final. Later calls keep sampling the
  /// trajectory but leave the outcome untouched.
  bool observe(double t, std::span<const double> y) {
    const auto sig = sys_->signals(y);
    current_unsat_ = sig.contrd;
    if (t >= next_sample_ || t == 0.0) {
      TrajectoryRow row{t, sig.contra, sig.contrd, {}};
      if (cfg_->record_states) row.state.assign(y.begin(), y.end());
      rec_->trajectory.push_back(std::move(row));
      next_sample_ = (std::floor(t / cfg_->sample_interval) + 1.0) * cfg_->sample_interval;
      sampled_last_ = true;
    } else {
      sampled_last_ = false;
    }
    last_t_ = t;
    last_y_.assign(y.begin(), y.end());
    last_sig_ = sig;
    if (done_) return true;

    if (sig.contrd == 0) {
      if (solved_since_ < 0) solved_since_ = t;
      if (t - solved_since_ >= cfg_->solve_window) {
        rec_->outcome = Outcome::Solved;
        rec_->t_outcome = solved_since_;
        rec_->assignment = readout(sys_->main_vars(y));
        done_ = true;
        return true;
      }
    } else {
      solved_since_ = -1.0;
    }
    if (sys_->spec().kind == SolverKind::Analog) {
      if (sys_->max_abs_main(y) < cfg_->zero_eps) {
        if (zero_since_ < 0) zero_since_ = t;
        if (t - zero_since_ >= cfg_->zero_window) {
          rec_->outcome = Outcome::ConvergedToZero;
          rec_->t_outcome = t;
          done_ = true;
          return true;
        }
      } else {
        zero_since_ = -1.0;
      }
    }
    return false;
  }

  /// Records the final sample if it was not already taken.
  void close() {
    if (!sampled_last_ && !last_y_.empty()) {
      TrajectoryRow row{last_t_, last_sig_.contra, last_sig_.contrd, {}};
      if (cfg_->record_states) row.state = last_y_;
      rec_->trajectory.push_back(std::move(row));
      sampled_last_ = true;
    }
  }

  bool done() const { return done_; }
  double solved_since() const { return solved_since_; }
  const ControlSignals &last_signals() const { return last_sig_; }
  std::size_t current_unsat() const { return current_unsat_; }

private:
  const SolverSystem *sys_;
  const IntegratorConfig *cfg_;
  RunRecord *rec_;
  double next_sample_ = 0.0;
  double solved_since_ = -1.0;
  double zero_since_ = -1.0;
  bool sampled_last_ = false;
  bool done_ = false;
  std::size_t current_unsat_ = 0;
  double last_t_ = 0.0;
  std::vector<double> last_y_;
  ControlSignals last_sig_{};
};

inline void apply_stop_reason(RunRecord &rec, const IntegrationResult &res) {
  rec.stats = res.stats;
  switch (res.reason) {
  case StopReason::Observer: break;
  case StopReason::EndTime:
    rec.outcome = Outcome::Timeout;
    rec.t_outcome = res.t;
    break;
  default:
    rec.outcome = Outcome::Timeout;
    rec.t_outcome = res.t;
    rec.aborted = true;
    rec.diagnostic = std::string(to_string(res.reason)) + " at t=" + std::to_string(res.t) +
                     " (smallest dt " + std::to_string(res.stats.dt_smallest) + ")";
    break;
  }
}

/// Integrates one solver from its seeded initial condition until it is
/// solved, converges to zero (analog), or reaches t_ev.
inline RunRecord run(const Problem &p, const SolverSpec &spec, const IntegratorConfig &cfg,
                     std::uint64_t seed) {
  cfg.validate();
  const auto t0 = std::chrono::steady_clock::now();
  RunRecord rec;
  rec.seed = seed;
  rec.solver = spec;
  rec.config = cfg;
  rec.num_vars = p.num_vars();
  rec.num_clauses = p.num_clauses();

  SolverSystem sys(p, spec);
  auto y = initial_state(p, spec, seed);
  RunMonitor mon(sys, cfg, rec);
  struct Adapter {
    SolverSystem &s;
    std::size_t dim() const { return s.dim(); }
    void rhs(double t, std::span<const double> y, std::span<double> dy) const { s.rhs(t, y, dy); }
    bool prepare(double, std::span<double>) const { return false; }
    bool project(std::span<double> y) const { return s.project(y); }
  } adapter{sys};
  const auto res = integrate(adapter, y, 0.0, cfg.t_ev, cfg.stepper,
                             [&](double t, std::span<const double> yy) { return mon.observe(t, yy); });
  apply_stop_reason(rec, res);
  mon.close();
  rec.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rec;
}

/// True iff every sample in the trailing `window` of the trajectory has
/// max_i |s_i| < eps. Needs recorded states; only the first `num_vars`
/// state columns (the spins) are inspected.
inline bool detect_convergence_to_zero(std::span<const TrajectoryRow> rows, std::size_t num_vars,
                                       double eps, double window) {
  if (rows.empty()) return false;
  const double t_end = rows.back().t;
  if (t_end - rows.front().t < window) return false;
  for (auto it = rows.rbegin(); it != rows.rend() && it->t >= t_end - window; ++it) {
    if (it->state.size() < num_vars) return false;
    for (std::size_t i = 0; i < num_vars; ++i)
      if (!(std::abs(it->state[i]) < eps)) return false;
  }
  return true;
}

} // namespace ctsat
