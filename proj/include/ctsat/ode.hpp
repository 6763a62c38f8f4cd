#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace ctsat {

enum class Method {
  DormandPrince45, ///< embedded adaptive Runge-Kutta 5(4)
  Euler,           ///< fixed-step forward Euler
};

inline std::string_view to_string(Method m) { return m == Method::Euler ? "euler" : "dopri45"; }

inline Method method_from_string(std::string_view s) {
  if (s == "dopri45" || s == "rk45" || s == "adaptive") return Method::DormandPrince45;
  if (s == "euler") return Method::Euler;
  throw std::invalid_argument("unknown integration method '" + std::string(s) + "'");
}

struct StepperConfig {
  Method method = Method::DormandPrince45;
  double dt_init = 1e-3;
  double dt_min = 1e-10;
  double dt_max = 0.5;
  /// Used as both absolute and relative tolerance per component.
  double error_tol = 1e-6;
  std::uint64_t max_steps = 20'000'000;
};

struct StepStats {
  std::uint64_t accepted = 0;
  std::uint64_t rejected = 0;
  std::uint64_t rhs_evals = 0;
  double dt_smallest = 0.0;
  double dt_largest = 0.0;
};

enum class StopReason {
  Observer,   ///< the observer asked to stop
  EndTime,    ///< reached t_end
  Underflow,  ///< step size fell below dt_min with error above tolerance
  StepBudget, ///< max_steps exhausted
  NonFinite,  ///< a state component became NaN or infinite
};

inline std::string_view to_string(StopReason r) {
  switch (r) {
  case StopReason::Observer: return "observer";
  case StopReason::EndTime: return "end_time";
  case StopReason::Underflow: return "step_underflow";
  case StopReason::StepBudget: return "step_budget";
  case StopReason::NonFinite: return "non_finite";
  }
  return "?";
}

struct IntegrationResult {
  StopReason reason = StopReason::EndTime;
  double t = 0.0;
  StepStats stats;
};

/// Drives `sys` from t0 to t_end.
///
/// System interface:
///   std::size_t dim() const;
///   void rhs(double t, std::span<const double> y, std::span<double> dy);
///   bool prepare(double t, std::span<double> y);  // at t0 and after each accepted step; true if y changed
///   bool project(std::span<double> y);            // after each accepted step; true if y changed
/// Observer: bool(double t, std::span<const double> y), called at t0 and after
/// every accepted step; returning true stops the integration.
///
/// Rejected steps never touch `y`.
template <class System, class Observer>
IntegrationResult integrate(System &sys, std::vector<double> &y, double t0, double t_end,
                            const StepperConfig &cfg, Observer &&observe) {
  const std::size_t n = sys.dim();
  IntegrationResult res;
  res.t = t0;
  auto &st = res.stats;
  st.dt_smallest = INFINITY;
  double t = t0;
  sys.prepare(t, y);
  if (observe(t, std::span<const double>(y))) {
    res.reason = StopReason::Observer;
    st.dt_smallest = 0.0;
    return res;
  }

  auto finite = [&](const std::vector<double> &v) {
    for (double x : v)
      if (!std::isfinite(x)) return false;
    return true;
  };
  auto note_dt = [&](double h) {
    st.dt_smallest = std::min(st.dt_smallest, h);
    st.dt_largest = std::max(st.dt_largest, h);
  };
  auto finish = [&](StopReason r) {
    res.reason = r;
    res.t = t;
    if (!std::isfinite(st.dt_smallest)) st.dt_smallest = 0.0;
    return res;
  };

  if (cfg.method == Method::Euler) {
    std::vector<double> dy(n);
    const double h0 = cfg.dt_init;
    while (t < t_end) {
      if (st.accepted >= cfg.max_steps) return finish(StopReason::StepBudget);
      const double h = std::min(h0, t_end - t);
      sys.rhs(t, y, dy);
      ++st.rhs_evals;
      for (std::size_t i = 0; i < n; ++i) y[i] += h * dy[i];
      // Land exactly on t_end so the end condition is exact.
      t = (t_end - t <= h0) ? t_end : t + h;
      sys.prepare(t, y);
      sys.project(y);
      ++st.accepted;
      note_dt(h);
      if (!finite(y)) return finish(StopReason::NonFinite);
      if (observe(t, std::span<const double>(y))) return finish(StopReason::Observer);
    }
    return finish(StopReason::EndTime);
  }

  // Dormand-Prince 5(4) tableau.
  constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                   a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                   a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                   b6 = 11.0 / 84;
  // b - b* (error weights).
  constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                   e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

  std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), tmp(n), ynew(n);
  double h = std::clamp(cfg.dt_init, cfg.dt_min, cfg.dt_max);
  bool k1_valid = false;

  while (t < t_end) {
    if (st.accepted + st.rejected >= cfg.max_steps) return finish(StopReason::StepBudget);
    if (!k1_valid) {
      sys.rhs(t, y, k1);
      ++st.rhs_evals;
      k1_valid = true;
    }
    const bool last = t + h >= t_end;
    const double hs = last ? t_end - t : h;

    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + hs * a21 * k1[i];
    sys.rhs(t + c2 * hs, tmp, k2);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + hs * (a31 * k1[i] + a32 * k2[i]);
    sys.rhs(t + c3 * hs, tmp, k3);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + hs * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    sys.rhs(t + c4 * hs, tmp, k4);
    for (std::size_t i = 0; i < n; ++i)
      tmp[i] = y[i] + hs * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    sys.rhs(t + c5 * hs, tmp, k5);
    for (std::size_t i = 0; i < n; ++i)
      tmp[i] = y[i] + hs * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    sys.rhs(t + hs, tmp, k6);
    for (std::size_t i = 0; i < n; ++i)
      ynew[i] = y[i] + hs * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
    sys.rhs(t + hs, ynew, k7);
    st.rhs_evals += 6;

    double err = 0.0;
    bool bad = false;
    for (std::size_t i = 0; i < n; ++i) {
      const double e = hs * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
      const double sc = cfg.error_tol * std::max({1.0, std::abs(y[i]), std::abs(ynew[i])});
      const double r = std::abs(e) / sc;
      if (!std::isfinite(r)) bad = true;
      err = std::max(err, r);
    }
    if (bad) err = INFINITY;

    if (err <= 1.0) {
      t = last ? t_end : t + hs;
      note_dt(hs);
      ++st.accepted;
      y.swap(ynew);
      std::swap(k1, k7); // first-same-as-last
      // Externally set components take their new values at the step end, so
      // the observer sees them current.
      if (sys.prepare(t, y)) k1_valid = false;
      if (sys.project(y)) k1_valid = false;
      if (!finite(y)) return finish(StopReason::NonFinite);
      if (observe(t, std::span<const double>(y))) return finish(StopReason::Observer);
      const double fac = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
      if (!last) h = std::min(cfg.dt_max, hs * fac);
    } else {
      ++st.rejected;
      if (!std::isfinite(err) && hs <= cfg.dt_min) return finish(StopReason::NonFinite);
      if (hs <= cfg.dt_min) return finish(StopReason::Underflow);
      const double fac = std::isfinite(err) ? std::clamp(0.9 * std::pow(err, -0.2), 0.1, 0.9) : 0.1;
      h = std::max(cfg.dt_min, hs * fac);
    }
  }
  return finish(StopReason::EndTime);
}

} // namespace ctsat
