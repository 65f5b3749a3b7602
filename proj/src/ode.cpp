#include "hcflab/ode.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hcflab/algebra.hpp"

namespace hcf {

std::string to_string(IntegratorMethod m) {
  return m == IntegratorMethod::rk4_fixed ? "rk4_fixed" : "rk45_adaptive";
}

IntegratorMethod parse_integrator(const std::string& name) {
  if (name == "rk4_fixed" || name == "rk4") return IntegratorMethod::rk4_fixed;
  if (name == "rk45_adaptive" || name == "rk45" || name == "dopri5") return IntegratorMethod::rk45_adaptive;
  throw InputError("unknown integrator '" + name + "' (expected rk4_fixed or rk45_adaptive)");
}

void IntegratorConfig::validate() const {
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) throw InputError("IntegratorConfig: tolerances must be positive");
  if (!(t_max > 0.0)) throw InputError("IntegratorConfig: t_max must be positive");
  if (!(h_init > 0.0)) throw InputError("IntegratorConfig: h_init must be positive");
  if (!std::is_sorted(output_times.begin(), output_times.end())) {
    throw InputError("IntegratorConfig: output_times must be sorted");
  }
}

std::string to_string(EventKind k) {
  switch (k) {
    case EventKind::blowup_detected: return "blowup_detected";
    case EventKind::converged: return "converged";
    case EventKind::max_time_reached: return "max_time_reached";
    case EventKind::stopped: return "stopped";
    case EventKind::skipped_sample: return "skipped_sample";
  }
  return "unknown";
}

bool FlowTrace::has_event(EventKind k) const { return find_event(k) != nullptr; }

const FlowEvent* FlowTrace::find_event(EventKind k) const {
  for (const auto& e : events)
    if (e.kind == k) return &e;
  return nullptr;
}

namespace {

using Vec = Eigen::VectorXd;

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

struct Trial {
  Vec y;
  double err = 0.0;  // scaled RMS error; 0 for fixed-step
};

Trial dopri_step(const OdeProblem& p, double t, const Vec& y, const Vec& k1, double h, const IntegratorConfig& cfg) {
  const Vec k2 = p.rhs(t + c2 * h, y + h * (a21 * k1));
  const Vec k3 = p.rhs(t + c3 * h, y + h * (a31 * k1 + a32 * k2));
  const Vec k4 = p.rhs(t + c4 * h, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
  const Vec k5 = p.rhs(t + c5 * h, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
  const Vec k6 = p.rhs(t + h, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
  Trial out;
  out.y = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
  const Vec k7 = p.rhs(t + h, out.y);
  const Vec err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
  const Vec scale = (cfg.abs_tol + cfg.rel_tol * y.cwiseAbs().cwiseMax(out.y.cwiseAbs()).array()).matrix();
  out.err = std::sqrt((err.cwiseQuotient(scale)).squaredNorm() / static_cast<double>(std::max<Eigen::Index>(1, y.size())));
  return out;
}

Trial rk4_step(const OdeProblem& p, double t, const Vec& y, const Vec& k1, double h) {
  const Vec k2 = p.rhs(t + 0.5 * h, y + 0.5 * h * k1);
  const Vec k3 = p.rhs(t + 0.5 * h, y + 0.5 * h * k2);
  const Vec k4 = p.rhs(t + h, y + h * k3);
  return {y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4), 0.0};
}

bool finite(const Vec& v) { return v.allFinite(); }

}  // namespace

FlowTrace solve_ode(const OdeProblem& problem, const Eigen::VectorXd& y0, const IntegratorConfig& cfg) {
  cfg.validate();
  FlowTrace trace;
  double t = 0.0;
  Vec y = problem.project ? problem.project(y0) : y0;
  trace.times.push_back(t);
  trace.states.push_back(y);

  Vec f = problem.rhs(t, y);
  if (problem.check) {
    if (auto ev = problem.check(t, y, f)) {
      trace.events.push_back(*ev);
      return trace;
    }
  }

  const bool adaptive = cfg.method == IntegratorMethod::rk45_adaptive;
  const double min_h = 1e-14 * cfg.t_max;
  double h = std::min(cfg.h_init, cfg.t_max);
  double err_prev = 1e-4;
  std::size_t next_out = 0;
  while (next_out < cfg.output_times.size() && cfg.output_times[next_out] <= t) ++next_out;

  std::size_t steps = 0;
  while (t < cfg.t_max) {
    if (++steps > cfg.max_steps) {
      trace.events.push_back({EventKind::stopped, t, 0.0, "max_steps exceeded"});
      return trace;
    }
    double h_try = std::min(h, cfg.t_max - t);
    bool clipped = h_try < h;
    bool to_output = false;
    if (next_out < cfg.output_times.size() && cfg.output_times[next_out] <= t + h_try) {
      h_try = cfg.output_times[next_out] - t;
      clipped = true;
      to_output = true;
    }
    if (h_try < min_h && cfg.t_max - t > min_h) {
      std::ostringstream os;
      os << "step size underflow at t = " << t << " (h = " << h_try << ")";
      throw StepUnderflow(os.str());
    }

    Trial trial = adaptive ? dopri_step(problem, t, y, f, h_try, cfg) : rk4_step(problem, t, y, f, h_try);
    const bool ok_state = finite(trial.y) && (!problem.admissible || problem.admissible(trial.y));
    if (!ok_state || (adaptive && !(trial.err <= 1.0))) {
      double fac = 0.25;
      if (ok_state && std::isfinite(trial.err)) fac = std::max(0.2, 0.9 * std::pow(trial.err, -0.2));
      h = h_try * std::min(fac, 0.9);
      continue;
    }

    // accept
    t = to_output ? cfg.output_times[next_out] : t + h_try;
    if (t > cfg.t_max || cfg.t_max - t <= 1e-15 * cfg.t_max) t = cfg.t_max;
    y = problem.project ? problem.project(trial.y) : trial.y;
    while (next_out < cfg.output_times.size() && cfg.output_times[next_out] <= t) ++next_out;
    trace.times.push_back(t);
    trace.states.push_back(y);
    f = problem.rhs(t, y);
    if (problem.check) {
      if (auto ev = problem.check(t, y, f)) {
        trace.events.push_back(*ev);
        return trace;
      }
    }

    if (adaptive) {
      double fac;
      if (trial.err == 0.0) {
        fac = 5.0;
      } else {
        fac = 0.9 * std::pow(trial.err, -0.7 / 5.0) * std::pow(err_prev, 0.4 / 5.0);
        fac = std::clamp(fac, 0.2, 5.0);
      }
      err_prev = std::max(trial.err, 1e-4);
      const double proposal = h_try * fac;
      h = clipped ? std::max(proposal, h) : proposal;
    } else {
      h = cfg.h_init;
    }
  }
  trace.events.push_back({EventKind::max_time_reached, t, 0.0, ""});
  return trace;
}

}  // namespace hcf
