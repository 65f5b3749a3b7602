#ifndef HCFLAB_ODE_HPP
#define HCFLAB_ODE_HPP

#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace hcf {

enum class IntegratorMethod { rk4_fixed, rk45_adaptive };

std::string to_string(IntegratorMethod m);
IntegratorMethod parse_integrator(const std::string& name);

struct IntegratorConfig {
  IntegratorMethod method = IntegratorMethod::rk45_adaptive;
  double h_init = 1e-3;
  double rel_tol = 1e-10;
  double abs_tol = 1e-14;
  double t_max = 1.0;
  double blowup_norm_cap = 1e8;
  double min_eig_floor = 1e-12;
  bool stop_on_convergence = true;
  std::size_t max_steps = 5'000'000;
  /// Steps are clipped so that every listed time is hit exactly.
  std::vector<double> output_times;

  void validate() const;
};

enum class EventKind { blowup_detected, converged, max_time_reached, stopped, skipped_sample };

std::string to_string(EventKind k);

struct FlowEvent {
  EventKind kind = EventKind::max_time_reached;
  double time = 0.0;
  double t_est = 0.0;  ///< extrapolated blow-up time for blowup_detected
  std::string detail;
};

/// Time-stamped solution samples plus events and optional derived columns.
struct FlowTrace {
  std::vector<double> times;
  std::vector<Eigen::VectorXd> states;
  std::vector<FlowEvent> events;
  std::vector<std::string> state_labels;
  std::map<std::string, std::vector<double>> derived;

  std::size_t size() const { return times.size(); }
  bool has_event(EventKind k) const;
  const FlowEvent* find_event(EventKind k) const;
};

class StepUnderflow : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An autonomous or time-dependent ODE y' = f(t, y) with hooks used by the
/// flow drivers.
struct OdeProblem {
  std::function<Eigen::VectorXd(double, const Eigen::VectorXd&)> rhs;
  /// Trial states failing this are rejected and the step is shrunk.
  std::function<bool(const Eigen::VectorXd&)> admissible;
  /// Applied to every accepted state (e.g. re-Hermitization).
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> project;
  /// Inspected after every accepted step; returning an event stops the run.
  std::function<std::optional<FlowEvent>(double, const Eigen::VectorXd&, const Eigen::VectorXd&)> check;
};

/// Dormand-Prince 5(4) with PI step control, or classical fixed-step RK4.
/// Every accepted step is stored in the trace.
FlowTrace solve_ode(const OdeProblem& problem, const Eigen::VectorXd& y0, const IntegratorConfig& cfg);

}  // namespace hcf

#endif  // HCFLAB_ODE_HPP
