#include <doctest.h>

#include <cmath>

#include "hcflab/flow.hpp"

using namespace hcf;

namespace {

OdeProblem decay() {
  OdeProblem p;
  p.rhs = [](double, const RealVector& y) { return (-y).eval(); };
  return p;
}

}  // namespace

TEST_CASE("exponential decay with both methods") {
  const RealVector y0 = RealVector::Ones(1);
  IntegratorConfig cfg;
  cfg.stop_on_convergence = false;
  const FlowTrace a = solve_ode(decay(), y0, cfg);
  CHECK(a.times.back() == 1.0);
  CHECK(std::abs(a.states.back()(0) - std::exp(-1.0)) <= 1e-9);
  CHECK(a.has_event(EventKind::max_time_reached));

  cfg.method = IntegratorMethod::rk4_fixed;
  cfg.h_init = 1e-2;
  const FlowTrace b = solve_ode(decay(), y0, cfg);
  CHECK(b.size() == 101);
  CHECK(std::abs(b.states.back()(0) - std::exp(-1.0)) <= 1e-9);
}

TEST_CASE("output times are hit exactly") {
  IntegratorConfig cfg;
  cfg.output_times = {0.1, 0.25, 1.0 / 3.0, 0.9};
  const FlowTrace tr = solve_ode(decay(), RealVector::Ones(1), cfg);
  for (double t : cfg.output_times) {
    bool found = false;
    for (double s : tr.times) found = found || s == t;
    CHECK(found);
  }
}

TEST_CASE("halving rel_tol moves the terminal value by at most 5x the coarse tolerance") {
  OdeProblem p;
  p.rhs = [](double, const RealVector& y) {
    RealVector d(2);
    d << y(1), -std::sin(y(0));
    return d;
  };
  IntegratorConfig cfg;
  cfg.t_max = 10.0;
  cfg.rel_tol = 1e-8;
  cfg.abs_tol = 1e-12;
  const RealVector y0 = (RealVector(2) << 1.0, 0.0).finished();
  const RealVector coarse = solve_ode(p, y0, cfg).states.back();
  cfg.rel_tol = 0.5e-8;
  const RealVector fine = solve_ode(p, y0, cfg).states.back();
  CHECK((coarse - fine).cwiseAbs().maxCoeff() <= 5 * 1e-8);
}

TEST_CASE("fixed-step runs are bitwise reproducible") {
  IntegratorConfig cfg;
  cfg.method = IntegratorMethod::rk4_fixed;
  const FlowTrace a = solve_ode(decay(), RealVector::Constant(3, 2.0), cfg);
  const FlowTrace b = solve_ode(decay(), RealVector::Constant(3, 2.0), cfg);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK((a.states[i].array() == b.states[i].array()).all());
}

TEST_CASE("inadmissible trial states shrink the step until underflow") {
  OdeProblem p = decay();
  p.admissible = [](const RealVector&) { return false; };
  CHECK_THROWS_AS(solve_ode(p, RealVector::Ones(1), IntegratorConfig{}), StepUnderflow);
}

TEST_CASE("check hook stops the run") {
  OdeProblem p = decay();
  p.check = [](double t, const RealVector&, const RealVector&) -> std::optional<FlowEvent> {
    if (t >= 0.5) return FlowEvent{EventKind::stopped, t, 0.0, "half"};
    return std::nullopt;
  };
  const FlowTrace tr = solve_ode(p, RealVector::Ones(1), IntegratorConfig{});
  REQUIRE(tr.find_event(EventKind::stopped) != nullptr);
  CHECK(tr.times.back() >= 0.5);
  CHECK(tr.times.back() < 1.0);
}

TEST_CASE("config validation and method names") {
  IntegratorConfig cfg;
  cfg.output_times = {0.5, 0.2};
  CHECK_THROWS_AS(cfg.validate(), InputError);
  cfg.output_times.clear();
  cfg.rel_tol = 0.0;
  CHECK_THROWS_AS(cfg.validate(), InputError);
  CHECK(parse_integrator("rk4") == IntegratorMethod::rk4_fixed);
  CHECK(to_string(parse_integrator("rk45_adaptive")) == "rk45_adaptive");
  CHECK_THROWS_AS(parse_integrator("euler"), InputError);
}
