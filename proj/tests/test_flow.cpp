#include <doctest.h>

#include <cmath>

#include "hcflab/experiments.hpp"

using namespace hcf;

TEST_CASE("matrix packing round trip") {
  Rng rng(41);
  const Matrix M = random_complex_matrix(4, 4, rng);
  CHECK((unpack_matrix(pack_matrix(M), 4) - M).norm() == 0.0);
  CHECK(matrix_state_labels(2).size() == 8);
  CHECK_THROWS_AS(unpack_matrix(RealVector::Zero(5), 2), InputError);
}

TEST_CASE("abelian metrics do not move") {
  IntegratorConfig cfg;
  const FlowTrace tr = integrate_metric_flow(ComplexLieAlgebra(3), HermitianMetric::identity(3), cfg);
  CHECK(tr.has_event(EventKind::converged));
  CHECK((metric_at(tr, tr.size() - 1, 3) - Matrix::Identity(3, 3)).norm() == 0.0);
}

TEST_CASE("sl(2) trace metric shrinks linearly and degenerates at t = 1/2") {
  const SLnAnsatz a = build_sl(2);
  IntegratorConfig cfg;
  cfg.output_times = {0.25};
  cfg.t_max = 1.0;
  const FlowTrace tr = integrate_metric_flow(a.algebra, HermitianMetric::identity(3), cfg);
  for (std::size_t i = 0; i < tr.size(); ++i)
    if (tr.times[i] == 0.25) CHECK((metric_at(tr, i, 3) - 0.5 * Matrix::Identity(3, 3)).norm() <= 1e-10);
  const FlowEvent* ev = tr.find_event(EventKind::blowup_detected);
  REQUIRE(ev != nullptr);
  CHECK(ev->t_est == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("normalized flow fixes static metrics") {
  const SLnAnsatz a = build_sl(3);
  IntegratorConfig cfg;
  const FlowTrace tr = integrate_metric_flow(a.algebra, HermitianMetric::identity(a.dim()), cfg, {true});
  CHECK(tr.has_event(EventKind::converged));
}

TEST_CASE("Hermiticity is preserved along a generic flow") {
  Rng rng(43);
  const ComplexLieAlgebra mu = build_perfect_double_sl2().doubled;
  IntegratorConfig cfg;
  cfg.t_max = 0.05;
  const FlowTrace tr = integrate_metric_flow(mu, random_metric(mu.dim(), rng), cfg);
  for (std::size_t i = 0; i < tr.size(); ++i) {
    const Matrix H = metric_at(tr, i, mu.dim());
    CHECK((H - H.adjoint()).norm() / H.norm() <= 1e-12);
  }
}

TEST_CASE("reduced blow-up respects the comparison bounds") {
  const BlowupBounds bb = blowup_time_bounds(1.0, 0.95, 0.9, 2);
  REQUIRE(bb.detected);
  CHECK(bb.t_est <= bb.upper + 1e-6);
  CHECK(bb.t_est > 0.0);
  for (std::size_t i = 0; i < bb.trace.size(); ++i) {
    const double env = bb.envelope(bb.trace.times[i]);
    CHECK(bb.trace.states[i].minCoeff() >= env - 1e-6 * std::max(1.0, env));
  }
  CHECK_THROWS_AS(blowup_time_bounds(-1.0, 1.0, 1.0, 2), InputError);
}

TEST_CASE("x' = x^2 blows up at 1 / x0") {
  IntegratorConfig cfg;
  cfg.t_max = 10.0;
  const FlowTrace tr = integrate_reduced([](const RealVector& s) { return s.cwiseProduct(s).eval(); },
                                         RealVector::Constant(1, 2.0), cfg);
  const FlowEvent* ev = tr.find_event(EventKind::blowup_detected);
  REQUIRE(ev != nullptr);
  CHECK(ev->t_est == doctest::Approx(0.5).epsilon(1e-8));
  CHECK_THROWS_AS(integrate_reduced([](const RealVector& s) { return s; }, RealVector::Zero(1), cfg), InputError);
}

TEST_CASE("gauged sigma metrics give mu_{y,z}") {
  const SLnAnsatz a = build_sl(3);
  const std::vector<double> ys = {1.0, 0.5, 0.2}, zs = {1.0, 0.7, 0.1};
  std::vector<double> times;
  std::vector<Matrix> metrics;
  for (std::size_t i = 0; i < ys.size(); ++i) {
    times.push_back(static_cast<double>(i));
    metrics.push_back(sigma_metric(a, 1.0, ys[i], zs[i]).matrix());
  }
  Matrix bad = Matrix::Identity(a.dim(), a.dim());
  bad(0, 0) = -1.0;
  times.push_back(3.0);
  metrics.push_back(bad);
  std::vector<FlowEvent> skipped;
  const auto traj = bracket_trajectory(a.algebra, times, metrics, &skipped);
  REQUIRE(traj.size() == 3);
  CHECK(skipped.size() == 1);
  for (std::size_t i = 0; i < traj.size(); ++i)
    CHECK(bracket_distance(traj[i].bracket, mu_yz(a, ys[i], zs[i])) <= 1e-12);
}

TEST_CASE("convergence detection") {
  const SLnAnsatz a = build_sl(3);
  const ComplexLieAlgebra target = mu_infinity(a);
  std::vector<BracketSample> same = {{0.0, target}, {1.0, target}};
  CHECK(convergence_detect(same, target, false).last_distance == 0.0);

  std::vector<BracketSample> scaled_traj;
  for (int i = 0; i <= 10; ++i) {
    const double e = std::pow(0.1, i);
    scaled_traj.push_back({static_cast<double>(i), scaled(mu_yz(a, e, std::sqrt(e * asymptotic_ratio(2))), 3.0)});
  }
  const ConvergenceReport sf = convergence_detect(scaled_traj, target, true);
  const ConvergenceReport raw = convergence_detect(scaled_traj, target, false);
  CHECK(sf.converged);
  CHECK_FALSE(raw.converged);

  std::vector<BracketSample> zero = {{0.0, ComplexLieAlgebra(a.dim())}};
  CHECK(convergence_detect(zero, target, true).degenerate);
  CHECK_THROWS_AS(convergence_detect({}, target, true), InputError);
}

TEST_CASE("orbit distance sees unitary symmetries") {
  const PerfectFamily f = build_perfect_double_sl2();
  const double t = 0.6;
  const ComplexLieAlgebra plus = nu_ab(f, 1.0, t), minus = nu_ab(f, 1.0, -t);
  CHECK(bracket_distance(plus, minus) > 0.1);
  CHECK(orbit_distance(minus, plus, {k_flip(f)}, false) <= 1e-12);
  CHECK(std::isnan(scale_free_distance(ComplexLieAlgebra(2), ComplexLieAlgebra(2))));
}
