#include <doctest.h>

#include "hcflab/experiments.hpp"

using namespace hcf;

TEST_CASE("abelian algebras are flat") {
  const ComplexLieAlgebra a(4);
  const HermitianMetric g = HermitianMetric::identity(4);
  CHECK(ttcr_operator(a, g).P.norm() == 0.0);
  REQUIRE(static_check(a, g).has_value());
  CHECK(*static_check(a, g) == 0.0);
  CHECK(soliton_check(a, g).verdict == SolitonVerdict::static_metric);
}

TEST_CASE("Heisenberg curvature in an orthonormal basis") {
  const ComplexLieAlgebra h = build_heisenberg(1);
  const CurvatureOperator op = ttcr_operator(h, HermitianMetric::identity(3));
  Matrix expect = Matrix::Zero(3, 3);
  expect(2, 2) = 1.0;
  CHECK((op.P - expect).norm() <= 1e-14);
}

TEST_CASE("three routes to P agree") {
  Rng rng(17);
  for (const ComplexLieAlgebra& mu : {build_sl(3).algebra, build_heisenberg(2), build_perfect_double_sl2().doubled}) {
    const HermitianMetric g = random_metric(mu.dim(), rng);
    const CurvatureOperator op = ttcr_operator(mu, g);
    const double np = op.P.norm();
    CHECK((ttcr_operator_gram(mu, g).P - op.P).norm() / np <= 1e-12);
    const Matrix frame = unitary_frame(g) * random_unitary(mu.dim(), rng);
    CHECK((ttcr_operator_in_frame(mu, g, frame).P - op.P).norm() / np <= 1e-12);
  }
}

TEST_CASE("P is metric-self-adjoint and nonnegative") {
  Rng rng(19);
  const ComplexLieAlgebra mu = build_sl(3).algebra;
  const HermitianMetric g = random_metric(mu.dim(), rng);
  const CurvatureOperator op = ttcr_operator(mu, g);
  const Matrix th = op.theta();
  CHECK((th - th.adjoint()).norm() / th.norm() <= 1e-12);
  CHECK(metric_spectrum(op)(0) >= -1e-12);
}

TEST_CASE("gauge equivariance") {
  Rng rng(23);
  const ComplexLieAlgebra mu = build_sl(2).algebra;
  for (int i = 0; i < 10; ++i) {
    const HermitianMetric g = random_metric(mu.dim(), rng);
    CHECK(gauge_equivariance_check(mu, g, random_gauge(mu.dim(), rng)) <= 1e-10);
  }
}

TEST_CASE("scaling the metric scales P inversely") {
  const SLnAnsatz a = build_sl(3);
  const Matrix P1 = ttcr_operator(a.algebra, HermitianMetric::identity(a.dim())).P;
  const Matrix P2 = ttcr_operator(a.algebra, HermitianMetric(4.0 * Matrix::Identity(a.dim(), a.dim()))).P;
  CHECK((P2 - P1 / 4.0).norm() <= 1e-12);
}

TEST_CASE("static metrics") {
  const SLnAnsatz a = build_sl(2);
  const auto lam = static_check(a.algebra, HermitianMetric::identity(a.dim()));
  REQUIRE(lam.has_value());
  CHECK(*lam == doctest::Approx(2.0).epsilon(1e-12));
  CHECK_FALSE(static_check(a.algebra, sigma_metric(a, 1.0, 2.0, 1.0)).has_value());
}

TEST_CASE("soliton certificates on Heisenberg algebras") {
  Rng rng(29);
  const ComplexLieAlgebra h = build_heisenberg(1);
  const SolitonCertificate c = soliton_check(h, random_metric(3, rng));
  CHECK(c.verdict == SolitonVerdict::algebraic);
  CHECK(c.d_star_is_derivation);
  CHECK(c.residual <= 1e-8);
  CHECK(is_derivation(h, c.D).ok);
  CHECK(to_string(c.verdict) == "algebraic");
}

TEST_CASE("soliton type follows the sign of lambda") {
  SolitonCertificate c;
  c.lambda = 2.0;
  CHECK(c.soliton_type() == "shrinking");
  c.lambda = -1.0;
  CHECK(c.soliton_type() == "expanding");
  c.lambda = 0.0;
  CHECK(c.soliton_type() == "steady");
}

TEST_CASE("homothety signature is scale invariant") {
  Rng rng(31);
  const ComplexLieAlgebra mu = build_sl(3).algebra;
  const HermitianMetric g = random_metric(mu.dim(), rng);
  const RealVector s1 = homothety_signature(mu, g);
  const RealVector s2 = homothety_signature(mu, HermitianMetric(3.0 * g.matrix()));
  CHECK(s1.sum() == doctest::Approx(1.0));
  CHECK((s1 - s2).norm() <= 1e-12);
  CHECK(homothety_signature(ComplexLieAlgebra(2), HermitianMetric::identity(2)).norm() == 0.0);
}

TEST_CASE("orthonormal form is Hermitian") {
  Rng rng(37);
  const ComplexLieAlgebra mu = build_heisenberg(2);
  const Matrix P = orthonormal_form(ttcr_operator(mu, random_metric(mu.dim(), rng)));
  CHECK((P - P.adjoint()).norm() <= 1e-12);
}
