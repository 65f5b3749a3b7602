#include <doctest.h>

#include "hcflab/experiments.hpp"

using namespace hcf;

namespace {

ComplexLieAlgebra random_tensor(Index d, Rng& rng) {
  std::vector<Matrix> s;
  for (Index k = 0; k < d; ++k) {
    const Matrix A = random_complex_matrix(d, d, rng);
    s.push_back(A - A.transpose());
  }
  return ComplexLieAlgebra(s);
}

}  // namespace

TEST_CASE("builder antisymmetrizes and rejects asymmetric slices") {
  const ComplexLieAlgebra h = BracketBuilder(3).add(0, 1, 2, 1.0).build();
  CHECK(h.coeff(2, 0, 1) == Scalar(1.0));
  CHECK(h.coeff(2, 1, 0) == Scalar(-1.0));
  CHECK(h.norm() == doctest::Approx(std::sqrt(2.0)));

  std::vector<Matrix> bad(2, Matrix::Zero(2, 2));
  bad[0](0, 1) = 1.0;
  CHECK_THROWS_AS(ComplexLieAlgebra{bad}, InputError);
}

TEST_CASE("Jacobi residual separates brackets from generic tensors") {
  CHECK(jacobi_residual(build_sl(2).algebra) <= 1e-12);
  CHECK(jacobi_residual(build_heisenberg(2)) == 0.0);
  Rng rng(7);
  CHECK(jacobi_residual(random_tensor(4, rng)) > 1e-3);
}

TEST_CASE("metric and gauge validation") {
  Matrix H = Matrix::Identity(2, 2);
  H(1, 1) = -1.0;
  CHECK_THROWS_AS(HermitianMetric{H}, InputError);
  Matrix N = Matrix::Identity(2, 2);
  N(0, 1) = 0.5;
  CHECK_THROWS_AS(HermitianMetric{N}, InputError);
  CHECK_THROWS_AS(GaugeTransform(Matrix::Zero(3, 3)), InputError);
}

TEST_CASE("gauge action is a left action on brackets and metrics") {
  Rng rng(11);
  const ComplexLieAlgebra mu = build_sl(3).algebra;
  const GaugeTransform a = random_gauge(mu.dim(), rng), b = random_gauge(mu.dim(), rng);
  CHECK(bracket_distance(gauge_act(a * b, mu), gauge_act(a, gauge_act(b, mu))) <= 1e-12);

  const HermitianMetric g = random_metric(mu.dim(), rng);
  const HermitianMetric ga = gauge_act(a * b, g);
  CHECK((ga.matrix() - gauge_act(a, gauge_act(b, g)).matrix()).norm() <= 1e-10);

  const GaugeTransform h = orthonormalizing_gauge(g);
  CHECK((gauge_act(h, g).matrix() - Matrix::Identity(mu.dim(), mu.dim())).norm() <= 1e-10);
  CHECK((h.matrix() - Matrix(h.matrix().triangularView<Eigen::Upper>())).norm() == 0.0);
}

TEST_CASE("unitary frame is orthonormal for the metric") {
  Rng rng(3);
  const HermitianMetric g = random_metric(5, rng);
  const Matrix Z = unitary_frame(g);
  CHECK((Z.adjoint() * g.matrix() * Z - Matrix::Identity(5, 5)).norm() <= 1e-12);
}

TEST_CASE("derivation spaces") {
  // abelian: all of gl(n)
  CHECK(derivation_space(ComplexLieAlgebra(3)).size() == 9);
  // sl(2): inner derivations only
  CHECK(derivation_space(build_sl(2).algebra).size() == 3);
  // h3: gl(V) preserving the symplectic form up to scale (4) plus V -> Z (2)
  CHECK(derivation_space(build_heisenberg(1)).size() == 6);
  // h5: csp(4) has dim 11, plus V -> Z (4)
  CHECK(derivation_space(build_heisenberg(2)).size() == 15);

  const ComplexLieAlgebra mu = build_sl(3).algebra;
  const DerivationSpace der = derivation_space(mu);
  for (const Matrix& D : der.basis) CHECK(is_derivation(mu, D).ok);
  CHECK_FALSE(is_derivation(mu, Matrix::Identity(mu.dim(), mu.dim())).ok);
}

TEST_CASE("inner derivations") {
  Rng rng(5);
  const ComplexLieAlgebra mu = build_sl(3).algebra;
  for (int i = 0; i < 5; ++i) {
    const Vector X = random_complex_matrix(mu.dim(), 1, rng).col(0);
    CHECK(is_derivation(mu, ad_matrix(mu, X)).residual <= 1e-10);
  }
}

TEST_CASE("ad matrix agrees with the bracket") {
  Rng rng(9);
  const ComplexLieAlgebra mu = build_sl(3).algebra;
  const Vector u = random_complex_matrix(mu.dim(), 1, rng).col(0);
  const Vector v = random_complex_matrix(mu.dim(), 1, rng).col(0);
  CHECK((ad_matrix(mu, u) * v - bracket(mu, u, v)).norm() <= 1e-12);
  CHECK((bracket(mu, u, v) + bracket(mu, v, u)).norm() <= 1e-12);
}

TEST_CASE("perfectness") {
  CHECK(is_perfect(build_sl(2).algebra));
  CHECK(is_perfect(build_sl(4).algebra));
  CHECK_FALSE(is_perfect(build_heisenberg(1)));
  CHECK(derived_algebra_rank(build_heisenberg(2)) == 1);
  CHECK_FALSE(is_perfect(ComplexLieAlgebra(2)));
}
