#include <doctest.h>

#include <cmath>

#include "hcflab/experiments.hpp"

using namespace hcf;

TEST_CASE("sl(m) basics") {
  CHECK_THROWS_AS(build_sl(1), InputError);
  const SLnAnsatz a2 = build_sl(2);
  CHECK(a2.dim() == 3);
  CHECK(jacobi_residual(a2.algebra) <= 1e-12);
  for (int m = 2; m <= 5; ++m) {
    const SLnAnsatz a = build_sl(m);
    CHECK(a.dim() == m * m - 1);
    CHECK(a.sl_size() == (m - 1) * (m - 1) - 1);
    CHECK(block_relation_residual(a) <= 1e-12);
    // the basis is orthonormal for tr(X Y^*)
    for (Index i = 0; i < a.dim(); ++i)
      for (Index j = 0; j < a.dim(); ++j) {
        const Scalar ip = (a.basis[i] * a.basis[j].adjoint()).trace();
        CHECK(std::abs(ip - Scalar(i == j ? 1.0 : 0.0)) <= 1e-14);
      }
  }
}

TEST_CASE("sl(3) bracket relations in the ansatz basis") {
  const SLnAnsatz a = build_sl(3);
  const Vector r1 = Vector::Unit(a.dim(), a.r_index(0)), s1 = Vector::Unit(a.dim(), a.s_index(0));
  const Vector I = Vector::Unit(a.dim(), a.center_index());
  Matrix e11_e33 = Matrix::Zero(3, 3);
  e11_e33(0, 0) = 1.0;
  e11_e33(2, 2) = -1.0;
  const Vector rs = bracket(a.algebra, r1, s1);
  CHECK((a.to_matrix(rs) - e11_e33).norm() <= 1e-14);
  CHECK(std::abs(rs(a.center_index()) - std::sqrt(1.5)) <= 1e-14);
  CHECK((bracket(a.algebra, I, r1) - std::sqrt(1.5) * r1).norm() <= 1e-14);
  CHECK(bracket(a.algebra, r1, Vector::Unit(a.dim(), a.r_index(1))).norm() <= 1e-14);
}

TEST_CASE("Killing form and completeness sum") {
  Rng rng(53);
  for (int m = 2; m <= 4; ++m) {
    const SLnAnsatz a = build_sl(m);
    for (int i = 0; i < 20; ++i) {
      const Vector X = random_complex_matrix(a.dim(), 1, rng).col(0);
      const Vector Y = random_complex_matrix(a.dim(), 1, rng).col(0);
      const Scalar lhs = (ad_matrix(a.algebra, X) * ad_matrix(a.algebra, Y)).trace();
      const Scalar rhs = 2.0 * m * (a.to_matrix(X) * a.to_matrix(Y)).trace();
      CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max(1.0, std::abs(rhs)));
    }
    CHECK((casimir_sum(a) - 2.0 * m * Matrix::Identity(a.dim(), a.dim())).norm() <= 1e-10);
  }
}

TEST_CASE("sigma metrics") {
  const SLnAnsatz a = build_sl(3);
  CHECK((sigma_metric(a, 1, 1, 1).matrix() - Matrix::Identity(8, 8)).norm() == 0.0);
  const Matrix H = sigma_metric(a, 2, 1, 1).matrix();
  CHECK(H(0, 0) == Scalar(0.5));
  CHECK(H(a.center_index(), a.center_index()) == Scalar(1.0));
  CHECK_THROWS_AS(sigma_metric(a, 0.0, 1, 1), InputError);
}

TEST_CASE("closed-form P on the ansatz matches the operator") {
  const auto c = p_xyz_closed_form(2, 1, 1, 1);
  CHECK(c[0] == 3.0);
  CHECK(c[1] == 3.0);
  CHECK(c[2] == 3.0);
  const auto d = p_xyz_closed_form(2, 1, 1, 2);
  CHECK(d[0] == 6.0);
  CHECK(d[1] == 12.0);
  CHECK(d[2] == 3.0);

  Rng rng(59);
  for (int n = 1; n <= 4; ++n) {
    const SLnAnsatz a = build_sl(n + 1);
    for (int s = 0; s < 5; ++s) {
      const double x = rng.uniform(0.1, 10), y = rng.uniform(0.1, 10), z = rng.uniform(0.1, 10);
      const CurvatureOperator op = ttcr_operator(a.algebra, sigma_metric(a, x, y, z));
      const Matrix P = orthonormal_form(op);
      const auto cf = p_xyz_closed_form(n, x, y, z);
      for (Index k = 0; k < a.dim(); ++k) {
        const double e = cf[static_cast<std::size_t>(a.block_of[k])];
        CHECK(std::abs(P(k, k).real() - e) <= 1e-9 * e);
      }
      // Theta stays block diagonal for the ansatz
      const Matrix th = op.theta();
      CHECK((th - Matrix(th.diagonal().asDiagonal())).norm() <= 1e-12 * th.norm());
    }
  }
  // n = 1: no sl_n block; CI eigenvalue 2 z^2 / y, s eigenvalue 2 y
  const auto e = p_xyz_closed_form(1, 5.0, 0.5, 2.0);
  CHECK(e[1] == doctest::Approx(16.0));
  CHECK(e[2] == doctest::Approx(1.0));
}

TEST_CASE("reduced fields") {
  const RealVector a = xyz_rhs(2, (RealVector(3) << 1, 1, 1).finished());
  CHECK((a - RealVector::Constant(3, 3.0)).norm() == 0.0);
  const RealVector b = xyz_rhs(2, (RealVector(3) << 1, 0, 1).finished());
  CHECK((b - (RealVector(3) << 3, 3, 1.5).finished()).norm() <= 1e-15);
  const RealVector c = yz_rhs(2, (RealVector(2) << 0.5, 0.5).finished());
  CHECK(c(0) == doctest::Approx(-0.375));
  CHECK(std::abs(c(1)) <= 1e-15);
  for (int n = 2; n <= 6; ++n) {
    CHECK((yz_rhs(n, RealVector::Ones(2)).array() == 0.0).all());
    CHECK((yz_rhs(n, RealVector::Zero(2)).array() == 0.0).all());
  }
}

TEST_CASE("region D") {
  const RegionReport in = region_D_membership(2, 0.999, 0.999);
  CHECK(in.member);
  CHECK(in.boundary_y == doctest::Approx(0.99866).epsilon(1e-4));
  const RegionReport out = region_D_membership(2, 0.5, 0.9);
  CHECK_FALSE(out.member);
  CHECK(out.boundary_y == doctest::Approx(3 * 0.81 / 2.81));
  CHECK(region_D_membership(2, 0.5, 1.0).boundary_inner == 0.0);
  for (double z : {0.1, 0.5, 0.9, 1.3}) {
    const double v = region_D_membership(3, 0.0, z).boundary_inner;
    CHECK(v == doctest::Approx(boundary_inner_closed_form(3, z)).epsilon(1e-12));
    CHECK(v > 0.0);
  }
}

TEST_CASE("asymptotic ratio") {
  CHECK(asymptotic_ratio(2) == doctest::Approx(1.0 / 3.0));
  CHECK(asymptotic_ratio(3) == doctest::Approx(7.0 / 12.0));
  CHECK_THROWS_AS(asymptotic_ratio(1), InputError);
}

TEST_CASE("mu_{y,z} closed form against the gauge action") {
  const SLnAnsatz a = build_sl(3);
  CHECK(bracket_distance(mu_yz(a, 1.0, 1.0), a.algebra) == 0.0);
  CHECK(bracket_distance(mu_yz(a, 0.25, 0.5), gauge_act(h_yz(a, 0.25, 0.5), a.algebra)) <= 1e-12);
  const SLnAnsatz b = build_sl(4);
  CHECK(bracket_distance(mu_yz(b, 0.3, 0.05), gauge_act(h_yz(b, 0.3, 0.05), b.algebra)) <= 1e-12);
  CHECK_THROWS_AS(mu_yz(a, 0.0, 1.0), InputError);
  // along z^2 = ratio * y the bracket approaches the limit up to scale
  const double y = 1e-12;
  CHECK(scale_free_distance(mu_yz(a, y, std::sqrt(asymptotic_ratio(2) * y)), mu_infinity(a)) <= 1e-5);
}

TEST_CASE("limit bracket") {
  CHECK_THROWS_AS(mu_infinity(build_sl(2)), InputError);
  for (int n = 2; n <= 3; ++n) {
    const SLnAnsatz a = build_sl(n + 1);
    const ComplexLieAlgebra mu = mu_infinity(a);
    CHECK(jacobi_residual(mu) <= 1e-12);
    CHECK(heisenberg_relation_residual(a, mu) <= 1e-12);
    CHECK(ideal_invariance_residual(a, mu) <= 1e-12);
    CHECK(is_derivation(mu, limit_derivation(a)).residual <= 1e-10);

    const Matrix P = ttcr_operator(mu, HermitianMetric::identity(a.dim())).P;
    const double nn = n;
    const Matrix expect = nn * Matrix::Identity(a.dim(), a.dim()) - limit_derivation(a) / nn;
    CHECK((P - expect).norm() <= 1e-12);

    const SolitonCertificate c = soliton_check(mu, HermitianMetric::identity(a.dim()));
    CHECK(c.verdict == SolitonVerdict::algebraic);
    CHECK(c.lambda == doctest::Approx(nn));

    // the radical CI + s is Heisenberg: derived series 2n+1, 1, 0
    Matrix span = Matrix::Zero(a.dim(), 2 * n + 1);
    for (int k = 0; k < 2 * n + 1; ++k) span(a.center_index() + k, k) = 1.0;
    const std::vector<Index> dims = derived_series_dims(mu, span);
    CHECK(dims == std::vector<Index>{2 * n + 1, 1, 0});
  }
}

TEST_CASE("Heisenberg algebras") {
  const ComplexLieAlgebra h = build_heisenberg(2);
  CHECK(h.dim() == 5);
  CHECK(h.labels().back() == "Z");
  CHECK(is_derivation(h, heisenberg_derivation(2)).residual <= 1e-14);
  // the center is spanned by Z
  Matrix ads(h.dim() * h.dim(), h.dim());
  for (Index k = 0; k < h.dim(); ++k) {
    const Matrix ad = ad_matrix(h, Vector::Unit(h.dim(), k));
    ads.col(k) = Eigen::Map<const Vector>(ad.data(), ad.size());
  }
  Eigen::FullPivLU<Matrix> lu(ads);
  CHECK(lu.rank() == h.dim() - 1);
  CHECK_THROWS_AS(build_heisenberg(0), InputError);
}

TEST_CASE("perfect double over sl(2)") {
  const PerfectFamily f = build_perfect_double_sl2();
  CHECK(f.dim() == 6);
  CHECK(f.base_scale == doctest::Approx(2.0));
  CHECK(jacobi_residual(f.doubled) <= 1e-12);
  CHECK(is_perfect(f.doubled));
  const auto lam = static_check(f.base, HermitianMetric::identity(3));
  REQUIRE(lam.has_value());
  CHECK(*lam == doctest::Approx(1.0));
  // second factor is abelian, and the first acts on it by mu
  for (Index i = 3; i < 6; ++i)
    for (Index j = 3; j < 6; ++j) CHECK(f.doubled.bracket_of_basis(i, j).norm() == 0.0);
  for (Index i = 0; i < 3; ++i)
    for (Index j = 0; j < 3; ++j) {
      const Vector v = f.doubled.bracket_of_basis(i, 3 + j);
      CHECK(v.head(3).norm() == 0.0);
      CHECK((v.tail(3) - f.base.bracket_of_basis(i, j)).norm() <= 1e-15);
    }
  CHECK_THROWS_AS(build_perfect_double(build_heisenberg(1), HermitianMetric::identity(3)), InputError);
}

TEST_CASE("nu_{a,b} closed form") {
  const PerfectFamily f = build_perfect_double_sl2();
  CHECK(bracket_distance(nu_ab(f, 1.0, 0.0), f.doubled) == 0.0);
  CHECK(bracket_distance(nu_ab(f, 2.0, 0.7), gauge_act(h_ab(f, 2.0, 0.7), f.doubled)) <= 1e-12);
  CHECK(bracket_distance(nu_ab(f, -0.5, -1.3), gauge_act(h_ab(f, -0.5, -1.3), f.doubled)) <= 1e-12);
  CHECK(bracket_distance(nu_ab(f, 2.0, 0.4), scaled(nu_ab(f, 1.0, 0.4), 0.5)) <= 1e-15);
  CHECK_THROWS_AS(nu_ab(f, 0.0, 1.0), InputError);

  // second ^ second components at (1, 1): -mu on the first factor, -2 mu on the second
  const ComplexLieAlgebra nu = nu_ab(f, 1.0, 1.0);
  for (Index i = 0; i < 3; ++i)
    for (Index j = 0; j < 3; ++j) {
      const Vector v = nu.bracket_of_basis(3 + i, 3 + j);
      const Vector m = f.base.bracket_of_basis(i, j);
      CHECK((v.head(3) + m).norm() <= 1e-15);
      CHECK((v.tail(3) + 2.0 * m).norm() <= 1e-15);
    }
}

TEST_CASE("P of nu_{a,b}") {
  const PerfectFamily f = build_perfect_double_sl2();
  const HermitianMetric id = HermitianMetric::identity(6);
  CHECK((p_nu_ab_closed_form(1, 0) - (RealMatrix(2, 2) << 1, 0, 0, 2).finished()).norm() == 0.0);
  CHECK((p_nu_ab_closed_form(2, 1) - p_nu_ab_closed_form(1, 1) / 4).norm() <= 1e-15);
  const RealMatrix oracle = block_reduce(ttcr_operator(nu_ab(f, 1, 1), id).P, 3);
  CHECK((oracle - (RealMatrix(2, 2) << 2, 2, 2, 6).finished()).norm() <= 1e-12);
  CHECK((oracle - p_nu_ab_closed_form(1, 1)).norm() <= 1e-12);
  CHECK((oracle - p_nu_ab_printed(1, 1)).norm() > 1.0);
  CHECK((p_nu_ab_printed(1, 0) - p_nu_ab_closed_form(1, 0)).norm() == 0.0);

  Rng rng(61);
  for (int s = 0; s < 10; ++s) {
    const double a = rng.uniform(0.5, 2.0), b = rng.uniform(-2.0, 2.0);
    const Matrix P = ttcr_operator(nu_ab(f, a, b), id).P;
    CHECK((block_reduce(P, 3) - p_nu_ab_closed_form(a, b)).norm() <= 1e-9 * p_nu_ab_closed_form(a, b).norm());
    CHECK(block_structure_residual(P, 3) <= 1e-12);
  }
}

TEST_CASE("solitons on the line nu_{1,t}") {
  const PerfectFamily f = build_perfect_double_sl2();
  const double q = std::pow(2.0, -0.25);
  const auto rows = perfect_soliton_table(f, {0.0, q, -q, 1.0, -1.0});
  REQUIRE(rows.size() == 5);
  CHECK(rows[0].cert.verdict == SolitonVerdict::algebraic);
  CHECK(rows[0].cert.lambda == doctest::Approx(1.0));
  Matrix D0 = Matrix::Zero(6, 6);
  D0.bottomRightCorner(3, 3).setIdentity();
  CHECK((rows[0].cert.D - D0).norm() <= 1e-8);
  for (const auto& r : rows) CHECK(r.d_t_residual <= 1e-14);

  // the non-algebraic solitons sit at t = +-1: P = 2 Id + 2 (D_t + D_t^*)
  for (std::size_t i : {3u, 4u}) {
    CHECK(rows[i].cert.verdict == SolitonVerdict::semi_algebraic);
    CHECK(rows[i].cert.lambda == doctest::Approx(2.0));
    CHECK(rows[i].cert.d_star_residual >= 0.1);
    const Matrix Dt = d_t(f, rows[i].t);
    const Matrix P = ttcr_operator(nu_ab(f, 1.0, rows[i].t), HermitianMetric::identity(6)).P;
    CHECK((P - 2.0 * Matrix::Identity(6, 6) - 2.0 * (Dt + Dt.adjoint())).norm() <= 1e-12);
  }
  CHECK(rows[1].cert.verdict == SolitonVerdict::none);

  const auto located = locate_soliton_parameters(f);
  REQUIRE(located.size() == 3);
  CHECK(located[0] == doctest::Approx(-1.0).epsilon(1e-6));
  CHECK(std::abs(located[1]) <= 1e-6);
  CHECK(located[2] == doctest::Approx(1.0).epsilon(1e-6));

  CHECK(bracket_distance(gauge_act(k_flip(f), nu_ab(f, 1.0, -q)), nu_ab(f, 1.0, q)) <= 1e-12);
}

TEST_CASE("block signatures") {
  const RealVector s = block_signature((RealMatrix(2, 2) << 1, 0, 0, 2).finished());
  CHECK(s(0) == doctest::Approx(1.0 / 3.0));
  CHECK(s(1) == doctest::Approx(2.0 / 3.0));
  const RealVector p = block_signature(p_nu_ab_printed(1, 1));
  CHECK(p(0) == doctest::Approx(0.0912).epsilon(1e-3));
}
