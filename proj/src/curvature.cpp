#include "hcflab/curvature.hpp"

#include <algorithm>
#include <cmath>

namespace hcf {

CurvatureOperator ttcr_operator_in_frame(const ComplexLieAlgebra& alg, const HermitianMetric& g,
                                         const Matrix& frame) {
  const Index n = alg.dim();
  if (g.dim() != n || frame.rows() != n || frame.cols() != n) {
    throw InputError("ttcr_operator: dimension mismatch");
  }
  const Matrix& H = g.matrix();
  const Matrix Hinv = Eigen::LLT<Matrix>(H).solve(Matrix::Identity(n, n));
  Matrix S = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    const Matrix A = ad_matrix(alg, frame.col(i));
    S.noalias() += A * Hinv * A.adjoint();
  }
  return {0.5 * S * H, g};
}

CurvatureOperator ttcr_operator(const ComplexLieAlgebra& alg, const HermitianMetric& g) {
  return ttcr_operator_in_frame(alg, g, unitary_frame(g));
}

CurvatureOperator ttcr_operator_gram(const ComplexLieAlgebra& alg, const HermitianMetric& g) {
  const Index n = alg.dim();
  if (g.dim() != n) throw InputError("ttcr_operator_gram: dimension mismatch");
  const Matrix F = unitary_frame(g);
  Matrix G = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j) {
      const Vector w = bracket(alg, F.col(i), F.col(j));
      G.noalias() += w * w.adjoint();
    }
  return {G * g.matrix(), g};
}

Matrix theta_form(const ComplexLieAlgebra& alg, const HermitianMetric& g) {
  return ttcr_operator(alg, g).theta();
}

Matrix orthonormal_form(const CurvatureOperator& op) {
  const Matrix h = op.metric.cholesky_lower().adjoint();
  const Matrix hinv = h.triangularView<Eigen::Upper>().solve(Matrix::Identity(h.rows(), h.cols()));
  const Matrix Q = h * op.P * hinv;
  return 0.5 * (Q + Q.adjoint());
}

RealVector metric_spectrum(const CurvatureOperator& op) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(orthonormal_form(op), Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

std::optional<double> static_check(const ComplexLieAlgebra& alg, const HermitianMetric& g, double tol) {
  const Matrix Q = orthonormal_form(ttcr_operator(alg, g));
  const Index n = Q.rows();
  const double pn = Q.norm();
  if (pn == 0.0) return 0.0;
  const double lambda = Q.trace().real() / static_cast<double>(n);
  const double res = (Q - lambda * Matrix::Identity(n, n)).norm() / pn;
  if (res <= tol) return lambda;
  return std::nullopt;
}

std::string to_string(SolitonVerdict v) {
  switch (v) {
    case SolitonVerdict::static_metric: return "static";
    case SolitonVerdict::algebraic: return "algebraic";
    case SolitonVerdict::semi_algebraic: return "semi_algebraic";
    case SolitonVerdict::none: return "none";
  }
  return "none";
}

std::string SolitonCertificate::soliton_type() const {
  if (lambda > 0.0) return "shrinking";
  if (lambda < 0.0) return "expanding";
  return "steady";
}

namespace {

// Real coordinates of a complex matrix, entries interleaved (re, im).
RealVector realify(const Matrix& M) {
  RealVector v(2 * M.size());
  for (Index c = 0; c < M.cols(); ++c)
    for (Index r = 0; r < M.rows(); ++r) {
      const Index idx = 2 * (c * M.rows() + r);
      v(idx) = M(r, c).real();
      v(idx + 1) = M(r, c).imag();
    }
  return v;
}

}  // namespace

SolitonCertificate soliton_check(const ComplexLieAlgebra& alg, const HermitianMetric& g, double tol) {
  const Index n = alg.dim();
  SolitonCertificate cert;
  cert.tol = tol;
  cert.D = Matrix::Zero(n, n);

  // Work in the orthonormal frame, where the metric adjoint is ^*.
  const GaugeTransform h = orthonormalizing_gauge(g);
  const ComplexLieAlgebra mu = gauge_act(h, alg);
  const Matrix P = orthonormal_form(ttcr_operator(mu, HermitianMetric::identity(n)));
  const double pn = P.norm();
  const Matrix Id = Matrix::Identity(n, n);

  if (pn == 0.0) {
    cert.verdict = SolitonVerdict::static_metric;
    cert.d_star_is_derivation = true;
    return cert;
  }
  const double lambda0 = P.trace().real() / static_cast<double>(n);
  const double res0 = (P - lambda0 * Id).norm() / pn;
  if (res0 <= tol) {
    cert.verdict = SolitonVerdict::static_metric;
    cert.lambda = lambda0;
    cert.residual = res0;
    cert.d_star_is_derivation = true;
    return cert;
  }

  const DerivationSpace der = derivation_space(mu);
  cert.derivation_dim = der.size();
  const Index m = der.size();
  RealMatrix A(2 * n * n, 1 + 2 * m);
  A.col(0) = realify(Id);
  for (Index k = 0; k < m; ++k) {
    const Matrix& B = der.basis[static_cast<std::size_t>(k)];
    A.col(1 + 2 * k) = realify(0.5 * (B + B.adjoint()));
    A.col(2 + 2 * k) = realify(Scalar(0, 0.5) * (B - B.adjoint()));
  }
  Eigen::CompleteOrthogonalDecomposition<RealMatrix> cod(A);
  cod.setThreshold(1e-12);
  const RealVector x = cod.solve(realify(P));

  Matrix D = Matrix::Zero(n, n);
  for (Index k = 0; k < m; ++k) D += Scalar(x(1 + 2 * k), x(2 + 2 * k)) * der.basis[static_cast<std::size_t>(k)];
  cert.lambda = x(0);
  cert.residual = (P - x(0) * Id - 0.5 * (D + D.adjoint())).norm() / pn;
  cert.D = h.inverse() * D * h.matrix();

  const double dn = D.norm();
  if (dn > 0.0) {
    const auto chk = is_derivation(mu, D.adjoint(), tol);
    cert.d_star_residual = chk.residual / dn;
  }
  cert.d_star_is_derivation = cert.d_star_residual <= tol;

  if (cert.residual > tol) {
    cert.verdict = SolitonVerdict::none;
  } else if (dn <= tol * pn) {
    cert.verdict = SolitonVerdict::static_metric;
  } else if (cert.d_star_is_derivation) {
    cert.verdict = SolitonVerdict::algebraic;
  } else {
    cert.verdict = SolitonVerdict::semi_algebraic;
  }
  return cert;
}

double gauge_equivariance_check(const ComplexLieAlgebra& alg, const HermitianMetric& g,
                                const GaugeTransform& h) {
  const Matrix P = ttcr_operator(alg, g).P;
  const Matrix Ph = ttcr_operator(gauge_act(h, alg), gauge_act(h, g)).P;
  const double pn = P.norm();
  const double diff = (h.matrix() * P * h.inverse() - Ph).norm();
  return pn > 0.0 ? diff / pn : diff;
}

RealVector homothety_signature(const ComplexLieAlgebra& alg, const HermitianMetric& g) {
  RealVector ev = metric_spectrum(ttcr_operator(alg, g));
  std::sort(ev.data(), ev.data() + ev.size());
  const double tr = ev.sum();
  if (std::abs(tr) <= 1e-300) return RealVector::Zero(ev.size());
  return ev / tr;
}

}  // namespace hcf
