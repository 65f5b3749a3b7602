#ifndef HCFLAB_CURVATURE_HPP
#define HCFLAB_CURVATURE_HPP

#include <optional>
#include <string>

#include "hcflab/algebra.hpp"

namespace hcf {

/// Torsion-twisted Chern-Ricci operator P of a left-invariant metric,
/// together with the metric it is self-adjoint against.
struct CurvatureOperator {
  Matrix P;
  HermitianMetric metric;

  /// Matrix of the form Theta(u, v) = <P u, v>, i.e. H P.
  Matrix theta() const { return metric.matrix() * P; }
};

/// P = 1/2 sum_i ad_{Z_i} ad_{Z_i}^* over a unitary frame {Z_i}.
CurvatureOperator ttcr_operator(const ComplexLieAlgebra& alg, const HermitianMetric& g);

/// Same operator through the quadratic form <P u, u> = sum_{i<j} |<mu(Z_i, Z_j), u>|^2.
/// Independent code path used to cross-check ttcr_operator.
CurvatureOperator ttcr_operator_gram(const ComplexLieAlgebra& alg, const HermitianMetric& g);

/// Same operator evaluated in an arbitrary H-unitary frame (columns of `frame`).
CurvatureOperator ttcr_operator_in_frame(const ComplexLieAlgebra& alg, const HermitianMetric& g,
                                         const Matrix& frame);

Matrix theta_form(const ComplexLieAlgebra& alg, const HermitianMetric& g);

/// Eigenvalues of P with respect to its metric, ascending.
RealVector metric_spectrum(const CurvatureOperator& op);

/// P expressed in the orthonormal frame of its metric; Hermitian there.
Matrix orthonormal_form(const CurvatureOperator& op);

/// lambda if Theta = lambda g to relative tolerance `tol`.
std::optional<double> static_check(const ComplexLieAlgebra& alg, const HermitianMetric& g,
                                   double tol = 1e-8);

enum class SolitonVerdict { static_metric, algebraic, semi_algebraic, none };

std::string to_string(SolitonVerdict v);

struct SolitonCertificate {
  SolitonVerdict verdict = SolitonVerdict::none;
  double lambda = 0.0;
  Matrix D;                        ///< witness derivation, original basis
  double residual = 0.0;           ///< |P - lambda Id - (D + D^*)/2| / |P|
  double d_star_residual = 0.0;    ///< |pi(D^*) mu| / (|mu| |D|), 0 when D = 0
  bool d_star_is_derivation = false;
  Index derivation_dim = 0;
  double tol = 0.0;

  /// "shrinking", "expanding" or "steady" by the sign of lambda.
  std::string soliton_type() const;
};

/// Least-squares fit P = lambda Id + (D + D^*)/2 over lambda real and D in
/// Der(mu); the witness D has minimal Frobenius norm.
SolitonCertificate soliton_check(const ComplexLieAlgebra& alg, const HermitianMetric& g,
                                 double tol = 1e-8);

/// |h P h^{-1} - P^{h.g}_{h.mu}| / |P|.
double gauge_equivariance_check(const ComplexLieAlgebra& alg, const HermitianMetric& g,
                                const GaugeTransform& h);

/// Spectrum of P divided by tr P, ascending; all zeros when tr P = 0.
RealVector homothety_signature(const ComplexLieAlgebra& alg, const HermitianMetric& g);

}  // namespace hcf

#endif  // HCFLAB_CURVATURE_HPP
