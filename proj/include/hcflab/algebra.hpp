#ifndef HCFLAB_ALGEBRA_HPP
#define HCFLAB_ALGEBRA_HPP

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace hcf {

using Scalar = std::complex<double>;
using Index = Eigen::Index;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

/// Raised for malformed user input: dimension mismatches, singular gauges,
/// indefinite metrics, unparsable files. The CLI maps it to exit code 2.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Complex Lie bracket stored as its structure tensor.
///
/// slice(k)(i, j) is the coefficient of e_k in mu(e_i, e_j). Each slice is
/// antisymmetric; the constructor rejects tensors that are not (up to
/// rounding) and projects away the rounding so antisymmetry is exact.
class ComplexLieAlgebra {
 public:
  ComplexLieAlgebra() = default;

  /// Zero bracket on C^dim.
  explicit ComplexLieAlgebra(Index dim, std::vector<std::string> labels = {});

  explicit ComplexLieAlgebra(std::vector<Matrix> slices,
                             std::vector<std::string> labels = {});

  Index dim() const { return static_cast<Index>(slices_.size()); }
  const Matrix& slice(Index k) const { return slices_[static_cast<std::size_t>(k)]; }
  const std::vector<Matrix>& slices() const { return slices_; }
  const std::vector<std::string>& labels() const { return labels_; }

  Scalar coeff(Index k, Index i, Index j) const { return slice(k)(i, j); }

  /// Coefficient vector of mu(e_i, e_j).
  Vector bracket_of_basis(Index i, Index j) const;

  /// Frobenius norm of the structure tensor.
  double norm() const;

 private:
  std::vector<Matrix> slices_;
  std::vector<std::string> labels_;
};

/// Accumulates structure constants entry by entry; build() antisymmetrizes
/// from the i < j entries that were set.
class BracketBuilder {
 public:
  explicit BracketBuilder(Index dim);

  /// Adds value * e_k to mu(e_i, e_j) (and the negative to mu(e_j, e_i)).
  BracketBuilder& add(Index i, Index j, Index k, Scalar value);
  /// Sets mu(e_i, e_j) = v.
  BracketBuilder& set(Index i, Index j, const Vector& v);
  BracketBuilder& labels(std::vector<std::string> names);

  ComplexLieAlgebra build() const;

 private:
  std::vector<Matrix> slices_;
  std::vector<std::string> labels_;
};

/// Positive-definite Hermitian inner product, <u, v> = v^* H u.
class HermitianMetric {
 public:
  HermitianMetric() = default;
  /// Validates Hermiticity (relative 1e-10) and positive definiteness.
  explicit HermitianMetric(Matrix H);

  static HermitianMetric identity(Index dim);

  Index dim() const { return H_.rows(); }
  const Matrix& matrix() const { return H_; }

  Scalar inner(const Vector& u, const Vector& v) const { return v.dot(H_ * u); }

  /// Lower Cholesky factor L with H = L L^*.
  Matrix cholesky_lower() const;

  /// Metric adjoint H^{-1} A^* H.
  Matrix adjoint(const Matrix& A) const;

 private:
  Matrix H_;
};

/// Invertible complex-linear map acting on brackets and metrics.
class GaugeTransform {
 public:
  explicit GaugeTransform(Matrix h);

  static GaugeTransform scalar(Index dim, Scalar s);

  Index dim() const { return h_.rows(); }
  const Matrix& matrix() const { return h_; }
  const Matrix& inverse() const { return inv_; }

  GaugeTransform operator*(const GaugeTransform& other) const {
    return GaugeTransform(h_ * other.h_);
  }

 private:
  Matrix h_;
  Matrix inv_;
};

struct DerivationSpace {
  std::vector<Matrix> basis;  ///< Frobenius-orthonormal
  double tol_used = 0.0;

  Index size() const { return static_cast<Index>(basis.size()); }
};

struct DerivationCheck {
  bool ok = false;
  double residual = 0.0;  ///< |pi(D) mu| / |mu|
};

Vector bracket(const ComplexLieAlgebra& alg, const Vector& u, const Vector& v);

/// Matrix of ad_v = mu(v, .).
Matrix ad_matrix(const ComplexLieAlgebra& alg, const Vector& v);

/// Max over basis triples of the Euclidean norm of the Jacobiator.
double jacobi_residual(const ComplexLieAlgebra& alg);

/// h . mu = h mu(h^{-1} ., h^{-1} .)
ComplexLieAlgebra gauge_act(const GaugeTransform& h, const ComplexLieAlgebra& alg);

/// h . <.,.> = <h^{-1} ., h^{-1} .>, matrix h^{-*} H h^{-1}.
HermitianMetric gauge_act(const GaugeTransform& h, const HermitianMetric& g);

/// pi(D) mu = D mu(.,.) - mu(D.,.) - mu(., D.) as a (not necessarily Lie) tensor.
std::vector<Matrix> derivation_action(const ComplexLieAlgebra& alg, const Matrix& D);

/// Orthonormal basis of {D : pi(D) mu = 0}; singular values below
/// tol * sigma_max count as zero.
DerivationSpace derivation_space(const ComplexLieAlgebra& alg, double tol = 1e-9);

DerivationCheck is_derivation(const ComplexLieAlgebra& alg, const Matrix& D, double tol = 1e-9);

/// Columns Z_i with Z_j^* H Z_i = delta_ij; equal to L^{-*} for H = L L^*.
Matrix unitary_frame(const HermitianMetric& g);

/// Gauge h = L^* (positive upper triangular) with h . g = identity.
GaugeTransform orthonormalizing_gauge(const HermitianMetric& g);

/// Frobenius distance between structure tensors.
double bracket_distance(const ComplexLieAlgebra& a, const ComplexLieAlgebra& b);

/// Scalar multiple c * mu.
ComplexLieAlgebra scaled(const ComplexLieAlgebra& alg, Scalar c);

/// Numerical rank of mu(g ^ g) with singular values relative to the largest.
Index derived_algebra_rank(const ComplexLieAlgebra& alg, double tol = 1e-9);

inline bool is_perfect(const ComplexLieAlgebra& alg, double tol = 1e-9) {
  return alg.dim() > 0 && derived_algebra_rank(alg, tol) == alg.dim();
}

}  // namespace hcf

#endif  // HCFLAB_ALGEBRA_HPP
