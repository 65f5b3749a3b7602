#include "hcflab/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace hcf {

namespace {

void require_dim(Index got, Index want, const char* what) {
  if (got != want) {
    std::ostringstream os;
    os << what << ": dimension mismatch (" << got << " vs " << want << ")";
    throw InputError(os.str());
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// ComplexLieAlgebra

ComplexLieAlgebra::ComplexLieAlgebra(Index dim, std::vector<std::string> labels)
    : slices_(static_cast<std::size_t>(dim), Matrix::Zero(dim, dim)), labels_(std::move(labels)) {
  if (dim <= 0) throw InputError("ComplexLieAlgebra: dimension must be positive");
  if (!labels_.empty()) require_dim(static_cast<Index>(labels_.size()), dim, "labels");
}

ComplexLieAlgebra::ComplexLieAlgebra(std::vector<Matrix> slices, std::vector<std::string> labels)
    : slices_(std::move(slices)), labels_(std::move(labels)) {
  const Index n = dim();
  if (n == 0) throw InputError("ComplexLieAlgebra: empty tensor");
  if (!labels_.empty()) require_dim(static_cast<Index>(labels_.size()), n, "labels");
  double total = 0.0;
  double asym = 0.0;
  for (auto& m : slices_) {
    if (m.rows() != n || m.cols() != n) throw InputError("ComplexLieAlgebra: slice shape must be n x n");
    total += m.squaredNorm();
    asym += (m + m.transpose()).squaredNorm();
  }
  if (std::sqrt(asym) > 1e-10 * std::max(1.0, std::sqrt(total))) {
    throw InputError("ComplexLieAlgebra: structure tensor is not antisymmetric");
  }
  for (auto& m : slices_) m = (0.5 * (m - m.transpose())).eval();
}

Vector ComplexLieAlgebra::bracket_of_basis(Index i, Index j) const {
  Vector w(dim());
  for (Index k = 0; k < dim(); ++k) w(k) = slice(k)(i, j);
  return w;
}

double ComplexLieAlgebra::norm() const {
  double s = 0.0;
  for (const auto& m : slices_) s += m.squaredNorm();
  return std::sqrt(s);
}

// ---------------------------------------------------------------------------
// BracketBuilder

BracketBuilder::BracketBuilder(Index dim)
    : slices_(static_cast<std::size_t>(dim), Matrix::Zero(dim, dim)) {
  if (dim <= 0) throw InputError("BracketBuilder: dimension must be positive");
}

BracketBuilder& BracketBuilder::add(Index i, Index j, Index k, Scalar value) {
  const Index n = static_cast<Index>(slices_.size());
  if (i < 0 || j < 0 || k < 0 || i >= n || j >= n || k >= n) {
    throw InputError("BracketBuilder: index out of range");
  }
  if (i == j) {
    if (value != Scalar(0)) throw InputError("BracketBuilder: mu(e_i, e_i) must vanish");
    return *this;
  }
  auto& m = slices_[static_cast<std::size_t>(k)];
  m(i, j) += value;
  m(j, i) -= value;
  return *this;
}

BracketBuilder& BracketBuilder::set(Index i, Index j, const Vector& v) {
  const Index n = static_cast<Index>(slices_.size());
  require_dim(v.size(), n, "BracketBuilder::set");
  for (Index k = 0; k < n; ++k) {
    auto& m = slices_[static_cast<std::size_t>(k)];
    m(i, j) = v(k);
    m(j, i) = -v(k);
  }
  return *this;
}

BracketBuilder& BracketBuilder::labels(std::vector<std::string> names) {
  labels_ = std::move(names);
  return *this;
}

ComplexLieAlgebra BracketBuilder::build() const { return ComplexLieAlgebra(slices_, labels_); }

// ---------------------------------------------------------------------------
// HermitianMetric

HermitianMetric::HermitianMetric(Matrix H) : H_(std::move(H)) {
  if (H_.rows() == 0 || H_.rows() != H_.cols()) throw InputError("HermitianMetric: matrix must be square");
  const double scale = std::max(H_.norm(), 1e-300);
  if ((H_ - H_.adjoint()).norm() > 1e-10 * scale) {
    throw InputError("HermitianMetric: matrix is not Hermitian");
  }
  H_ = (0.5 * (H_ + H_.adjoint())).eval();
  Eigen::LLT<Matrix> llt(H_);
  if (llt.info() != Eigen::Success) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(H_, Eigen::EigenvaluesOnly);
    std::ostringstream os;
    os << "HermitianMetric: matrix is not positive definite (min eigenvalue "
       << es.eigenvalues().minCoeff() << ")";
    throw InputError(os.str());
  }
}

HermitianMetric HermitianMetric::identity(Index dim) { return HermitianMetric(Matrix::Identity(dim, dim)); }

Matrix HermitianMetric::cholesky_lower() const {
  Eigen::LLT<Matrix> llt(H_);
  return llt.matrixL();
}

Matrix HermitianMetric::adjoint(const Matrix& A) const {
  return Eigen::LLT<Matrix>(H_).solve(A.adjoint() * H_);
}

// ---------------------------------------------------------------------------
// GaugeTransform

GaugeTransform::GaugeTransform(Matrix h) : h_(std::move(h)) {
  if (h_.rows() == 0 || h_.rows() != h_.cols()) throw InputError("GaugeTransform: matrix must be square");
  Eigen::PartialPivLU<Matrix> lu(h_);
  if (!(lu.rcond() > 1e-14)) throw InputError("GaugeTransform: matrix is singular");
  inv_ = lu.inverse();
}

GaugeTransform GaugeTransform::scalar(Index dim, Scalar s) {
  return GaugeTransform(s * Matrix::Identity(dim, dim));
}

// ---------------------------------------------------------------------------
// Operations

Vector bracket(const ComplexLieAlgebra& alg, const Vector& u, const Vector& v) {
  const Index n = alg.dim();
  require_dim(u.size(), n, "bracket");
  require_dim(v.size(), n, "bracket");
  Vector w(n);
  for (Index k = 0; k < n; ++k) w(k) = u.transpose() * alg.slice(k) * v;
  return w;
}

Matrix ad_matrix(const ComplexLieAlgebra& alg, const Vector& v) {
  const Index n = alg.dim();
  require_dim(v.size(), n, "ad_matrix");
  Matrix A(n, n);
  for (Index k = 0; k < n; ++k) A.row(k) = v.transpose() * alg.slice(k);
  return A;
}

double jacobi_residual(const ComplexLieAlgebra& alg) {
  const Index n = alg.dim();
  std::vector<Matrix> ad(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) ad[static_cast<std::size_t>(i)] = ad_matrix(alg, Vector::Unit(n, i));
  std::vector<Vector> w(static_cast<std::size_t>(n * n));
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) w[static_cast<std::size_t>(i * n + j)] = alg.bracket_of_basis(i, j);

  auto at = [&](Index i, Index j) -> const Vector& { return w[static_cast<std::size_t>(i * n + j)]; };
  double worst = 0.0;
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j)
      for (Index k = j + 1; k < n; ++k) {
        const Vector J = ad[static_cast<std::size_t>(i)] * at(j, k) +
                         ad[static_cast<std::size_t>(j)] * at(k, i) +
                         ad[static_cast<std::size_t>(k)] * at(i, j);
        worst = std::max(worst, J.norm());
      }
  return worst;
}

ComplexLieAlgebra gauge_act(const GaugeTransform& h, const ComplexLieAlgebra& alg) {
  const Index n = alg.dim();
  require_dim(h.dim(), n, "gauge_act");
  const Matrix& A = h.inverse();
  std::vector<Matrix> pulled(static_cast<std::size_t>(n));
  for (Index l = 0; l < n; ++l) pulled[static_cast<std::size_t>(l)] = A.transpose() * alg.slice(l) * A;
  std::vector<Matrix> out(static_cast<std::size_t>(n), Matrix::Zero(n, n));
  for (Index k = 0; k < n; ++k)
    for (Index l = 0; l < n; ++l) {
      const Scalar c = h.matrix()(k, l);
      if (c != Scalar(0)) out[static_cast<std::size_t>(k)] += c * pulled[static_cast<std::size_t>(l)];
    }
  return ComplexLieAlgebra(std::move(out), alg.labels());
}

HermitianMetric gauge_act(const GaugeTransform& h, const HermitianMetric& g) {
  require_dim(h.dim(), g.dim(), "gauge_act");
  return HermitianMetric(h.inverse().adjoint() * g.matrix() * h.inverse());
}

std::vector<Matrix> derivation_action(const ComplexLieAlgebra& alg, const Matrix& D) {
  const Index n = alg.dim();
  require_dim(D.rows(), n, "derivation_action");
  require_dim(D.cols(), n, "derivation_action");
  std::vector<Matrix> out(static_cast<std::size_t>(n));
  for (Index k = 0; k < n; ++k) {
    Matrix m = -(D.transpose() * alg.slice(k) + alg.slice(k) * D);
    for (Index l = 0; l < n; ++l) {
      if (D(k, l) != Scalar(0)) m += D(k, l) * alg.slice(l);
    }
    out[static_cast<std::size_t>(k)] = std::move(m);
  }
  return out;
}

DerivationSpace derivation_space(const ComplexLieAlgebra& alg, double tol) {
  const Index n = alg.dim();
  const Index pairs = n * (n - 1) / 2;
  const Index rows = std::max<Index>(n * pairs, 1);
  Matrix L = Matrix::Zero(rows, n * n);

  // Column (a, b) is pi(E_ab) mu restricted to i < j; E_ab = e_a e_b^T.
  auto row_of = [&](Index k, Index i, Index j) {
    // index of (i, j), i < j, in lexicographic order
    const Index p = i * n - i * (i + 1) / 2 + (j - i - 1);
    return k * pairs + p;
  };
  for (Index a = 0; a < n; ++a)
    for (Index b = 0; b < n; ++b) {
      const Index col = a * n + b;
      for (Index k = 0; k < n; ++k) {
        const Matrix& M = alg.slice(k);
        for (Index i = 0; i < n; ++i)
          for (Index j = i + 1; j < n; ++j) {
            Scalar v(0);
            if (k == a) v += alg.slice(b)(i, j);
            if (i == b) v -= M(a, j);
            if (j == b) v -= M(i, a);
            if (v != Scalar(0)) L(row_of(k, i, j), col) = v;
          }
      }
    }

  DerivationSpace out;
  out.tol_used = tol;
  Eigen::BDCSVD<Matrix> svd(L, Eigen::ComputeFullV);
  const RealVector& sv = svd.singularValues();
  const double smax = sv.size() > 0 ? sv(0) : 0.0;
  const double cut = tol * smax;
  // V is unitary, so the null columns are already Frobenius-orthonormal.
  for (Index c = 0; c < n * n; ++c) {
    const double s = c < sv.size() ? sv(c) : 0.0;
    if (smax == 0.0 || s <= cut) {
      Vector v = svd.matrixV().col(c);
      Matrix D(n, n);
      for (Index a = 0; a < n; ++a)
        for (Index b = 0; b < n; ++b) D(a, b) = v(a * n + b);
      out.basis.push_back(std::move(D));
    }
  }
  return out;
}

DerivationCheck is_derivation(const ComplexLieAlgebra& alg, const Matrix& D, double tol) {
  const auto act = derivation_action(alg, D);
  double s = 0.0;
  for (const auto& m : act) s += m.squaredNorm();
  const double mu = alg.norm();
  DerivationCheck out;
  out.residual = mu > 0.0 ? std::sqrt(s) / mu : std::sqrt(s);
  out.ok = out.residual <= tol;
  return out;
}

Matrix unitary_frame(const HermitianMetric& g) {
  const Matrix L = g.cholesky_lower();
  const Index n = g.dim();
  return L.adjoint().triangularView<Eigen::Upper>().solve(Matrix::Identity(n, n));
}

GaugeTransform orthonormalizing_gauge(const HermitianMetric& g) {
  return GaugeTransform(g.cholesky_lower().adjoint());
}

double bracket_distance(const ComplexLieAlgebra& a, const ComplexLieAlgebra& b) {
  require_dim(a.dim(), b.dim(), "bracket_distance");
  double s = 0.0;
  for (Index k = 0; k < a.dim(); ++k) s += (a.slice(k) - b.slice(k)).squaredNorm();
  return std::sqrt(s);
}

ComplexLieAlgebra scaled(const ComplexLieAlgebra& alg, Scalar c) {
  std::vector<Matrix> out = alg.slices();
  for (auto& m : out) m *= c;
  return ComplexLieAlgebra(std::move(out), alg.labels());
}

Index derived_algebra_rank(const ComplexLieAlgebra& alg, double tol) {
  const Index n = alg.dim();
  const Index pairs = n * (n - 1) / 2;
  if (pairs == 0) return 0;
  Matrix W(n, pairs);
  Index c = 0;
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j) W.col(c++) = alg.bracket_of_basis(i, j);
  Eigen::BDCSVD<Matrix> svd(W);
  const RealVector& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  return static_cast<Index>((sv.array() > tol * sv(0)).count());
}

}  // namespace hcf
