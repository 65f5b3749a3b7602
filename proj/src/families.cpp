#include "hcflab/families.hpp"

#include <algorithm>
#include <cmath>

namespace hcf {

namespace {

Matrix unit(Index m, Index i, Index j) {
  Matrix E = Matrix::Zero(m, m);
  E(i, j) = 1.0;
  return E;
}

double sup_norm(const Vector& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace

Vector SLnAnsatz::coords(const Matrix& X) const {
  Vector v(dim());
  for (Index k = 0; k < dim(); ++k) v(k) = (X * basis[static_cast<std::size_t>(k)].adjoint()).trace();
  return v;
}

Matrix SLnAnsatz::to_matrix(const Vector& v) const {
  const Index m = n + 1;
  Matrix X = Matrix::Zero(m, m);
  for (Index k = 0; k < dim(); ++k) X += v(k) * basis[static_cast<std::size_t>(k)];
  return X;
}

Vector SLnAnsatz::star(const Vector& v) const { return coords(to_matrix(v).adjoint()); }

Matrix SLnAnsatz::projector(SlBlock b) const {
  Matrix Pr = Matrix::Zero(dim(), dim());
  for (Index k = 0; k < dim(); ++k)
    if (block_of[static_cast<std::size_t>(k)] == b) Pr(k, k) = 1.0;
  return Pr;
}

SLnAnsatz build_sl(int m) {
  if (m < 2) throw InputError("build_sl: m must be >= 2");
  SLnAnsatz a;
  a.n = m - 1;
  const int n = a.n;
  const double r2 = std::sqrt(2.0);
  std::vector<std::string> labels;

  // generalized Gell-Mann matrices of the upper-left n x n corner
  int u = 0;
  for (int j = 0; j < n; ++j)
    for (int k = j + 1; k < n; ++k) {
      a.basis.push_back((unit(m, j, k) + unit(m, k, j)) / r2);
      a.basis.push_back(Scalar(0.0, 1.0) * (unit(m, j, k) - unit(m, k, j)) / r2);
      labels.push_back("u" + std::to_string(++u));
      labels.push_back("u" + std::to_string(++u));
    }
  for (int l = 1; l < n; ++l) {
    Matrix D = Matrix::Zero(m, m);
    for (int j = 0; j < l; ++j) D(j, j) = 1.0;
    D(l, l) = -static_cast<double>(l);
    a.basis.push_back(D / std::sqrt(static_cast<double>(l * (l + 1))));
    labels.push_back("u" + std::to_string(++u));
  }
  a.block_of.assign(a.basis.size(), SlBlock::sl_n);

  Matrix I = Matrix::Identity(m, m);
  I(n, n) = -static_cast<double>(n);
  a.basis.push_back(I / std::sqrt(static_cast<double>(n) * (n + 1)));
  labels.push_back("I");
  a.block_of.push_back(SlBlock::center);

  for (int i = 0; i < n; ++i) {
    a.basis.push_back(unit(m, i, n));
    labels.push_back("r" + std::to_string(i + 1));
    a.block_of.push_back(SlBlock::s);
  }
  for (int i = 0; i < n; ++i) {
    a.basis.push_back(unit(m, n, i));
    labels.push_back("s" + std::to_string(i + 1));
    a.block_of.push_back(SlBlock::s);
  }

  const Index d = static_cast<Index>(a.basis.size());
  std::vector<Matrix> slices(static_cast<std::size_t>(d), Matrix::Zero(d, d));
  for (Index i = 0; i < d; ++i)
    for (Index j = i + 1; j < d; ++j) {
      const Matrix& Bi = a.basis[static_cast<std::size_t>(i)];
      const Matrix& Bj = a.basis[static_cast<std::size_t>(j)];
      const Matrix C = Bi * Bj - Bj * Bi;
      for (Index k = 0; k < d; ++k) {
        const Scalar c = (C * a.basis[static_cast<std::size_t>(k)].adjoint()).trace();
        slices[static_cast<std::size_t>(k)](i, j) = c;
        slices[static_cast<std::size_t>(k)](j, i) = -c;
      }
    }
  a.algebra = ComplexLieAlgebra(std::move(slices), std::move(labels));
  return a;
}

HermitianMetric sigma_metric(const SLnAnsatz& a, double x, double y, double z) {
  if (!(x > 0.0 && y > 0.0 && z > 0.0)) throw InputError("sigma_metric: x, y, z must be positive");
  Vector d(a.dim());
  for (Index k = 0; k < a.dim(); ++k) {
    switch (a.block_of[static_cast<std::size_t>(k)]) {
      case SlBlock::sl_n: d(k) = 1.0 / x; break;
      case SlBlock::center: d(k) = 1.0 / y; break;
      case SlBlock::s: d(k) = 1.0 / z; break;
    }
  }
  return HermitianMetric(d.asDiagonal().toDenseMatrix());
}

std::array<double, 3> p_xyz_closed_form(int n, double x, double y, double z) {
  const double nn = n;
  return {nn * x + z * z / x, (nn + 1) * z * z / y, (nn + 1) / nn * ((nn - 1) * x + y)};
}

RealVector xyz_rhs(int n, const RealVector& s) {
  const double nn = n;
  const double x = s(0), y = s(1), z = s(2);
  RealVector d(3);
  d << nn * x * x + z * z, (nn + 1) * z * z, (nn + 1) * z * ((nn - 1) * x + y) / nn;
  return d;
}

RealVector yz_rhs(int n, const RealVector& s) {
  const double nn = n;
  const double y = s(0), z = s(1);
  RealVector d(2);
  d << z * z * (nn + 1 - y) - nn * y, (nn + 1) * z * (nn - 1 + y) / nn - (nn + z * z) * z;
  return d;
}

ReducedField xyz_field(int n) {
  return [n](const RealVector& s) { return xyz_rhs(n, s); };
}

ReducedField yz_field(int n) {
  return [n](const RealVector& s) { return yz_rhs(n, s); };
}

RegionReport region_D_membership(int n, double y, double z) {
  const double nn = n;
  RegionReport r;
  r.boundary_y = z * z * (nn + 1) / (z * z + nn);
  r.member = r.boundary_y <= y && y < 1.0;
  RealVector p(2);
  p << r.boundary_y, z;
  const RealVector v = yz_rhs(n, p);
  const double Ny = (nn + z * z) * (nn + z * z);
  const double Nz = -2.0 * nn * (nn + 1) * z;
  r.boundary_inner = Ny * v(0) + Nz * v(1);
  return r;
}

double boundary_inner_closed_form(int n, double z) {
  const double nn = n;
  const double w = z * z - 1.0;
  return 2.0 * nn * (nn + 1) * z * z * w * w / (nn + z * z);
}

double asymptotic_ratio(int n) {
  if (n <= 1) throw InputError("asymptotic_ratio: n must be >= 2");
  const double nn = n;
  return (nn * nn - 2) / (nn * (nn + 1));
}

GaugeTransform h_yz(const SLnAnsatz& a, double y, double z) {
  if (!(y > 0.0 && z > 0.0)) throw InputError("h_yz: y and z must be positive");
  Vector d(a.dim());
  for (Index k = 0; k < a.dim(); ++k) {
    switch (a.block_of[static_cast<std::size_t>(k)]) {
      case SlBlock::sl_n: d(k) = 1.0; break;
      case SlBlock::center: d(k) = 1.0 / std::sqrt(y); break;
      case SlBlock::s: d(k) = 1.0 / std::sqrt(z); break;
    }
  }
  return GaugeTransform(d.asDiagonal().toDenseMatrix());
}

namespace {

// Rescales each structure constant c^k_ij of the sl bracket by f(block i, block j, block k).
template <class F>
ComplexLieAlgebra rescale_by_blocks(const SLnAnsatz& a, F f) {
  const Index d = a.dim();
  std::vector<Matrix> slices(static_cast<std::size_t>(d), Matrix::Zero(d, d));
  for (Index k = 0; k < d; ++k)
    for (Index i = 0; i < d; ++i)
      for (Index j = 0; j < d; ++j) {
        const Scalar c = a.algebra.coeff(k, i, j);
        if (c == Scalar(0.0)) continue;
        slices[static_cast<std::size_t>(k)](i, j) =
            c * f(a.block_of[static_cast<std::size_t>(i)], a.block_of[static_cast<std::size_t>(j)],
                  a.block_of[static_cast<std::size_t>(k)]);
      }
  return ComplexLieAlgebra(std::move(slices), a.algebra.labels());
}

}  // namespace

ComplexLieAlgebra mu_yz(const SLnAnsatz& a, double y, double z) {
  if (!(y > 0.0 && z > 0.0)) throw InputError("mu_yz: y and z must be positive");
  const double sy = std::sqrt(y);
  return rescale_by_blocks(a, [&](SlBlock bi, SlBlock bj, SlBlock bk) {
    const bool ss = bi == SlBlock::s && bj == SlBlock::s;
    const bool is = (bi == SlBlock::center && bj == SlBlock::s) || (bi == SlBlock::s && bj == SlBlock::center);
    if (ss) return bk == SlBlock::center ? z / sy : z;
    if (is) return sy;
    return 1.0;
  });
}

ComplexLieAlgebra mu_infinity(const SLnAnsatz& a) {
  const double c = std::sqrt(asymptotic_ratio(a.n));
  return rescale_by_blocks(a, [&](SlBlock bi, SlBlock bj, SlBlock bk) {
    const bool ss = bi == SlBlock::s && bj == SlBlock::s;
    const bool is = (bi == SlBlock::center && bj == SlBlock::s) || (bi == SlBlock::s && bj == SlBlock::center);
    if (ss) return bk == SlBlock::center ? c : 0.0;
    if (is) return 0.0;
    return 1.0;
  });
}

Matrix limit_derivation(const SLnAnsatz& a) { return 2.0 * a.projector(SlBlock::center) + a.projector(SlBlock::s); }

double heisenberg_relation_residual(const SLnAnsatz& a, const ComplexLieAlgebra& mu) {
  const double nn = a.n;
  const double c = std::sqrt(nn * nn - 2) / nn;
  const Index d = a.dim();
  double worst = 0.0;
  auto e = [d](Index k) { return Vector::Unit(d, k); };
  for (int i = 0; i < a.n; ++i) {
    for (int j = 0; j < a.n; ++j) {
      Vector expect = Vector::Zero(d);
      if (i == j) expect(a.center_index()) = c;
      worst = std::max(worst, sup_norm(bracket(mu, e(a.r_index(i)), e(a.s_index(j))) - expect));
      worst = std::max(worst, sup_norm(bracket(mu, e(a.r_index(i)), e(a.r_index(j)))));
      worst = std::max(worst, sup_norm(bracket(mu, e(a.s_index(i)), e(a.s_index(j)))));
    }
    worst = std::max(worst, sup_norm(bracket(mu, e(a.center_index()), e(a.r_index(i)))));
    worst = std::max(worst, sup_norm(bracket(mu, e(a.center_index()), e(a.s_index(i)))));
  }
  return worst;
}

double ideal_invariance_residual(const SLnAnsatz& a, const ComplexLieAlgebra& mu) {
  const Matrix out = a.projector(SlBlock::sl_n);
  double worst = 0.0;
  for (Index i = 0; i < a.dim(); ++i) {
    if (a.block_of[static_cast<std::size_t>(i)] != SlBlock::sl_n) continue;
    for (Index j = 0; j < a.dim(); ++j) {
      if (a.block_of[static_cast<std::size_t>(j)] == SlBlock::sl_n) continue;
      worst = std::max(worst, (out * mu.bracket_of_basis(i, j)).norm());
    }
  }
  return worst;
}

double block_relation_residual(const SLnAnsatz& a) {
  const Matrix Psl = a.projector(SlBlock::sl_n);
  const Matrix Pc = a.projector(SlBlock::center);
  const Matrix Ps = a.projector(SlBlock::s);
  const Matrix Id = Matrix::Identity(a.dim(), a.dim());
  auto allowed = [&](SlBlock bi, SlBlock bj) -> Matrix {
    if (bi == SlBlock::s && bj == SlBlock::s) return Psl + Pc;
    if (bi == SlBlock::s || bj == SlBlock::s) return Ps;
    if (bi == SlBlock::sl_n && bj == SlBlock::sl_n) return Psl;
    return Matrix::Zero(a.dim(), a.dim());  // sl_n ^ CI and CI ^ CI vanish
  };
  double worst = 0.0;
  for (Index i = 0; i < a.dim(); ++i)
    for (Index j = 0; j < a.dim(); ++j) {
      const Matrix keep = allowed(a.block_of[static_cast<std::size_t>(i)], a.block_of[static_cast<std::size_t>(j)]);
      worst = std::max(worst, ((Id - keep) * a.algebra.bracket_of_basis(i, j)).norm());
    }
  return worst;
}

namespace {

// Orthonormal basis of the column span, relative threshold tol.
Matrix span_basis(const Matrix& W, double tol) {
  if (W.cols() == 0) return Matrix(W.rows(), 0);
  Eigen::JacobiSVD<Matrix> svd(W, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  const double smax = sv.size() ? sv(0) : 0.0;
  Index r = 0;
  for (Index i = 0; i < sv.size(); ++i)
    if (sv(i) > tol * std::max(1.0, smax)) ++r;
  return svd.matrixU().leftCols(r);
}

}  // namespace

std::vector<Index> derived_series_dims(const ComplexLieAlgebra& mu, const Matrix& span, double tol) {
  Matrix V = span_basis(span, tol);
  std::vector<Index> dims{V.cols()};
  while (V.cols() > 0) {
    const Index k = V.cols();
    Matrix W(mu.dim(), k * (k - 1) / 2);
    Index c = 0;
    for (Index i = 0; i < k; ++i)
      for (Index j = i + 1; j < k; ++j) W.col(c++) = bracket(mu, V.col(i), V.col(j));
    V = span_basis(W, tol);
    const Index prev = dims.back();
    dims.push_back(V.cols());
    if (V.cols() == prev) break;
  }
  return dims;
}

Matrix casimir_sum(const SLnAnsatz& a) {
  const Index d = a.dim();
  Matrix S = Matrix::Zero(d, d);
  for (Index k = 0; k < d; ++k) {
    const Vector b = Vector::Unit(d, k);
    S += ad_matrix(a.algebra, a.star(b)) * ad_matrix(a.algebra, b);
  }
  return S;
}

ComplexLieAlgebra build_heisenberg(int m) {
  if (m < 1) throw InputError("build_heisenberg: m must be >= 1");
  const Index d = 2 * m + 1;
  BracketBuilder bb(d);
  std::vector<std::string> labels;
  for (int i = 0; i < m; ++i) labels.push_back("X" + std::to_string(i + 1));
  for (int i = 0; i < m; ++i) labels.push_back("Y" + std::to_string(i + 1));
  labels.push_back("Z");
  for (int i = 0; i < m; ++i) bb.add(i, m + i, d - 1, 1.0);
  return bb.labels(labels).build();
}

Matrix heisenberg_derivation(int m) {
  const Index d = 2 * m + 1;
  Matrix D = Matrix::Identity(d, d);
  D(d - 1, d - 1) = 2.0;
  return D;
}

namespace {

ComplexLieAlgebra assemble_nu(const ComplexLieAlgebra& base, double a, double b) {
  const Index d = base.dim();
  std::vector<Matrix> slices(static_cast<std::size_t>(2 * d), Matrix::Zero(2 * d, 2 * d));
  for (Index k = 0; k < d; ++k) {
    const Matrix& M = base.slice(k);
    Matrix& first = slices[static_cast<std::size_t>(k)];
    Matrix& second = slices[static_cast<std::size_t>(d + k)];
    first.topLeftCorner(d, d) = M / a;
    first.bottomRightCorner(d, d) = -(b * b / a) * M;
    second.topRightCorner(d, d) = M / a;
    second.bottomLeftCorner(d, d) = -M.transpose() / a;
    second.bottomRightCorner(d, d) = -(2.0 * b / a) * M;
  }
  std::vector<std::string> labels;
  const auto& bl = base.labels();
  for (int f = 0; f < 2; ++f)
    for (Index k = 0; k < d; ++k)
      labels.push_back((static_cast<std::size_t>(k) < bl.size() ? bl[static_cast<std::size_t>(k)] : "e" + std::to_string(k)) +
                       (f == 0 ? "_1" : "_2"));
  return ComplexLieAlgebra(std::move(slices), std::move(labels));
}

}  // namespace

PerfectFamily build_perfect_double(const ComplexLieAlgebra& base, const HermitianMetric& g0) {
  const auto lam = static_check(base, g0);
  if (!lam) throw InputError("build_perfect_double: base metric is not static");
  if (!(*lam > 0.0)) throw InputError("build_perfect_double: static constant must be positive");
  PerfectFamily f;
  f.base_scale = *lam;
  f.base = scaled(gauge_act(orthonormalizing_gauge(g0), base), 1.0 / std::sqrt(*lam));
  f.doubled = assemble_nu(f.base, 1.0, 0.0);
  return f;
}

PerfectFamily build_perfect_double_sl2() {
  const SLnAnsatz sl2 = build_sl(2);
  return build_perfect_double(sl2.algebra, HermitianMetric::identity(sl2.dim()));
}

GaugeTransform h_ab(const PerfectFamily& f, double a, double b) {
  if (a == 0.0) throw InputError("h_ab: a must be nonzero");
  const Index d = f.base_dim();
  Matrix h = Matrix::Identity(2 * d, 2 * d);
  h.topLeftCorner(d, d) *= a;
  h.topRightCorner(d, d) = b * Matrix::Identity(d, d);
  return GaugeTransform(h);
}

ComplexLieAlgebra nu_ab(const PerfectFamily& f, double a, double b) {
  if (a == 0.0) throw InputError("nu_ab: a must be nonzero");
  return assemble_nu(f.base, a, b);
}

RealMatrix p_nu_ab_closed_form(double a, double b) {
  if (a == 0.0) throw InputError("p_nu_ab_closed_form: a must be nonzero");
  RealMatrix P(2, 2);
  P << 1 + std::pow(b, 4), 2 * std::pow(b, 3), 2 * std::pow(b, 3), 2 + 4 * b * b;
  return P / (a * a);
}

RealMatrix p_nu_ab_printed(double a, double b) {
  if (a == 0.0) throw InputError("p_nu_ab_printed: a must be nonzero");
  RealMatrix P(2, 2);
  P << 1 + 2 * std::pow(b, 4), 4 * std::pow(b, 3), 4 * std::pow(b, 3), 2 + 8 * b * b;
  return P / (a * a);
}

RealMatrix block_reduce(const Matrix& P, Index base_dim) {
  if (P.rows() != 2 * base_dim) throw InputError("block_reduce: size mismatch");
  RealMatrix B(2, 2);
  for (Index p = 0; p < 2; ++p)
    for (Index q = 0; q < 2; ++q)
      B(p, q) = P.block(p * base_dim, q * base_dim, base_dim, base_dim).trace().real() / static_cast<double>(base_dim);
  return B;
}

double block_structure_residual(const Matrix& P, Index base_dim) {
  const RealMatrix B = block_reduce(P, base_dim);
  const Matrix Id = Matrix::Identity(base_dim, base_dim);
  Matrix R = P;
  for (Index p = 0; p < 2; ++p)
    for (Index q = 0; q < 2; ++q) R.block(p * base_dim, q * base_dim, base_dim, base_dim) -= B(p, q) * Id;
  const double np = P.norm();
  return np > 0.0 ? R.norm() / np : R.norm();
}

Matrix d_t(const PerfectFamily& f, double t) {
  const Index d = f.base_dim();
  Matrix D = Matrix::Zero(2 * d, 2 * d);
  D.topRightCorner(d, d) = t * Matrix::Identity(d, d);
  D.bottomRightCorner(d, d) = Matrix::Identity(d, d);
  return D;
}

GaugeTransform k_flip(const PerfectFamily& f) {
  const Index d = f.base_dim();
  Matrix k = Matrix::Identity(2 * d, 2 * d);
  k.bottomRightCorner(d, d) *= -1.0;
  return GaugeTransform(k);
}

std::vector<PerfectSolitonRow> perfect_soliton_table(const PerfectFamily& f, const std::vector<double>& ts, double tol) {
  std::vector<PerfectSolitonRow> rows;
  const HermitianMetric id = HermitianMetric::identity(f.dim());
  for (double t : ts) {
    PerfectSolitonRow row;
    row.t = t;
    const ComplexLieAlgebra nu = nu_ab(f, 1.0, t);
    row.cert = soliton_check(nu, id, tol);
    row.d_t_residual = is_derivation(nu, d_t(f, t)).residual;
    rows.push_back(std::move(row));
  }
  return rows;
}

double soliton_residual(const PerfectFamily& f, double t) {
  return soliton_check(nu_ab(f, 1.0, t), HermitianMetric::identity(f.dim())).residual;
}

std::vector<double> locate_soliton_parameters(const PerfectFamily& f, double lo, double hi, int grid) {
  if (grid < 3 || !(hi > lo)) throw InputError("locate_soliton_parameters: bad grid");
  std::vector<double> ts(static_cast<std::size_t>(grid)), rs(static_cast<std::size_t>(grid));
  for (int i = 0; i < grid; ++i) {
    ts[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (grid - 1);
    rs[static_cast<std::size_t>(i)] = soliton_residual(f, ts[static_cast<std::size_t>(i)]);
  }
  std::vector<double> found;
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int i = 1; i + 1 < grid; ++i) {
    const auto u = static_cast<std::size_t>(i);
    if (!(rs[u] <= rs[u - 1] && rs[u] <= rs[u + 1])) continue;
    double l = ts[u - 1], r = ts[u + 1];
    double c = r - gr * (r - l), d = l + gr * (r - l);
    double fc = soliton_residual(f, c), fd = soliton_residual(f, d);
    for (int it = 0; it < 80 && r - l > 1e-13; ++it) {
      if (fc < fd) {
        r = d, d = c, fd = fc;
        c = r - gr * (r - l), fc = soliton_residual(f, c);
      } else {
        l = c, c = d, fc = fd;
        d = l + gr * (r - l), fd = soliton_residual(f, d);
      }
    }
    const double t = 0.5 * (l + r);
    if (soliton_residual(f, t) < 1e-6) found.push_back(t);
  }
  return found;
}

RealVector block_signature(const RealMatrix& block) {
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(0.5 * (block + block.transpose()));
  const double tr = block.trace();
  if (tr == 0.0) return RealVector::Zero(block.rows());
  return es.eigenvalues() / tr;
}

}  // namespace hcf
