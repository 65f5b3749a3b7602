#ifndef HCFLAB_FAMILIES_HPP
#define HCFLAB_FAMILIES_HPP

#include <array>
#include <vector>

#include "hcflab/algebra.hpp"
#include "hcflab/curvature.hpp"
#include "hcflab/flow.hpp"

namespace hcf {

// ---------------------------------------------------------------------------
// sl(n+1, C) with the sl_n + CI + s splitting

enum class SlBlock { sl_n, center, s };

/// sl(n+1, C) in the unitary basis {u_k} u {I} u {r_i} u {s_i}, where u_k
/// are generalized Gell-Mann matrices of the upper-left sl_n, I is the
/// normalized diag(1, ..., 1, -n), r_i = e_{i,n+1} and s_i = e_{n+1,i}.
/// The trace form tr(X Y^*) is the identity metric in this basis.
struct SLnAnsatz {
  int n = 1;  ///< algebra is sl(n+1)
  ComplexLieAlgebra algebra;
  std::vector<Matrix> basis;  ///< (n+1) x (n+1) matrices
  std::vector<SlBlock> block_of;

  Index dim() const { return algebra.dim(); }
  Index sl_size() const { return static_cast<Index>(n) * n - 1; }
  Index center_index() const { return sl_size(); }
  Index r_index(int i) const { return sl_size() + 1 + i; }
  Index s_index(int i) const { return sl_size() + 1 + n + i; }

  /// Coordinates of a traceless matrix.
  Vector coords(const Matrix& X) const;
  Matrix to_matrix(const Vector& v) const;
  /// Coordinates of X^* given coordinates of X.
  Vector star(const Vector& v) const;
  /// Orthogonal projection onto one block.
  Matrix projector(SlBlock b) const;
};

/// Structure constants of sl(m, C); m = n + 1 >= 2.
SLnAnsatz build_sl(int m);

/// diag(x^{-1} Id_{sl_n}, y^{-1}, z^{-1} Id_s).
HermitianMetric sigma_metric(const SLnAnsatz& a, double x, double y, double z);

/// P eigenvalues on (sl_n, CI, s) for the metric sigma_{x,y,z}.
std::array<double, 3> p_xyz_closed_form(int n, double x, double y, double z);

/// (n x^2 + z^2, (n+1) z^2, (n+1)/n z ((n-1) x + y)).
RealVector xyz_rhs(int n, const RealVector& xyz);
/// (z^2 (n+1-y) - n y, (n+1)/n z (n-1+y) - (n+z^2) z).
RealVector yz_rhs(int n, const RealVector& yz);

ReducedField xyz_field(int n);
ReducedField yz_field(int n);

struct RegionReport {
  bool member = false;
  double boundary_y = 0.0;  ///< z^2 (n+1) / (z^2 + n)
  /// <N, v> at the boundary point (boundary_y, z), N = ((n+z^2)^2, -2n(n+1)z).
  double boundary_inner = 0.0;
};

/// Membership in D = { z^2 (n+1)/(z^2+n) <= y < 1 }.
RegionReport region_D_membership(int n, double y, double z);

/// 2 n (n+1) z^2 (z^2-1)^2 / (n + z^2).
double boundary_inner_closed_form(int n, double z);

/// (n^2 - 2) / (n (n + 1)), the limit of z^2/y; n >= 2.
double asymptotic_ratio(int n);

/// diag(1, y^{-1/2}, z^{-1/2}) on the blocks, so that h . sigma_{1,y,z} = trace form.
GaugeTransform h_yz(const SLnAnsatz& a, double y, double z);

/// h_{y,z} . [.,.] assembled block by block from the sl bracket.
ComplexLieAlgebra mu_yz(const SLnAnsatz& a, double y, double z);

/// Limit bracket: sl_n ^ sl_n and sl_n ^ s parts of [.,.] plus
/// sqrt((n^2-2)/(n(n+1))) Pr_{CI} [.,.] on s ^ s.
ComplexLieAlgebra mu_infinity(const SLnAnsatz& a);

/// 2 Id_{CI} + Id_s.
Matrix limit_derivation(const SLnAnsatz& a);

/// Max violation of mu(r_i, s_j) = sqrt(n^2-2)/n delta_ij I and mu(I, s) = 0.
double heisenberg_relation_residual(const SLnAnsatz& a, const ComplexLieAlgebra& mu);

/// Max norm of the component of mu(sl_n, CI + s) outside CI + s.
double ideal_invariance_residual(const SLnAnsatz& a, const ComplexLieAlgebra& mu);

/// Max norm of the off-block part of each projection relation of the splitting.
double block_relation_residual(const SLnAnsatz& a);

/// Dimensions of the derived series of the subalgebra spanned by the columns
/// of `span` (assumed closed under mu), down to the first repeated value.
std::vector<Index> derived_series_dims(const ComplexLieAlgebra& mu, const Matrix& span, double tol = 1e-9);

/// Completeness sum sum_b ad_{b^*} ad_b over the unitary basis.
Matrix casimir_sum(const SLnAnsatz& a);

// ---------------------------------------------------------------------------
// Heisenberg algebras

/// h_{2m+1}: basis X_1..X_m, Y_1..Y_m, Z with mu(X_i, Y_i) = Z.
ComplexLieAlgebra build_heisenberg(int m);

/// 2 Id_{CZ} + Id_V.
Matrix heisenberg_derivation(int m);

// ---------------------------------------------------------------------------
// Perfect semidirect doubles h x| h

struct PerfectFamily {
  /// Base bracket in an orthonormal frame, rescaled so P = Id for the identity metric.
  ComplexLieAlgebra base;
  /// lambda of the original static metric; P^{lambda g0} = Id.
  double base_scale = 1.0;
  /// nu on h + h; the metric is the identity (factors orthogonal).
  ComplexLieAlgebra doubled;

  Index base_dim() const { return base.dim(); }
  Index dim() const { return doubled.dim(); }
};

/// Requires g0 to be static for `base` with positive lambda.
PerfectFamily build_perfect_double(const ComplexLieAlgebra& base, const HermitianMetric& g0);
/// Default base: sl(2, C) with its trace form.
PerfectFamily build_perfect_double_sl2();

/// [[a, b], [0, 1]] tensored with Id_h.
GaugeTransform h_ab(const PerfectFamily& f, double a, double b);

/// nu_{a,b} = h_{a,b} . nu assembled from the base bracket:
/// a^{-1} mu on first^first and first^second, -(b^2/a) mu + -(2b/a) mu on second^second.
ComplexLieAlgebra nu_ab(const PerfectFamily& f, double a, double b);

/// Block matrix of P_{nu_{a,b}} for the identity metric:
/// a^{-2} [[1 + b^4, 2 b^3], [2 b^3, 2 + 4 b^2]].
RealMatrix p_nu_ab_closed_form(double a, double b);

/// The matrix a^{-2} [[1 + 2b^4, 4b^3], [4b^3, 2 + 8b^2]] as printed in the
/// source derivation. Kept only for side-by-side reporting; it does not
/// match the curvature of nu_{a,b} for b != 0.
RealMatrix p_nu_ab_printed(double a, double b);

/// 2 x 2 matrix of block traces / dim h.
RealMatrix block_reduce(const Matrix& P, Index base_dim);

/// Off-block mass: |P - block_reduce(P) (x) Id_h| / |P|.
double block_structure_residual(const Matrix& P, Index base_dim);

/// D_t = [[0, t], [0, 1]] (x) Id_h, a derivation of nu_{1,t}.
Matrix d_t(const PerfectFamily& f, double t);

/// Id (+) -Id.
GaugeTransform k_flip(const PerfectFamily& f);

struct PerfectSolitonRow {
  double t = 0.0;
  SolitonCertificate cert;
  double d_t_residual = 0.0;  ///< is_derivation residual of D_t on nu_t
};

std::vector<PerfectSolitonRow> perfect_soliton_table(const PerfectFamily& f, const std::vector<double>& ts,
                                                     double tol = 1e-8);

/// Soliton residual of nu_{1,t} (identity metric) as a function of t.
double soliton_residual(const PerfectFamily& f, double t);

/// Local minimizers of soliton_residual on [lo, hi], refined by golden section.
std::vector<double> locate_soliton_parameters(const PerfectFamily& f, double lo = -2.0, double hi = 2.0,
                                              int grid = 81);

/// Eigenvalues of a real symmetric block matrix divided by its trace, ascending.
RealVector block_signature(const RealMatrix& block);

}  // namespace hcf

#endif  // HCFLAB_FAMILIES_HPP
