#ifndef HCFLAB_FLOW_HPP
#define HCFLAB_FLOW_HPP

#include <functional>
#include <string>
#include <vector>

#include "hcflab/algebra.hpp"
#include "hcflab/ode.hpp"

namespace hcf {

/// Real packing of an n x n complex matrix: row-major, (re, im) interleaved.
RealVector pack_matrix(const Matrix& M);
Matrix unpack_matrix(const RealVector& v, Index n);
std::vector<std::string> matrix_state_labels(Index n, const std::string& prefix = "H");

/// -Theta(H) = -H P(H).
Matrix metric_flow_rhs(const ComplexLieAlgebra& alg, const HermitianMetric& g);

struct MetricFlowOptions {
  /// Integrate dH/dt = -H (P - tr(P)/n Id): same scale-free trajectory,
  /// with the overall scale held near its initial value.
  bool normalized = false;
};

/// dH/dt = -H P(H) with re-Hermitization and positivity checks on every
/// accepted step. States are packed with pack_matrix.
FlowTrace integrate_metric_flow(const ComplexLieAlgebra& alg, const HermitianMetric& H0,
                                const IntegratorConfig& cfg, const MetricFlowOptions& opts = {});

Matrix metric_at(const FlowTrace& trace, std::size_t i, Index n);

using ReducedField = std::function<RealVector(const RealVector&)>;

struct ReducedOptions {
  std::vector<std::string> labels;
  /// Optional user stop condition, checked after every accepted step.
  std::function<bool(double, const RealVector&)> stop_when;
};

/// Autonomous reduced ODE on the positive orthant. Steps leaving the orthant
/// are rejected; |state|_inf >= blowup_norm_cap records a blow-up event with
/// T_est = t + x/x' for the largest coordinate (x ~ C/(T - t)).
FlowTrace integrate_reduced(const ReducedField& field, const RealVector& state0,
                            const IntegratorConfig& cfg, const ReducedOptions& opts = {});

/// Comparison bounds for the (x, y, z) system.
struct BlowupBounds {
  int n = 2;
  double alpha0 = 1.0;   ///< min{x0, y0, z0}
  double upper = 0.0;    ///< ((n + 1) alpha0)^{-1}
  double t_est = 0.0;    ///< numerically detected blow-up time
  bool detected = false;
  FlowTrace trace;

  /// Lower envelope (alpha0^{-1} - (n + 1) t)^{-1} for every coordinate.
  double envelope(double t) const;
};

BlowupBounds blowup_time_bounds(double x0, double y0, double z0, int n, IntegratorConfig cfg = {});

struct BracketSample {
  double time = 0.0;
  ComplexLieAlgebra bracket;
};

/// Gauges each sampled metric to the identity with the positive upper
/// triangular h = L^* and returns h . mu. Indefinite samples are skipped and
/// reported through `skipped`.
std::vector<BracketSample> bracket_trajectory(const ComplexLieAlgebra& alg, const std::vector<double>& times,
                                              const std::vector<Matrix>& metrics,
                                              std::vector<FlowEvent>* skipped = nullptr);
std::vector<BracketSample> bracket_trajectory(const ComplexLieAlgebra& alg, const FlowTrace& trace,
                                              std::vector<FlowEvent>* skipped = nullptr);

/// Distance between unit-normalized tensors. NaN when either bracket is zero.
double scale_free_distance(const ComplexLieAlgebra& a, const ComplexLieAlgebra& b);

/// Minimum of bracket_distance(k . a, b) over the supplied unitary gauges
/// (identity is always included).
double orbit_distance(const ComplexLieAlgebra& a, const ComplexLieAlgebra& b,
                      const std::vector<GaugeTransform>& candidates, bool scale_free);

struct ConvergenceReport {
  std::vector<double> distances;
  double last_distance = 0.0;
  double best_distance = 0.0;
  bool below_threshold = false;
  bool monotone_tail = false;
  bool converged = false;   ///< below threshold with a monotone tail
  bool degenerate = false;  ///< a zero bracket met in scale-free mode
};

/// `tail_fraction` of the final samples must be non-increasing (up to 1e-12
/// relative jitter) for monotone_tail.
ConvergenceReport convergence_detect(const std::vector<BracketSample>& traj, const ComplexLieAlgebra& target,
                                     bool scale_free, double threshold = 1e-3, double tail_fraction = 0.25);

}  // namespace hcf

#endif  // HCFLAB_FLOW_HPP
