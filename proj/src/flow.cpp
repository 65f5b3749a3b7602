#include "hcflab/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "hcflab/curvature.hpp"

namespace hcf {

RealVector pack_matrix(const Matrix& M) {
  const Index n = M.rows();
  RealVector v(2 * n * M.cols());
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < M.cols(); ++j) {
      v(2 * (i * M.cols() + j)) = M(i, j).real();
      v(2 * (i * M.cols() + j) + 1) = M(i, j).imag();
    }
  return v;
}

Matrix unpack_matrix(const RealVector& v, Index n) {
  if (v.size() != 2 * n * n) throw InputError("unpack_matrix: size mismatch");
  Matrix M(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) M(i, j) = Scalar(v(2 * (i * n + j)), v(2 * (i * n + j) + 1));
  return M;
}

std::vector<std::string> matrix_state_labels(Index n, const std::string& prefix) {
  std::vector<std::string> out;
  out.reserve(static_cast<std::size_t>(2 * n * n));
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) {
      const std::string idx = "_" + std::to_string(i) + "_" + std::to_string(j);
      out.push_back(prefix + "_re" + idx);
      out.push_back(prefix + "_im" + idx);
    }
  return out;
}

Matrix metric_flow_rhs(const ComplexLieAlgebra& alg, const HermitianMetric& g) {
  const Matrix th = ttcr_operator(alg, g).theta();
  return -0.5 * (th + th.adjoint());
}

Matrix metric_at(const FlowTrace& trace, std::size_t i, Index n) { return unpack_matrix(trace.states.at(i), n); }

FlowTrace integrate_metric_flow(const ComplexLieAlgebra& alg, const HermitianMetric& H0,
                                const IntegratorConfig& cfg, const MetricFlowOptions& opts) {
  const Index n = alg.dim();
  if (H0.dim() != n) throw InputError("integrate_metric_flow: dimension mismatch");

  auto hermitize = [n](const RealVector& v) {
    const Matrix M = unpack_matrix(v, n);
    return pack_matrix(0.5 * (M + M.adjoint()));
  };
  auto velocity = [&alg, n, normalized = opts.normalized](const Matrix& H) -> Matrix {
    Matrix Hs = 0.5 * (H + H.adjoint());
    const CurvatureOperator op = ttcr_operator(alg, HermitianMetric(Hs));
    Matrix P = op.P;
    if (normalized) P -= (P.trace().real() / static_cast<double>(n)) * Matrix::Identity(n, n);
    const Matrix V = -Hs * P;
    return 0.5 * (V + V.adjoint());
  };

  OdeProblem prob;
  prob.rhs = [&, n](double, const RealVector& y) {
    const Matrix H = unpack_matrix(y, n);
    Eigen::LLT<Matrix> llt(0.5 * (H + H.adjoint()));
    if (llt.info() != Eigen::Success) {
      return RealVector::Constant(y.size(), std::numeric_limits<double>::quiet_NaN()).eval();
    }
    return pack_matrix(velocity(H));
  };
  prob.admissible = [n](const RealVector& y) {
    const Matrix H = unpack_matrix(y, n);
    Eigen::LLT<Matrix> llt(0.5 * (H + H.adjoint()));
    return llt.info() == Eigen::Success;
  };
  prob.project = hermitize;
  prob.check = [&cfg, n](double t, const RealVector& y, const RealVector& f) -> std::optional<FlowEvent> {
    const Matrix H = unpack_matrix(y, n);
    const Matrix V = unpack_matrix(f, n);
    if (cfg.stop_on_convergence && V.norm() <= cfg.abs_tol) {
      return FlowEvent{EventKind::converged, t, 0.0, "|dH/dt| <= abs_tol"};
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(H);
    const double lmin = es.eigenvalues()(0);
    const double lmax = es.eigenvalues()(n - 1);
    if (lmin <= cfg.min_eig_floor || 1.0 / lmin >= cfg.blowup_norm_cap) {
      const Vector v = es.eigenvectors().col(0);
      const double rate = v.dot(V * v).real();
      const double t_est = rate < 0.0 ? t + lmin / (-rate) : t;
      std::ostringstream os;
      os << "min eigenvalue " << lmin << " reached the floor";
      return FlowEvent{EventKind::blowup_detected, t, t_est, os.str()};
    }
    if (lmax >= cfg.blowup_norm_cap) {
      return FlowEvent{EventKind::blowup_detected, t, t, "max eigenvalue reached the norm cap"};
    }
    return std::nullopt;
  };

  FlowTrace trace = solve_ode(prob, pack_matrix(H0.matrix()), cfg);
  trace.state_labels = matrix_state_labels(n);
  return trace;
}

FlowTrace integrate_reduced(const ReducedField& field, const RealVector& state0, const IntegratorConfig& cfg,
                            const ReducedOptions& opts) {
  if ((state0.array() <= 0.0).any()) throw InputError("integrate_reduced: initial state must be positive");
  OdeProblem prob;
  prob.rhs = [&field](double, const RealVector& y) { return field(y); };
  prob.admissible = [](const RealVector& y) { return (y.array() > 0.0).all(); };
  prob.check = [&cfg, &opts](double t, const RealVector& y, const RealVector& f) -> std::optional<FlowEvent> {
    Index imax = 0;
    const double big = y.maxCoeff(&imax);
    if (big >= cfg.blowup_norm_cap) {
      const double rate = f(imax);
      const double t_est = rate > 0.0 ? t + big / rate : t;
      return FlowEvent{EventKind::blowup_detected, t, t_est, "state reached blowup_norm_cap"};
    }
    if (cfg.stop_on_convergence && f.norm() <= cfg.abs_tol) {
      return FlowEvent{EventKind::converged, t, 0.0, "|rhs| <= abs_tol"};
    }
    if (opts.stop_when && opts.stop_when(t, y)) return FlowEvent{EventKind::stopped, t, 0.0, "stop condition met"};
    return std::nullopt;
  };
  FlowTrace trace = solve_ode(prob, state0, cfg);
  trace.state_labels = opts.labels;
  return trace;
}

double BlowupBounds::envelope(double t) const {
  const double denom = 1.0 / alpha0 - static_cast<double>(n + 1) * t;
  return denom > 0.0 ? 1.0 / denom : std::numeric_limits<double>::infinity();
}

BlowupBounds blowup_time_bounds(double x0, double y0, double z0, int n, IntegratorConfig cfg) {
  if (!(x0 > 0.0 && y0 > 0.0 && z0 > 0.0)) throw InputError("blowup_time_bounds: initial data must be positive");
  if (n < 1) throw InputError("blowup_time_bounds: n must be >= 1");
  BlowupBounds out;
  out.n = n;
  out.alpha0 = std::min({x0, y0, z0});
  out.upper = 1.0 / (static_cast<double>(n + 1) * out.alpha0);

  const double nn = static_cast<double>(n);
  ReducedField xyz = [nn](const RealVector& s) {
    RealVector d(3);
    d << nn * s(0) * s(0) + s(2) * s(2), (nn + 1) * s(2) * s(2), (nn + 1) * s(2) * ((nn - 1) * s(0) + s(1)) / nn;
    return d;
  };
  // The solution cannot outlive the comparison bound.
  cfg.t_max = std::max(cfg.t_max, 2.0 * out.upper);
  cfg.stop_on_convergence = false;
  out.trace = integrate_reduced(xyz, (RealVector(3) << x0, y0, z0).finished(), cfg, {{"x", "y", "z"}, {}});
  if (const FlowEvent* ev = out.trace.find_event(EventKind::blowup_detected)) {
    out.detected = true;
    out.t_est = ev->t_est;
  }
  return out;
}

std::vector<BracketSample> bracket_trajectory(const ComplexLieAlgebra& alg, const std::vector<double>& times,
                                              const std::vector<Matrix>& metrics, std::vector<FlowEvent>* skipped) {
  if (times.size() != metrics.size()) throw InputError("bracket_trajectory: times and metrics differ in length");
  std::vector<BracketSample> out;
  out.reserve(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    try {
      const HermitianMetric g(metrics[i]);
      out.push_back({times[i], gauge_act(orthonormalizing_gauge(g), alg)});
    } catch (const InputError& e) {
      if (skipped) skipped->push_back({EventKind::skipped_sample, times[i], 0.0, e.what()});
    }
  }
  return out;
}

std::vector<BracketSample> bracket_trajectory(const ComplexLieAlgebra& alg, const FlowTrace& trace,
                                              std::vector<FlowEvent>* skipped) {
  std::vector<Matrix> metrics;
  metrics.reserve(trace.size());
  for (std::size_t i = 0; i < trace.size(); ++i) metrics.push_back(metric_at(trace, i, alg.dim()));
  return bracket_trajectory(alg, trace.times, metrics, skipped);
}

double scale_free_distance(const ComplexLieAlgebra& a, const ComplexLieAlgebra& b) {
  const double na = a.norm();
  const double nb = b.norm();
  if (na == 0.0 || nb == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return bracket_distance(scaled(a, 1.0 / na), scaled(b, 1.0 / nb));
}

double orbit_distance(const ComplexLieAlgebra& a, const ComplexLieAlgebra& b,
                      const std::vector<GaugeTransform>& candidates, bool scale_free) {
  auto dist = [&](const ComplexLieAlgebra& x) { return scale_free ? scale_free_distance(x, b) : bracket_distance(x, b); };
  double best = dist(a);
  for (const auto& k : candidates) best = std::min(best, dist(gauge_act(k, a)));
  return best;
}

ConvergenceReport convergence_detect(const std::vector<BracketSample>& traj, const ComplexLieAlgebra& target,
                                     bool scale_free, double threshold, double tail_fraction) {
  if (traj.empty()) throw InputError("convergence_detect: empty trajectory");
  ConvergenceReport rep;
  rep.distances.reserve(traj.size());
  for (const auto& s : traj) {
    double d;
    if (scale_free) {
      d = scale_free_distance(s.bracket, target);
      if (std::isnan(d)) rep.degenerate = true;
    } else {
      d = bracket_distance(s.bracket, target);
    }
    rep.distances.push_back(d);
  }
  rep.last_distance = rep.distances.back();
  rep.best_distance = std::numeric_limits<double>::infinity();
  for (double d : rep.distances)
    if (!std::isnan(d)) rep.best_distance = std::min(rep.best_distance, d);
  rep.below_threshold = !std::isnan(rep.last_distance) && rep.last_distance < threshold;

  const std::size_t m = rep.distances.size();
  const std::size_t tail = std::max<std::size_t>(2, static_cast<std::size_t>(std::ceil(tail_fraction * static_cast<double>(m))));
  const std::size_t start = m > tail ? m - tail : 0;
  rep.monotone_tail = !rep.degenerate;
  for (std::size_t i = start + 1; i < m && rep.monotone_tail; ++i) {
    const double prev = rep.distances[i - 1];
    if (rep.distances[i] > prev + 1e-12 * std::max(1.0, prev)) rep.monotone_tail = false;
  }
  rep.converged = rep.below_threshold && rep.monotone_tail;
  return rep;
}

}  // namespace hcf
