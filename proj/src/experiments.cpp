#include "hcflab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <regex>
#include <sstream>

namespace hcf {

namespace {

std::vector<double> to_std(const RealVector& v) { return {v.data(), v.data() + v.size()}; }

Json to_json(const RealMatrix& M) {
  Json rows = Json::array();
  for (Index i = 0; i < M.rows(); ++i) rows.push_back(to_std(M.row(i).transpose()));
  return rows;
}

const double kQuarter = std::pow(2.0, -0.25);

}  // namespace

// ---------------------------------------------------------------------------

Rng::Rng(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  eng_.seed(seq);
}

double Rng::uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(eng_); }

double Rng::normal() { return std::normal_distribution<double>(0.0, 1.0)(eng_); }

Scalar Rng::complex_normal() {
  const double re = normal();
  const double im = normal();
  return Scalar(re, im) / std::sqrt(2.0);
}

Matrix random_complex_matrix(Index rows, Index cols, Rng& rng) {
  Matrix M(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) M(i, j) = rng.complex_normal();
  return M;
}

namespace {

Matrix near_identity(Index n, Rng& rng) {
  return Matrix::Identity(n, n) + random_complex_matrix(n, n, rng) / (2.0 * std::sqrt(static_cast<double>(n)));
}

}  // namespace

HermitianMetric random_metric(Index n, Rng& rng) {
  const Matrix A = near_identity(n, rng);
  const Matrix H = A.adjoint() * A;
  return HermitianMetric(0.5 * (H + H.adjoint()));
}

GaugeTransform random_gauge(Index n, Rng& rng) { return GaugeTransform(near_identity(n, rng)); }

Matrix random_unitary(Index n, Rng& rng) {
  Eigen::HouseholderQR<Matrix> qr(random_complex_matrix(n, n, rng));
  Matrix Q = qr.householderQ();
  const Matrix R = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index j = 0; j < n; ++j) {
    const double a = std::abs(R(j, j));
    if (a > 0.0) Q.col(j) *= R(j, j) / a;
  }
  return Q;
}

// ---------------------------------------------------------------------------

const std::vector<FamilyEntry>& family_catalog() {
  static const std::vector<FamilyEntry> cat = {
      {"sl(m)+trace", "sl(m, C), m >= 2, with the trace form tr(X Y^*)"},
      {"sl(m)+sigma(x,y,z)", "sl(m, C) with the Ad(SU(m-1))-invariant metric sigma_{x,y,z}"},
      {"sl(m)+random", "sl(m, C) with a seeded random metric"},
      {"mu-infinity(n)", "limit bracket on sl(n+1) as a vector space, n >= 2, identity metric"},
      {"heisenberg(m)+identity", "complex Heisenberg algebra h_{2m+1}, orthonormal basis"},
      {"heisenberg(m)+random", "h_{2m+1} with a seeded random metric"},
      {"perfect-double(sl2)", "h x| h over sl(2, C), bracket nu, identity metric"},
      {"perfect-double(sl2):t=T", "nu_{1,T} with the identity metric"},
      {"perfect-double(sl2):a=A,b=B", "nu_{A,B} with the identity metric"},
  };
  return cat;
}

NamedExample resolve_family(const std::string& name, Rng& rng) {
  static const std::regex sl_re(R"(^sl\((\d+)\)\+(trace|random)$)");
  static const std::regex sigma_re(R"(^sl\((\d+)\)\+sigma\(([^,]+),([^,]+),([^)]+)\)$)");
  static const std::regex heis_re(R"(^heisenberg\((\d+)\)\+(identity|random)$)");
  static const std::regex inf_re(R"(^mu-infinity\((\d+)\)$)");
  static const std::regex pd_re(R"(^perfect-double\(sl2\)(?::t=([^,]+)|:a=([^,]+),b=(.+))?$)");
  std::smatch m;
  auto num = [&](const std::string& s) {
    try {
      std::size_t pos = 0;
      const double v = std::stod(s, &pos);
      if (pos != s.size()) throw InputError("");
      return v;
    } catch (const std::exception&) {
      throw InputError("family '" + name + "': bad number '" + s + "'");
    }
  };
  NamedExample ex;
  ex.name = name;
  if (std::regex_match(name, m, sl_re)) {
    const SLnAnsatz a = build_sl(std::stoi(m[1]));
    ex.algebra = a.algebra;
    ex.metric = m[2] == "trace" ? HermitianMetric::identity(a.dim()) : random_metric(a.dim(), rng);
  } else if (std::regex_match(name, m, sigma_re)) {
    const SLnAnsatz a = build_sl(std::stoi(m[1]));
    ex.algebra = a.algebra;
    ex.metric = sigma_metric(a, num(m[2]), num(m[3]), num(m[4]));
  } else if (std::regex_match(name, m, heis_re)) {
    ex.algebra = build_heisenberg(std::stoi(m[1]));
    ex.metric = m[2] == "identity" ? HermitianMetric::identity(ex.algebra.dim()) : random_metric(ex.algebra.dim(), rng);
  } else if (std::regex_match(name, m, inf_re)) {
    const SLnAnsatz a = build_sl(std::stoi(m[1]) + 1);
    ex.algebra = mu_infinity(a);
    ex.metric = HermitianMetric::identity(a.dim());
  } else if (std::regex_match(name, m, pd_re)) {
    const PerfectFamily f = build_perfect_double_sl2();
    double a = 1.0, b = 0.0;
    if (m[1].matched) b = num(m[1]);
    if (m[2].matched) a = num(m[2]), b = num(m[3]);
    ex.algebra = nu_ab(f, a, b);
    ex.metric = HermitianMetric::identity(f.dim());
  } else {
    std::string known;
    for (const auto& e : family_catalog()) known += "\n  " + e.pattern;
    throw InputError("unknown family '" + name + "'; known patterns:" + known);
  }
  return ex;
}

// ---------------------------------------------------------------------------

double ExperimentSpec::number(const std::string& key, double fallback) const {
  const auto it = params.find(key);
  if (it == params.end()) return fallback;
  try {
    return std::stod(it->second);
  } catch (const std::exception&) {
    throw InputError("parameter '" + key + "' is not a number: " + it->second);
  }
}

int ExperimentSpec::integer(const std::string& key, int fallback) const {
  const double v = number(key, fallback);
  if (v != std::floor(v)) throw InputError("parameter '" + key + "' must be an integer");
  return static_cast<int>(v);
}

const std::vector<std::string>& registered_experiments() {
  static const std::vector<std::string> names = {"sln-instability", "flow-consistency", "soliton-audit",
                                                 "homothety",       "orbit-drift",      "acceptance"};
  return names;
}

void ExperimentSpec::validate() const {
  const auto& reg = registered_experiments();
  if (std::find(reg.begin(), reg.end(), name) == reg.end()) throw InputError("unknown experiment '" + name + "'");
}

// ---------------------------------------------------------------------------

SlnInstabilityReport exp_sln_instability(int n, double y0, double z0, const IntegratorConfig& cfg,
                                         const SlnInstabilityOptions& opts) {
  if (n < 2) throw InputError("sln-instability: n must be >= 2");
  const RegionReport reg = region_D_membership(n, y0, z0);
  if (!reg.member) {
    std::ostringstream os;
    os << "sln-instability: (" << y0 << ", " << z0 << ") is outside D; need " << reg.boundary_y
       << " <= y < 1 at z = " << z0;
    throw InputError(os.str());
  }

  SlnInstabilityReport rep;
  rep.n = n;
  rep.y0 = y0;
  rep.z0 = z0;
  rep.ratio_target = asymptotic_ratio(n);

  // The run ends near the origin; absolute tolerance must sit well below y_stop.
  IntegratorConfig c = cfg;
  c.t_max = opts.time_limit;
  c.stop_on_convergence = false;
  c.abs_tol = std::min(cfg.abs_tol, cfg.rel_tol * opts.y_stop * 1e-2);
  const double y_stop = opts.y_stop;
  ReducedOptions ro{{"y", "z"}, [y_stop](double, const RealVector& s) { return s(0) < y_stop; }};
  rep.yz = integrate_reduced(yz_field(n), (RealVector(2) << y0, z0).finished(), c, ro);

  const SLnAnsatz a = build_sl(n + 1);
  const ComplexLieAlgebra mu_inf = mu_infinity(a);
  std::vector<BracketSample> traj;
  auto& ratio = rep.yz.derived["ratio"];
  auto& in_d = rep.yz.derived["in_D"];
  auto& ydot = rep.yz.derived["ydot"];
  rep.stayed_in_D = true;
  rep.max_ydot_in_D = -std::numeric_limits<double>::infinity();
  bool probed = false;
  for (std::size_t i = 0; i < rep.yz.size(); ++i) {
    const double y = rep.yz.states[i](0), z = rep.yz.states[i](1);
    const RegionReport r = region_D_membership(n, y, z);
    const bool member = y >= r.boundary_y - 1e-12 && y < 1.0;
    const double yd = yz_rhs(n, rep.yz.states[i])(0);
    rep.stayed_in_D = rep.stayed_in_D && member;
    if (member) rep.max_ydot_in_D = std::max(rep.max_ydot_in_D, yd);
    ratio.push_back(z * z / y);
    in_d.push_back(member ? 1.0 : 0.0);
    ydot.push_back(yd);
    if (!probed && y < opts.ratio_probe_y) {
      probed = true;
      rep.y_probe = y;
      rep.ratio_probe = z * z / y;
    }
    traj.push_back({rep.yz.times[i], mu_yz(a, y, z)});
  }
  rep.y_final = rep.yz.states.back()(0);
  rep.z_final = rep.yz.states.back()(1);
  rep.reached_origin = rep.y_final < opts.y_stop;
  rep.ratio_final = rep.z_final * rep.z_final / rep.y_final;
  rep.ratio_error_probe = probed ? std::abs(rep.ratio_probe - rep.ratio_target) : std::numeric_limits<double>::infinity();

  const ConvergenceReport conv = convergence_detect(traj, mu_inf, true);
  rep.yz.derived["distance_mu_inf"] = conv.distances;
  rep.bracket_distance_initial = conv.distances.front();
  rep.bracket_distance_final = conv.last_distance;
  rep.bracket_monotone_tail = conv.monotone_tail;

  const BlowupBounds bb = blowup_time_bounds(1.0, y0, z0, n, cfg);
  rep.xyz = bb.trace;
  rep.blowup_detected = bb.detected;
  rep.t_est = bb.t_est;
  rep.t_upper = bb.upper;
  rep.t_bound_ok = bb.detected && bb.t_est <= bb.upper + opts.envelope_slack;
  rep.envelope_margin = std::numeric_limits<double>::infinity();
  rep.envelope_ok = true;
  rep.x_window_min = std::numeric_limits<double>::infinity();
  rep.x_window_max = 0.0;
  auto& env_col = rep.xyz.derived["envelope"];
  for (std::size_t i = 0; i < rep.xyz.size(); ++i) {
    const double t = rep.xyz.times[i];
    const RealVector& s = rep.xyz.states[i];
    const double env = bb.envelope(t);
    env_col.push_back(env);
    const double scale = std::max(1.0, env);
    const double margin = (s.minCoeff() - env) / scale;
    rep.envelope_margin = std::min(rep.envelope_margin, margin);
    if (!(margin >= -opts.envelope_slack)) rep.envelope_ok = false;
    if (bb.detected && bb.t_est - t > 1e-6 * bb.t_est) {
      const double w = s(0) * (bb.t_est - t);
      rep.x_window_min = std::min(rep.x_window_min, w);
      rep.x_window_max = std::max(rep.x_window_max, w);
    }
  }
  const RealVector& last = rep.xyz.states.back();
  rep.bracket_distance_xyz_final = scale_free_distance(mu_yz(a, last(1) / last(0), last(2) / last(0)), mu_inf);
  return rep;
}

Json SlnInstabilityReport::to_json() const {
  return {{"n", n},
          {"y0", y0},
          {"z0", z0},
          {"stayed_in_D", stayed_in_D},
          {"max_ydot_in_D", max_ydot_in_D},
          {"reached_origin", reached_origin},
          {"y_final", y_final},
          {"z_final", z_final},
          {"ratio_target", ratio_target},
          {"y_probe", y_probe},
          {"ratio_probe", ratio_probe},
          {"ratio_error_probe", ratio_error_probe},
          {"ratio_final", ratio_final},
          {"blowup_detected", blowup_detected},
          {"t_est", t_est},
          {"t_upper", t_upper},
          {"t_bound_ok", t_bound_ok},
          {"envelope_margin", envelope_margin},
          {"envelope_ok", envelope_ok},
          {"x_window", {x_window_min, x_window_max}},
          {"bracket_distance_initial", bracket_distance_initial},
          {"bracket_distance_final", bracket_distance_final},
          {"bracket_monotone_tail", bracket_monotone_tail},
          {"bracket_distance_xyz_final", bracket_distance_xyz_final},
          {"yz_steps", yz.size()},
          {"xyz_steps", xyz.size()}};
}

// ---------------------------------------------------------------------------

namespace {

std::vector<std::size_t> indices_at(const FlowTrace& tr, const std::vector<double>& grid) {
  std::vector<std::size_t> idx;
  std::size_t i = 0;
  for (double g : grid) {
    while (i < tr.size() && tr.times[i] < g - 1e-14 * std::max(1.0, g)) ++i;
    if (i == tr.size() || std::abs(tr.times[i] - g) > 1e-14 * std::max(1.0, g)) {
      throw std::runtime_error("output time " + std::to_string(g) + " missing from trace");
    }
    idx.push_back(i);
  }
  return idx;
}

}  // namespace

ConsistencyReport flow_consistency(int n, double x0, double y0, double z0, const IntegratorConfig& cfg, double fraction,
                                   int samples) {
  if (samples < 1 || !(fraction > 0.0 && fraction < 1.0)) throw InputError("flow_consistency: bad sampling");
  ConsistencyReport rep;
  rep.n = n;
  const BlowupBounds bb = blowup_time_bounds(x0, y0, z0, n, cfg);
  if (!bb.detected) throw std::runtime_error("flow_consistency: no blow-up detected in the reduced system");
  rep.t_est = bb.t_est;
  rep.t_end = fraction * bb.t_est;

  IntegratorConfig c = cfg;
  c.t_max = rep.t_end;
  c.stop_on_convergence = false;
  c.output_times.clear();
  for (int i = 1; i <= samples; ++i) c.output_times.push_back(rep.t_end * i / samples);

  const SLnAnsatz a = build_sl(n + 1);
  rep.reduced = integrate_reduced(xyz_field(n), (RealVector(3) << x0, y0, z0).finished(), c, {{"x", "y", "z"}, {}});
  rep.full = integrate_metric_flow(a.algebra, sigma_metric(a, x0, y0, z0), c);
  if (rep.full.times.back() < rep.t_end || rep.reduced.times.back() < rep.t_end) {
    throw std::runtime_error("flow_consistency: a run stopped before t_end");
  }

  const auto ir = indices_at(rep.reduced, c.output_times);
  const auto iff = indices_at(rep.full, c.output_times);
  auto& diff = rep.full.derived["rel_diff"];
  diff.assign(rep.full.size(), std::numeric_limits<double>::quiet_NaN());
  for (std::size_t k = 0; k < ir.size(); ++k) {
    const RealVector& s = rep.reduced.states[ir[k]];
    const Matrix sigma = sigma_metric(a, s(0), s(1), s(2)).matrix();
    const Matrix H = metric_at(rep.full, iff[k], a.dim());
    const double d = (H - sigma).norm() / sigma.norm();
    diff[iff[k]] = d;
    rep.sup_rel_diff = std::max(rep.sup_rel_diff, d);
  }
  rep.samples = ir.size();
  for (std::size_t i = 0; i < rep.full.size(); ++i) {
    const Matrix H = metric_at(rep.full, i, a.dim());
    rep.hermiticity = std::max(rep.hermiticity, (H - H.adjoint()).norm() / H.norm());
  }
  return rep;
}

Json ConsistencyReport::to_json() const {
  return {{"n", n},
          {"t_est", t_est},
          {"t_end", t_end},
          {"samples", samples},
          {"sup_rel_diff", sup_rel_diff},
          {"hermiticity", hermiticity},
          {"full_steps", full.size()},
          {"reduced_steps", reduced.size()}};
}

// ---------------------------------------------------------------------------

AuditReport exp_soliton_audit(const NamedExample& ex, double tol) {
  AuditReport rep;
  rep.name = ex.name;
  rep.jacobi = jacobi_residual(ex.algebra);
  if (rep.jacobi > 1e-8 * std::max(1.0, ex.algebra.norm() * ex.algebra.norm())) {
    std::ostringstream os;
    os << "audit: '" << ex.name << "' violates the Jacobi identity (residual " << rep.jacobi << ")";
    throw InputError(os.str());
  }
  rep.cert = soliton_check(ex.algebra, ex.metric, tol);
  rep.P = orthonormal_form(ttcr_operator(ex.algebra, ex.metric));
  if (rep.cert.verdict == SolitonVerdict::static_metric) {
    rep.perfect_checked = true;
    rep.perfect = is_perfect(ex.algebra);
  }
  return rep;
}

Json AuditReport::to_json() const {
  Json j = {{"name", name}, {"certificate", certificate_to_json(cert)}, {"jacobi_residual", jacobi}};
  Eigen::SelfAdjointEigenSolver<Matrix> es(P);
  j["P_spectrum"] = to_std(es.eigenvalues());
  if (perfect_checked) j["perfect"] = perfect;
  return j;
}

// ---------------------------------------------------------------------------

HomothetyReport exp_homothety_distinction(const PerfectFamily& f, double threshold) {
  HomothetyReport rep;
  rep.threshold = threshold;
  const HermitianMetric id = HermitianMetric::identity(f.dim());
  const std::vector<std::pair<std::string, double>> cases = {{"nu_0", 0.0}, {"nu_{2^-1/4}", kQuarter}, {"nu_{1,1}", 1.0}};
  for (const auto& [name, t] : cases) {
    HomotheticEntry e;
    e.name = name;
    e.t = t;
    const ComplexLieAlgebra nu = nu_ab(f, 1.0, t);
    e.signature = homothety_signature(nu, id);
    e.block = block_reduce(ttcr_operator(nu, id).P, f.base_dim());
    e.block_closed = p_nu_ab_closed_form(1.0, t);
    e.block_printed = p_nu_ab_printed(1.0, t);
    e.block_signature = block_signature(e.block);
    e.trace_block = e.block.trace();
    e.det_block = e.block.determinant();
    rep.entries.push_back(std::move(e));
  }
  rep.distinct = true;
  for (const auto& e : rep.entries) {
    const double d = (e.signature - rep.entries.front().signature).cwiseAbs().maxCoeff();
    rep.sup_distance.push_back(d);
    if (&e != &rep.entries.front() && !(d >= threshold)) rep.distinct = false;
  }
  return rep;
}

Json HomothetyReport::to_json() const {
  Json es = Json::array();
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& e = entries[i];
    es.push_back({{"name", e.name},
                  {"t", e.t},
                  {"signature", to_std(e.signature)},
                  {"block", hcf::to_json(e.block)},
                  {"block_closed_form", hcf::to_json(e.block_closed)},
                  {"block_printed", hcf::to_json(e.block_printed)},
                  {"block_signature", to_std(e.block_signature)},
                  {"trace_block", e.trace_block},
                  {"det_block", e.det_block},
                  {"sup_distance_to_nu_0", sup_distance[i]}});
  }
  return {{"entries", es},
          {"threshold", threshold},
          {"verdict", distinct ? "not homothetic" : "inconclusive"},
          {"printed", {{"trace_nu_0", printed_trace_0}, {"det_nu_0", printed_det_0},
                       {"trace_nu_1", printed_trace_1}, {"det_nu_1", printed_det_1}}}};
}

// ---------------------------------------------------------------------------

OrbitDriftReport exp_orbit_drift(const PerfectFamily& f, double a0, double b0, const IntegratorConfig& cfg) {
  OrbitDriftReport rep;
  rep.a0 = a0;
  rep.b0 = b0;
  const Matrix h = h_ab(f, a0, b0).matrix();
  const HermitianMetric H0(h.adjoint() * h);
  rep.trace = integrate_metric_flow(f.doubled, H0, cfg, {true});

  const Index d = f.base_dim();
  const std::vector<std::pair<std::string, double>> refs = {
      {"nu_0", 0.0}, {"nu_+1", 1.0}, {"nu_-1", -1.0}, {"nu_+2^-1/4", kQuarter}, {"nu_-2^-1/4", -kQuarter}};
  std::vector<ComplexLieAlgebra> ref_brackets;
  for (const auto& r : refs) ref_brackets.push_back(nu_ab(f, 1.0, r.second));

  std::vector<FlowEvent> skipped;
  for (std::size_t i = 0; i < rep.trace.size(); ++i) {
    GaugeTransform L(Matrix::Identity(f.dim(), f.dim()));
    try {
      L = orthonormalizing_gauge(HermitianMetric(metric_at(rep.trace, i, f.dim())));
    } catch (const InputError& e) {
      skipped.push_back({EventKind::skipped_sample, rep.trace.times[i], 0.0, e.what()});
      continue;
    }
    const ComplexLieAlgebra beta = gauge_act(L, f.doubled);
    const double t = (L.matrix()(0, d) / L.matrix()(d, d)).real();
    rep.times.push_back(rep.trace.times[i]);
    rep.parameter.push_back(t);
    rep.off_orbit.push_back(scale_free_distance(beta, nu_ab(f, 1.0, t)));
    for (std::size_t k = 0; k < refs.size(); ++k)
      rep.distance[refs[k].first].push_back(scale_free_distance(beta, ref_brackets[k]));
  }
  for (const auto& e : skipped) rep.trace.events.push_back(e);
  rep.final_parameter = rep.parameter.empty() ? b0 : rep.parameter.back();
  double best = std::numeric_limits<double>::infinity();
  for (const auto& [name, ds] : rep.distance)
    if (!ds.empty() && ds.back() < best) best = ds.back(), rep.closest = name;
  rep.trace.derived["parameter"] = rep.parameter;
  rep.trace.derived["off_orbit"] = rep.off_orbit;
  for (const auto& [name, ds] : rep.distance) rep.trace.derived["dist_" + name] = ds;
  return rep;
}

Json OrbitDriftReport::to_json() const {
  Json fin = Json::object();
  for (const auto& [name, ds] : distance)
    if (!ds.empty()) fin[name] = ds.back();
  double off = 0.0;
  for (double v : off_orbit) off = std::max(off, v);
  return {{"a0", a0},
          {"b0", b0},
          {"final_time", times.empty() ? 0.0 : times.back()},
          {"initial_parameter", parameter.empty() ? b0 : parameter.front()},
          {"final_parameter", final_parameter},
          {"final_distances", fin},
          {"closest", closest},
          {"max_off_orbit", off},
          {"events", events_to_json(trace)},
          {"steps", trace.size()}};
}

}  // namespace hcf
