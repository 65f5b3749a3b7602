#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

#include "hcflab/experiments.hpp"

namespace hcf {

namespace {

const double kQuarter = std::pow(2.0, -0.25);

std::string sci(double v) {
  std::ostringstream os;
  os << std::setprecision(3) << std::scientific << v;
  return os.str();
}

// Relative deviation of the orthonormal-frame P from the block-constant closed form.
double xyz_block_error(const SLnAnsatz& a, double x, double y, double z) {
  const Matrix P = orthonormal_form(ttcr_operator(a.algebra, sigma_metric(a, x, y, z)));
  const auto c = p_xyz_closed_form(a.n, x, y, z);
  Vector d(a.dim());
  for (Index k = 0; k < a.dim(); ++k) d(k) = c[static_cast<std::size_t>(a.block_of[static_cast<std::size_t>(k)])];
  const Matrix expect = d.asDiagonal();
  return (P - expect).norm() / expect.norm();
}

IntegratorConfig default_cfg() {
  IntegratorConfig c;
  c.rel_tol = 1e-10;
  c.abs_tol = 1e-14;
  return c;
}

struct Ctx {
  const AcceptanceOptions& opts;
  double tol(double t) const { return t * opts.tol_scale; }
};

using Body = std::function<void(CriterionResult&, const Ctx&)>;

// --- individual criteria ----------------------------------------------------

void crit_closed_form(CriterionResult& r, const Ctx& ctx) {
  Rng rng(ctx.opts.seed, 1);
  const double tol = ctx.tol(1e-9);
  double worst = 0.0;
  for (int n = 1; n <= 4; ++n) {
    const SLnAnsatz a = build_sl(n + 1);
    double w = 0.0;
    for (int s = 0; s < 50; ++s) {
      const double x = rng.uniform(0.1, 10), y = rng.uniform(0.1, 10), z = rng.uniform(0.1, 10);
      w = std::max(w, xyz_block_error(a, x, y, z));
    }
    r.metrics["max_rel_err_n" + std::to_string(n)] = w;
    worst = std::max(worst, w);
  }
  r.metrics["tol"] = tol;
  r.passed = worst <= tol;
  r.summary = "max rel err " + sci(worst) + " over n=1..4 x 50 samples (tol " + sci(tol) + ")";
}

void crit_fixed_points(CriterionResult& r, const Ctx&) {
  bool ok = true;
  double worst = 0.0;
  for (int n = 2; n <= 6; ++n) {
    const RealVector a = yz_rhs(n, (RealVector(2) << 1.0, 1.0).finished());
    const RealVector b = yz_rhs(n, RealVector::Zero(2));
    worst = std::max({worst, a.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff()});
    ok = ok && (a.array() == 0.0).all() && (b.array() == 0.0).all();
  }
  r.metrics["max_abs"] = worst;
  r.passed = ok;
  r.summary = "yz field at (1,1) and (0,0) for n=2..6: max |v| = " + sci(worst) + " (exact zero required)";
}

void crit_region(CriterionResult& r, const Ctx& ctx) {
  Rng rng(ctx.opts.seed, 3);
  const double tol = ctx.tol(1e-12);
  bool ok = true;
  double min_inner = std::numeric_limits<double>::infinity();
  double min_interior = std::numeric_limits<double>::infinity();
  double closed_dev = 0.0;
  for (int n = 2; n <= 3; ++n) {
    std::vector<double> zs = {0.0, 1.0};
    while (zs.size() < 1000) zs.push_back(rng.uniform(0.0, 1.0));
    for (double z : zs) {
      const RegionReport rep = region_D_membership(n, 0.0, z);
      const double v = rep.boundary_inner;
      const double cf = boundary_inner_closed_form(n, z);
      closed_dev = std::max(closed_dev, std::abs(v - cf) / std::max(1.0, std::abs(cf)));
      min_inner = std::min(min_inner, v);
      const bool endpoint = z == 0.0 || z == 1.0;
      if (v < -tol) ok = false;
      if (endpoint && std::abs(v) > tol) ok = false;
      if (!endpoint) {
        min_interior = std::min(min_interior, v);
        if (std::abs(v) <= tol) ok = false;
      }
    }
  }
  r.metrics["min_inner"] = min_inner;
  r.metrics["min_inner_off_endpoints"] = min_interior;
  r.metrics["closed_form_rel_dev"] = closed_dev;
  r.metrics["tol"] = tol;
  r.passed = ok;
  r.summary = "2 x 1000 boundary points: min <N,v> " + sci(min_inner) + ", min away from z in {0,1} " +
              sci(min_interior) + ", closed-form dev " + sci(closed_dev);
}

void crit_instability(CriterionResult& r, const Ctx& ctx, std::map<int, SlnInstabilityReport>& cache) {
  const double tol = ctx.tol(1e-4);
  bool ok = true;
  std::ostringstream os;
  for (int n = 2; n <= 3; ++n) {
    const auto t0 = std::chrono::steady_clock::now();
    const SlnInstabilityReport rep = exp_sln_instability(n, 0.999, 0.999, default_cfg());
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool pass = rep.y_probe > 0.0 && rep.y_probe < 1e-6 && rep.ratio_error_probe <= tol && rep.stayed_in_D &&
                      rep.max_ydot_in_D <= 0.0 && secs < 5.0;
    ok = ok && pass;
    const std::string k = "n" + std::to_string(n);
    r.metrics[k] = {{"y_probe", rep.y_probe},
                    {"ratio_probe", rep.ratio_probe},
                    {"ratio_target", rep.ratio_target},
                    {"ratio_error", rep.ratio_error_probe},
                    {"stayed_in_D", rep.stayed_in_D},
                    {"max_ydot_in_D", rep.max_ydot_in_D},
                    {"seconds", secs}};
    os << "n=" << n << ": |z^2/y - " << std::setprecision(6) << rep.ratio_target << "| = " << sci(rep.ratio_error_probe)
       << " at y = " << sci(rep.y_probe) << "; ";
    cache.emplace(n, rep);
  }
  r.metrics["tol"] = tol;
  r.passed = ok;
  r.summary = os.str() + "tol " + sci(tol);
}

void crit_blowup(CriterionResult& r, const Ctx& ctx) {
  Rng rng(ctx.opts.seed, 5);
  const double slack = ctx.tol(1e-6);
  bool ok = true;
  double worst_excess = -std::numeric_limits<double>::infinity();
  double worst_margin = std::numeric_limits<double>::infinity();
  int count = 0;
  for (int n = 2; n <= 3; ++n) {
    for (int s = 0; s < 20; ++s) {
      const double z = rng.uniform(0.05, 0.99);
      const double yb = region_D_membership(n, 0.0, z).boundary_y;
      const double y = rng.uniform(yb, 1.0);
      const BlowupBounds bb = blowup_time_bounds(1.0, y, z, n, default_cfg());
      ++count;
      if (!bb.detected) {
        ok = false;
        continue;
      }
      worst_excess = std::max(worst_excess, bb.t_est - bb.upper);
      if (!(bb.t_est <= bb.upper + slack)) ok = false;
      for (std::size_t i = 0; i < bb.trace.size(); ++i) {
        const double env = bb.envelope(bb.trace.times[i]);
        const double margin = (bb.trace.states[i].minCoeff() - env) / std::max(1.0, env);
        worst_margin = std::min(worst_margin, margin);
        if (!(margin >= -slack)) ok = false;
      }
    }
  }
  r.metrics["samples"] = count;
  r.metrics["max_t_est_minus_bound"] = worst_excess;
  r.metrics["min_envelope_margin"] = worst_margin;
  r.metrics["slack"] = slack;
  r.passed = ok;
  r.summary = std::to_string(count) + " points: max(T_est - bound) " + sci(worst_excess) + ", min envelope margin " +
              sci(worst_margin) + " (slack " + sci(slack) + ")";
}

void crit_consistency(CriterionResult& r, const Ctx& ctx) {
  IntegratorConfig cfg = default_cfg();
  const auto t0 = std::chrono::steady_clock::now();
  const ConsistencyReport rep = flow_consistency(2, 1.0, 0.9, 0.9, cfg);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const double tol = ctx.tol(10.0 * cfg.rel_tol);
  r.metrics = rep.to_json();
  r.metrics["tol"] = tol;
  r.metrics["seconds"] = secs;
  r.passed = rep.sup_rel_diff <= tol && secs < 30.0 && rep.hermiticity <= 1e-12;
  r.summary = "sl(3) from sigma_{1,0.9,0.9} on [0, " + sci(rep.t_end) + "]: sup rel diff " + sci(rep.sup_rel_diff) +
              " (tol " + sci(tol) + ")";
}

void crit_limit(CriterionResult& r, const Ctx& ctx, std::map<int, SlnInstabilityReport>& cache) {
  const double dist_tol = 1e-3 * ctx.opts.tol_scale;
  const double tight = ctx.tol(1e-12);
  const double eig_tol = ctx.tol(1e-9);
  bool ok = true;
  std::ostringstream os;
  for (int n = 2; n <= 3; ++n) {
    if (!cache.count(n)) cache.emplace(n, exp_sln_instability(n, 0.999, 0.999, default_cfg()));
    const SlnInstabilityReport& rep = cache.at(n);
    const SLnAnsatz a = build_sl(n + 1);
    const ComplexLieAlgebra mu = mu_infinity(a);
    const HermitianMetric id = HermitianMetric::identity(a.dim());
    const double jac = jacobi_residual(mu);
    const double heis = heisenberg_relation_residual(a, mu);
    const double ideal = ideal_invariance_residual(a, mu);
    const SolitonCertificate cert = soliton_check(mu, id);
    const Matrix P = orthonormal_form(ttcr_operator(mu, id));
    const double nn = n;
    const std::array<double, 3> expect = {nn, (nn * nn - 2) / nn, (nn * nn - 1) / nn};
    double eig_err = 0.0;
    for (Index k = 0; k < a.dim(); ++k) {
      const double e = expect[static_cast<std::size_t>(a.block_of[static_cast<std::size_t>(k)])];
      eig_err = std::max(eig_err, std::abs(P(k, k).real() - e) / e);
    }
    eig_err = std::max(eig_err, (P - Matrix(P.diagonal().asDiagonal())).norm() / P.norm());
    const double der = is_derivation(mu, limit_derivation(a)).residual;
    const bool pass = rep.bracket_distance_final < dist_tol && jac <= tight && heis <= tight && ideal <= tight &&
                      cert.verdict == SolitonVerdict::algebraic && eig_err <= eig_tol;
    ok = ok && pass;
    r.metrics["n" + std::to_string(n)] = {{"scale_free_distance_final", rep.bracket_distance_final},
                                          {"y_final", rep.y_final},
                                          {"monotone_tail", rep.bracket_monotone_tail},
                                          {"jacobi", jac},
                                          {"heisenberg_relations", heis},
                                          {"ideal_invariance", ideal},
                                          {"verdict", to_string(cert.verdict)},
                                          {"lambda", cert.lambda},
                                          {"block_eigen_rel_err", eig_err},
                                          {"limit_derivation_residual", der}};
    os << "n=" << n << ": dist " << sci(rep.bracket_distance_final) << ", " << to_string(cert.verdict) << " lambda "
       << cert.lambda << ", eig err " << sci(eig_err) << "; ";
  }
  r.passed = ok;
  r.summary = os.str() + "dist tol " + sci(dist_tol);
}

void crit_static(CriterionResult& r, const Ctx& ctx) {
  const double tol = ctx.tol(1e-9);
  bool ok = true;
  std::ostringstream os;
  for (int m = 2; m <= 5; ++m) {
    const SLnAnsatz a = build_sl(m);
    const SolitonCertificate cert = soliton_check(a.algebra, HermitianMetric::identity(a.dim()));
    const bool perfect = is_perfect(a.algebra);
    const double err = std::abs(cert.lambda - m) / m;
    ok = ok && cert.verdict == SolitonVerdict::static_metric && err <= tol && perfect;
    r.metrics["m" + std::to_string(m)] = {
        {"verdict", to_string(cert.verdict)}, {"lambda", cert.lambda}, {"perfect", perfect}};
    os << "sl(" << m << "): " << to_string(cert.verdict) << " lambda " << std::setprecision(12) << cert.lambda
       << (perfect ? " perfect; " : " NOT perfect; ");
  }
  r.passed = ok;
  r.summary = os.str();
}

void crit_perfect(CriterionResult& r, const Ctx& ctx) {
  const PerfectFamily f = build_perfect_double_sl2();
  const HermitianMetric id = HermitianMetric::identity(f.dim());
  Rng rng(ctx.opts.seed, 9);
  const double tol = ctx.tol(1e-9);
  double cf_err = 0.0;
  for (int s = 0; s < 50; ++s) {
    const double a = rng.uniform(0.5, 2.0), b = rng.uniform(-2.0, 2.0);
    const Matrix P = ttcr_operator(nu_ab(f, a, b), id).P;
    const RealMatrix B = block_reduce(P, f.base_dim());
    const RealMatrix C = p_nu_ab_closed_form(a, b);
    cf_err = std::max({cf_err, (B - C).norm() / C.norm(), block_structure_residual(P, f.base_dim())});
  }
  bool ok = cf_err <= tol;
  r.metrics["closed_form_max_rel_err"] = cf_err;

  const SolitonCertificate c0 = soliton_check(nu_ab(f, 1.0, 0.0), id);
  ok = ok && c0.verdict == SolitonVerdict::algebraic;
  r.metrics["nu_0"] = {{"verdict", to_string(c0.verdict)}, {"lambda", c0.lambda}};

  std::ostringstream os;
  os << "closed form err " << sci(cf_err) << "; nu_0 " << to_string(c0.verdict) << "; ";
  for (double sign : {1.0, -1.0}) {
    const double t = sign * kQuarter;
    const SolitonCertificate c = soliton_check(nu_ab(f, 1.0, t), id);
    const ComplexLieAlgebra nu = nu_ab(f, 1.0, t);
    const Matrix Dt = d_t(f, t);
    const double dstar = is_derivation(nu, Dt.adjoint()).residual;
    const bool pass = c.verdict == SolitonVerdict::semi_algebraic && std::abs(c.lambda - 2.0) <= ctx.tol(1e-9) * 2.0 &&
                      dstar >= 0.1;
    ok = ok && pass;
    const std::string key = sign > 0 ? "nu_+2^-1/4" : "nu_-2^-1/4";
    r.metrics[key] = {{"verdict", to_string(c.verdict)},
                      {"lambda_fit", c.lambda},
                      {"fit_residual", c.residual},
                      {"D_t_star_residual", dstar},
                      {"D_t_is_derivation_residual", is_derivation(nu, Dt).residual}};
    os << (sign > 0 ? "nu_+" : "nu_-") << "2^-1/4 " << to_string(c.verdict) << " (fit residual " << sci(c.residual)
       << "); ";
  }
  const double kdist =
      bracket_distance(gauge_act(k_flip(f), nu_ab(f, 1.0, -kQuarter)), nu_ab(f, 1.0, kQuarter));
  ok = ok && kdist <= ctx.tol(1e-12);
  r.metrics["k_conjugacy"] = kdist;

  // Where the solver does find solitons on the line nu_{1,t}.
  Json located = Json::array();
  std::ostringstream loc;
  for (double t : locate_soliton_parameters(f)) {
    const SolitonCertificate c = soliton_check(nu_ab(f, 1.0, t), id);
    located.push_back({{"t", t}, {"verdict", to_string(c.verdict)}, {"lambda", c.lambda}, {"residual", c.residual}});
    loc << std::setprecision(6) << t << " (" << to_string(c.verdict) << ") ";
  }
  r.metrics["located_solitons"] = located;
  r.metrics["tol"] = tol;
  r.passed = ok;
  r.summary = os.str() + "k-conj " + sci(kdist) + "; solver locates solitons at t = " + loc.str();
}

void crit_homothety(CriterionResult& r, const Ctx& ctx) {
  const HomothetyReport rep = exp_homothety_distinction(build_perfect_double_sl2(), 0.05);
  r.metrics = rep.to_json();
  r.passed = rep.distinct;
  std::ostringstream os;
  os << "sup dist to nu_0: " << rep.entries[1].name << " " << sci(rep.sup_distance[1]) << ", " << rep.entries[2].name
     << " " << sci(rep.sup_distance[2]) << " (threshold 0.05); block tr/det nu_0 " << rep.entries[0].trace_block << "/"
     << rep.entries[0].det_block << " vs printed " << rep.printed_trace_0 << "/" << rep.printed_det_0 << ", nu_1 "
     << rep.entries[2].trace_block << "/" << rep.entries[2].det_block << " vs printed " << rep.printed_trace_1 << "/"
     << rep.printed_det_1;
  r.summary = os.str();
  (void)ctx;
}

void crit_heisenberg(CriterionResult& r, const Ctx& ctx) {
  bool ok = true;
  int count = 0, algebraic = 0;
  double worst = 0.0;
  for (int m = 1; m <= 2; ++m) {
    const ComplexLieAlgebra h = build_heisenberg(m);
    Rng rng(ctx.opts.seed, 11 + static_cast<std::uint64_t>(m));
    for (int s = 0; s < 20; ++s) {
      const SolitonCertificate c = soliton_check(h, random_metric(h.dim(), rng));
      ++count;
      worst = std::max(worst, c.residual);
      if (c.verdict == SolitonVerdict::algebraic) ++algebraic;
      else ok = false;
    }
  }
  r.metrics["samples"] = count;
  r.metrics["algebraic"] = algebraic;
  r.metrics["max_fit_residual"] = worst;
  r.passed = ok;
  r.summary = std::to_string(algebraic) + "/" + std::to_string(count) + " random metrics on h3, h5 certify algebraic";
}

void crit_properties(CriterionResult& r, const Ctx& ctx) {
  Rng rng(ctx.opts.seed, 12);
  std::vector<ComplexLieAlgebra> algs = {build_sl(2).algebra, build_sl(3).algebra, build_heisenberg(1),
                                         build_heisenberg(2), build_perfect_double_sl2().doubled,
                                         mu_infinity(build_sl(3))};
  const double eq_tol = ctx.tol(1e-10), frame_tol = ctx.tol(1e-12), der_tol = ctx.tol(1e-10);
  double eq = 0.0, frame = 0.0, psd = 0.0, inner = 0.0, gram = 0.0;
  for (int s = 0; s < 100; ++s) {
    const ComplexLieAlgebra& mu = algs[static_cast<std::size_t>(s) % algs.size()];
    const Index d = mu.dim();
    const HermitianMetric g = random_metric(d, rng);
    eq = std::max(eq, gauge_equivariance_check(mu, g, random_gauge(d, rng)));

    const CurvatureOperator op = ttcr_operator(mu, g);
    const Matrix frame2 = unitary_frame(g) * random_unitary(d, rng);
    const double np = std::max(op.P.norm(), 1e-300);
    frame = std::max(frame, (ttcr_operator_in_frame(mu, g, frame2).P - op.P).norm() / np);
    gram = std::max(gram, (ttcr_operator_gram(mu, g).P - op.P).norm() / np);

    const Vector X = random_complex_matrix(d, 1, rng).col(0);
    inner = std::max(inner, is_derivation(mu, ad_matrix(mu, X)).residual);
  }
  // Positivity on every constructed example, including the sl ansatz metrics.
  std::vector<std::pair<ComplexLieAlgebra, HermitianMetric>> examples;
  for (const auto& mu : algs) examples.emplace_back(mu, HermitianMetric::identity(mu.dim()));
  for (int n = 1; n <= 3; ++n) {
    const SLnAnsatz a = build_sl(n + 1);
    examples.emplace_back(a.algebra, sigma_metric(a, 1.0, 0.3, 2.0));
    examples.emplace_back(mu_yz(a, 0.25, 0.5), HermitianMetric::identity(a.dim()));
  }
  const PerfectFamily f = build_perfect_double_sl2();
  for (double t : {0.0, kQuarter, -kQuarter, 1.0})
    examples.emplace_back(nu_ab(f, 1.0, t), HermitianMetric::identity(f.dim()));
  for (const auto& [mu, g] : examples) {
    const RealVector ev = metric_spectrum(ttcr_operator(mu, g));
    psd = std::min(psd, ev(0) / std::max(1.0, ev.cwiseAbs().maxCoeff()));
  }
  r.metrics = {{"gauge_equivariance", eq}, {"frame_independence", frame}, {"gram_route", gram},
               {"min_rel_eigenvalue", psd}, {"inner_derivation", inner},
               {"tol", {{"equivariance", eq_tol}, {"frame", frame_tol}, {"derivation", der_tol}}}};
  r.passed = eq <= eq_tol && frame <= frame_tol && psd >= -ctx.tol(1e-12) && inner <= der_tol;
  r.summary = "equivariance " + sci(eq) + ", frame " + sci(frame) + ", min eig " + sci(psd) + ", inner der " +
              sci(inner) + " over 100 triples";
}

}  // namespace

bool AcceptanceResult::all_passed() const {
  for (const auto& c : criteria)
    if (!c.passed) return false;
  return !criteria.empty();
}

Json AcceptanceResult::to_json() const {
  Json cs = Json::array();
  int passed = 0;
  for (const auto& c : criteria) {
    passed += c.passed ? 1 : 0;
    cs.push_back({{"id", c.id},
                  {"title", c.title},
                  {"passed", c.passed},
                  {"summary", c.summary},
                  {"seconds", c.seconds},
                  {"metrics", c.metrics}});
  }
  return {{"format", kFormatTag}, {"passed", passed}, {"total", criteria.size()}, {"all_passed", all_passed()},
          {"criteria", cs}};
}

AcceptanceResult run_acceptance(const AcceptanceOptions& opts, std::ostream* log) {
  const Ctx ctx{opts};
  std::map<int, SlnInstabilityReport> sln_cache;
  const std::vector<std::pair<std::string, Body>> table = {
      {"closed-form curvature vs oracle", crit_closed_form},
      {"fixed points of the (y, z) field", crit_fixed_points},
      {"invariance of the region D", crit_region},
      {"instability and z^2/y asymptotics",
       [&](CriterionResult& r, const Ctx& c) { crit_instability(r, c, sln_cache); }},
      {"blow-up time bound and envelope", crit_blowup},
      {"full flow vs reduced flow", crit_consistency},
      {"limit bracket", [&](CriterionResult& r, const Ctx& c) { crit_limit(r, c, sln_cache); }},
      {"static certificates on sl(m)", crit_static},
      {"perfect family solitons", crit_perfect},
      {"homothety distinction", crit_homothety},
      {"Heisenberg solitons", crit_heisenberg},
      {"property suites", crit_properties},
  };
  AcceptanceResult res;
  int id = 0;
  for (const auto& [title, body] : table) {
    CriterionResult r;
    r.id = ++id;
    r.title = title;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      body(r, ctx);
    } catch (const std::exception& e) {
      r.passed = false;
      r.summary = std::string("exception: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    r.metrics["seed"] = opts.seed;
    if (log) {
      *log << (r.passed ? "[PASS] " : "[FAIL] ") << std::setw(2) << r.id << " " << r.title << " | " << r.summary
           << " (" << std::fixed << std::setprecision(2) << r.seconds << " s)" << std::defaultfloat << '\n';
      log->flush();
    }
    res.criteria.push_back(std::move(r));
  }
  return res;
}

}  // namespace hcf
