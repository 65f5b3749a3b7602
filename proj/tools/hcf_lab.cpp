// hcf-lab: command-line front end for the curvature flow experiments.

#include <filesystem>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "hcflab/experiments.hpp"

namespace fs = std::filesystem;
using namespace hcf;

namespace {

struct Globals {
  double tol = 1e-8;
  std::uint64_t seed = AcceptanceOptions{}.seed;
  std::string out;
  std::string integrator = "rk45_adaptive";
  double t_max = -1.0;
  std::string format = "csv";
  double h = 1e-3;
};

IntegratorConfig make_cfg(const Globals& g, double default_t_max) {
  IntegratorConfig c;
  c.method = parse_integrator(g.integrator);
  c.t_max = g.t_max > 0.0 ? g.t_max : default_t_max;
  c.h_init = g.h;
  c.rel_tol = std::min(1e-6, g.tol * 1e-2);
  return c;
}

Json trace_to_json(const FlowTrace& tr) {
  Json states = Json::array();
  for (const auto& s : tr.states) states.push_back(std::vector<double>(s.data(), s.data() + s.size()));
  return {{"format", kFormatTag}, {"labels", tr.state_labels}, {"times", tr.times},
          {"states", states},     {"derived", tr.derived},      {"events", events_to_json(tr)}};
}

void emit(const Globals& g, const std::string& stem, const Json& report,
          const std::vector<std::pair<std::string, const FlowTrace*>>& traces = {}) {
  Json rep = report;
  rep["seed"] = g.seed;
  if (!g.out.empty()) {
    fs::create_directories(g.out);
    write_json_file((fs::path(g.out) / (stem + ".json")).string(), rep);
    for (const auto& [name, tr] : traces) {
      const std::string base = (fs::path(g.out) / (stem + "_" + name)).string();
      if (g.format == "json") {
        write_json_file(base + ".json", trace_to_json(*tr));
      } else {
        write_trace_files(base, *tr, {{"seed", g.seed}, {"experiment", stem}});
      }
    }
  }
  std::cout << rep.dump(2) << '\n';
}

NamedExample load_example(const std::string& what, const std::string& metric_file, const Globals& g) {
  Rng rng(g.seed);
  if (fs::exists(what)) {
    const Json j = read_json_file(what);
    NamedExample ex;
    ex.name = what;
    if (j.contains("algebra")) {
      ex.algebra = algebra_from_json(j.at("algebra"));
      ex.metric = j.contains("metric") ? metric_from_json(j.at("metric")) : HermitianMetric::identity(ex.algebra.dim());
    } else {
      ex.algebra = algebra_from_json(j);
      ex.metric = HermitianMetric::identity(ex.algebra.dim());
    }
    if (!metric_file.empty()) ex.metric = metric_from_json(read_json_file(metric_file));
    if (ex.metric.dim() != ex.algebra.dim()) throw InputError("metric and algebra dimensions differ");
    return ex;
  }
  NamedExample ex = resolve_family(what, rng);
  if (!metric_file.empty()) {
    ex.metric = metric_from_json(read_json_file(metric_file));
    if (ex.metric.dim() != ex.algebra.dim()) throw InputError("metric and algebra dimensions differ");
  }
  return ex;
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> v;
  std::stringstream ss(s);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    try {
      v.push_back(std::stod(cell));
    } catch (const std::exception&) {
      throw InputError("bad number '" + cell + "' in list '" + s + "'");
    }
  }
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hcf-lab: positive Hermitian curvature flow on complex Lie groups"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--tol", g.tol, "certificate tolerance; integrators use rel_tol = min(1e-6, tol / 100)")
      ->check(CLI::PositiveNumber);
  app.add_option("--seed", g.seed, "seed for random metrics and gauges");
  app.add_option("--out", g.out, "output directory for reports and traces");
  app.add_option("--integrator", g.integrator, "rk45_adaptive or rk4_fixed");
  app.add_option("--t-max", g.t_max, "integration horizon");
  app.add_option("--step", g.h, "initial (adaptive) or fixed (rk4) step")->check(CLI::PositiveNumber);
  app.add_option("--format", g.format, "trace format")->check(CLI::IsMember({"json", "csv"}));

  auto* fam = app.add_subcommand("families", "list or export the built-in examples");
  fam->require_subcommand(1);
  fam->add_subcommand("list", "enumerate constructors and parameters");
  auto* fexp = fam->add_subcommand("export", "write an example in the hcf-lab/1 format");
  std::string export_name;
  fexp->add_option("name", export_name, "family name, e.g. sl(3)+trace")->required();

  auto* audit = app.add_subcommand("audit", "soliton certificate for an algebra file or family name");
  std::string audit_what, audit_metric;
  audit->add_option("input", audit_what, "hcf-lab/1 file or family name")->required();
  audit->add_option("--metric", audit_metric, "metric file overriding the default");

  auto* fm = app.add_subcommand("flow-metric", "integrate dH/dt = -H P(H)");
  std::string fm_what, fm_metric;
  bool fm_normalized = false;
  fm->add_option("input", fm_what, "hcf-lab/1 file or family name")->required();
  fm->add_option("--metric", fm_metric, "initial metric file");
  fm->add_flag("--normalized", fm_normalized, "subtract tr(P)/n");

  auto* fr = app.add_subcommand("flow-reduced", "integrate the (x, y, z) or (y, z) system");
  std::string fr_system = "yz", fr_init;
  int fr_n = 2;
  fr->add_option("--system", fr_system)->check(CLI::IsMember({"xyz", "yz"}));
  fr->add_option("--n", fr_n)->check(CLI::Range(1, 64));
  fr->add_option("--init", fr_init, "comma-separated initial state")->required();

  auto* sln = app.add_subcommand("sln-instability", "instability of the canonical metric on sl(n+1)");
  int sln_n = 2;
  double sln_y0 = 0.999, sln_z0 = 0.999, sln_ystop = 1e-10;
  sln->add_option("--n", sln_n)->check(CLI::Range(2, 64));
  sln->add_option("--y0", sln_y0);
  sln->add_option("--z0", sln_z0);
  sln->add_option("--y-stop", sln_ystop)->check(CLI::PositiveNumber);

  app.add_subcommand("homothety", "normalized P spectra of nu_0, nu_{2^-1/4}, nu_{1,1}");

  auto* od = app.add_subcommand("orbit-drift", "normalized flow along the orbit of nu");
  double od_a = 1.0, od_b = 0.01;
  od->add_option("--a0", od_a);
  od->add_option("--b0", od_b);

  auto* acc = app.add_subcommand("acceptance", "run the acceptance criteria");
  double acc_scale = 1.0;
  acc->add_option("--tol-scale", acc_scale, "multiply every threshold")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (fam->parsed()) {
      if (fam->got_subcommand("list")) {
        Json list = Json::array();
        for (const auto& e : family_catalog()) list.push_back({{"pattern", e.pattern}, {"description", e.description}});
        std::cout << list.dump(2) << '\n';
      } else {
        Rng rng(g.seed);
        const NamedExample ex = resolve_family(export_name, rng);
        Json j = {{"format", kFormatTag}, {"name", ex.name}, {"seed", g.seed},
                  {"algebra", algebra_to_json(ex.algebra)}, {"metric", metric_to_json(ex.metric)}};
        if (!g.out.empty()) {
          fs::create_directories(g.out);
          write_json_file((fs::path(g.out) / "example.json").string(), j);
        }
        std::cout << j.dump(2) << '\n';
      }
    } else if (audit->parsed()) {
      const NamedExample ex = load_example(audit_what, audit_metric, g);
      emit(g, "audit", exp_soliton_audit(ex, g.tol).to_json());
    } else if (fm->parsed()) {
      const NamedExample ex = load_example(fm_what, fm_metric, g);
      const FlowTrace tr = integrate_metric_flow(ex.algebra, ex.metric, make_cfg(g, 1.0), {fm_normalized});
      Json rep = {{"name", ex.name}, {"steps", tr.size()}, {"final_time", tr.times.back()},
                  {"events", events_to_json(tr)}};
      emit(g, "flow_metric", rep, {{"trace", &tr}});
    } else if (fr->parsed()) {
      const std::vector<double> v = parse_list(fr_init);
      const bool xyz = fr_system == "xyz";
      if (v.size() != (xyz ? 3u : 2u)) throw InputError("--init needs " + std::to_string(xyz ? 3 : 2) + " values");
      const RealVector init = Eigen::Map<const RealVector>(v.data(), static_cast<Index>(v.size()));
      const FlowTrace tr = integrate_reduced(xyz ? xyz_field(fr_n) : yz_field(fr_n), init, make_cfg(g, 50.0),
                                             {xyz ? std::vector<std::string>{"x", "y", "z"}
                                                  : std::vector<std::string>{"y", "z"},
                                              {}});
      Json rep = {{"system", fr_system}, {"n", fr_n}, {"steps", tr.size()}, {"final_time", tr.times.back()},
                  {"final_state", std::vector<double>(tr.states.back().data(),
                                                      tr.states.back().data() + tr.states.back().size())},
                  {"events", events_to_json(tr)}};
      emit(g, "flow_reduced", rep, {{"trace", &tr}});
    } else if (sln->parsed()) {
      IntegratorConfig c = make_cfg(g, 1.0);
      SlnInstabilityOptions o;
      o.y_stop = sln_ystop;
      if (g.t_max > 0.0) o.time_limit = g.t_max;
      const SlnInstabilityReport rep = exp_sln_instability(sln_n, sln_y0, sln_z0, c, o);
      emit(g, "sln_instability", rep.to_json(), {{"yz", &rep.yz}, {"xyz", &rep.xyz}});
    } else if (app.got_subcommand("homothety")) {
      emit(g, "homothety", exp_homothety_distinction(build_perfect_double_sl2()).to_json());
    } else if (od->parsed()) {
      const OrbitDriftReport rep = exp_orbit_drift(build_perfect_double_sl2(), od_a, od_b, make_cfg(g, 5000.0));
      emit(g, "orbit_drift", rep.to_json(), {{"trace", &rep.trace}});
    } else if (acc->parsed()) {
      AcceptanceOptions o;
      o.tol_scale = acc_scale;
      o.seed = g.seed;
      const AcceptanceResult res = run_acceptance(o, &std::cerr);
      emit(g, "acceptance", res.to_json());
      return res.all_passed() ? 0 : 1;
    }
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
