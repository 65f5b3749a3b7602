#include <iostream>

#include <CLI11.hpp>

#include "hcflab/experiments.hpp"

int main(int argc, char** argv) {
  CLI::App app{"acceptance suite"};
  hcf::AcceptanceOptions opts;
  std::string json_path;
  app.add_option("--tol-scale", opts.tol_scale, "multiply every threshold")->check(CLI::PositiveNumber);
  app.add_option("--seed", opts.seed, "seed for sampled criteria");
  app.add_option("--json", json_path, "write the machine-readable summary here");
  CLI11_PARSE(app, argc, argv);

  const hcf::AcceptanceResult res = hcf::run_acceptance(opts, &std::cout);
  const hcf::Json summary = res.to_json();
  std::cout << summary["passed"] << "/" << summary["total"] << " criteria passed\n";
  if (!json_path.empty()) hcf::write_json_file(json_path, summary);
  return res.all_passed() ? 0 : 1;
}
