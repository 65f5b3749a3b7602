#ifndef HCFLAB_EXPERIMENTS_HPP
#define HCFLAB_EXPERIMENTS_HPP

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "hcflab/families.hpp"
#include "hcflab/io.hpp"

namespace hcf {

// ---------------------------------------------------------------------------
// Seeded randomness

/// mt19937_64 seeded from (seed, stream); split() derives independent streams.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  Rng split(std::uint64_t stream) const { return Rng(seed_, stream_ * 0x9E3779B97F4A7C15ULL + stream + 1); }
  std::uint64_t seed() const { return seed_; }

  double uniform(double lo, double hi);
  double normal();
  Scalar complex_normal();

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::mt19937_64 eng_;
};

Matrix random_complex_matrix(Index rows, Index cols, Rng& rng);
/// A^* A for A = Id + G / (2 sqrt(n)); condition number stays moderate.
HermitianMetric random_metric(Index n, Rng& rng);
GaugeTransform random_gauge(Index n, Rng& rng);
Matrix random_unitary(Index n, Rng& rng);

// ---------------------------------------------------------------------------
// Named examples

struct NamedExample {
  std::string name;
  ComplexLieAlgebra algebra;
  HermitianMetric metric;
};

struct FamilyEntry {
  std::string pattern;
  std::string description;
};

const std::vector<FamilyEntry>& family_catalog();

/// Resolves names such as "sl(3)+trace", "sl(3)+sigma(1,0.5,0.5)",
/// "heisenberg(1)+random", "mu-infinity(2)", "perfect-double(sl2):t=1",
/// "perfect-double(sl2):a=2,b=0.7". Random metrics draw from `rng`.
NamedExample resolve_family(const std::string& name, Rng& rng);

// ---------------------------------------------------------------------------
// Experiments

struct ExperimentSpec {
  std::string name;
  std::map<std::string, std::string> params;
  std::string output_dir;

  double number(const std::string& key, double fallback) const;
  int integer(const std::string& key, int fallback) const;
  void validate() const;
};

const std::vector<std::string>& registered_experiments();

struct SlnInstabilityOptions {
  double y_stop = 1e-10;       ///< stop the (y, z) run once y drops below this
  double ratio_probe_y = 1e-6; ///< z^2/y is reported at the first sample below this
  double envelope_slack = 1e-6;
  double time_limit = 1e4;
};

struct SlnInstabilityReport {
  int n = 2;
  double y0 = 0.0, z0 = 0.0;
  FlowTrace yz;
  FlowTrace xyz;

  bool stayed_in_D = false;
  double max_ydot_in_D = 0.0;
  bool reached_origin = false;
  double y_final = 0.0, z_final = 0.0;
  double ratio_target = 0.0;
  double y_probe = 0.0;
  double ratio_probe = 0.0;
  double ratio_error_probe = 0.0;
  double ratio_final = 0.0;

  bool blowup_detected = false;
  double t_est = 0.0;
  double t_upper = 0.0;
  bool t_bound_ok = false;
  double envelope_margin = 0.0;  ///< min over steps of min{x,y,z} - envelope
  bool envelope_ok = false;
  double x_window_min = 0.0, x_window_max = 0.0;  ///< of x (T_est - t)

  double bracket_distance_initial = 0.0;
  double bracket_distance_final = 0.0;
  bool bracket_monotone_tail = false;
  double bracket_distance_xyz_final = 0.0;  ///< from the last (x, y, z) sample

  Json to_json() const;
};

/// (y0, z0) must lie in D. Integrates the (y, z) and (x, y, z) systems with x0 = 1.
SlnInstabilityReport exp_sln_instability(int n, double y0, double z0, const IntegratorConfig& cfg,
                                         const SlnInstabilityOptions& opts = {});

struct ConsistencyReport {
  int n = 2;
  double t_est = 0.0;
  double t_end = 0.0;
  std::size_t samples = 0;
  double sup_rel_diff = 0.0;
  double hermiticity = 0.0;  ///< max |H - H^*| / |H| over accepted steps
  FlowTrace full;
  FlowTrace reduced;

  Json to_json() const;
};

/// Matrix flow on sl(n+1) from sigma_{x0,y0,z0} against the (x, y, z)
/// reconstruction on a shared grid of `samples` times in [0, fraction T_est].
ConsistencyReport flow_consistency(int n, double x0, double y0, double z0, const IntegratorConfig& cfg,
                                   double fraction = 0.9, int samples = 60);

struct AuditReport {
  std::string name;
  SolitonCertificate cert;
  double jacobi = 0.0;
  bool perfect_checked = false;
  bool perfect = false;
  Matrix P;

  Json to_json() const;
};

AuditReport exp_soliton_audit(const NamedExample& ex, double tol = 1e-8);

struct HomotheticEntry {
  std::string name;
  double t = 0.0;
  RealVector signature;        ///< spectrum / trace of the full P
  RealMatrix block;            ///< oracle block matrix
  RealMatrix block_closed;     ///< corrected closed form
  RealMatrix block_printed;    ///< printed closed form
  RealVector block_signature;
  double trace_block = 0.0, det_block = 0.0;
};

struct HomothetyReport {
  std::vector<HomotheticEntry> entries;  ///< nu_0 first
  std::vector<double> sup_distance;      ///< to nu_0, per entry
  double threshold = 0.05;
  bool distinct = false;
  /// Values printed in the source argument for the 2 x 2 block at t = 0 and t = 1.
  double printed_trace_0 = 3.0, printed_det_0 = 2.0, printed_trace_1 = 8.0, printed_det_1 = 8.0;

  Json to_json() const;
};

HomothetyReport exp_homothety_distinction(const PerfectFamily& f, double threshold = 0.05);

struct OrbitDriftReport {
  double a0 = 1.0, b0 = 0.0;
  FlowTrace trace;
  std::vector<double> times;
  std::vector<double> parameter;          ///< scale-free t = q / r of the Cholesky gauge
  std::vector<double> off_orbit;          ///< distance of the gauged bracket from nu_{1,t}, scale-free
  std::map<std::string, std::vector<double>> distance;  ///< scale-free distance to reference brackets
  std::string closest;                    ///< reference with the smallest final distance
  double final_parameter = 0.0;

  Json to_json() const;
};

/// Normalized metric flow of nu from H0 = h^* h, h = h_{a0,b0}.
OrbitDriftReport exp_orbit_drift(const PerfectFamily& f, double a0, double b0, const IntegratorConfig& cfg);

// ---------------------------------------------------------------------------
// Acceptance suite

struct AcceptanceOptions {
  double tol_scale = 1.0;  ///< multiplies every pinned threshold
  std::uint64_t seed = 20240607;
  bool verbose = false;
};

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = false;
  std::string summary;
  Json metrics = Json::object();
  double seconds = 0.0;
};

struct AcceptanceResult {
  std::vector<CriterionResult> criteria;
  bool all_passed() const;
  Json to_json() const;
};

/// Runs every criterion; each prints one "[PASS]/[FAIL]" line to `log` when non-null.
AcceptanceResult run_acceptance(const AcceptanceOptions& opts, std::ostream* log);

}  // namespace hcf

#endif  // HCFLAB_EXPERIMENTS_HPP
