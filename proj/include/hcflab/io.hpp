#ifndef HCFLAB_IO_HPP
#define HCFLAB_IO_HPP

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "hcflab/algebra.hpp"
#include "hcflab/curvature.hpp"
#include "hcflab/ode.hpp"

namespace hcf {

using Json = nlohmann::json;

inline constexpr const char* kFormatTag = "hcf-lab/1";

// Algebra files list the i < j structure constants only:
//   {"format": "hcf-lab/1", "dim": n, "labels": [...],
//    "constants": [{"i": 0, "j": 1, "k": 2, "re": 1.0, "im": 0.0}, ...]}
// Metric files store row-major complex pairs:
//   {"format": "hcf-lab/1", "dim": n, "entries": [[re, im], ...]}
// All readers throw InputError on malformed input.

Json algebra_to_json(const ComplexLieAlgebra& alg);
ComplexLieAlgebra algebra_from_json(const Json& j);

Json metric_to_json(const HermitianMetric& g);
HermitianMetric metric_from_json(const Json& j);

Json matrix_to_json(const Matrix& M);
Matrix matrix_from_json(const Json& j, Index rows, Index cols);

Json certificate_to_json(const SolitonCertificate& c);
SolitonCertificate certificate_from_json(const Json& j);

Json events_to_json(const FlowTrace& trace);

/// Header "t,<state labels>,<derived keys>"; values printed with %.17g.
void write_trace_csv(std::ostream& os, const FlowTrace& trace);
/// Reads a CSV written by write_trace_csv; columns after the state block
/// are returned as derived entries when `state_dim` is given.
FlowTrace read_trace_csv(std::istream& is, Index state_dim);

Json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const Json& j);

/// Writes <stem>.csv and <stem>.events.json.
void write_trace_files(const std::string& stem, const FlowTrace& trace, const Json& meta = Json::object());

}  // namespace hcf

#endif  // HCFLAB_IO_HPP
