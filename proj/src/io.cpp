#include "hcflab/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace hcf {

namespace {

void require_format(const Json& j, const char* what) {
  if (!j.is_object()) throw InputError(std::string(what) + ": expected a JSON object");
  if (j.contains("format") && j.at("format") != kFormatTag) {
    throw InputError(std::string(what) + ": unsupported format '" + j.at("format").dump() + "'");
  }
}

Index read_dim(const Json& j, const char* what) {
  if (!j.contains("dim") || !j.at("dim").is_number_integer()) throw InputError(std::string(what) + ": missing integer 'dim'");
  const auto d = j.at("dim").get<long long>();
  if (d < 0) throw InputError(std::string(what) + ": negative dim");
  return static_cast<Index>(d);
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

SolitonVerdict parse_verdict(const std::string& s) {
  if (s == "static") return SolitonVerdict::static_metric;
  if (s == "algebraic") return SolitonVerdict::algebraic;
  if (s == "semi_algebraic") return SolitonVerdict::semi_algebraic;
  if (s == "none") return SolitonVerdict::none;
  throw InputError("unknown verdict '" + s + "'");
}

}  // namespace

Json algebra_to_json(const ComplexLieAlgebra& alg) {
  Json j;
  j["format"] = kFormatTag;
  j["dim"] = alg.dim();
  j["labels"] = alg.labels();
  Json cs = Json::array();
  for (Index i = 0; i < alg.dim(); ++i)
    for (Index jj = i + 1; jj < alg.dim(); ++jj)
      for (Index k = 0; k < alg.dim(); ++k) {
        const Scalar c = alg.coeff(k, i, jj);
        if (c == Scalar(0.0)) continue;
        cs.push_back({{"i", i}, {"j", jj}, {"k", k}, {"re", c.real()}, {"im", c.imag()}});
      }
  j["constants"] = cs;
  return j;
}

ComplexLieAlgebra algebra_from_json(const Json& j) try {
  require_format(j, "algebra");
  const Index d = read_dim(j, "algebra");
  BracketBuilder bb(d);
  if (j.contains("labels")) {
    auto labels = j.at("labels").get<std::vector<std::string>>();
    if (!labels.empty() && static_cast<Index>(labels.size()) != d) throw InputError("algebra: labels length != dim");
    bb.labels(std::move(labels));
  }
  if (!j.contains("constants") || !j.at("constants").is_array()) throw InputError("algebra: missing 'constants' array");
  for (const auto& c : j.at("constants")) {
    const auto i = c.at("i").get<Index>(), jj = c.at("j").get<Index>(), k = c.at("k").get<Index>();
    if (i < 0 || jj < 0 || k < 0 || i >= d || jj >= d || k >= d) throw InputError("algebra: index out of range");
    if (i >= jj) throw InputError("algebra: constants must list i < j only");
    bb.add(i, jj, k, Scalar(c.value("re", 0.0), c.value("im", 0.0)));
  }
  return bb.build();
} catch (const Json::exception& e) {
  throw InputError(std::string("algebra: ") + e.what());
}

Json matrix_to_json(const Matrix& M) {
  Json e = Json::array();
  for (Index i = 0; i < M.rows(); ++i)
    for (Index j = 0; j < M.cols(); ++j) e.push_back({M(i, j).real(), M(i, j).imag()});
  return e;
}

Matrix matrix_from_json(const Json& e, Index rows, Index cols) {
  if (!e.is_array() || static_cast<Index>(e.size()) != rows * cols) {
    throw InputError("matrix: expected " + std::to_string(rows * cols) + " entries");
  }
  Matrix M(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) {
      const Json& p = e.at(static_cast<std::size_t>(i * cols + j));
      if (!p.is_array() || p.size() != 2) throw InputError("matrix: entries must be [re, im] pairs");
      M(i, j) = Scalar(p.at(0).get<double>(), p.at(1).get<double>());
    }
  return M;
}

Json metric_to_json(const HermitianMetric& g) {
  return {{"format", kFormatTag}, {"dim", g.dim()}, {"entries", matrix_to_json(g.matrix())}};
}

HermitianMetric metric_from_json(const Json& j) try {
  require_format(j, "metric");
  const Index d = read_dim(j, "metric");
  if (!j.contains("entries")) throw InputError("metric: missing 'entries'");
  return HermitianMetric(matrix_from_json(j.at("entries"), d, d));
} catch (const Json::exception& e) {
  throw InputError(std::string("metric: ") + e.what());
}

Json certificate_to_json(const SolitonCertificate& c) {
  Json j;
  j["verdict"] = to_string(c.verdict);
  j["lambda"] = c.lambda;
  j["residual"] = c.residual;
  j["D"] = {{"dim", c.D.rows()}, {"entries", matrix_to_json(c.D)}};
  j["D_star_is_derivation"] = c.d_star_is_derivation;
  j["D_star_residual"] = c.d_star_residual;
  j["derivation_dim"] = c.derivation_dim;
  j["tol"] = c.tol;
  if (c.verdict != SolitonVerdict::none) j["soliton_type"] = c.soliton_type();
  return j;
}

SolitonCertificate certificate_from_json(const Json& j) {
  try {
    SolitonCertificate c;
    c.verdict = parse_verdict(j.at("verdict").get<std::string>());
    c.lambda = j.at("lambda").get<double>();
    c.residual = j.at("residual").get<double>();
    const Index d = j.at("D").at("dim").get<Index>();
    c.D = matrix_from_json(j.at("D").at("entries"), d, d);
    c.d_star_is_derivation = j.at("D_star_is_derivation").get<bool>();
    c.d_star_residual = j.value("D_star_residual", 0.0);
    c.derivation_dim = j.value("derivation_dim", Index{0});
    c.tol = j.at("tol").get<double>();
    return c;
  } catch (const Json::exception& e) {
    throw InputError(std::string("certificate: ") + e.what());
  }
}

Json events_to_json(const FlowTrace& trace) {
  Json ev = Json::array();
  for (const auto& e : trace.events) {
    Json o = {{"kind", to_string(e.kind)}, {"time", e.time}, {"detail", e.detail}};
    if (e.kind == EventKind::blowup_detected) o["t_est"] = e.t_est;
    ev.push_back(o);
  }
  return ev;
}

void write_trace_csv(std::ostream& os, const FlowTrace& trace) {
  const Index sd = trace.states.empty() ? 0 : trace.states.front().size();
  os << "t";
  for (Index k = 0; k < sd; ++k) {
    const auto u = static_cast<std::size_t>(k);
    os << ',' << (u < trace.state_labels.size() ? trace.state_labels[u] : "y" + std::to_string(k));
  }
  for (const auto& [name, col] : trace.derived) {
    (void)col;
    os << ',' << name;
  }
  os << '\n';
  for (std::size_t i = 0; i < trace.size(); ++i) {
    os << fmt(trace.times[i]);
    for (Index k = 0; k < sd; ++k) os << ',' << fmt(trace.states[i](k));
    for (const auto& [name, col] : trace.derived) {
      (void)name;
      os << ',' << (i < col.size() ? fmt(col[i]) : "nan");
    }
    os << '\n';
  }
}

FlowTrace read_trace_csv(std::istream& is, Index state_dim) {
  FlowTrace tr;
  std::string line;
  if (!std::getline(is, line)) throw InputError("csv: empty input");
  const auto header = split_csv(line);
  if (header.empty() || header[0] != "t") throw InputError("csv: first column must be 't'");
  const Index ncol = static_cast<Index>(header.size());
  if (state_dim < 0 || 1 + state_dim > ncol) throw InputError("csv: state_dim exceeds column count");
  for (Index k = 0; k < state_dim; ++k) tr.state_labels.push_back(header[static_cast<std::size_t>(1 + k)]);
  std::vector<std::string> derived(header.begin() + 1 + state_dim, header.end());
  for (const auto& name : derived) tr.derived[name];
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto cells = split_csv(line);
    if (static_cast<Index>(cells.size()) != ncol) throw InputError("csv: ragged row");
    try {
      tr.times.push_back(std::stod(cells[0]));
      RealVector y(state_dim);
      for (Index k = 0; k < state_dim; ++k) y(k) = std::stod(cells[static_cast<std::size_t>(1 + k)]);
      tr.states.push_back(y);
      for (std::size_t c = 0; c < derived.size(); ++c)
        tr.derived[derived[c]].push_back(std::stod(cells[1 + static_cast<std::size_t>(state_dim) + c]));
    } catch (const std::logic_error&) {
      throw InputError("csv: unparsable number in row " + std::to_string(tr.times.size() + 1));
    }
  }
  return tr;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw InputError("'" + path + "': " + e.what());
  }
}

void write_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << j.dump(2) << '\n';
}

void write_trace_files(const std::string& stem, const FlowTrace& trace, const Json& meta) {
  std::ofstream csv(stem + ".csv");
  if (!csv) throw InputError("cannot write '" + stem + ".csv'");
  write_trace_csv(csv, trace);
  Json side = meta;
  side["format"] = kFormatTag;
  side["events"] = events_to_json(trace);
  write_json_file(stem + ".events.json", side);
}

}  // namespace hcf
