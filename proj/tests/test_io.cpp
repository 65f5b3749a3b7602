#include <doctest.h>

#include <sstream>

#include "hcflab/experiments.hpp"

using namespace hcf;

TEST_CASE("algebra JSON round trip") {
  const ComplexLieAlgebra mu = build_sl(3).algebra;
  const Json j = algebra_to_json(mu);
  CHECK(j["format"] == kFormatTag);
  for (const auto& c : j["constants"]) CHECK(c["i"].get<int>() < c["j"].get<int>());
  const ComplexLieAlgebra back = algebra_from_json(Json::parse(j.dump()));
  CHECK(bracket_distance(mu, back) == 0.0);
  CHECK(back.labels() == mu.labels());
}

TEST_CASE("metric JSON round trip") {
  Rng rng(71);
  const HermitianMetric g = random_metric(4, rng);
  const HermitianMetric back = metric_from_json(Json::parse(metric_to_json(g).dump()));
  CHECK((back.matrix() - g.matrix()).norm() == 0.0);
}

TEST_CASE("malformed inputs raise InputError") {
  Json j = algebra_to_json(build_heisenberg(1));
  Json wrong_tag = j;
  wrong_tag["format"] = "other/2";
  CHECK_THROWS_AS(algebra_from_json(wrong_tag), InputError);
  Json reversed = j;
  reversed["constants"][0]["i"] = 1;
  reversed["constants"][0]["j"] = 0;
  CHECK_THROWS_AS(algebra_from_json(reversed), InputError);
  Json out_of_range = j;
  out_of_range["constants"][0]["k"] = 9;
  CHECK_THROWS_AS(algebra_from_json(out_of_range), InputError);
  Json missing = j;
  missing.erase("dim");
  CHECK_THROWS_AS(algebra_from_json(missing), InputError);
  Json bad_entry = j;
  bad_entry["constants"][0]["i"] = "zero";
  CHECK_THROWS_AS(algebra_from_json(bad_entry), InputError);

  Json m = metric_to_json(HermitianMetric::identity(2));
  m["entries"][0] = {-1.0, 0.0};
  CHECK_THROWS_AS(metric_from_json(m), InputError);
  m["entries"] = Json::array({{1.0, 0.0}});
  CHECK_THROWS_AS(metric_from_json(m), InputError);
  CHECK_THROWS_AS(read_json_file("/nonexistent/file.json"), InputError);
}

TEST_CASE("certificate JSON round trip") {
  Rng rng(73);
  const ComplexLieAlgebra h = build_heisenberg(1);
  const SolitonCertificate c = soliton_check(h, random_metric(3, rng));
  const Json j = certificate_to_json(c);
  CHECK(j["verdict"] == "algebraic");
  const SolitonCertificate back = certificate_from_json(Json::parse(j.dump()));
  CHECK(back.verdict == c.verdict);
  CHECK(back.lambda == c.lambda);
  CHECK(back.residual == c.residual);
  CHECK((back.D - c.D).norm() == 0.0);
  CHECK(back.d_star_is_derivation == c.d_star_is_derivation);
  CHECK(back.tol == c.tol);
  CHECK_THROWS_AS(certificate_from_json(Json::object()), InputError);
}

TEST_CASE("trace CSV round trip") {
  const BlowupBounds bb = blowup_time_bounds(1.0, 0.9, 0.8, 2);
  FlowTrace tr = bb.trace;
  tr.derived["twice_x"].clear();
  for (const auto& s : tr.states) tr.derived["twice_x"].push_back(2 * s(0));
  std::stringstream ss;
  write_trace_csv(ss, tr);
  const FlowTrace back = read_trace_csv(ss, 3);
  REQUIRE(back.size() == tr.size());
  CHECK(back.state_labels == tr.state_labels);
  for (std::size_t i = 0; i < tr.size(); ++i) {
    CHECK(back.times[i] == tr.times[i]);
    CHECK((back.states[i].array() == tr.states[i].array()).all());
    CHECK(back.derived.at("twice_x")[i] == tr.derived.at("twice_x")[i]);
  }
  const Json ev = events_to_json(tr);
  CHECK(ev.back()["kind"] == "blowup_detected");
  CHECK(ev.back().contains("t_est"));

  std::stringstream ragged("t,a,b\n0,1\n");
  CHECK_THROWS_AS(read_trace_csv(ragged, 2), InputError);
  std::stringstream header("x,a\n");
  CHECK_THROWS_AS(read_trace_csv(header, 1), InputError);
}
