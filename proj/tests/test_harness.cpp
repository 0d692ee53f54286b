#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "curvindex/harness.hpp"
#include "curvindex/zoo.hpp"
#include "dense_oracle.hpp"

using namespace curvindex;

namespace {

HarnessConfig quick() {
  HarnessConfig cfg;
  cfg.run_integral = false;
  return cfg;
}

bool all_zero(const std::vector<double>& v) {
  for (double x : v)
    if (x != 0.0) return false;
  return true;
}

}  // namespace

TEST_CASE("identity residuals") {
  const auto s = verify_identities(shift_power(1), 20);
  CHECK(s.a_two_forms == 0.0);
  CHECK(s.decomposition == 0.0);
  CHECK(s.telescoping == 0.0);
  CHECK(s.reorder == 0.0);
  CHECK(s.b_constancy == 0.0);
  CHECK(s.a.size() == 21);

  const auto id = verify_identities(shift_power(0), 20);
  CHECK(all_zero(id.a));
  CHECK(all_zero(id.a_adjoint));
  CHECK(all_zero(id.b));
  CHECK(id.decomposition == 0.0);

  const auto r = verify_identities(random_almost_unitary(42).op, 20);
  for (double x : {r.a_two_forms, r.decomposition, r.telescoping, r.reorder, r.b_constancy}) CHECK(x <= 1e-10);
}

TEST_CASE("full reports for single operators") {
  const HarnessConfig cfg;
  const auto s = verify_theorem(shift_power(1), cfg);
  CHECK(s.passed);
  CHECK(s.index.symbol.value == -1);
  CHECK(s.curvature.defect.value == 1.0);
  CHECK(s.adjoint_curvature.defect.value == 0.0);
  CHECK(s.theorem.defect == 0.0);
  REQUIRE(s.theorem.integral);
  CHECK(*s.theorem.integral <= 1e-6);
  REQUIRE(s.pure_case);
  CHECK(s.pure_case->adjoint_curvature == 0.0);
  CHECK(s.pure_case->curvature_plus_index == 0.0);

  const auto bi = verify_theorem(direct_sum({shift_power(-1), shift_power(1)}), cfg);
  CHECK(bi.passed);
  CHECK(bi.index.commutator.value == 0);
  CHECK(std::abs(bi.curvature.defect.value - 1.0) < 1e-12);
  CHECK(std::abs(bi.adjoint_curvature.defect.value - 1.0) < 1e-12);
  CHECK(bi.theorem.defect <= 1e-12);
  CHECK_FALSE(bi.pure_case);

  const auto u = verify_theorem(unitary_embed(random_unitary(3, 1)), cfg);
  CHECK(u.passed);
  CHECK(u.theorem.defect == 0.0);
}

TEST_CASE("verdict follows the tolerances") {
  HarnessConfig cfg = quick();
  auto report = verify_theorem(shift_power(1), cfg);
  CHECK(report.passed);
  report.theorem.defect = 1e-3;
  apply_verdict(report, cfg);
  CHECK_FALSE(report.passed);
  REQUIRE_FALSE(report.failures.empty());
  cfg.tolerances.theorem = 1e-2;
  apply_verdict(report, cfg);
  CHECK(report.passed);
}

TEST_CASE("sweeps") {
  const HarnessConfig cfg = quick();
  const auto empty = sweep({}, cfg);
  CHECK(empty.empty());
  const Json ej = sweep_to_json(empty, cfg);
  CHECK(ej["reports"].empty());
  CHECK(ej["summary"]["verdict"] == true);

  const auto rows = sweep({"shift(1)", "wshift([];0.5)", "shift(-2) (+) shift(1)", "shift(1"}, cfg);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].passed);
  CHECK_FALSE(rows[1].valid);
  CHECK_FALSE(rows[1].passed);
  CHECK(rows[1].error.rfind("NotAlmostUnitary", 0) == 0);
  CHECK(rows[2].passed);
  CHECK(rows[2].index.b_n.value == 1);
  CHECK(rows[3].error.rfind("Parse", 0) == 0);
  const Json j = sweep_to_json(rows, cfg);
  CHECK(j["summary"]["verdict"] == false);
  CHECK(j["summary"]["failed"] == 2);
}

TEST_CASE("report schema") {
  const HarnessConfig cfg;
  const Json j = report_to_json(verify_spec("shift(1)", cfg), cfg);
  for (const char* key : {"spec", "valid", "index", "curvature", "identities", "theorem_residual", "purity",
                          "timings_ms", "config"})
    CHECK(j.contains(key));
  for (const char* key : {"symbol", "commutator", "b_n", "raw_commutator"}) CHECK(j["index"].contains(key));
  for (const char* side : {"T", "adjoint"})
    for (const char* key : {"defect", "cesaro", "integral"}) CHECK(j["curvature"][side].contains(key));
  for (const char* key : {"a_two_forms", "decomposition", "telescoping", "reorder"}) CHECK(j["identities"].contains(key));
  for (const char* key : {"defect", "cesaro", "integral"}) CHECK(j["theorem_residual"].contains(key));
  CHECK(j["sequences"]["a"].size() == 21);

  const Json bad = report_to_json(verify_spec("wshift([];0.5)", cfg), cfg);
  CHECK(bad["valid"] == false);
  CHECK(bad["index"].is_null());
}

TEST_CASE("serialization is fixed-format and byte-identical") {
  CHECK(serialize_json(Json(0.1), -1) == "0.10000000000000001\n");
  CHECK(serialize_json(Json(1.0), -1) == "1\n");
  CHECK(serialize_json(Json(std::nan("")), -1) == "null\n");
  CHECK(serialize_json(Json::array({1, 2.5}), -1) == "[1,2.5]\n");

  const HarnessConfig cfg = quick();
  std::vector<std::string> specs;
  for (const auto& z : fixed_zoo()) specs.push_back(z.spec);
  const auto first = serialize_json(sweep_to_json(sweep(specs, cfg), cfg));
  const auto second = serialize_json(sweep_to_json(sweep(specs, cfg), cfg));
  CHECK(first == second);
  const Json parsed = Json::parse(first);
  CHECK(parsed["reports"].size() == specs.size());
}

TEST_CASE("CSV flattening") {
  const HarnessConfig cfg = quick();
  const auto rows = sweep({"shift(1)", "adj(shift(1)) (+) shift(1)", "wshift([];0.5)"}, cfg);
  const std::string csv = reports_to_csv(rows, cfg);
  std::istringstream in(csv);
  std::string header;
  std::getline(in, header);
  CHECK(header.rfind("spec,valid,error,index.symbol,index.commutator", 0) == 0);
  CHECK(header.find("curvature.adjoint.defect") != std::string::npos);
  CHECK(header.find("theorem_residual.defect") != std::string::npos);
  int lines = 0;
  for (std::string line; std::getline(in, line);) ++lines;
  CHECK(lines == 3);
  CHECK(csv.find("\"adj(shift(1)) (+) shift(1)\"") == std::string::npos);  // no comma, no quoting
}

TEST_CASE("timings are opt-in") {
  HarnessConfig cfg = quick();
  const auto off = verify_spec("shift(1)", cfg);
  CHECK(off.timings.total_ms == 0.0);
  cfg.record_timings = true;
  const auto on = verify_spec("iso(k=2,m=3,seed=5)", cfg);
  CHECK(on.timings.total_ms > 0.0);
}
