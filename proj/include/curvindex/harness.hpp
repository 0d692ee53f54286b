#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "curvindex/curvature.hpp"
#include "curvindex/index.hpp"
#include "curvindex/operator.hpp"

namespace curvindex {

/// Insertion-ordered so serialized reports follow the schema field order.
using Json = nlohmann::ordered_json;

struct Tolerances {
  double identity = 1e-10;
  double theorem = 1e-6;
  double cesaro_agreement = 1e-6;
  double integral_agreement = 1e-4;
  double index_residual = 1e-6;
  double pure_adjoint_curvature = 1e-8;
  double pure_index = 1e-6;
};

struct HarnessConfig {
  ConvergenceConfig convergence;
  IntegralSchedule schedule = IntegralSchedule::defaults();
  int identity_n = 20;
  int b_probe = 0;
  bool run_cesaro = true;
  bool run_integral = true;
  bool record_timings = false;  // off keeps serialized reports byte-identical
  int purity_probes = 8;
  int purity_horizon = 256;
  Tolerances tolerances;
};

struct IdentityResiduals {
  double a_two_forms = 0.0;    // tr(T*^n T^n (I-TT*)) vs tr(T^n T*^n - T^{n+1} T*^{n+1})
  double decomposition = 0.0;  // a_n(T) - a_n(T*) - b_n(T)
  double telescoping = 0.0;    // b_n - b_{n+1} and tr[T*, T (T*T)^n (I - T*T)]
  double reorder = 0.0;        // tr[T*, T*^n T^{n+1}] vs tr[T*, T (T*T)^n]
  double b_constancy = 0.0;    // max_n |b_n - b_0|
  std::vector<double> a;
  std::vector<double> a_adjoint;
  std::vector<double> b;
};

struct IndexTriple {
  IndexResult symbol;
  IndexResult commutator;
  IndexResult b_n;
};

struct CurvatureTriple {
  CurvatureResult defect;
  std::optional<CurvatureResult> cesaro;
  std::optional<CurvatureResult> integral;
};

struct TheoremResiduals {
  double defect = 0.0;
  std::optional<double> cesaro;
  std::optional<double> integral;
};

/// Pure-case checks: |K(T*)| and |K(T) + index|.
struct PureCaseResiduals {
  double adjoint_curvature = 0.0;
  double curvature_plus_index = 0.0;
};

struct Timings {
  double validate_ms = 0.0;
  double index_ms = 0.0;
  double curvature_ms = 0.0;
  double identities_ms = 0.0;
  double total_ms = 0.0;
};

struct VerificationReport {
  std::string spec;
  bool valid = false;
  std::string error;  // "<kind>: <message>" when invalid
  IndexTriple index;
  CurvatureTriple curvature;
  CurvatureTriple adjoint_curvature;
  IdentityResiduals identities;
  TheoremResiduals theorem;
  double purity = 0.0;
  std::optional<PureCaseResiduals> pure_case;
  Timings timings;
  bool passed = false;
  std::vector<std::string> failures;
};

IdentityResiduals verify_identities(const Operator& t, int n_max);

/// Indices, curvatures of T and T*, theorem residuals, purity, pure-case
/// residuals, identity residuals and the verdict. Non-convergence is recorded
/// in the report, never thrown.
VerificationReport verify_theorem(const Operator& t, const HarnessConfig& cfg);

/// Parse, validate and verify_theorem; failures become an invalid row.
/// Invalid specs produce a failed row rather than an exception.
VerificationReport verify_spec(const std::string& spec, const HarnessConfig& cfg);

std::vector<VerificationReport> sweep(const std::vector<std::string>& specs, const HarnessConfig& cfg);

/// Applies the configured tolerances; fills passed and failures.
void apply_verdict(VerificationReport& report, const HarnessConfig& cfg);

Json config_to_json(const HarnessConfig& cfg);
Json report_to_json(const VerificationReport& report, const HarnessConfig& cfg);
/// {"reports": [...], "summary": {...}, "config": {...}}
Json sweep_to_json(const std::vector<VerificationReport>& reports, const HarnessConfig& cfg);

/// Deterministic text: doubles with 17 significant digits, fixed key order.
std::string serialize_json(const Json& value, int indent = 2);
/// One header line and one row per report; nested fields dot-joined.
std::string reports_to_csv(const std::vector<VerificationReport>& reports, const HarnessConfig& cfg);

}  // namespace curvindex
