#include "curvindex/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include "curvindex/defects.hpp"
#include "curvindex/error.hpp"
#include "curvindex/spec_parser.hpp"

namespace curvindex {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since) {
  return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

CurvatureTriple curvatures(const Operator& t, const HarnessConfig& cfg) {
  CurvatureTriple out;
  out.defect = curvature_defect(t, cfg.convergence);
  if (cfg.run_cesaro) out.cesaro = curvature_cesaro(t, cfg.convergence);
  if (cfg.run_integral) out.integral = curvature_integral(t, cfg.schedule);
  return out;
}

std::optional<double> theorem_residual(long index, const std::optional<CurvatureResult>& k,
                                       const std::optional<CurvatureResult>& k_adjoint) {
  if (!k || !k_adjoint) return std::nullopt;
  return std::abs(static_cast<double>(index) - (k_adjoint->value - k->value));
}

}  // namespace

IdentityResiduals verify_identities(const Operator& t, int n_max) {
  IdentityResiduals r;
  const TraceSequence a = a_sequence(t, n_max);
  const TraceSequence a_adj = a_sequence(adjoint(t), n_max);
  const TraceSequence b = b_sequence(t, n_max);
  r.a_two_forms = a.cross_check_residual;
  r.reorder = b.cross_check_residual;
  for (int n = 0; n <= n_max; ++n) {
    const auto i = static_cast<std::size_t>(n);
    r.decomposition = std::max(r.decomposition, std::abs(a.values[i] - a_adj.values[i] - b.values[i]));
    r.b_constancy = std::max(r.b_constancy, std::abs(b.values[i] - b.values[0]));
    if (n < n_max) r.telescoping = std::max(r.telescoping, std::abs(b.values[i] - b.values[i + 1]));
  }
  // The telescoping difference assembled as a single commutator.
  const Operator t_star = adjoint(t);
  const Operator gram = t_star * t;
  const Operator right_defect = identity_like(t) - gram;
  Operator gram_power = identity_like(t);
  for (int n = 0; n < n_max; ++n) {
    const Complex step = op_trace(commutator(t_star, t * gram_power * right_defect));
    r.telescoping = std::max(r.telescoping, std::abs(step));
    gram_power = gram_power * gram;
  }
  r.a = a.values;
  r.a_adjoint = a_adj.values;
  r.b = b.values;
  return r;
}

VerificationReport verify_theorem(const Operator& t, const HarnessConfig& cfg) {
  VerificationReport report;
  report.valid = true;

  auto start = Clock::now();
  report.index.symbol = index_symbol(t);
  report.index.commutator = index_commutator(t);
  report.index.b_n = index_via_b(t, cfg.b_probe);
  if (cfg.record_timings) report.timings.index_ms = elapsed_ms(start);

  start = Clock::now();
  report.curvature = curvatures(t, cfg);
  report.adjoint_curvature = curvatures(adjoint(t), cfg);
  if (cfg.record_timings) report.timings.curvature_ms = elapsed_ms(start);

  const long index = report.index.symbol.value;
  report.theorem.defect =
      std::abs(static_cast<double>(index) - (report.adjoint_curvature.defect.value - report.curvature.defect.value));
  report.theorem.cesaro = theorem_residual(index, report.curvature.cesaro, report.adjoint_curvature.cesaro);
  report.theorem.integral = theorem_residual(index, report.curvature.integral, report.adjoint_curvature.integral);

  report.purity = purity_diagnostic(t, cfg.purity_probes, cfg.purity_horizon);
  if (report.purity <= kPurityThreshold) {
    report.pure_case = PureCaseResiduals{
        std::abs(report.adjoint_curvature.defect.value),
        std::abs(report.curvature.defect.value + static_cast<double>(index)),
    };
  }

  start = Clock::now();
  report.identities = verify_identities(t, cfg.identity_n);
  if (cfg.record_timings) report.timings.identities_ms = elapsed_ms(start);
  apply_verdict(report, cfg);
  return report;
}

VerificationReport verify_spec(const std::string& spec, const HarnessConfig& cfg) {
  const auto start = Clock::now();
  VerificationReport report;
  report.spec = spec;
  Operator t;
  try {
    t = parse_operator_spec(spec);
    const auto validate_start = Clock::now();
    require_almost_unitary_contraction(t);
    if (cfg.record_timings) report.timings.validate_ms = elapsed_ms(validate_start);
  } catch (const Error& e) {
    report.error = std::string(to_string(e.kind())) + ": " + e.what();
    apply_verdict(report, cfg);
    return report;
  }

  try {
    const double validate_ms = report.timings.validate_ms;
    report = verify_theorem(t, cfg);
    report.spec = spec;
    report.timings.validate_ms = validate_ms;
  } catch (const Error& e) {
    report.error = std::string(to_string(e.kind())) + ": " + e.what();
  }
  if (cfg.record_timings) report.timings.total_ms = elapsed_ms(start);
  apply_verdict(report, cfg);
  return report;
}

std::vector<VerificationReport> sweep(const std::vector<std::string>& specs, const HarnessConfig& cfg) {
  std::vector<VerificationReport> out;
  out.reserve(specs.size());
  for (const auto& spec : specs) out.push_back(verify_spec(spec, cfg));
  return out;
}

void apply_verdict(VerificationReport& report, const HarnessConfig& cfg) {
  auto& f = report.failures;
  f.clear();
  const Tolerances& tol = cfg.tolerances;
  const auto exceeds = [&](const char* what, double value, double limit) {
    if (value <= limit) return;
    std::ostringstream msg;
    msg.precision(3);
    msg << what << " " << value << " > " << limit;
    f.push_back(msg.str());
  };

  if (!report.valid) f.push_back("invalid: " + report.error);
  if (report.valid && !report.error.empty()) f.push_back("error: " + report.error);
  if (!f.empty()) {
    report.passed = false;
    return;
  }

  const auto& idx = report.index;
  if (idx.symbol.value != idx.commutator.value || idx.symbol.value != idx.b_n.value)
    f.push_back("index methods disagree");
  exceeds("commutator index residual", idx.commutator.residual, tol.index_residual);
  exceeds("b_n index residual", idx.b_n.residual, tol.index_residual);

  const auto& ids = report.identities;
  exceeds("identity a_two_forms", ids.a_two_forms, tol.identity);
  exceeds("identity decomposition", ids.decomposition, tol.identity);
  exceeds("identity telescoping", ids.telescoping, tol.identity);
  exceeds("identity reorder", ids.reorder, tol.identity);
  const double b0 = ids.b.empty() ? 0.0 : std::abs(ids.b.front());
  exceeds("b_n constancy", ids.b_constancy, tol.identity * std::max(1.0, b0));

  if (!report.curvature.defect.converged) f.push_back("K(T) defect formula did not converge");
  if (!report.adjoint_curvature.defect.converged) f.push_back("K(T*) defect formula did not converge");
  exceeds("theorem residual", report.theorem.defect, tol.theorem);

  for (const auto* triple : {&report.curvature, &report.adjoint_curvature}) {
    const char* side = triple == &report.curvature ? "K(T)" : "K(T*)";
    const auto& kd = triple->defect;
    if (triple->cesaro && kd.converged && triple->cesaro->converged)
      exceeds((std::string(side) + " defect/cesaro gap").c_str(), std::abs(kd.value - triple->cesaro->value),
              tol.cesaro_agreement);
    if (triple->integral && kd.converged && triple->integral->converged)
      exceeds((std::string(side) + " defect/integral gap").c_str(), std::abs(kd.value - triple->integral->value),
              tol.integral_agreement);
  }

  if (report.pure_case) {
    exceeds("pure case |K(T*)|", report.pure_case->adjoint_curvature, tol.pure_adjoint_curvature);
    exceeds("pure case |K(T) + index|", report.pure_case->curvature_plus_index, tol.pure_index);
  }
  report.passed = f.empty();
}

}  // namespace curvindex
