#include <algorithm>
#include <charconv>
#include <cmath>
#include <string>
#include <utility>

#include "curvindex/harness.hpp"

namespace curvindex {

namespace {

std::string format_double(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, ptr);
}

void write(const Json& j, int indent, int depth, std::string& out) {
  const auto newline = [&](int d) {
    if (indent < 0) return;
    out += '\n';
    out.append(static_cast<std::size_t>(indent * d), ' ');
  };
  switch (j.type()) {
    case Json::value_t::number_float:
      out += format_double(j.get<double>());
      return;
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += '[';
      bool first = true;
      for (const auto& item : j) {
        if (!first) out += ',';
        first = false;
        newline(depth + 1);
        write(item, indent, depth + 1, out);
      }
      newline(depth);
      out += ']';
      return;
    }
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (const auto& [key, item] : j.items()) {
        if (!first) out += ',';
        first = false;
        newline(depth + 1);
        out += Json(key).dump();
        out += indent < 0 ? ":" : ": ";
        write(item, indent, depth + 1, out);
      }
      newline(depth);
      out += '}';
      return;
    }
    default:
      out += j.dump();
      return;
  }
}

Json optional_value(const std::optional<CurvatureResult>& r) { return r ? Json(r->value) : Json(nullptr); }

Json optional_value(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

Json convergence_entry(const CurvatureResult& r) {
  Json j;
  j["converged"] = r.converged;
  j["steps"] = r.diagnostics.steps;
  j["path"] = r.diagnostics.path;
  j["raw"] = r.diagnostics.raw_value;
  j["last_deltas"] = r.diagnostics.last_deltas;
  if (r.method == CurvatureMethod::Integral) j["fit_residual"] = r.diagnostics.fit_residual;
  return j;
}

Json curvature_values(const CurvatureTriple& c) {
  return Json{{"defect", c.defect.value}, {"cesaro", optional_value(c.cesaro)}, {"integral", optional_value(c.integral)}};
}

Json convergence_values(const CurvatureTriple& c) {
  Json j;
  j["defect"] = convergence_entry(c.defect);
  j["cesaro"] = c.cesaro ? convergence_entry(*c.cesaro) : Json(nullptr);
  j["integral"] = c.integral ? convergence_entry(*c.integral) : Json(nullptr);
  return j;
}

void flatten(const Json& j, const std::string& prefix, std::vector<std::pair<std::string, std::string>>& out) {
  switch (j.type()) {
    case Json::value_t::object:
      for (const auto& [key, item] : j.items()) flatten(item, prefix.empty() ? key : prefix + "." + key, out);
      return;
    case Json::value_t::array: {
      std::string cell;
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) cell += ';';
        std::string item;
        write(j[i], -1, 0, item);
        if (j[i].is_string()) item = j[i].get<std::string>();
        cell += item;
      }
      out.emplace_back(prefix, cell);
      return;
    }
    case Json::value_t::string:
      out.emplace_back(prefix, j.get<std::string>());
      return;
    case Json::value_t::null:
      out.emplace_back(prefix, "");
      return;
    default: {
      std::string cell;
      write(j, -1, 0, cell);
      out.emplace_back(prefix, cell);
      return;
    }
  }
}

std::string csv_escape(const std::string& cell) {
  if (cell.find_first_of(",\"\n") == std::string::npos) return cell;
  std::string out = "\"";
  for (char c : cell) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

Json config_to_json(const HarnessConfig& cfg) {
  Json j;
  j["max_n"] = cfg.convergence.max_n;
  j["tol"] = cfg.convergence.tol;
  j["window"] = cfg.convergence.window;
  j["aitken"] = cfg.convergence.aitken;
  j["cesaro_richardson"] = cfg.convergence.cesaro_richardson;
  j["r_values"] = cfg.schedule.r_values;
  j["quadrature_points"] = cfg.schedule.quadrature_points;
  j["neumann_eps"] = cfg.schedule.neumann_eps;
  j["extrapolation_order"] = cfg.schedule.extrapolation_order;
  j["fit_tolerance"] = cfg.schedule.fit_tolerance;
  j["identity_n"] = cfg.identity_n;
  j["b_probe"] = cfg.b_probe;
  j["run_cesaro"] = cfg.run_cesaro;
  j["run_integral"] = cfg.run_integral;
  j["purity_probes"] = cfg.purity_probes;
  j["purity_horizon"] = cfg.purity_horizon;
  const Tolerances& t = cfg.tolerances;
  j["tolerances"] = Json{{"identity", t.identity},
                         {"theorem", t.theorem},
                         {"cesaro_agreement", t.cesaro_agreement},
                         {"integral_agreement", t.integral_agreement},
                         {"index_residual", t.index_residual},
                         {"pure_adjoint_curvature", t.pure_adjoint_curvature},
                         {"pure_index", t.pure_index}};
  return j;
}

Json report_to_json(const VerificationReport& r, const HarnessConfig& cfg) {
  Json j;
  j["spec"] = r.spec;
  j["valid"] = r.valid;
  j["error"] = r.error;
  const bool complete = r.valid && r.error.empty();
  if (complete) {
    j["index"] = Json{{"symbol", r.index.symbol.value},
                      {"commutator", r.index.commutator.value},
                      {"b_n", r.index.b_n.value},
                      {"raw_commutator", r.index.commutator.raw},
                      {"raw_b_n", r.index.b_n.raw}};
    j["curvature"] = Json{{"T", curvature_values(r.curvature)}, {"adjoint", curvature_values(r.adjoint_curvature)}};
    j["convergence"] = Json{{"T", convergence_values(r.curvature)}, {"adjoint", convergence_values(r.adjoint_curvature)}};
    j["identities"] = Json{{"a_two_forms", r.identities.a_two_forms},
                           {"decomposition", r.identities.decomposition},
                           {"telescoping", r.identities.telescoping},
                           {"reorder", r.identities.reorder},
                           {"b_constancy", r.identities.b_constancy}};
    j["theorem_residual"] = Json{{"defect", r.theorem.defect},
                                 {"cesaro", optional_value(r.theorem.cesaro)},
                                 {"integral", optional_value(r.theorem.integral)}};
    j["purity"] = r.purity;
    j["pure_case"] = r.pure_case ? Json{{"adjoint_curvature", r.pure_case->adjoint_curvature},
                                        {"curvature_plus_index", r.pure_case->curvature_plus_index}}
                                 : Json(nullptr);
    j["sequences"] = Json{{"a", r.identities.a}, {"a_adjoint", r.identities.a_adjoint}, {"b", r.identities.b}};
  } else {
    for (const char* key : {"index", "curvature", "convergence", "identities", "theorem_residual", "purity",
                            "pure_case", "sequences"})
      j[key] = nullptr;
  }
  j["timings_ms"] = Json{{"validate", r.timings.validate_ms},
                         {"index", r.timings.index_ms},
                         {"curvature", r.timings.curvature_ms},
                         {"identities", r.timings.identities_ms},
                         {"total", r.timings.total_ms}};
  j["passed"] = r.passed;
  j["failures"] = r.failures;
  j["config"] = config_to_json(cfg);
  return j;
}

Json sweep_to_json(const std::vector<VerificationReport>& reports, const HarnessConfig& cfg) {
  Json rows = Json::array();
  std::size_t passed = 0;
  for (const auto& r : reports) {
    rows.push_back(report_to_json(r, cfg));
    passed += r.passed ? 1 : 0;
  }
  Json j;
  j["reports"] = std::move(rows);
  j["summary"] = Json{{"rows", reports.size()},
                      {"passed", passed},
                      {"failed", reports.size() - passed},
                      {"verdict", passed == reports.size()}};
  return j;
}

std::string serialize_json(const Json& value, int indent) {
  std::string out;
  write(value, indent, 0, out);
  out += '\n';
  return out;
}

std::string reports_to_csv(const std::vector<VerificationReport>& reports, const HarnessConfig& cfg) {
  std::vector<std::vector<std::pair<std::string, std::string>>> rows;
  std::vector<std::string> header;
  for (const auto& r : reports) {
    std::vector<std::pair<std::string, std::string>> cells;
    flatten(report_to_json(r, cfg), "", cells);
    for (const auto& [key, value] : cells)
      if (std::find(header.begin(), header.end(), key) == header.end()) header.push_back(key);
    rows.push_back(std::move(cells));
  }
  std::string out;
  for (std::size_t i = 0; i < header.size(); ++i) out += (i ? "," : "") + csv_escape(header[i]);
  out += '\n';
  for (const auto& cells : rows) {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (i) out += ',';
      const auto it = std::find_if(cells.begin(), cells.end(), [&](const auto& c) { return c.first == header[i]; });
      if (it != cells.end()) out += csv_escape(it->second);
    }
    out += '\n';
  }
  return out;
}

}  // namespace curvindex
