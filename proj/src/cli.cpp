#include "curvindex/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "curvindex/curvature.hpp"
#include "curvindex/defects.hpp"
#include "curvindex/error.hpp"
#include "curvindex/harness.hpp"
#include "curvindex/index.hpp"
#include "curvindex/spec_parser.hpp"
#include "curvindex/zoo.hpp"

namespace curvindex {

namespace {

struct CommonOptions {
  HarnessConfig cfg;
  std::vector<double> r_values;
  bool no_richardson = false;
  bool json = false;
};

void add_convergence_flags(CLI::App& cmd, CommonOptions& o) {
  cmd.add_option("--max-n", o.cfg.convergence.max_n, "Largest n for the sequence limits")->capture_default_str();
  cmd.add_option("--tol", o.cfg.convergence.tol, "Stabilization tolerance")->capture_default_str();
  cmd.add_option("--window", o.cfg.convergence.window, "Consecutive small deltas required")->capture_default_str();
  cmd.add_flag("--aitken", o.cfg.convergence.aitken, "Aitken acceleration before detection");
  cmd.add_flag("--no-richardson", o.no_richardson, "Detect the Cesaro limit on the raw ratio");
  cmd.add_option("--r-values", o.r_values, "Radii for the integral formula")->delimiter(',');
  cmd.add_option("--quadrature-points", o.cfg.schedule.quadrature_points, "Circle quadrature points")
      ->capture_default_str();
  cmd.add_option("--neumann-eps", o.cfg.schedule.neumann_eps, "Neumann series truncation")->capture_default_str();
  cmd.add_option("--extrapolation-order", o.cfg.schedule.extrapolation_order, "Degree of the r -> 1 fit")
      ->capture_default_str();
  cmd.add_option("--fit-tolerance", o.cfg.schedule.fit_tolerance, "Largest accepted fit residual")
      ->capture_default_str();
  cmd.add_flag("--json", o.json, "Print a JSON report");
}

void finish_options(CommonOptions& o) {
  if (!o.r_values.empty()) o.cfg.schedule.r_values = o.r_values;
  if (o.no_richardson) o.cfg.convergence.cesaro_richardson = false;
  o.cfg.convergence.validate();
  o.cfg.schedule.validate();
}

// Parses and validates; prints the reason and returns nullopt on failure.
std::optional<Operator> load(const std::string& spec, std::ostream& err) {
  try {
    Operator op = parse_operator_spec(spec);
    require_almost_unitary_contraction(op);
    return op;
  } catch (const ParseError& e) {
    err << "parse error at position " << e.position() << ": " << e.what() << '\n';
  } catch (const Error& e) {
    err << to_string(e.kind()) << ": " << e.what() << '\n';
  }
  return std::nullopt;
}

Json convergence_json(const CurvatureResult& r) {
  Json j;
  j["converged"] = r.converged;
  j["steps"] = r.diagnostics.steps;
  j["path"] = r.diagnostics.path;
  j["raw"] = r.diagnostics.raw_value;
  j["last_deltas"] = r.diagnostics.last_deltas;
  if (r.method == CurvatureMethod::Integral) j["fit_residual"] = r.diagnostics.fit_residual;
  return j;
}

int cmd_curvature(const std::string& spec, const std::string& formula, CommonOptions& o, std::ostream& out,
                  std::ostream& err) {
  finish_options(o);
  const auto op = load(spec, err);
  if (!op) return kExitInvalidInput;

  std::vector<CurvatureResult> results;
  if (formula == "defect" || formula == "all") results.push_back(curvature_defect(*op, o.cfg.convergence));
  if (formula == "cesaro" || formula == "all") results.push_back(curvature_cesaro(*op, o.cfg.convergence));
  if (formula == "integral" || formula == "all") results.push_back(curvature_integral(*op, o.cfg.schedule));

  bool all_converged = true;
  for (const auto& r : results) all_converged = all_converged && r.converged;

  if (o.json) {
    Json values{{"defect", nullptr}, {"cesaro", nullptr}, {"integral", nullptr}};
    Json conv{{"defect", nullptr}, {"cesaro", nullptr}, {"integral", nullptr}};
    for (const auto& r : results) {
      const std::string key(to_string(r.method));
      values[key] = r.value;
      conv[key] = convergence_json(r);
    }
    Json j;
    j["spec"] = spec;
    j["valid"] = true;
    j["curvature"] = Json{{"T", values}};
    j["convergence"] = Json{{"T", conv}};
    j["config"] = config_to_json(o.cfg);
    out << serialize_json(j);
  } else {
    for (const auto& r : results) {
      out << to_string(r.method) << ": " << format_number(r.value) << (r.converged ? " converged" : " not-converged")
          << " steps=" << r.diagnostics.steps << " path=" << r.diagnostics.path;
      if (r.method == CurvatureMethod::Integral) out << " fit_residual=" << format_number(r.diagnostics.fit_residual);
      out << '\n';
    }
  }
  return all_converged ? kExitOk : kExitNotConverged;
}

int cmd_index(const std::string& spec, const std::string& method, int n, bool json, std::ostream& out,
              std::ostream& err) {
  if (n < 0) {
    err << "InvalidArgument: --n must be non-negative\n";
    return kExitInvalidInput;
  }
  const auto op = load(spec, err);
  if (!op) return kExitInvalidInput;

  std::vector<IndexResult> results;
  try {
    if (method == "symbol" || method == "all") results.push_back(index_symbol(*op));
    if (method == "commutator" || method == "all") results.push_back(index_commutator(*op));
    if (method == "bn" || method == "all") results.push_back(index_via_b(*op, n));
  } catch (const Error& e) {
    err << to_string(e.kind()) << ": " << e.what() << '\n';
    return kExitInvalidInput;
  }

  bool agree = true;
  for (const auto& r : results) agree = agree && r.reliable && r.value == results.front().value;

  if (json) {
    Json idx{{"symbol", nullptr}, {"commutator", nullptr}, {"b_n", nullptr}, {"raw_commutator", nullptr}};
    for (const auto& r : results) {
      switch (r.method) {
        case IndexMethod::Symbol: idx["symbol"] = r.value; break;
        case IndexMethod::Commutator:
          idx["commutator"] = r.value;
          idx["raw_commutator"] = r.raw;
          break;
        case IndexMethod::BSequence:
          idx["b_n"] = r.value;
          idx["raw_b_n"] = r.raw;
          break;
      }
    }
    Json j;
    j["spec"] = spec;
    j["valid"] = true;
    j["index"] = idx;
    j["b_probe"] = n;
    j["agree"] = agree;
    out << serialize_json(j);
  } else {
    for (const auto& r : results) {
      out << to_string(r.method) << ": " << r.value << " raw=" << format_number(r.raw + 0.0)
          << (r.reliable ? "" : " unreliable") << '\n';
    }
    if (!agree) out << "methods disagree\n";
  }
  return agree ? kExitOk : kExitFailed;
}

struct VerifyOptions {
  std::string spec;
  bool zoo = false;
  int random = 0;
  std::uint64_t seed = 1;
  std::string out_path;
  std::string csv_path;
  bool timings = false;
  bool skip_integral = false;
  bool skip_cesaro = false;
  int identity_n = 20;
  int b_probe = 0;
};

bool write_file(const std::string& path, const std::string& text, std::ostream& err) {
  std::ofstream f(path, std::ios::binary);
  if (f) f << text;
  if (!f) {
    err << "cannot write " << path << '\n';
    return false;
  }
  return true;
}

int cmd_verify(const VerifyOptions& v, CommonOptions& o, std::ostream& out, std::ostream& err) {
  o.cfg.record_timings = v.timings;
  o.cfg.run_integral = !v.skip_integral;
  o.cfg.run_cesaro = !v.skip_cesaro;
  o.cfg.identity_n = v.identity_n;
  o.cfg.b_probe = v.b_probe;
  finish_options(o);
  if (v.identity_n < 1 || v.b_probe < 0 || v.random < 0)
    throw Error(ErrorKind::InvalidArgument, "--identity-n must be positive, --b-probe and --random non-negative");

  std::vector<std::string> specs;
  if (!v.spec.empty()) specs.push_back(v.spec);
  if (v.zoo)
    for (const auto& z : fixed_zoo()) specs.push_back(z.spec);
  for (int i = 0; i < v.random; ++i) specs.push_back(random_almost_unitary(v.seed + static_cast<std::uint64_t>(i)).spec);
  if (specs.empty() && !v.zoo && v.random == 0) {
    err << "verify needs a spec, --zoo or --random N\n";
    return kExitInvalidInput;
  }

  const auto reports = sweep(specs, o.cfg);
  if (!v.out_path.empty() && !write_file(v.out_path, serialize_json(sweep_to_json(reports, o.cfg)), err))
    return kExitInvalidInput;
  if (!v.csv_path.empty() && !write_file(v.csv_path, reports_to_csv(reports, o.cfg), err)) return kExitInvalidInput;

  std::size_t passed = 0;
  for (const auto& r : reports) passed += r.passed ? 1 : 0;

  if (o.json) {
    out << serialize_json(sweep_to_json(reports, o.cfg));
  } else {
    for (const auto& r : reports) {
      out << (r.passed ? "PASS " : "FAIL ") << r.spec;
      if (r.valid) out << "  index=" << r.index.symbol.value << " residual=" << format_number(r.theorem.defect);
      for (const auto& f : r.failures) out << "\n    " << f;
      out << '\n';
    }
    out << "rows=" << reports.size() << " passed=" << passed << " failed=" << reports.size() - passed << '\n';
  }

  // A lone spec that does not parse or validate is invalid input.
  if (reports.size() == 1 && !v.zoo && v.random == 0 && !reports.front().valid) return kExitInvalidInput;
  return passed == reports.size() ? kExitOk : kExitFailed;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Curvature and index of almost unitary contractions"};
  app.set_config("--config", "", "key=value file with option defaults");
  app.require_subcommand(1);

  std::string spec;

  CommonOptions curv_opts;
  std::string formula = "defect";
  auto* curv = app.add_subcommand("curvature", "Curvature K(T) by one or all formulas");
  curv->add_option("spec", spec, "Operator spec")->required();
  curv->add_option("--formula", formula, "defect, cesaro, integral or all")
      ->check(CLI::IsMember({"defect", "cesaro", "integral", "all"}))
      ->capture_default_str();
  add_convergence_flags(*curv, curv_opts);

  std::string method = "all";
  int n = 0;
  bool index_json = false;
  auto* idx = app.add_subcommand("index", "Fredholm index by one or all methods");
  idx->add_option("spec", spec, "Operator spec")->required();
  idx->add_option("--method", method, "symbol, commutator, bn or all")
      ->check(CLI::IsMember({"symbol", "commutator", "bn", "all"}))
      ->capture_default_str();
  idx->add_option("--n", n, "Probe index for the b_n route")->capture_default_str();
  idx->add_flag("--json", index_json, "Print a JSON report");

  CommonOptions verify_opts;
  VerifyOptions v;
  auto* ver = app.add_subcommand("verify", "Check the index formula and the trace identities");
  ver->add_option("spec", v.spec, "Operator spec");
  ver->add_flag("--zoo", v.zoo, "Add the fixed zoo");
  ver->add_option("--random", v.random, "Add N random operators");
  ver->add_option("--seed", v.seed, "First random seed")->capture_default_str();
  ver->add_option("--out", v.out_path, "Write the JSON report here");
  ver->add_option("--csv", v.csv_path, "Write a CSV report here");
  ver->add_flag("--timings", v.timings, "Record wall-clock timings");
  ver->add_flag("--skip-integral", v.skip_integral, "Skip the integral formula");
  ver->add_flag("--skip-cesaro", v.skip_cesaro, "Skip the Cesaro formula");
  ver->add_option("--identity-n", v.identity_n, "Largest n for the identity checks")->capture_default_str();
  ver->add_option("--b-probe", v.b_probe, "Probe index for the b_n index route")->capture_default_str();
  add_convergence_flags(*ver, verify_opts);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInvalidInput;
  }

  try {
    if (*curv) return cmd_curvature(spec, formula, curv_opts, out, err);
    if (*idx) return cmd_index(spec, method, n, index_json, out, err);
    return cmd_verify(v, verify_opts, out, err);
  } catch (const Error& e) {
    err << to_string(e.kind()) << ": " << e.what() << '\n';
    return kExitInvalidInput;
  }
}

}  // namespace curvindex
