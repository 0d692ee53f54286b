#include "curvindex/index.hpp"

#include <cmath>
#include <sstream>

#include "curvindex/curvature.hpp"
#include "curvindex/error.hpp"
#include "curvindex/resolvent.hpp"

namespace curvindex {

namespace {

constexpr double kUnimodularTol = 1e-10;
constexpr double kIndexResidualTol = 1e-6;

IndexResult rounded(double raw, IndexMethod method) {
  IndexResult r;
  r.method = method;
  r.raw = raw;
  r.value = std::lround(raw);
  r.residual = std::abs(raw - static_cast<double>(r.value));
  r.reliable = r.residual <= kIndexResidualTol;
  return r;
}

}  // namespace

std::string_view to_string(IndexMethod m) {
  switch (m) {
    case IndexMethod::Symbol: return "symbol";
    case IndexMethod::Commutator: return "commutator";
    case IndexMethod::BSequence: return "b_n";
  }
  return "unknown";
}

IndexResult index_symbol(const Operator& t) {
  long winding = 0;
  for (const auto* leaf : t.leaves()) {
    const auto mono = leaf->symbol().as_monomial();
    if (!mono || std::abs(std::abs(mono->first) - 1.0) > kUnimodularTol) {
      std::ostringstream msg;
      msg << "symbol is not a unimodular monomial (support " << leaf->symbol().kmin() << ".."
          << leaf->symbol().kmax() << ")";
      throw Error(ErrorKind::NotAlmostUnitary, msg.str());
    }
    winding += mono->second;
  }
  IndexResult r;
  r.method = IndexMethod::Symbol;
  r.value = -winding;
  r.raw = static_cast<double>(r.value);
  return r;
}

IndexResult index_commutator(const Operator& t) {
  Complex trace;
  try {
    trace = op_trace(commutator(t, adjoint(t)));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::TraceUndefined) throw Error(ErrorKind::NotAlmostUnitary, e.what());
    throw;
  }
  return rounded(trace.real(), IndexMethod::Commutator);
}

IndexResult index_via_b(const Operator& t, int n) {
  if (n < 0) throw Error(ErrorKind::InvalidArgument, "probe index must be non-negative");
  const TraceSequence b = b_sequence(t, n);
  return rounded(-b.values.back(), IndexMethod::BSequence);
}

double purity_diagnostic(const Operator& t, int probes, int horizon) {
  double worst = 0.0;
  for (const auto* leaf : t.leaves()) {
    const QuasiToeplitz t_star = leaf->adjoint();
    for (int j = 0; j < probes; ++j) {
      WindowVector v{j, {Complex{1.0}}};
      for (int n = 0; n < horizon && !v.values.empty(); ++n) v = apply(t_star, v);
      worst = std::max(worst, std::sqrt(v.norm_squared()));
    }
  }
  return worst;
}

}  // namespace curvindex
