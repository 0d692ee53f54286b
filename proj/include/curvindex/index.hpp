#pragma once

#include <string_view>

#include "curvindex/operator.hpp"

namespace curvindex {

enum class IndexMethod { Symbol, Commutator, BSequence };
std::string_view to_string(IndexMethod m);

struct IndexResult {
  long value = 0;
  double raw = 0.0;  // before rounding
  IndexMethod method = IndexMethod::Symbol;
  double residual = 0.0;  // |raw - value|
  bool reliable = true;   // residual <= 1e-6
};

/// Minus the total winding number of the leaf symbols. Every symbol must be
/// a unimodular monomial c z^k, otherwise NotAlmostUnitary is thrown.
IndexResult index_symbol(const Operator& t);

/// tr(TT* - T*T) of the assembled commutator.
IndexResult index_commutator(const Operator& t);

/// -b_n(T) for the probe index n.
IndexResult index_via_b(const Operator& t, int n);

/// max_{j < probes} ||T*^horizon e_j|| over all components. A value <= 1e-6
/// suggests purity but does not prove it.
double purity_diagnostic(const Operator& t, int probes = 8, int horizon = 256);

inline constexpr double kPurityThreshold = 1e-6;

}  // namespace curvindex
