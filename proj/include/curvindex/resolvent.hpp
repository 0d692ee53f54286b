#pragma once

#include <vector>

#include "curvindex/quasi_toeplitz.hpp"

namespace curvindex {

/// Finitely supported vector of l2(N) held as the dense window
/// [offset, offset + values.size()); zero elsewhere.
struct WindowVector {
  Index offset = 0;
  std::vector<Complex> values;

  Index end() const noexcept { return offset + static_cast<Index>(values.size()); }
  Complex at(Index i) const noexcept;
  double norm_squared() const noexcept;
};

/// t * v.
WindowVector apply(const QuasiToeplitz& t, const WindowVector& v);

/// Smallest M with |zeta|^(M+1) / (1 - |zeta|) < eps.
int neumann_terms(double modulus, double eps);

struct ResolventResult {
  std::vector<WindowVector> columns;
  int terms = 0;  // M, the highest power kept
};

/// (I - zeta t)^{-1} v for every column of v, by the truncated Neumann
/// series sum_{m <= M} (zeta t)^m v. Iterate entries below eps times the
/// column norm are dropped at the window edges. Throws DivergentSeries when
/// |zeta| >= 1.
ResolventResult resolvent_apply(const QuasiToeplitz& t, Complex zeta, const DenseMatrix& v, double eps);

namespace detail {

// Remaining series sum_{p < count} ratio^p shift_{p * step}(seed) once the
// iterate has left the correction block of an operator with symbol c z^k, k > 0.
struct GeometricTail {
  bool present = false;
  WindowVector seed;
  Complex ratio;
  Index step = 0;
  int count = 0;
};

// Scratch buffers reused across Neumann-series evaluations. `sum` is all
// zeros between calls of resolvent_hs_norm_squared.
struct NeumannWorkspace {
  WindowVector iterate;
  WindowVector next;
  std::vector<Complex> sum;
  std::size_t used = 0;
  GeometricTail tail;
};

// Accumulates the series for one column into ws.sum[0, ws.used), stopping
// early with ws.tail set when the rest is a geometric shift series.
void neumann_column(const QuasiToeplitz& t, Complex zeta, const Complex* column, Index rows, double eps, int terms,
                    NeumannWorkspace& ws);
// Adds a pending tail into ws.sum explicitly.
void materialize_tail(NeumannWorkspace& ws);
double geometric_tail_norm_squared(const GeometricTail& tail);

}  // namespace detail

/// Squared Hilbert-Schmidt norm of resolvent_apply(t, zeta, v, eps) without
/// materializing the columns.
double resolvent_hs_norm_squared(const QuasiToeplitz& t, Complex zeta, const DenseMatrix& v, double eps,
                                 detail::NeumannWorkspace& ws);

}  // namespace curvindex
