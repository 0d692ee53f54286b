#pragma once

// Dense truncation reference used by the tests. Operators are read only
// through entry(i, j); all products, traces and solves are plain Eigen.

#include <algorithm>
#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "curvindex/error.hpp"
#include "curvindex/operator.hpp"

namespace oracle {

using curvindex::Complex;
using curvindex::QuasiToeplitz;
using Mat = Eigen::MatrixXcd;
using Eigen::Index;

inline Mat dense(const QuasiToeplitz& t, Index n) {
  Mat m(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) m(i, j) = t.entry(i, j);
  return m;
}

// Hand-built shift power: ones on the diagonal i - j = k.
inline Mat shift(Index n, int k) {
  Mat m = Mat::Zero(n, n);
  for (Index j = 0; j < n; ++j)
    if (j + k >= 0 && j + k < n) m(j + k, j) = 1.0;
  return m;
}

inline Index reach(const QuasiToeplitz& t) {
  return t.symbol().is_zero() ? 0 : std::max(std::abs(t.symbol().kmin()), std::abs(t.symbol().kmax()));
}

inline Index extent(const QuasiToeplitz& t) {
  return std::max(t.correction().rows(), t.correction().cols());
}

// Trace of a finitely supported word of `factors` copies of T or T*.
// Truncation artefacts live within factors * reach of the bottom edge, so the
// leading `keep` diagonal entries are exact once keep covers the support.
struct Window {
  Index n;
  Index keep;
};

inline Window window_for(const QuasiToeplitz& t, int factors, Index at_least = 0) {
  const Index r = std::max<Index>(reach(t), 1);
  const Index keep = extent(t) + factors * r + 8;
  return {std::max(keep + factors * r + 8, at_least), keep};
}

inline Complex leading_trace(const Mat& m, Index keep) { return m.diagonal().head(keep).sum(); }

template <class F>
Complex sum_leaves(const curvindex::Operator& op, F&& f) {
  Complex s = 0.0;
  for (const QuasiToeplitz* leaf : op.leaves()) s += f(*leaf);
  return s;
}

inline Mat mpow(const Mat& m, int n) {
  Mat out = Mat::Identity(m.rows(), m.cols());
  for (int i = 0; i < n; ++i) out = out * m;
  return out;
}

// a_n = tr(T*^n T^n (I - TT*)).
inline Complex a_n(const curvindex::Operator& op, int n, Index at_least = 0) {
  return sum_leaves(op, [&](const QuasiToeplitz& t) {
    const Window w = window_for(t, 2 * n + 2, at_least);
    const Mat m = dense(t, w.n);
    const Mat ma = m.adjoint();
    const Mat id = Mat::Identity(w.n, w.n);
    return leading_trace(mpow(ma, n) * mpow(m, n) * (id - m * ma), w.keep);
  });
}

// b_n = tr[T*, T*^n T^{n+1}].
inline Complex b_n(const curvindex::Operator& op, int n, Index at_least = 0) {
  return sum_leaves(op, [&](const QuasiToeplitz& t) {
    const Window w = window_for(t, 2 * n + 2, at_least);
    const Mat m = dense(t, w.n);
    const Mat ma = m.adjoint();
    const Mat x = mpow(ma, n) * mpow(m, n + 1);
    return leading_trace(ma * x - x * ma, w.keep);
  });
}

// tr(I - T^n T*^n).
inline Complex cesaro_trace(const curvindex::Operator& op, int n, Index at_least = 0) {
  return sum_leaves(op, [&](const QuasiToeplitz& t) {
    const Window w = window_for(t, 2 * n, at_least);
    const Mat m = dense(t, w.n);
    const Mat p = mpow(m, n);
    return leading_trace(Mat::Identity(w.n, w.n) - p * p.adjoint(), w.keep);
  });
}

// tr(TT* - T*T).
inline Complex commutator_trace(const curvindex::Operator& op, Index at_least = 0) {
  return sum_leaves(op, [&](const QuasiToeplitz& t) {
    const Window w = window_for(t, 2, at_least);
    const Mat m = dense(t, w.n);
    return leading_trace(m * m.adjoint() - m.adjoint() * m, w.keep);
  });
}

// Principal square root of a Hermitian PSD matrix.
inline Mat hermitian_sqrt(const Mat& d) {
  Eigen::SelfAdjointEigenSolver<Mat> es(d);
  const Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

// ||(I - zeta T_N)^{-1} V||_HS^2 by a dense solve on an N x N truncation.
inline double resolvent_norm_squared(const QuasiToeplitz& t, Complex zeta, const Mat& v, Index n) {
  const Mat a = Mat::Identity(n, n) - zeta * dense(t, n);
  Mat rhs = Mat::Zero(n, v.cols());
  rhs.topRows(v.rows()) = v;
  return a.partialPivLu().solve(rhs).squaredNorm();
}

// Kind of the curvindex::Error thrown by f, if any.
template <class F>
std::optional<curvindex::ErrorKind> thrown_kind(F&& f) {
  try {
    f();
  } catch (const curvindex::Error& e) {
    return e.kind();
  }
  return std::nullopt;
}

// Small deterministic generator for the property tests.
struct Rng {
  std::uint64_t state;
  explicit Rng(std::uint64_t seed) : state(seed * 0x9E3779B97F4A7C15ull + 1) {}
  std::uint64_t next() {
    state ^= state << 13;
    state ^= state >> 7;
    state ^= state << 17;
    return state;
  }
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  int between(int lo, int hi) { return lo + static_cast<int>(next() % static_cast<std::uint64_t>(hi - lo + 1)); }
  Complex complex() { return {2.0 * uniform() - 1.0, 2.0 * uniform() - 1.0}; }
};

}  // namespace oracle
