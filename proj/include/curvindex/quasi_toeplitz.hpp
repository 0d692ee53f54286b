#pragma once

#include <Eigen/Dense>

#include "curvindex/laurent_symbol.hpp"

namespace curvindex {

using DenseMatrix = Eigen::MatrixXcd;
using DenseVector = Eigen::VectorXcd;
using Index = Eigen::Index;

/// Finite dense block anchored at matrix position (0,0).
///
/// Canonical form: the last row and last column each hold an entry with
/// modulus above max(abs_tol, 1e-15 * max-modulus), or the block is empty.
class CorrectionBlock {
 public:
  CorrectionBlock() = default;
  explicit CorrectionBlock(DenseMatrix data, double abs_tol = 0.0);

  Index rows() const noexcept { return data_.rows(); }
  Index cols() const noexcept { return data_.cols(); }
  bool empty() const noexcept { return data_.size() == 0; }
  /// Zero outside the block.
  Complex at(Index i, Index j) const noexcept;
  double max_modulus() const noexcept;
  const DenseMatrix& matrix() const noexcept { return data_; }

  friend bool operator==(const CorrectionBlock& a, const CorrectionBlock& b);

 private:
  DenseMatrix data_;
};

/// Semi-infinite matrix T(a) + C on l2(N): a Toeplitz part with a
/// Laurent-polynomial symbol plus a finite top-left correction.
///
///   entry(i, j) = a.coefficient(i - j) + C(i, j)
///
/// The class is closed under +, *, and adjoint.
class QuasiToeplitz {
 public:
  QuasiToeplitz() = default;  // zero operator
  QuasiToeplitz(LaurentSymbol symbol, CorrectionBlock correction);

  static QuasiToeplitz identity();
  /// Finitely supported operator given by a dense top-left block.
  static QuasiToeplitz finite(DenseMatrix block);

  const LaurentSymbol& symbol() const noexcept { return symbol_; }
  const CorrectionBlock& correction() const noexcept { return correction_; }

  Complex entry(Index i, Index j) const noexcept;
  /// Dense copy of the top-left rows x cols truncation.
  DenseMatrix truncation(Index rows, Index cols) const;
  DenseMatrix truncation(Index n) const { return truncation(n, n); }

  bool finitely_supported() const noexcept { return symbol_.is_zero(); }
  /// Beyond this index in both directions the operator is purely Toeplitz.
  Index block_extent() const noexcept;
  /// Size of a square window containing every entry where the operator
  /// differs from its Toeplitz part, padded by the symbol reach.
  Index safe_window() const noexcept;
  /// Largest entry modulus of symbol and correction; used for trimming scales.
  double scale() const noexcept;

  QuasiToeplitz adjoint() const;
  QuasiToeplitz scaled(Complex c) const;
  /// Exact trace; throws TraceUndefined when the symbol is nonzero.
  Complex trace() const;

  friend QuasiToeplitz operator+(const QuasiToeplitz& a, const QuasiToeplitz& b);
  friend QuasiToeplitz operator-(const QuasiToeplitz& a, const QuasiToeplitz& b);
  friend QuasiToeplitz operator*(const QuasiToeplitz& a, const QuasiToeplitz& b);
  friend bool operator==(const QuasiToeplitz& a, const QuasiToeplitz& b);

 private:
  LaurentSymbol symbol_;
  CorrectionBlock correction_;
};

/// Window W = max(block dims of a, b) + |kmin_a| + |kmax_a| + |kmin_b| + |kmax_b|;
/// the correction of a*b lies inside the top-left W x W block.
Index product_window(const QuasiToeplitz& a, const QuasiToeplitz& b);

QuasiToeplitz power(const QuasiToeplitz& a, unsigned n);

}  // namespace curvindex
