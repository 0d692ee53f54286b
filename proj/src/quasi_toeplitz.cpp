#include "curvindex/quasi_toeplitz.hpp"

#include <algorithm>
#include <cstdlib>

#include "curvindex/error.hpp"

namespace curvindex {

CorrectionBlock::CorrectionBlock(DenseMatrix data, double abs_tol) : data_(std::move(data)) {
  const double peak = max_modulus();
  const double tol = std::max(abs_tol, 1e-15 * peak);
  if (peak == 0.0 || peak <= tol) {
    data_.resize(0, 0);
    return;
  }
  Index last_row = -1;
  Index last_col = -1;
  for (Index j = 0; j < data_.cols(); ++j)
    for (Index i = 0; i < data_.rows(); ++i)
      if (std::abs(data_(i, j)) > tol) {
        last_row = std::max(last_row, i);
        last_col = std::max(last_col, j);
      }
  data_.conservativeResize(last_row + 1, last_col + 1);
}

Complex CorrectionBlock::at(Index i, Index j) const noexcept {
  if (i < 0 || j < 0 || i >= data_.rows() || j >= data_.cols()) return {};
  return data_(i, j);
}

double CorrectionBlock::max_modulus() const noexcept {
  return data_.size() == 0 ? 0.0 : data_.cwiseAbs().maxCoeff();
}

bool operator==(const CorrectionBlock& a, const CorrectionBlock& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() && a.data_ == b.data_;
}

QuasiToeplitz::QuasiToeplitz(LaurentSymbol symbol, CorrectionBlock correction)
    : symbol_(std::move(symbol)), correction_(std::move(correction)) {}

QuasiToeplitz QuasiToeplitz::identity() { return QuasiToeplitz(LaurentSymbol::constant(1.0), {}); }

QuasiToeplitz QuasiToeplitz::finite(DenseMatrix block) { return QuasiToeplitz({}, CorrectionBlock(std::move(block))); }

Complex QuasiToeplitz::entry(Index i, Index j) const noexcept {
  const Index offset = i - j;
  Complex value = correction_.at(i, j);
  if (!symbol_.is_zero() && offset >= symbol_.kmin() && offset <= symbol_.kmax())
    value += symbol_.coefficient(static_cast<int>(offset));
  return value;
}

DenseMatrix QuasiToeplitz::truncation(Index rows, Index cols) const {
  DenseMatrix out = DenseMatrix::Zero(rows, cols);
  const DenseMatrix& block = correction_.matrix();
  const Index br = std::min(rows, block.rows());
  const Index bc = std::min(cols, block.cols());
  if (br > 0 && bc > 0) out.topLeftCorner(br, bc) = block.topLeftCorner(br, bc);
  if (symbol_.is_zero()) return out;
  for (int k = symbol_.kmin(); k <= symbol_.kmax(); ++k) {
    const Complex c = symbol_.coefficient(k);
    if (c == Complex{}) continue;
    // Diagonal i - j = k.
    for (Index j = std::max<Index>(0, -k); j < cols && j + k < rows; ++j) out(j + k, j) += c;
  }
  return out;
}

Index QuasiToeplitz::block_extent() const noexcept { return std::max(correction_.rows(), correction_.cols()); }

Index QuasiToeplitz::safe_window() const noexcept {
  if (symbol_.is_zero()) return block_extent();
  return block_extent() + std::abs(symbol_.kmin()) + std::abs(symbol_.kmax());
}

double QuasiToeplitz::scale() const noexcept { return std::max(symbol_.max_modulus(), correction_.max_modulus()); }

QuasiToeplitz QuasiToeplitz::adjoint() const {
  return QuasiToeplitz(symbol_.adjoint(), CorrectionBlock(correction_.matrix().adjoint()));
}

QuasiToeplitz QuasiToeplitz::scaled(Complex c) const {
  return QuasiToeplitz(symbol_.scaled(c), CorrectionBlock(correction_.matrix() * c));
}

Complex QuasiToeplitz::trace() const {
  if (!symbol_.is_zero())
    throw Error(ErrorKind::TraceUndefined, "trace of an operator with nonzero Toeplitz symbol");
  return correction_.matrix().diagonal().sum();
}

namespace {

DenseMatrix padded(const DenseMatrix& m, Index rows, Index cols) {
  DenseMatrix out = DenseMatrix::Zero(rows, cols);
  if (m.size() > 0) out.topLeftCorner(m.rows(), m.cols()) = m;
  return out;
}

QuasiToeplitz combine(const QuasiToeplitz& a, const QuasiToeplitz& b, double sign) {
  const Index rows = std::max(a.correction().rows(), b.correction().rows());
  const Index cols = std::max(a.correction().cols(), b.correction().cols());
  DenseMatrix block = padded(a.correction().matrix(), rows, cols) + sign * padded(b.correction().matrix(), rows, cols);
  const double tol = kArithmeticTrimTol * std::max(a.scale(), b.scale());
  LaurentSymbol symbol = sign > 0 ? a.symbol() + b.symbol() : a.symbol() - b.symbol();
  return QuasiToeplitz(std::move(symbol), CorrectionBlock(std::move(block), tol));
}

}  // namespace

QuasiToeplitz operator+(const QuasiToeplitz& a, const QuasiToeplitz& b) { return combine(a, b, 1.0); }

QuasiToeplitz operator-(const QuasiToeplitz& a, const QuasiToeplitz& b) { return combine(a, b, -1.0); }

Index product_window(const QuasiToeplitz& a, const QuasiToeplitz& b) {
  const auto reach_sum = [](const LaurentSymbol& s) -> Index {
    return s.is_zero() ? 0 : std::abs(s.kmin()) + std::abs(s.kmax());
  };
  return std::max(a.block_extent(), b.block_extent()) + reach_sum(a.symbol()) + reach_sum(b.symbol());
}

QuasiToeplitz operator*(const QuasiToeplitz& a, const QuasiToeplitz& b) {
  LaurentSymbol symbol = a.symbol() * b.symbol();
  const Index window = product_window(a, b);
  if (window == 0) return QuasiToeplitz(std::move(symbol), {});

  // Inner dimension: every l with a(i,l) != 0 for i < window, or b(l,j) != 0 for j < window.
  const Index lower_reach = a.symbol().is_zero() ? 0 : std::max(0, -a.symbol().kmin());
  const Index upper_reach = b.symbol().is_zero() ? 0 : std::max(0, b.symbol().kmax());
  const Index inner = window + std::max(lower_reach, upper_reach);

  DenseMatrix product = a.truncation(window, inner) * b.truncation(inner, window);
  const QuasiToeplitz toeplitz_part(symbol, {});
  product -= toeplitz_part.truncation(window, window);
  const double tol = kArithmeticTrimTol * std::max(1.0, a.scale() * b.scale());
  return QuasiToeplitz(std::move(symbol), CorrectionBlock(std::move(product), tol));
}

bool operator==(const QuasiToeplitz& a, const QuasiToeplitz& b) {
  return a.symbol() == b.symbol() && a.correction() == b.correction();
}

QuasiToeplitz power(const QuasiToeplitz& a, unsigned n) {
  QuasiToeplitz result = QuasiToeplitz::identity();
  for (unsigned i = 0; i < n; ++i) result = result * a;
  return result;
}

}  // namespace curvindex
