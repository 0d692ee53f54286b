#pragma once

#include <complex>
#include <optional>
#include <vector>

namespace curvindex {

using Complex = std::complex<double>;

/// Relative tolerance used when trimming symbols and correction blocks after
/// arithmetic. Entries below it (relative to the operand scale) are round-off.
inline constexpr double kArithmeticTrimTol = 1e-13;

/// Laurent polynomial a(z) = sum_k c_k z^k with finite support.
///
/// The coefficient c_k sits on the matrix diagonal i - j = k of the associated
/// Toeplitz matrix, so the unilateral shift e_j -> e_{j+1} has symbol z and
/// its adjoint has symbol 1/z. Canonical form keeps the extreme coefficients
/// nonzero; the zero symbol has empty support.
class LaurentSymbol {
 public:
  LaurentSymbol() = default;

  /// Coefficients c_{kmin}, c_{kmin+1}, ...; extreme entries with modulus
  /// <= trim_tol are dropped.
  LaurentSymbol(int kmin, std::vector<Complex> coefficients, double trim_tol = 0.0);

  static LaurentSymbol constant(Complex c);
  static LaurentSymbol monomial(Complex c, int k);

  bool is_zero() const noexcept { return coefficients_.empty(); }
  int kmin() const noexcept { return kmin_; }
  int kmax() const noexcept { return kmin_ + static_cast<int>(coefficients_.size()) - 1; }
  /// Largest |k| in the support; 0 for the zero symbol.
  int reach() const noexcept;
  const std::vector<Complex>& coefficients() const noexcept { return coefficients_; }

  Complex coefficient(int k) const noexcept;
  Complex evaluate(Complex z) const noexcept;
  double max_modulus() const noexcept;

  /// Symbol of the adjoint Toeplitz operator: c_k -> conj(c_{-k}).
  LaurentSymbol adjoint() const;
  LaurentSymbol scaled(Complex c) const;
  LaurentSymbol trimmed(double tol) const;

  /// (c, k) when the symbol is c z^k.
  std::optional<std::pair<Complex, int>> as_monomial() const;

  friend LaurentSymbol operator+(const LaurentSymbol& a, const LaurentSymbol& b);
  friend LaurentSymbol operator-(const LaurentSymbol& a, const LaurentSymbol& b);
  /// Laurent-polynomial product (coefficient convolution).
  friend LaurentSymbol operator*(const LaurentSymbol& a, const LaurentSymbol& b);
  friend bool operator==(const LaurentSymbol& a, const LaurentSymbol& b) = default;

 private:
  int kmin_ = 0;
  std::vector<Complex> coefficients_;
};

}  // namespace curvindex
