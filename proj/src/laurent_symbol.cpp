#include "curvindex/laurent_symbol.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace curvindex {

LaurentSymbol::LaurentSymbol(int kmin, std::vector<Complex> coefficients, double trim_tol)
    : kmin_(kmin), coefficients_(std::move(coefficients)) {
  std::size_t first = 0;
  std::size_t last = coefficients_.size();
  while (first < last && std::abs(coefficients_[first]) <= trim_tol) ++first;
  while (last > first && std::abs(coefficients_[last - 1]) <= trim_tol) --last;
  if (first == last) {
    kmin_ = 0;
    coefficients_.clear();
    return;
  }
  kmin_ += static_cast<int>(first);
  coefficients_ = std::vector<Complex>(coefficients_.begin() + static_cast<std::ptrdiff_t>(first),
                                       coefficients_.begin() + static_cast<std::ptrdiff_t>(last));
}

LaurentSymbol LaurentSymbol::constant(Complex c) { return LaurentSymbol(0, {c}); }

LaurentSymbol LaurentSymbol::monomial(Complex c, int k) { return LaurentSymbol(k, {c}); }

int LaurentSymbol::reach() const noexcept {
  if (is_zero()) return 0;
  return std::max(std::abs(kmin()), std::abs(kmax()));
}

Complex LaurentSymbol::coefficient(int k) const noexcept {
  if (is_zero() || k < kmin() || k > kmax()) return {};
  return coefficients_[static_cast<std::size_t>(k - kmin_)];
}

Complex LaurentSymbol::evaluate(Complex z) const noexcept {
  if (is_zero()) return {};
  // Horner in z from the top coefficient, then rescale by z^kmin.
  Complex acc{};
  for (auto it = coefficients_.rbegin(); it != coefficients_.rend(); ++it) acc = acc * z + *it;
  return acc * std::pow(z, kmin_);
}

double LaurentSymbol::max_modulus() const noexcept {
  double m = 0.0;
  for (const auto& c : coefficients_) m = std::max(m, std::abs(c));
  return m;
}

LaurentSymbol LaurentSymbol::adjoint() const {
  if (is_zero()) return {};
  std::vector<Complex> out(coefficients_.rbegin(), coefficients_.rend());
  for (auto& c : out) c = std::conj(c);
  return LaurentSymbol(-kmax(), std::move(out));
}

LaurentSymbol LaurentSymbol::scaled(Complex c) const {
  std::vector<Complex> out = coefficients_;
  for (auto& x : out) x *= c;
  return LaurentSymbol(kmin_, std::move(out));
}

LaurentSymbol LaurentSymbol::trimmed(double tol) const { return LaurentSymbol(kmin_, coefficients_, tol); }

std::optional<std::pair<Complex, int>> LaurentSymbol::as_monomial() const {
  if (coefficients_.size() != 1) return std::nullopt;
  return std::make_pair(coefficients_.front(), kmin_);
}

namespace {

LaurentSymbol combine(const LaurentSymbol& a, const LaurentSymbol& b, double sign) {
  if (a.is_zero() && b.is_zero()) return {};
  if (b.is_zero()) return a;
  if (a.is_zero()) return b.scaled(sign);
  const int lo = std::min(a.kmin(), b.kmin());
  const int hi = std::max(a.kmax(), b.kmax());
  std::vector<Complex> out(static_cast<std::size_t>(hi - lo + 1));
  for (int k = lo; k <= hi; ++k) out[static_cast<std::size_t>(k - lo)] = a.coefficient(k) + sign * b.coefficient(k);
  const double tol = kArithmeticTrimTol * std::max(a.max_modulus(), b.max_modulus());
  return LaurentSymbol(lo, std::move(out), tol);
}

}  // namespace

LaurentSymbol operator+(const LaurentSymbol& a, const LaurentSymbol& b) { return combine(a, b, 1.0); }

LaurentSymbol operator-(const LaurentSymbol& a, const LaurentSymbol& b) { return combine(a, b, -1.0); }

LaurentSymbol operator*(const LaurentSymbol& a, const LaurentSymbol& b) {
  if (a.is_zero() || b.is_zero()) return {};
  const auto& ca = a.coefficients();
  const auto& cb = b.coefficients();
  std::vector<Complex> out(ca.size() + cb.size() - 1);
  for (std::size_t i = 0; i < ca.size(); ++i)
    for (std::size_t j = 0; j < cb.size(); ++j) out[i + j] += ca[i] * cb[j];
  const double tol = kArithmeticTrimTol * a.max_modulus() * b.max_modulus();
  return LaurentSymbol(a.kmin() + b.kmin(), std::move(out), tol);
}

}  // namespace curvindex
