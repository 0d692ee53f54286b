#include "curvindex/resolvent.hpp"

#include <algorithm>
#include <cmath>

#include "curvindex/error.hpp"

namespace curvindex {

Complex WindowVector::at(Index i) const noexcept {
  if (i < offset || i >= end()) return {};
  return values[static_cast<std::size_t>(i - offset)];
}

double WindowVector::norm_squared() const noexcept {
  double s = 0.0;
  for (const auto& x : values) s += std::norm(x);
  return s;
}

namespace {

// out = factor * t * v, reusing out's storage.
void apply_into(const QuasiToeplitz& t, const WindowVector& v, Complex factor, WindowVector& out) {
  out.values.clear();
  if (v.values.empty()) {
    out.offset = 0;
    return;
  }
  const LaurentSymbol& symbol = t.symbol();
  const DenseMatrix& block = t.correction().matrix();
  const Index lo = v.offset;
  const Index hi = v.end();

  Index out_lo = hi;
  Index out_hi = 0;
  if (!symbol.is_zero()) {
    out_lo = std::max<Index>(0, lo + symbol.kmin());
    out_hi = std::max<Index>(0, hi + symbol.kmax());
  }
  const bool touches_block = block.size() > 0 && lo < block.cols();
  if (touches_block) {
    out_lo = 0;
    out_hi = std::max(out_hi, block.rows());
  }
  if (out_hi <= out_lo) {
    out.offset = 0;
    return;
  }
  out.offset = out_lo;
  out.values.assign(static_cast<std::size_t>(out_hi - out_lo), Complex{});
  Complex* dst = out.values.data() - out_lo;
  const Complex* src = v.values.data() - lo;

  if (!symbol.is_zero()) {
    for (int k = symbol.kmin(); k <= symbol.kmax(); ++k) {
      const Complex c = factor * symbol.coefficient(k);
      if (c == Complex{}) continue;
      for (Index j = std::max<Index>(lo, -k); j < hi; ++j) dst[j + k] += c * src[j];
    }
  }
  if (touches_block) {
    const Index jmax = std::min(hi, block.cols());
    for (Index j = lo; j < jmax; ++j) {
      const Complex s = factor * src[j];
      if (s == Complex{}) continue;
      for (Index i = 0; i < block.rows(); ++i) dst[i] += block(i, j) * s;
    }
  }
}

void trim_edges(WindowVector& v, double tol) {
  const double tol_sq = tol * tol;
  std::size_t first = 0;
  std::size_t last = v.values.size();
  while (first < last && std::norm(v.values[first]) <= tol_sq) ++first;
  while (last > first && std::norm(v.values[last - 1]) <= tol_sq) --last;
  if (first == 0 && last == v.values.size()) return;
  v.values.erase(v.values.begin() + static_cast<std::ptrdiff_t>(last), v.values.end());
  v.values.erase(v.values.begin(), v.values.begin() + static_cast<std::ptrdiff_t>(first));
  v.offset = v.values.empty() ? 0 : v.offset + static_cast<Index>(first);
}

}  // namespace

WindowVector apply(const QuasiToeplitz& t, const WindowVector& v) {
  WindowVector out;
  apply_into(t, v, 1.0, out);
  return out;
}

int neumann_terms(double modulus, double eps) {
  if (modulus >= 1.0) throw Error(ErrorKind::DivergentSeries, "Neumann series needs |zeta| < 1");
  if (modulus == 0.0) return 0;
  const double bound = eps * (1.0 - modulus);
  int m = std::max(0, static_cast<int>(std::ceil(std::log(bound) / std::log(modulus))) - 1);
  while (m > 0 && std::pow(modulus, m) < bound) --m;
  while (std::pow(modulus, m + 1) >= bound) ++m;
  return m;
}

namespace detail {

void neumann_column(const QuasiToeplitz& t, Complex zeta, const Complex* column, Index rows, double eps, int terms,
                    NeumannWorkspace& ws) {
  WindowVector& iterate = ws.iterate;
  WindowVector& next = ws.next;
  iterate.offset = 0;
  iterate.values.assign(column, column + rows);
  const double drop = eps * std::sqrt(iterate.norm_squared());
  trim_edges(iterate, drop);

  // Past the correction block a monomial symbol c z^k with k > 0 only scales
  // and shifts the iterate; the rest of the series is handed back as a tail.
  const auto monomial = t.symbol().as_monomial();
  const bool escapes = monomial && monomial->second > 0;
  const Index block_cols = t.correction().cols();

  ws.used = 0;
  ws.tail = {};
  for (int m = 0; m <= terms && !iterate.values.empty(); ++m) {
    if (escapes && iterate.offset >= block_cols) {
      ws.tail.present = true;
      ws.tail.seed = iterate;
      ws.tail.ratio = zeta * monomial->first;
      ws.tail.step = monomial->second;
      ws.tail.count = terms - m + 1;
      return;
    }
    if (static_cast<Index>(ws.sum.size()) < iterate.end()) ws.sum.resize(static_cast<std::size_t>(iterate.end()));
    ws.used = std::max<std::size_t>(ws.used, static_cast<std::size_t>(iterate.end()));
    Complex* acc = ws.sum.data() + iterate.offset;
    for (std::size_t i = 0; i < iterate.values.size(); ++i) acc[i] += iterate.values[i];
    if (m == terms) break;
    apply_into(t, iterate, zeta, next);
    trim_edges(next, drop);
    std::swap(iterate, next);
  }
}

void materialize_tail(NeumannWorkspace& ws) {
  if (!ws.tail.present) return;
  const GeometricTail& tail = ws.tail;
  const std::size_t needed = static_cast<std::size_t>(tail.seed.end() + tail.step * (tail.count - 1));
  if (ws.sum.size() < needed) ws.sum.resize(needed);
  ws.used = std::max(ws.used, needed);
  Complex factor = 1.0;
  Complex* acc = ws.sum.data() + tail.seed.offset;
  const Complex* src = tail.seed.values.data();
  const std::size_t width = tail.seed.values.size();
  for (int p = 0; p < tail.count; ++p, acc += tail.step, factor *= tail.ratio)
    for (std::size_t i = 0; i < width; ++i) acc[i] += factor * src[i];
  ws.tail.present = false;
}

}  // namespace detail

ResolventResult resolvent_apply(const QuasiToeplitz& t, Complex zeta, const DenseMatrix& v, double eps) {
  ResolventResult result;
  result.terms = neumann_terms(std::abs(zeta), eps);
  result.columns.reserve(static_cast<std::size_t>(v.cols()));
  detail::NeumannWorkspace ws;
  for (Index c = 0; c < v.cols(); ++c) {
    ws.sum.clear();
    detail::neumann_column(t, zeta, v.col(c).data(), v.rows(), eps, result.terms, ws);
    detail::materialize_tail(ws);
    ws.sum.resize(ws.used);
    WindowVector column{0, std::move(ws.sum)};
    trim_edges(column, 0.0);
    result.columns.push_back(std::move(column));
    ws.sum = {};
  }
  return result;
}

double resolvent_hs_norm_squared(const QuasiToeplitz& t, Complex zeta, const DenseMatrix& v, double eps,
                                 detail::NeumannWorkspace& ws) {
  const int terms = neumann_terms(std::abs(zeta), eps);
  double total = 0.0;
  for (Index c = 0; c < v.cols(); ++c) {
    detail::neumann_column(t, zeta, v.col(c).data(), v.rows(), eps, terms, ws);
    double head = 0.0;
    if (ws.tail.present) {
      // ||s + tail||^2 = ||s||^2 + 2 Re <tail, s> + ||tail||^2, with s the
      // partial sum before the escape. Only the first few shifted copies of
      // the tail seed overlap s.
      const detail::GeometricTail& tail = ws.tail;
      Complex factor = 1.0;
      double cross = 0.0;
      for (int p = 0; p < tail.count; ++p, factor *= tail.ratio) {
        const Index start = tail.seed.offset + tail.step * p;
        if (start >= static_cast<Index>(ws.used)) break;
        Complex inner{};
        for (std::size_t i = 0; i < tail.seed.values.size(); ++i) {
          const Index pos = start + static_cast<Index>(i);
          if (pos >= static_cast<Index>(ws.used)) break;
          inner += tail.seed.values[i] * std::conj(ws.sum[static_cast<std::size_t>(pos)]);
        }
        cross += (factor * inner).real();
      }
      head = 2.0 * cross + detail::geometric_tail_norm_squared(tail);
    }
    for (std::size_t i = 0; i < ws.used; ++i) {
      head += std::norm(ws.sum[i]);
      ws.sum[i] = Complex{};
    }
    total += head;
  }
  return total;
}

namespace detail {

double geometric_tail_norm_squared(const GeometricTail& tail) {
  // ||sum_{p<count} ratio^p shift_{p*step} u||^2
  //   = sum_d c(d) * sum_{p, p+d in [0, count)} ratio^(p+d) conj(ratio)^p   (d >= 0)
  // plus the conjugate terms for d < 0, where c(d) = <shift_{d*step} u, u>.
  const auto& u = tail.seed.values;
  const auto width = static_cast<Index>(u.size());
  const double rho = std::norm(tail.ratio);
  const auto geometric = [rho](int n) -> double {
    if (n <= 0) return 0.0;
    if (rho == 1.0) return n;
    return -std::expm1(n * std::log(rho)) / (1.0 - rho);
  };
  double total = 0.0;
  Complex ratio_power = 1.0;
  for (Index d = 0; d * tail.step < width && d < tail.count; ++d, ratio_power *= tail.ratio) {
    const Index lag = d * tail.step;
    Complex corr{};
    for (Index i = lag; i < width; ++i)
      corr += u[static_cast<std::size_t>(i - lag)] * std::conj(u[static_cast<std::size_t>(i)]);
    const double weight = geometric(tail.count - static_cast<int>(d));
    const double term = (ratio_power * corr).real() * weight;
    total += d == 0 ? term : 2.0 * term;
  }
  return total;
}

}  // namespace detail

}  // namespace curvindex
