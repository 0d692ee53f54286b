#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "curvindex/error.hpp"
#include "curvindex/operator.hpp"
#include "curvindex/zoo.hpp"
#include "dense_oracle.hpp"

using namespace curvindex;

namespace {

const QuasiToeplitz& leaf(const Operator& op) { return op.leaf(); }

double max_entry_gap(const QuasiToeplitz& a, const oracle::Mat& ref, Index n) {
  double gap = 0.0;
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) gap = std::max(gap, std::abs(a.entry(i, j) - ref(i, j)));
  return gap;
}

QuasiToeplitz random_quasi_toeplitz(oracle::Rng& rng) {
  std::vector<Complex> c(static_cast<std::size_t>(rng.between(1, 3)));
  for (auto& x : c) x = rng.complex();
  const int rows = rng.between(0, 4);
  const int cols = rng.between(0, 4);
  DenseMatrix block(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) block(i, j) = rng.complex();
  return QuasiToeplitz(LaurentSymbol(rng.between(-2, 2), c), CorrectionBlock(block));
}

}  // namespace

TEST_CASE("shift entries") {
  const Operator s = shift_power(1);
  CHECK(s.entry(1, 0) == Complex(1.0));
  CHECK(s.entry(0, 0) == Complex(0.0));
  CHECK(s.entry(0, 1) == Complex(0.0));
  const Operator id = shift_power(0);
  for (Index i : {0, 5, 1000}) CHECK(id.entry(i, i) == Complex(1.0));
  const std::vector<Complex> w{0.5};
  CHECK(weighted_shift(w, 1.0).entry(1, 0) == Complex(0.5));
}

TEST_CASE("shift products") {
  const Operator s = shift_power(1);
  const Operator ss = adjoint(s) * s;
  CHECK(leaf(ss) == QuasiToeplitz::identity());

  const Operator p = s * adjoint(s);
  CHECK(leaf(p).symbol() == LaurentSymbol::constant(1.0));
  REQUIRE(leaf(p).correction().rows() == 1);
  REQUIRE(leaf(p).correction().cols() == 1);
  CHECK(leaf(p).correction().at(0, 0) == Complex(-1.0));

  const Operator s3 = power(s, 3);
  const Operator q = s3 * adjoint(s3);
  oracle::Mat ref = oracle::Mat::Identity(64, 64);
  ref.topLeftCorner(3, 3).setZero();
  CHECK(max_entry_gap(leaf(q), ref, 64) == 0.0);
  const auto d = oracle::shift(64, 3);
  CHECK(max_entry_gap(leaf(q), (d * d.adjoint()).topLeftCorner(64, 64), 60) == 0.0);
}

TEST_CASE("trace of finitely supported operators") {
  const Operator s = shift_power(1);
  CHECK(op_trace(identity_like(s) - s * adjoint(s)) == Complex(1.0));

  const std::vector<Complex> w{0.5};
  const Operator t = weighted_shift(w, 1.0);
  const Complex tr = op_trace(identity_like(t) - t * adjoint(t));
  CHECK(std::abs(tr - 1.75) < 1e-15);
  const auto m = oracle::dense(t.leaf(), 64);
  const Complex ref = (oracle::Mat::Identity(64, 64) - m * m.adjoint()).diagonal().head(60).sum();
  CHECK(std::abs(tr - ref) < 1e-12);

  CHECK(oracle::thrown_kind([&] { (void)op_trace(s); }) == ErrorKind::TraceUndefined);
}

TEST_CASE("direct sum shape rules") {
  const Operator a = direct_sum({shift_power(1), shift_power(-1)});
  const Operator b = direct_sum({shift_power(2), shift_power(0)});
  const Operator ab = a * b;
  const std::size_t first[] = {0};
  const std::size_t second[] = {1};
  CHECK(ab.entry(first, 3, 0) == Complex(1.0));
  CHECK(ab.entry(second, 0, 1) == Complex(1.0));
  CHECK(oracle::thrown_kind([&] { (void)(a * shift_power(1)); }) == ErrorKind::Structural);
  CHECK(oracle::thrown_kind([&] { (void)a.leaf(); }) == ErrorKind::Structural);
  CHECK(op_trace(identity_like(a) - a * adjoint(a)) == Complex(1.0));
}

TEST_CASE("product correction stays inside the safe window") {
  oracle::Rng rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const QuasiToeplitz a = random_quasi_toeplitz(rng);
    const QuasiToeplitz b = random_quasi_toeplitz(rng);
    const QuasiToeplitz ab = a * b;
    const Index w = product_window(a, b);
    CHECK(ab.correction().rows() <= w);
    CHECK(ab.correction().cols() <= w);
    CHECK(ab.symbol() == (a.symbol() * b.symbol()).trimmed(0.0));
    for (Index i = w; i < w + 6; ++i)
      for (Index j = std::max<Index>(0, i - 5); j < i + 6; ++j)
        CHECK(std::abs(ab.entry(i, j) - ab.symbol().coefficient(static_cast<int>(i - j))) < 1e-13);
  }
}

TEST_CASE("property: arithmetic matches dense truncations") {
  oracle::Rng rng(3);
  const Index n = 48;
  for (int trial = 0; trial < 100; ++trial) {
    const QuasiToeplitz a = random_quasi_toeplitz(rng);
    const QuasiToeplitz b = random_quasi_toeplitz(rng);
    const Complex c = rng.complex();
    const auto da = oracle::dense(a, n + 8);
    const auto db = oracle::dense(b, n + 8);
    const Index safe = n;  // reach <= 4 per factor, margin 8
    CHECK(max_entry_gap(a + b, da + db, safe) < 1e-13);
    CHECK(max_entry_gap(a - b, da - db, safe) < 1e-13);
    CHECK(max_entry_gap(a.scaled(c), c * da, safe) < 1e-13);
    CHECK(max_entry_gap(a.adjoint(), da.adjoint(), safe) < 1e-15);
    CHECK(max_entry_gap(a * b, da * db, safe) < 1e-12);
    CHECK(a.adjoint().adjoint() == a);
    CHECK(max_entry_gap((a * b).adjoint(), oracle::dense(b.adjoint() * a.adjoint(), safe), safe) < 1e-13);
  }
}

TEST_CASE("property: trace cyclicity on finitely supported products") {
  oracle::Rng rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    // Finite A times arbitrary B is finitely supported in either order.
    DenseMatrix block(rng.between(1, 4), rng.between(1, 4));
    for (Index i = 0; i < block.rows(); ++i)
      for (Index j = 0; j < block.cols(); ++j) block(i, j) = rng.complex();
    const QuasiToeplitz a = QuasiToeplitz::finite(block);
    const QuasiToeplitz b = random_quasi_toeplitz(rng);
    const Complex ab = (a * b).trace();
    const Complex ba = (b * a).trace();
    CHECK(std::abs(ab - ba) <= 1e-11 * std::max(1.0, std::abs(ab)));
    const Complex lin = (a + a.scaled(2.0)).trace();
    CHECK(std::abs(lin - 3.0 * a.trace()) < 1e-12 * std::max(1.0, std::abs(lin)));
  }
}

TEST_CASE("zoo operators agree with dense truncations") {
  const Index n = 256;
  for (const auto& z : fixed_zoo()) {
    CAPTURE(z.name);
    const Operator t = z.build();
    for (const QuasiToeplitz* l : t.leaves()) {
      const auto d = oracle::dense(*l, n);
      const Index safe = n - l->safe_window() - 8;
      const QuasiToeplitz p = *l * l->adjoint();
      const QuasiToeplitz q = l->adjoint() * *l;
      CHECK(max_entry_gap(p, d * d.adjoint(), safe) < 1e-12);
      CHECK(max_entry_gap(q, d.adjoint() * d, safe) < 1e-12);
      CHECK(max_entry_gap(power(*l, 3), oracle::mpow(d, 3), safe - 8) < 1e-12);
    }
  }
}
