#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "curvindex/curvature.hpp"
#include "curvindex/defects.hpp"
#include "curvindex/index.hpp"
#include "curvindex/zoo.hpp"
#include "dense_oracle.hpp"

using namespace curvindex;

TEST_CASE("shift powers") {
  CHECK(shift_power(1).leaf().symbol() == LaurentSymbol::monomial(1.0, 1));
  CHECK(shift_power(0).leaf() == QuasiToeplitz::identity());
  CHECK(shift_power(-2).leaf().symbol() == LaurentSymbol::monomial(1.0, -2));
  CHECK(index_symbol(shift_power(-2)).value == 2);
  CHECK(curvature_defect(shift_power(1)).value == 1.0);
  CHECK(curvature_defect(shift_power(-1)).value == 0.0);
}

TEST_CASE("weighted shifts") {
  CHECK(weighted_shift({}, 1.0).leaf() == shift_power(1).leaf());
  const std::vector<Complex> dead{0.0};
  const Operator d = weighted_shift(dead, 1.0);
  CHECK(d.entry(1, 0) == Complex(0.0));
  CHECK(d.entry(2, 1) == Complex(1.0));
  CHECK(index_symbol(d).value == -1);
  CHECK(std::abs(curvature_defect(d).value - 1.0) < 1e-12);

  const std::vector<Complex> big{1.2};
  CHECK(oracle::thrown_kind([&] { (void)weighted_shift(big, 1.0); }) == ErrorKind::NotContraction);
  CHECK(oracle::thrown_kind([&] { (void)weighted_shift({}, 0.5); }) == ErrorKind::NotAlmostUnitary);
  // Contraction failure wins when both apply.
  CHECK(oracle::thrown_kind([&] { (void)weighted_shift(big, 0.5); }) == ErrorKind::NotContraction);
  const Operator neg = weighted_shift({}, -1.0);
  CHECK(index_symbol(neg).value == -1);
}

TEST_CASE("sandwich isometries") {
  CHECK(sandwich_isometry(3, 0, 1).leaf() == shift_power(3).leaf());
  CHECK(oracle::thrown_kind([] { (void)sandwich_isometry(0, 2, 1); }) == ErrorKind::InvalidArgument);
  CHECK(oracle::thrown_kind([] { (void)sandwich_isometry(1, -1, 1); }) == ErrorKind::InvalidArgument);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Operator t = sandwich_isometry(2, 3, seed);
    CHECK(validate_almost_unitary(t).passed);
    CHECK(validate_contraction(t).passed);
    CHECK(index_symbol(t).value == -2);
    CHECK(index_commutator(t).value == -2);
    CHECK(index_via_b(t, 3).value == -2);
  }
  // Same seed, same matrix; different seed, different matrix.
  CHECK(sandwich_isometry(1, 3, 8) == sandwich_isometry(1, 3, 8));
  CHECK_FALSE(sandwich_isometry(1, 3, 8) == sandwich_isometry(1, 3, 9));
}

TEST_CASE("unitary embeddings and direct sums") {
  DenseMatrix phase(1, 1);
  phase(0, 0) = std::polar(1.0, 0.4);
  const Operator u = unitary_embed(phase);
  CHECK(index_symbol(u).value == 0);
  CHECK(curvature_defect(u).value == 0.0);
  CHECK(curvature_defect(adjoint(u)).value == 0.0);

  DenseMatrix not_unitary = DenseMatrix::Identity(2, 2);
  not_unitary(0, 1) = 0.1;
  CHECK(oracle::thrown_kind([&] { (void)unitary_embed(not_unitary); }) == ErrorKind::NotAlmostUnitary);

  const DenseMatrix q = random_unitary(5, 3);
  CHECK((q.adjoint() * q - DenseMatrix::Identity(5, 5)).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(q == random_unitary(5, 3));

  const Operator bi = direct_sum({shift_power(-1), shift_power(1)});
  CHECK(index_symbol(bi).value == 0);
  CHECK(std::abs(curvature_defect(bi).value - 1.0) < 1e-12);
  CHECK(std::abs(curvature_defect(adjoint(bi)).value - 1.0) < 1e-12);

  const Operator us = direct_sum({unitary_embed(random_unitary(3, 2)), shift_power(1)});
  CHECK(index_symbol(us).value == -1);
  CHECK(std::abs(curvature_defect(us).value - 1.0) < 1e-12);
  CHECK(std::abs(curvature_defect(adjoint(us)).value) < 1e-12);
  CHECK(purity_diagnostic(us) > 0.5);
}

TEST_CASE("random contractions clip singular values") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const DenseMatrix c = random_contraction(4, rng);
    Eigen::JacobiSVD<DenseMatrix> svd(c);
    CHECK(svd.singularValues().maxCoeff() <= 1.0 + 1e-12);
  }
}

TEST_CASE("fixed zoo coverage") {
  const auto& zoo = fixed_zoo();
  CHECK(zoo.size() >= 8);
  std::set<std::string> names;
  bool pure_negative = false, nonpure_zero_both = false, nonpure_nonzero = false, unitary = false, big = false;
  bool positive_index = false;
  for (const auto& z : zoo) {
    CAPTURE(z.name);
    names.insert(z.name);
    const Operator t = z.build();
    CHECK(validate_contraction(t).passed);
    CHECK(validate_almost_unitary(t).passed);
    CHECK(index_symbol(t).value == z.expected_index);
    const double k = curvature_defect(t).value;
    const double ks = curvature_defect(adjoint(t)).value;
    const bool pure = purity_diagnostic(t) <= kPurityThreshold;
    if (z.pure) CHECK(pure == *z.pure);
    pure_negative |= pure && z.expected_index < 0;
    positive_index |= z.expected_index > 0;
    nonpure_zero_both |= !pure && z.expected_index == 0 && std::abs(k - 1.0) < 1e-9 && std::abs(ks - 1.0) < 1e-9;
    nonpure_nonzero |= !pure && z.expected_index != 0;
    unitary |= std::abs(k) < 1e-12 && std::abs(ks) < 1e-12;
    big |= std::abs(z.expected_index) >= 2;
  }
  CHECK(names.size() == zoo.size());
  CHECK(pure_negative);
  CHECK(positive_index);
  CHECK(nonpure_zero_both);
  CHECK(nonpure_nonzero);
  CHECK(unitary);
  CHECK(big);
}

TEST_CASE("random generator is deterministic and valid") {
  const auto a = random_almost_unitary(0);
  const auto b = random_almost_unitary(0);
  CHECK(a.op == b.op);
  CHECK(a.spec == b.spec);
  CHECK(a.op.fingerprint() == b.op.fingerprint());
  std::set<std::string> specs;
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    CAPTURE(seed);
    const auto r = random_almost_unitary(seed);
    specs.insert(r.spec);
    CHECK(validate_contraction(r.op).passed);
    CHECK(validate_almost_unitary(r.op).passed);
    CHECK(index_symbol(r.op).value == r.structural_index);
  }
  CHECK(specs.size() > 50);

  RandomConfig wide;
  wide.max_k = 3;
  wide.max_m = 5;
  wide.max_summands = 5;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto r = random_almost_unitary(seed, wide);
    CHECK(validate_almost_unitary(r.op).passed);
    CHECK(index_symbol(r.op).value == r.structural_index);
  }
}
