#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "curvindex/operator.hpp"

namespace curvindex {

/// k > 0: S^k, k < 0: S*^|k|, k = 0: identity.
Operator shift_power(int k);

/// e_j -> w_j e_{j+1}, with w_j = prefix[j] for j < prefix.size() and tail
/// afterwards. Throws NotContraction if some |w| > 1 and NotAlmostUnitary if
/// |tail| != 1.
Operator weighted_shift(std::span<const Complex> prefix, Complex tail);

/// (W + I) S^k (V + I) with W, V seeded m x m contractions obtained by
/// clipping singular values to [0, 1]. m = 0 gives S^k.
Operator sandwich_isometry(int k, int m, std::uint64_t seed);

/// U on the first m coordinates, identity afterwards. U must be unitary to 1e-12.
Operator unitary_embed(const DenseMatrix& u);

Operator direct_sum(std::vector<Operator> components);

/// Haar-like unitary from the QR factorization of a seeded complex Gaussian matrix.
DenseMatrix random_unitary(int m, std::uint64_t seed);
/// Seeded complex Gaussian matrix scaled by 1/sqrt(m), singular values clipped to [0, 1].
DenseMatrix random_contraction(int m, std::mt19937_64& rng);

struct ZooSpec {
  std::string name;
  std::string spec;  // parseable operator spec string
  long expected_index = 0;
  std::optional<double> curvature;          // K(T), where known analytically
  std::optional<double> adjoint_curvature;  // K(T*)
  std::optional<bool> pure;                 // known purity
  std::function<Operator()> build;          // direct constructor calls
};

/// Named operators with known ground truth; every member is an
/// almost-unitary contraction.
const std::vector<ZooSpec>& fixed_zoo();

struct RandomConfig {
  int max_k = 2;
  int max_m = 3;
  int max_summands = 3;
};

struct RandomOperator {
  Operator op;
  std::string spec;  // construction tree in spec-string form
  long structural_index = 0;
};

/// Reproducible composition of the constructors above; same seed and config
/// give a bit-identical operator.
RandomOperator random_almost_unitary(std::uint64_t seed, const RandomConfig& cfg = {});

}  // namespace curvindex
