#pragma once

#include <string>
#include <vector>

#include "curvindex/operator.hpp"

namespace curvindex {

/// Defect operators of T, with the same direct-sum shape as T.
struct DefectPair {
  Operator left;   // I - T T*
  Operator right;  // I - T* T
};

DefectPair defects(const Operator& t);

/// Finite Hermitian PSD square root of a finitely supported left defect.
class DefectFactor {
 public:
  DefectFactor() = default;
  /// Stores (delta + delta*) / 2.
  explicit DefectFactor(const DenseMatrix& delta);

  Index dimension() const noexcept { return delta_.rows(); }
  bool empty() const noexcept { return delta_.size() == 0; }
  const DenseMatrix& matrix() const noexcept { return delta_; }

 private:
  DenseMatrix delta_;
};

/// Eigenvalues in [-1e-10, 0) are clipped to zero; anything lower throws
/// NotPositive. The defect must be Hermitian to 1e-13 and finitely supported.
DefectFactor defect_sqrt(const QuasiToeplitz& left_defect);

/// Delta_T for every leaf of T, depth-first.
std::vector<DefectFactor> defect_factors(const Operator& t);

struct ContractionConfig {
  double tol = 1e-10;
  int circle_samples = 512;
  Index margin = 16;
};

struct ContractionCertificate {
  bool passed = false;
  Index truncation = 0;     // largest truncation size used over the leaves
  double sigma_max = 0.0;   // largest singular value seen
  double symbol_max = 0.0;  // max |a(z)| over sampled circle points
  std::string reason;
};

/// Largest singular value of the (safe window + margin) truncation and the
/// symbol modulus on the circle must both stay below 1 + tol, per leaf.
ContractionCertificate validate_contraction(const Operator& t, const ContractionConfig& cfg = {});

struct AlmostUnitaryVerdict {
  bool passed = false;
  std::string reason;
};

/// Both defects of every leaf have identically zero symbol.
AlmostUnitaryVerdict validate_almost_unitary(const Operator& t);

/// Throws NotContraction or NotAlmostUnitary with the validator's reason.
void require_almost_unitary_contraction(const Operator& t);

}  // namespace curvindex
