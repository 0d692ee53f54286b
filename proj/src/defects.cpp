#include "curvindex/defects.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "curvindex/error.hpp"

namespace curvindex {

namespace {

constexpr double kHermitianTol = 1e-13;
constexpr double kClipThreshold = 1e-10;

DenseMatrix square_block(const CorrectionBlock& block) {
  const Index n = std::max(block.rows(), block.cols());
  DenseMatrix out = DenseMatrix::Zero(n, n);
  if (!block.empty()) out.topLeftCorner(block.rows(), block.cols()) = block.matrix();
  return out;
}

}  // namespace

DefectPair defects(const Operator& t) {
  const Operator id = identity_like(t);
  const Operator t_star = adjoint(t);
  return {id - t * t_star, id - t_star * t};
}

DefectFactor::DefectFactor(const DenseMatrix& delta) : delta_((delta + delta.adjoint()) * 0.5) {}

DefectFactor defect_sqrt(const QuasiToeplitz& left_defect) {
  if (!left_defect.finitely_supported())
    throw Error(ErrorKind::NotAlmostUnitary, "defect is not finitely supported");
  const DenseMatrix d = square_block(left_defect.correction());
  if (d.size() == 0) return DefectFactor{};
  const double asym = (d - d.adjoint()).cwiseAbs().maxCoeff();
  if (asym > kHermitianTol) {
    std::ostringstream msg;
    msg << "defect is not Hermitian (asymmetry " << asym << ")";
    throw Error(ErrorKind::InvalidArgument, msg.str());
  }
  Eigen::SelfAdjointEigenSolver<DenseMatrix> eig((d + d.adjoint()) * 0.5);
  Eigen::VectorXd lambda = eig.eigenvalues();
  for (Index i = 0; i < lambda.size(); ++i) {
    if (lambda(i) < -kClipThreshold) {
      std::ostringstream msg;
      msg << "defect eigenvalue " << lambda(i) << " below " << -kClipThreshold;
      throw Error(ErrorKind::NotPositive, msg.str());
    }
    lambda(i) = std::sqrt(std::max(lambda(i), 0.0));
  }
  const DenseMatrix& v = eig.eigenvectors();
  return DefectFactor(v * lambda.cast<Complex>().asDiagonal() * v.adjoint());
}

std::vector<DefectFactor> defect_factors(const Operator& t) {
  std::vector<DefectFactor> out;
  for (const auto* leaf : t.leaves()) {
    const QuasiToeplitz left = QuasiToeplitz::identity() - (*leaf) * leaf->adjoint();
    out.push_back(defect_sqrt(left));
  }
  return out;
}

ContractionCertificate validate_contraction(const Operator& t, const ContractionConfig& cfg) {
  ContractionCertificate cert;
  cert.passed = true;
  const double limit = 1.0 + cfg.tol;
  for (const auto* leaf : t.leaves()) {
    const Index n = leaf->safe_window() + cfg.margin;
    cert.truncation = std::max(cert.truncation, n);
    Eigen::JacobiSVD<DenseMatrix> svd(leaf->truncation(n));
    const double sigma = svd.singularValues().size() > 0 ? svd.singularValues()(0) : 0.0;
    cert.sigma_max = std::max(cert.sigma_max, sigma);

    double symbol_max = 0.0;
    for (int s = 0; s < cfg.circle_samples; ++s) {
      const double theta = 2.0 * std::numbers::pi * s / cfg.circle_samples;
      symbol_max = std::max(symbol_max, std::abs(leaf->symbol().evaluate(std::polar(1.0, theta))));
    }
    cert.symbol_max = std::max(cert.symbol_max, symbol_max);
  }
  if (cert.sigma_max > limit || cert.symbol_max > limit) {
    cert.passed = false;
    std::ostringstream msg;
    msg.precision(17);
    if (cert.sigma_max > limit) msg << "truncation norm " << cert.sigma_max << " exceeds 1";
    else msg << "symbol modulus " << cert.symbol_max << " exceeds 1 on the unit circle";
    cert.reason = msg.str();
  }
  return cert;
}

AlmostUnitaryVerdict validate_almost_unitary(const Operator& t) {
  const DefectPair d = defects(t);
  const auto left = d.left.leaves();
  const auto right = d.right.leaves();
  for (std::size_t i = 0; i < left.size(); ++i) {
    for (const auto* defect : {left[i], right[i]}) {
      if (defect->finitely_supported()) continue;
      std::ostringstream msg;
      msg.precision(17);
      msg << (defect == left[i] ? "I - TT*" : "I - T*T") << " of component " << i
          << " has nonzero symbol (max coefficient " << defect->symbol().max_modulus() << ")";
      return {false, msg.str()};
    }
  }
  return {true, {}};
}

void require_almost_unitary_contraction(const Operator& t) {
  if (const auto cert = validate_contraction(t); !cert.passed) throw Error(ErrorKind::NotContraction, cert.reason);
  if (const auto verdict = validate_almost_unitary(t); !verdict.passed)
    throw Error(ErrorKind::NotAlmostUnitary, verdict.reason);
}

}  // namespace curvindex
