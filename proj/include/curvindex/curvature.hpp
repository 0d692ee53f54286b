#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "curvindex/operator.hpp"

namespace curvindex {

enum class SequenceKind { A, B };

/// a_n(T) = tr(T*^n T^n (I - TT*)) or b_n(T) = tr[T*, T*^n T^{n+1}], n = 0..N.
struct TraceSequence {
  SequenceKind kind = SequenceKind::A;
  std::vector<double> values;
  std::uint64_t fingerprint = 0;
  /// a: max_n |tr(T*^n T^n (I-TT*)) - tr(T^n T*^n - T^{n+1} T*^{n+1})|.
  /// b: max_n |tr[T*, T*^n T^{n+1}] - tr[T*, T (T*T)^n]|.
  double cross_check_residual = 0.0;
  double max_imaginary = 0.0;
};

/// Stopping rule for the n -> infinity limits.
struct ConvergenceConfig {
  int max_n = 64;
  double tol = 1e-9;
  int window = 4;        // consecutive deltas below tol
  bool aitken = false;   // Aitken delta-squared on the sequence before detection
  /// Detect the Cesaro limit on 2 s_{2n} - s_n (Richardson in 1/n) instead of
  /// the raw ratio s_n = tr(I - T^n T*^n) / n, which only converges like 1/n.
  bool cesaro_richardson = true;

  void validate() const;
};

struct IntegralSchedule {
  std::vector<double> r_values;  // default r_j = 1 - 2^-j, j = 3..12
  int quadrature_points = 256;
  double neumann_eps = 1e-12;
  int extrapolation_order = 2;   // polynomial degree in (1 - r)
  double fit_tolerance = 1e-6;

  static IntegralSchedule defaults();
  void validate() const;
};

enum class CurvatureMethod { Defect, Cesaro, Integral };
std::string_view to_string(CurvatureMethod m);

struct CurvatureDiagnostics {
  int steps = 0;                    // n reached, or number of r values used
  std::vector<double> last_deltas;
  std::string path;                 // how the value was obtained
  double raw_value = 0.0;           // last unaccelerated value
  double fit_residual = 0.0;        // integral only
  std::vector<double> samples;      // sequence values, or averaged integrand per r
};

struct CurvatureResult {
  double value = 0.0;
  CurvatureMethod method = CurvatureMethod::Defect;
  bool converged = false;
  CurvatureDiagnostics diagnostics;
};

TraceSequence a_sequence(const Operator& t, int n_max);
TraceSequence b_sequence(const Operator& t, int n_max);

/// Stabilization detector shared by the sequence-based formulas.
class LimitDetector {
 public:
  explicit LimitDetector(const ConvergenceConfig& cfg) : cfg_(cfg) {}

  /// Feeds the next sequence value; returns true once the limit has stabilized.
  bool push(double value);
  bool converged() const noexcept { return converged_; }
  double estimate() const noexcept { return estimate_; }
  const std::vector<double>& deltas() const noexcept { return deltas_; }

 private:
  ConvergenceConfig cfg_;
  std::vector<double> raw_;
  std::vector<double> deltas_;
  double estimate_ = 0.0;
  bool has_previous_ = false;
  double previous_ = 0.0;
  int run_ = 0;
  bool converged_ = false;
};

/// lim a_n(T).
CurvatureResult curvature_defect(const Operator& t, const ConvergenceConfig& cfg = {});
/// lim tr(I - T^n T*^n) / n.
CurvatureResult curvature_cesaro(const Operator& t, const ConvergenceConfig& cfg = {});
/// r -> 1 limit of the circle average of (1 - r^2) ||(I - r e^{-i theta} T)^{-1} Delta_T||_HS^2.
CurvatureResult curvature_integral(const Operator& t, const IntegralSchedule& schedule = IntegralSchedule::defaults());

/// Circle average for one leaf at one radius.
double integral_average(const QuasiToeplitz& t, const DenseMatrix& delta, double r, int points, double eps);

}  // namespace curvindex
