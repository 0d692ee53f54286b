#include "curvindex/curvature.hpp"

#include <algorithm>
#include <functional>
#include <span>
#include <cmath>
#include <numbers>
#include <sstream>

#include "curvindex/defects.hpp"
#include "curvindex/error.hpp"
#include "curvindex/resolvent.hpp"

namespace curvindex {

namespace {

constexpr double kImaginaryTol = 1e-11;

double real_part_checked(Complex value, const char* what, double& max_imag) {
  max_imag = std::max(max_imag, std::abs(value.imag()));
  if (std::abs(value.imag()) > kImaginaryTol) {
    std::ostringstream msg;
    msg.precision(17);
    msg << what << " has imaginary part " << value.imag();
    throw Error(ErrorKind::Numerical, msg.str());
  }
  return value.real();
}

// Walks Q_n = T*^n T^n and yields a_n = tr(Q_n (I - TT*)).
class DefectTraces {
 public:
  explicit DefectTraces(const Operator& t)
      : t_(t), t_star_(adjoint(t)), defect_(identity_like(t) - t * t_star_), q_(identity_like(t)) {}

  Complex next() {
    const Complex value = op_trace(q_ * defect_);
    q_ = t_star_ * q_ * t_;
    return value;
  }

 private:
  Operator t_;
  Operator t_star_;
  Operator defect_;
  Operator q_;
};

// Walks P_n = T^n T*^n and yields tr(I - P_n) for n = 0, 1, ...
class CoisometryTraces {
 public:
  explicit CoisometryTraces(const Operator& t)
      : t_(t), t_star_(adjoint(t)), id_(identity_like(t)), p_(id_) {}

  Complex next() {
    const Complex value = op_trace(id_ - p_);
    p_ = t_ * p_ * t_star_;
    return value;
  }

 private:
  Operator t_;
  Operator t_star_;
  Operator id_;
  Operator p_;
};

std::vector<double> tail(const std::vector<double>& v, std::size_t n) {
  if (v.size() <= n) return v;
  return {v.end() - static_cast<std::ptrdiff_t>(n), v.end()};
}

CurvatureResult sum_over_leaves(const Operator& t, CurvatureMethod method,
                                const std::function<CurvatureResult(const Operator&)>& per_leaf) {
  CurvatureResult total;
  total.method = method;
  total.converged = true;
  std::vector<std::vector<double>> samples;
  for (const auto* leaf : t.leaves()) {
    CurvatureResult r = per_leaf(Operator(*leaf));
    total.value += r.value;
    total.converged = total.converged && r.converged;
    total.diagnostics.steps = std::max(total.diagnostics.steps, r.diagnostics.steps);
    total.diagnostics.raw_value += r.diagnostics.raw_value;
    total.diagnostics.fit_residual = std::max(total.diagnostics.fit_residual, r.diagnostics.fit_residual);
    total.diagnostics.path = r.diagnostics.path;
    if (total.diagnostics.last_deltas.size() < r.diagnostics.last_deltas.size())
      total.diagnostics.last_deltas.resize(r.diagnostics.last_deltas.size(), 0.0);
    // Align deltas at the end so the final entries correspond.
    const auto& d = r.diagnostics.last_deltas;
    const std::size_t shift = total.diagnostics.last_deltas.size() - d.size();
    for (std::size_t i = 0; i < d.size(); ++i)
      total.diagnostics.last_deltas[shift + i] = std::max(total.diagnostics.last_deltas[shift + i], d[i]);
    samples.push_back(std::move(r.diagnostics.samples));
  }
  // Per-leaf sample sequences summed up to the shortest length.
  std::size_t len = samples.empty() ? 0 : samples.front().size();
  for (const auto& s : samples) len = std::min(len, s.size());
  total.diagnostics.samples.assign(len, 0.0);
  for (const auto& s : samples)
    for (std::size_t i = 0; i < len; ++i) total.diagnostics.samples[i] += s[i];
  return total;
}

// Polynomial through (x_i, y_i) evaluated at x = 0 (Neville).
double extrapolate_to_zero(std::span<const double> x, std::span<const double> y) {
  std::vector<double> p(y.begin(), y.end());
  const std::size_t n = p.size();
  for (std::size_t level = 1; level < n; ++level)
    for (std::size_t i = 0; i + level < n; ++i)
      p[i] = (x[i + level] * p[i] - x[i] * p[i + 1]) / (x[i + level] - x[i]);
  return p.front();
}

}  // namespace

std::string_view to_string(CurvatureMethod m) {
  switch (m) {
    case CurvatureMethod::Defect: return "defect";
    case CurvatureMethod::Cesaro: return "cesaro";
    case CurvatureMethod::Integral: return "integral";
  }
  return "unknown";
}

void ConvergenceConfig::validate() const {
  if (window < 2 || max_n < window) throw Error(ErrorKind::InvalidArgument, "need max_n >= window >= 2");
  if (!(tol > 0.0)) throw Error(ErrorKind::InvalidArgument, "tol must be positive");
}

IntegralSchedule IntegralSchedule::defaults() {
  IntegralSchedule s;
  for (int j = 3; j <= 12; ++j) s.r_values.push_back(1.0 - std::ldexp(1.0, -j));
  return s;
}

void IntegralSchedule::validate() const {
  if (r_values.empty()) throw Error(ErrorKind::InvalidArgument, "integral schedule has no r values");
  for (double r : r_values) {
    if (r >= 1.0) throw Error(ErrorKind::DivergentSeries, "integral schedule needs every r < 1");
    if (!(r > 0.0)) throw Error(ErrorKind::InvalidArgument, "integral schedule needs every r > 0");
  }
  const bool pow2 = quadrature_points > 0 && (quadrature_points & (quadrature_points - 1)) == 0;
  if (!pow2 || quadrature_points < 64)
    throw Error(ErrorKind::InvalidArgument, "quadrature point count must be a power of two >= 64");
  if (!(neumann_eps > 0.0)) throw Error(ErrorKind::InvalidArgument, "Neumann eps must be positive");
  if (extrapolation_order < 0) throw Error(ErrorKind::InvalidArgument, "extrapolation order must be >= 0");
}

TraceSequence a_sequence(const Operator& t, int n_max) {
  TraceSequence seq;
  seq.kind = SequenceKind::A;
  seq.fingerprint = t.fingerprint();
  DefectTraces a(t);
  CoisometryTraces c(t);
  Complex previous = c.next();  // tr(I - P_0) = 0
  for (int n = 0; n <= n_max; ++n) {
    const Complex value = a.next();
    const Complex next = c.next();
    // tr(P_n - P_{n+1}) = tr(I - P_{n+1}) - tr(I - P_n)
    const Complex telescoped = next - previous;
    previous = next;
    seq.values.push_back(real_part_checked(value, "a_n", seq.max_imaginary));
    seq.cross_check_residual = std::max(seq.cross_check_residual, std::abs(value - telescoped));
  }
  return seq;
}

TraceSequence b_sequence(const Operator& t, int n_max) {
  TraceSequence seq;
  seq.kind = SequenceKind::B;
  seq.fingerprint = t.fingerprint();
  const Operator t_star = adjoint(t);
  const Operator gram = t_star * t;
  Operator q = identity_like(t);       // T*^n T^n
  Operator gram_power = q;             // (T*T)^n
  for (int n = 0; n <= n_max; ++n) {
    const Complex value = op_trace(commutator(t_star, q * t));
    const Complex reordered = op_trace(commutator(t_star, t * gram_power));
    seq.values.push_back(real_part_checked(value, "b_n", seq.max_imaginary));
    seq.cross_check_residual = std::max(seq.cross_check_residual, std::abs(value - reordered));
    q = t_star * q * t;
    gram_power = gram_power * gram;
  }
  return seq;
}

bool LimitDetector::push(double value) {
  raw_.push_back(value);
  double current = value;
  if (cfg_.aitken && raw_.size() >= 3) {
    const double s0 = raw_[raw_.size() - 3];
    const double s1 = raw_[raw_.size() - 2];
    const double s2 = raw_.back();
    const double denom = (s2 - s1) - (s1 - s0);
    const double accelerated = s2 - (s2 - s1) * (s2 - s1) / denom;
    if (denom != 0.0 && std::isfinite(accelerated)) current = accelerated;
  }
  if (has_previous_) {
    const double delta = std::abs(current - previous_);
    deltas_.push_back(delta);
    run_ = delta < cfg_.tol ? run_ + 1 : 0;
    if (run_ >= cfg_.window) converged_ = true;
  }
  has_previous_ = true;
  previous_ = current;
  estimate_ = current;
  return converged_;
}

CurvatureResult curvature_defect(const Operator& t, const ConvergenceConfig& cfg) {
  cfg.validate();
  return sum_over_leaves(t, CurvatureMethod::Defect, [&](const Operator& leaf) {
    CurvatureResult r;
    r.method = CurvatureMethod::Defect;
    r.diagnostics.path = cfg.aitken ? "a_n (aitken)" : "a_n";
    LimitDetector detector(cfg);
    DefectTraces traces(leaf);
    double max_imag = 0.0;
    for (int n = 0; n <= cfg.max_n; ++n) {
      const double a = real_part_checked(traces.next(), "a_n", max_imag);
      r.diagnostics.samples.push_back(a);
      r.diagnostics.steps = n;
      if (detector.push(a)) break;
    }
    r.value = detector.estimate();
    r.converged = detector.converged();
    r.diagnostics.raw_value = r.diagnostics.samples.back();
    r.diagnostics.last_deltas = tail(detector.deltas(), static_cast<std::size_t>(cfg.window));
    return r;
  });
}

CurvatureResult curvature_cesaro(const Operator& t, const ConvergenceConfig& cfg) {
  cfg.validate();
  return sum_over_leaves(t, CurvatureMethod::Cesaro, [&](const Operator& leaf) {
    CurvatureResult r;
    r.method = CurvatureMethod::Cesaro;
    r.diagnostics.path = "direct tr(I - T^n T*^n)/n";
    if (cfg.cesaro_richardson) r.diagnostics.path += ", richardson 2 s_2n - s_n";
    if (cfg.aitken) r.diagnostics.path += ", aitken";

    LimitDetector detector(cfg);
    CoisometryTraces traces(leaf);
    double max_imag = 0.0;
    traces.next();  // n = 0 term is 0/0
    std::vector<double> ratios{0.0};  // ratios[n] = s_n, index 0 unused
    for (int n = 1; n <= cfg.max_n; ++n) {
      const double trace = real_part_checked(traces.next(), "tr(I - T^n T*^n)", max_imag);
      ratios.push_back(trace / n);
      r.diagnostics.samples.push_back(ratios.back());
      r.diagnostics.steps = n;
      double candidate = ratios.back();
      if (cfg.cesaro_richardson) {
        if (n % 2 != 0) continue;
        candidate = 2.0 * ratios[static_cast<std::size_t>(n)] - ratios[static_cast<std::size_t>(n / 2)];
      }
      if (detector.push(candidate)) break;
    }
    r.value = detector.estimate();
    r.converged = detector.converged();
    r.diagnostics.raw_value = ratios.back();
    r.diagnostics.last_deltas = tail(detector.deltas(), static_cast<std::size_t>(cfg.window));
    return r;
  });
}

double integral_average(const QuasiToeplitz& t, const DenseMatrix& delta, double r, int points, double eps) {
  if (delta.size() == 0) return 0.0;
  const double weight = 1.0 - r * r;
  detail::NeumannWorkspace ws;
  double sum = 0.0;
  for (int j = 0; j < points; ++j) {
    const double theta = 2.0 * std::numbers::pi * j / points;
    const Complex zeta = std::polar(r, -theta);
    sum += weight * resolvent_hs_norm_squared(t, zeta, delta, eps, ws);
  }
  return sum / points;
}

CurvatureResult curvature_integral(const Operator& t, const IntegralSchedule& schedule) {
  schedule.validate();
  std::vector<double> r_values = schedule.r_values;
  std::sort(r_values.begin(), r_values.end());

  return sum_over_leaves(t, CurvatureMethod::Integral, [&](const Operator& op) {
    const QuasiToeplitz& leaf = op.leaf();
    const DefectFactor delta = defect_sqrt(QuasiToeplitz::identity() - leaf * leaf.adjoint());

    CurvatureResult res;
    res.method = CurvatureMethod::Integral;
    std::ostringstream path;
    path << "trapezoid M=" << schedule.quadrature_points << ", richardson order " << schedule.extrapolation_order
         << " in (1-r)";
    res.diagnostics.path = path.str();

    std::vector<double> h;
    for (double r : r_values) {
      h.push_back(1.0 - r);
      res.diagnostics.samples.push_back(
          integral_average(leaf, delta.matrix(), r, schedule.quadrature_points, schedule.neumann_eps));
    }
    res.diagnostics.steps = static_cast<int>(r_values.size());
    res.diagnostics.raw_value = res.diagnostics.samples.back();

    const std::size_t points = static_cast<std::size_t>(schedule.extrapolation_order) + 1;
    const std::size_t n = h.size();
    if (n < points) {
      res.value = res.diagnostics.raw_value;
      res.converged = false;
      return res;
    }
    const std::span<const double> hs(h);
    const std::span<const double> fs(res.diagnostics.samples);
    const double last = extrapolate_to_zero(hs.subspan(n - points), fs.subspan(n - points));
    double residual = 0.0;
    if (n > points) {
      const double previous = extrapolate_to_zero(hs.subspan(n - points - 1, points), fs.subspan(n - points - 1, points));
      residual = std::abs(last - previous);
      res.diagnostics.last_deltas = {residual};
    }
    res.diagnostics.fit_residual = residual;
    res.converged = residual <= schedule.fit_tolerance;
    res.value = res.converged ? last : res.diagnostics.raw_value;
    return res;
  });
}

}  // namespace curvindex
