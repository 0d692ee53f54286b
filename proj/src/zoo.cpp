#include "curvindex/zoo.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>
#include <cmath>
#include <numbers>
#include <sstream>

#include "curvindex/error.hpp"
#include "curvindex/spec_parser.hpp"

namespace curvindex {

namespace {

constexpr double kUnimodularTol = 1e-12;

// Uniform in (0, 1) from the top 53 bits; independent of the standard
// library's distribution implementations.
double uniform_open(std::mt19937_64& rng) { return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53; }

Complex complex_gaussian(std::mt19937_64& rng) {
  const double radius = std::sqrt(-std::log(uniform_open(rng)));
  const double angle = 2.0 * std::numbers::pi * uniform_open(rng);
  return std::polar(radius, angle);
}

DenseMatrix gaussian_matrix(int m, std::mt19937_64& rng) {
  DenseMatrix g(m, m);
  for (Index j = 0; j < m; ++j)
    for (Index i = 0; i < m; ++i) g(i, j) = complex_gaussian(rng);
  return g;
}

// Identity outside the top-left block, x inside it.
QuasiToeplitz embed_block(const DenseMatrix& x) {
  return QuasiToeplitz(LaurentSymbol::constant(1.0),
                       CorrectionBlock(x - DenseMatrix::Identity(x.rows(), x.cols())));
}

}  // namespace

Operator shift_power(int k) {
  if (k == 0) return QuasiToeplitz::identity();
  return QuasiToeplitz(LaurentSymbol::monomial(1.0, k), {});
}

Operator weighted_shift(std::span<const Complex> prefix, Complex tail) {
  for (const auto& w : prefix)
    if (std::abs(w) > 1.0 + kUnimodularTol) throw Error(ErrorKind::NotContraction, "weighted shift weight exceeds 1");
  if (std::abs(tail) > 1.0 + kUnimodularTol) throw Error(ErrorKind::NotContraction, "weighted shift tail exceeds 1");
  if (std::abs(std::abs(tail) - 1.0) > kUnimodularTol)
    throw Error(ErrorKind::NotAlmostUnitary, "weighted shift tail weight must be unimodular");
  const auto n = static_cast<Index>(prefix.size());
  DenseMatrix block = DenseMatrix::Zero(n + 1, n);
  for (Index j = 0; j < n; ++j) block(j + 1, j) = prefix[static_cast<std::size_t>(j)] - tail;
  return QuasiToeplitz(LaurentSymbol::monomial(tail, 1), CorrectionBlock(std::move(block)));
}

DenseMatrix random_unitary(int m, std::uint64_t seed) {
  if (m < 0) throw Error(ErrorKind::InvalidArgument, "unitary block size must be non-negative");
  if (m == 0) return DenseMatrix(0, 0);
  std::mt19937_64 rng(seed);
  const DenseMatrix g = gaussian_matrix(m, rng);
  Eigen::HouseholderQR<DenseMatrix> qr(g);
  DenseMatrix q = qr.householderQ() * DenseMatrix::Identity(m, m);
  const DenseMatrix& r = qr.matrixQR();
  for (Index j = 0; j < m; ++j) {
    const Complex d = r(j, j);
    if (std::abs(d) > 0.0) q.col(j) *= d / std::abs(d);
  }
  return q;
}

DenseMatrix random_contraction(int m, std::mt19937_64& rng) {
  if (m == 0) return DenseMatrix(0, 0);
  const DenseMatrix g = gaussian_matrix(m, rng) / std::sqrt(static_cast<double>(m));
  Eigen::JacobiSVD<DenseMatrix> svd(g, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::VectorXd sigma = svd.singularValues().cwiseMin(1.0).cwiseMax(0.0);
  return svd.matrixU() * sigma.cast<Complex>().asDiagonal() * svd.matrixV().adjoint();
}

Operator sandwich_isometry(int k, int m, std::uint64_t seed) {
  if (k < 1) throw Error(ErrorKind::InvalidArgument, "sandwich isometry needs k >= 1");
  if (m < 0) throw Error(ErrorKind::InvalidArgument, "sandwich isometry needs m >= 0");
  const QuasiToeplitz shift(LaurentSymbol::monomial(1.0, k), {});
  if (m == 0) return shift;
  std::mt19937_64 rng(seed);
  const DenseMatrix w = random_contraction(m, rng);
  const DenseMatrix v = random_contraction(m, rng);
  return embed_block(w) * shift * embed_block(v);
}

Operator unitary_embed(const DenseMatrix& u) {
  if (u.rows() != u.cols()) throw Error(ErrorKind::InvalidArgument, "unitary block must be square");
  if (u.size() == 0) return QuasiToeplitz::identity();
  const double defect = (u.adjoint() * u - DenseMatrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
  if (defect > kUnimodularTol) throw Error(ErrorKind::NotAlmostUnitary, "block is not unitary to 1e-12");
  return embed_block(u);
}

Operator direct_sum(std::vector<Operator> components) { return Operator::direct_sum(std::move(components)); }

const std::vector<ZooSpec>& fixed_zoo() {
  static const std::vector<ZooSpec> zoo = [] {
    std::vector<ZooSpec> z;
    z.push_back({"shift", "shift(1)", -1, 1.0, 0.0, true, [] { return shift_power(1); }});
    z.push_back({"shift_squared", "shift(2)", -2, 2.0, 0.0, true, [] { return shift_power(2); }});
    z.push_back({"backward_shift", "adj(shift(1))", 1, 0.0, 1.0, false, [] { return adjoint(shift_power(1)); }});
    z.push_back({"weighted_shift_half", "wshift([0.5];1)", -1, 1.0, 0.0, true, [] {
                   const Complex w[] = {0.5};
                   return weighted_shift(w, 1.0);
                 }});
    z.push_back({"weighted_shift_dead_head", "wshift([0];1)", -1, 1.0, 0.0, true, [] {
                   const Complex w[] = {0.0};
                   return weighted_shift(w, 1.0);
                 }});
    z.push_back({"bilateral_pair", "adj(shift(1)) (+) shift(1)", 0, 1.0, 1.0, false,
                 [] { return direct_sum({adjoint(shift_power(1)), shift_power(1)}); }});
    z.push_back({"unitary_block", "unitary(m=3,seed=11)", 0, 0.0, 0.0, false,
                 [] { return unitary_embed(random_unitary(3, 11)); }});
    z.push_back({"unitary_plus_shift", "unitary(m=3,seed=7) (+) shift(1)", -1, 1.0, 0.0, false,
                 [] { return direct_sum({unitary_embed(random_unitary(3, 7)), shift_power(1)}); }});
    z.push_back({"mixed_index", "shift(-2) (+) shift(1)", 1, 1.0, 2.0, false,
                 [] { return direct_sum({shift_power(-2), shift_power(1)}); }});
    z.push_back({"sandwich_k2", "iso(k=2,m=3,seed=5)", -2, std::nullopt, std::nullopt, std::nullopt,
                 [] { return sandwich_isometry(2, 3, 5); }});
    z.push_back({"sandwich_k1", "iso(k=1,m=4,seed=2)", -1, std::nullopt, std::nullopt, std::nullopt,
                 [] { return sandwich_isometry(1, 4, 2); }});
    z.push_back({"adjoint_sandwich", "adj(iso(k=1,m=2,seed=3))", 1, std::nullopt, std::nullopt, std::nullopt,
                 [] { return adjoint(sandwich_isometry(1, 2, 3)); }});
    return z;
  }();
  return zoo;
}

namespace {

struct Summand {
  Operator op;
  std::string spec;
  long index = 0;
};

int uniform_int(std::mt19937_64& rng, int lo, int hi) {
  return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

Summand random_summand(std::mt19937_64& rng, const RandomConfig& cfg) {
  Summand s;
  const int kind = uniform_int(rng, 0, 3);
  const auto child_seed = static_cast<std::uint32_t>(rng());
  std::ostringstream spec;
  switch (kind) {
    case 0: {
      const int k = uniform_int(rng, 1, cfg.max_k);
      const int m = uniform_int(rng, 1, cfg.max_m);
      s.op = sandwich_isometry(k, m, child_seed);
      spec << "iso(k=" << k << ",m=" << m << ",seed=" << child_seed << ")";
      s.index = -k;
      break;
    }
    case 1: {
      std::vector<Complex> prefix(static_cast<std::size_t>(uniform_int(rng, 0, 3)));
      spec << "wshift([";
      for (std::size_t i = 0; i < prefix.size(); ++i) {
        const double w = uniform_open(rng);
        prefix[i] = w;
        spec << (i ? "," : "") << format_number(w);
      }
      const double tail = (rng() & 1u) ? 1.0 : -1.0;
      spec << "];" << format_number(tail) << ")";
      s.op = weighted_shift(prefix, tail);
      s.index = -1;
      break;
    }
    case 2: {
      const int m = uniform_int(rng, 1, cfg.max_m);
      s.op = unitary_embed(random_unitary(m, child_seed));
      spec << "unitary(m=" << m << ",seed=" << child_seed << ")";
      s.index = 0;
      break;
    }
    default: {
      int k = uniform_int(rng, -cfg.max_k, cfg.max_k);
      s.op = shift_power(k);
      spec << "shift(" << k << ")";
      s.index = -k;
      break;
    }
  }
  s.spec = spec.str();
  if (rng() & 1u) {
    s.op = adjoint(s.op);
    s.spec = "adj(" + s.spec + ")";
    s.index = -s.index;
  }
  return s;
}

}  // namespace

RandomOperator random_almost_unitary(std::uint64_t seed, const RandomConfig& cfg) {
  if (cfg.max_k < 1 || cfg.max_m < 1 || cfg.max_summands < 1)
    throw Error(ErrorKind::InvalidArgument, "random config bounds must be >= 1");
  std::mt19937_64 rng(seed);
  const int summands = uniform_int(rng, 1, cfg.max_summands);
  Summand first = random_summand(rng, cfg);
  RandomOperator out{std::move(first.op), std::move(first.spec), first.index};
  for (int i = 1; i < summands; ++i) {
    Summand next = random_summand(rng, cfg);
    out.op = direct_sum({std::move(out.op), std::move(next.op)});
    out.spec += " (+) " + next.spec;
    out.structural_index += next.index;
  }
  return out;
}

}  // namespace curvindex
