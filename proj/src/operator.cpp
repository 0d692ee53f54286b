#include "curvindex/operator.hpp"


#include "curvindex/error.hpp"

namespace curvindex {

Operator Operator::direct_sum(std::vector<Operator> components) {
  if (components.empty()) throw Error(ErrorKind::Structural, "direct sum needs at least one component");
  Operator out;
  out.node_ = std::move(components);
  return out;
}

const QuasiToeplitz& Operator::leaf() const {
  if (!is_leaf()) throw Error(ErrorKind::Structural, "leaf() called on a direct sum");
  return std::get<QuasiToeplitz>(node_);
}

std::span<const Operator> Operator::components() const noexcept {
  if (is_leaf()) return {};
  return std::get<std::vector<Operator>>(node_);
}

std::vector<const QuasiToeplitz*> Operator::leaves() const {
  std::vector<const QuasiToeplitz*> out;
  if (is_leaf()) {
    out.push_back(&std::get<QuasiToeplitz>(node_));
    return out;
  }
  for (const auto& c : components()) {
    auto sub = c.leaves();
    out.insert(out.end(), sub.begin(), sub.end());
  }
  return out;
}

std::size_t Operator::leaf_count() const {
  if (is_leaf()) return 1;
  std::size_t n = 0;
  for (const auto& c : components()) n += c.leaf_count();
  return n;
}

bool Operator::same_shape(const Operator& other) const noexcept {
  if (is_leaf() != other.is_leaf()) return false;
  if (is_leaf()) return true;
  const auto mine = components();
  const auto theirs = other.components();
  if (mine.size() != theirs.size()) return false;
  for (std::size_t i = 0; i < mine.size(); ++i)
    if (!mine[i].same_shape(theirs[i])) return false;
  return true;
}

Complex Operator::entry(Index i, Index j) const { return leaf().entry(i, j); }

Complex Operator::entry(std::span<const std::size_t> path, Index i, Index j) const {
  const Operator* node = this;
  for (std::size_t step : path) {
    const auto comps = node->components();
    if (step >= comps.size()) throw Error(ErrorKind::Structural, "component path out of range");
    node = &comps[step];
  }
  return node->leaf().entry(i, j);
}

namespace {

// FNV-1a over raw bytes.
struct Fnv1a {
  std::uint64_t h = 1469598103934665603ull;
  void bytes(const void* p, std::size_t n) {
    const auto* c = static_cast<const unsigned char*>(p);
    for (std::size_t i = 0; i < n; ++i) {
      h ^= c[i];
      h *= 1099511628211ull;
    }
  }
  template <typename T>
  void value(const T& v) {
    bytes(&v, sizeof v);
  }
};

void hash_into(const Operator& op, Fnv1a& f) {
  if (!op.is_leaf()) {
    f.value(std::uint64_t{0xD5});
    f.value(static_cast<std::uint64_t>(op.components().size()));
    for (const auto& c : op.components()) hash_into(c, f);
    return;
  }
  const auto& leaf = op.leaf();
  f.value(leaf.symbol().kmin());
  for (const auto& c : leaf.symbol().coefficients()) f.value(c);
  const auto& m = leaf.correction().matrix();
  f.value(m.rows());
  f.value(m.cols());
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = 0; i < m.rows(); ++i) f.value(m(i, j));
}

template <typename F>
Operator zip(const Operator& a, const Operator& b, F&& f) {
  if (!a.same_shape(b)) throw Error(ErrorKind::Structural, "direct-sum shapes differ");
  if (a.is_leaf()) return Operator(f(a.leaf(), b.leaf()));
  std::vector<Operator> out;
  const auto ca = a.components();
  const auto cb = b.components();
  for (std::size_t i = 0; i < ca.size(); ++i) out.push_back(zip(ca[i], cb[i], f));
  return Operator::direct_sum(std::move(out));
}

}  // namespace

std::uint64_t Operator::fingerprint() const {
  Fnv1a f;
  hash_into(*this, f);
  return f.h;
}

bool operator==(const Operator& a, const Operator& b) {
  if (!a.same_shape(b)) return false;
  const auto la = a.leaves();
  const auto lb = b.leaves();
  for (std::size_t i = 0; i < la.size(); ++i)
    if (!(*la[i] == *lb[i])) return false;
  return true;
}

Operator add(const Operator& a, const Operator& b) {
  return zip(a, b, [](const QuasiToeplitz& x, const QuasiToeplitz& y) { return x + y; });
}

Operator subtract(const Operator& a, const Operator& b) {
  return zip(a, b, [](const QuasiToeplitz& x, const QuasiToeplitz& y) { return x - y; });
}

Operator multiply(const Operator& a, const Operator& b) {
  return zip(a, b, [](const QuasiToeplitz& x, const QuasiToeplitz& y) { return x * y; });
}

Operator scale(const Operator& a, Complex c) {
  return a.map_leaves([c](const QuasiToeplitz& x) { return x.scaled(c); });
}

Operator adjoint(const Operator& a) {
  return a.map_leaves([](const QuasiToeplitz& x) { return x.adjoint(); });
}

Operator identity_like(const Operator& a) {
  return a.map_leaves([](const QuasiToeplitz&) { return QuasiToeplitz::identity(); });
}

Operator power(const Operator& a, unsigned n) {
  return a.map_leaves([n](const QuasiToeplitz& x) { return power(x, n); });
}

Operator commutator(const Operator& a, const Operator& b) { return multiply(a, b) - multiply(b, a); }

Complex op_trace(const Operator& a) {
  Complex sum{};
  for (const auto* leaf : a.leaves()) sum += leaf->trace();
  return sum;
}

}  // namespace curvindex
