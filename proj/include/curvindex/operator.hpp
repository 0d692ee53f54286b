#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "curvindex/quasi_toeplitz.hpp"

namespace curvindex {

/// A quasi-Toeplitz leaf or an ordered direct sum of operators.
///
/// Entries of a direct sum are addressed by a component path plus local
/// (i, j); no flattened global indexing is provided. Binary arithmetic
/// requires identical tree shapes and preserves them.
class Operator {
 public:
  Operator() : node_(QuasiToeplitz{}) {}
  Operator(QuasiToeplitz leaf) : node_(std::move(leaf)) {}  // NOLINT: implicit by design of the algebra

  static Operator direct_sum(std::vector<Operator> components);

  bool is_leaf() const noexcept { return std::holds_alternative<QuasiToeplitz>(node_); }
  /// Throws Structural on a direct sum.
  const QuasiToeplitz& leaf() const;
  /// Empty for a leaf.
  std::span<const Operator> components() const noexcept;

  /// Leaves in depth-first order.
  std::vector<const QuasiToeplitz*> leaves() const;
  std::size_t leaf_count() const;
  bool same_shape(const Operator& other) const noexcept;

  /// Leaf entry; throws Structural on a direct sum.
  Complex entry(Index i, Index j) const;
  /// Entry of the leaf reached by following `path` through direct-sum nodes.
  Complex entry(std::span<const std::size_t> path, Index i, Index j) const;

  /// Applies f to every leaf, keeping the tree shape.
  template <typename F>
  Operator map_leaves(F&& f) const {
    if (is_leaf()) return Operator(f(std::get<QuasiToeplitz>(node_)));
    std::vector<Operator> out;
    for (const auto& c : components()) out.push_back(c.map_leaves(f));
    return direct_sum(std::move(out));
  }

  /// Hash of the exact leaf data and tree shape.
  std::uint64_t fingerprint() const;

  friend bool operator==(const Operator& a, const Operator& b);

 private:
  std::variant<QuasiToeplitz, std::vector<Operator>> node_;
};

Operator add(const Operator& a, const Operator& b);
Operator subtract(const Operator& a, const Operator& b);
Operator scale(const Operator& a, Complex c);
Operator adjoint(const Operator& a);
Operator multiply(const Operator& a, const Operator& b);
Operator identity_like(const Operator& a);
Operator power(const Operator& a, unsigned n);
/// ab - ba, assembled as one operator so that symbols cancel before tracing.
Operator commutator(const Operator& a, const Operator& b);

inline Operator operator+(const Operator& a, const Operator& b) { return add(a, b); }
inline Operator operator-(const Operator& a, const Operator& b) { return subtract(a, b); }
inline Operator operator*(const Operator& a, const Operator& b) { return multiply(a, b); }

/// Sum of the exact leaf traces. Every leaf must be finitely supported,
/// otherwise TraceUndefined is thrown.
Complex op_trace(const Operator& a);

}  // namespace curvindex
