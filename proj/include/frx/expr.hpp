#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "frx/cantor.hpp"
#include "frx/dim_value.hpp"
#include "frx/index_set.hpp"
#include "frx/scalar.hpp"

namespace frx {

enum class NodeKind { kCantor, kCube, kAffine, kUnion, kIndexedUnion, kProduct, kPrune };

struct CantorNode;
struct CubeNode;
struct AffineNode;
struct UnionNode;
struct IndexedUnionNode;
struct ProductNode;
struct PruneNode;
class Family;

/// Immutable set expression. Copies share structure; equality is deep and
/// structural.
class Expr {
 public:
  static Expr cantor(CantorSpec spec);
  /// Unit cube [0,1]^n.
  static Expr cube(int n);
  /// x -> scale * x + shift per axis. Scales must be nonzero; negative
  /// scales reflect.
  static Expr affine(std::vector<Scalar> scales, std::vector<Scalar> shifts, Expr child);
  /// Finite union. `disjoint` declares pairwise-disjoint interiors, which
  /// cover expansion checks and the measure calculus relies on.
  static Expr union_of(std::vector<Expr> children, bool disjoint = false);
  /// Union over the index set of family members; covers use the first
  /// `truncation` indices.
  static Expr indexed_union(Family family, IndexSet index, int truncation);
  static Expr product(std::vector<Expr> children);
  /// Seeded subset of the child's construction tree keeping at least one
  /// child per kept node. The child must be built from Cantor primitives
  /// without cubes or nested prunes.
  static Expr prune(Expr child, std::uint64_t seed);

  NodeKind kind() const;
  int ambient_dim() const;

  const CantorNode& as_cantor() const;
  const CubeNode& as_cube() const;
  const AffineNode& as_affine() const;
  const UnionNode& as_union() const;
  const IndexedUnionNode& as_indexed_union() const;
  const ProductNode& as_product() const;
  const PruneNode& as_prune() const;

  bool operator==(const Expr& other) const;

 private:
  struct Node;
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

/// Parameterized block generator for indexed unions. Every family places
/// member s inside a dyadic slot so members have disjoint interiors.
class Family {
 public:
  enum class Kind { kThinBlocks, kRamp, kRampBlocks, kFatBlocks };

  /// Member s: order-s Cantor set of dimension r scaled into [2^-s, 2^(1-s)].
  static Family thin_blocks(Rational r);
  /// Member m: order-s0 Cantor set of dimension m/(m+1) in [2^-m, 2^(1-m)].
  static Family ramp(int s0);
  /// Member n: thin_blocks(n/(n+1)) over `inner` scaled into [2^-n, 2^(1-n)].
  static Family ramp_blocks(IndexSet inner, int inner_truncation);
  /// Member s: fat order-s Cantor set of measure l/L stretched by L, then
  /// scaled by L/2^s into [L^2/2^s, 2 L^2/2^s], where L = floor(l) + 1.
  static Family fat_blocks(Rational l);

  Kind kind() const { return kind_; }
  const Rational& parameter() const { return parameter_; }
  int order() const { return order_; }
  const std::optional<IndexSet>& inner_index() const { return inner_index_; }
  int inner_truncation() const { return inner_truncation_; }

  Expr member(long index) const;
  /// Supremum of member dimensions.
  DimValue dim() const;
  /// Exact measure of the full (untruncated) union over `index`.
  Scalar measure(const IndexSet& index) const;

  std::string str() const;
  bool operator==(const Family&) const = default;

 private:
  Family() = default;

  Kind kind_ = Kind::kThinBlocks;
  Rational parameter_;
  int order_ = 0;
  std::optional<IndexSet> inner_index_;
  int inner_truncation_ = 0;
};

struct CantorNode {
  CantorSpec spec;
  bool operator==(const CantorNode&) const = default;
};

struct CubeNode {
  int dim;
  bool operator==(const CubeNode&) const = default;
};

struct AffineNode {
  std::vector<Scalar> scales;
  std::vector<Scalar> shifts;
  Expr child;
  bool operator==(const AffineNode&) const = default;
};

struct UnionNode {
  std::vector<Expr> children;
  bool disjoint;
  bool operator==(const UnionNode&) const = default;
};

struct IndexedUnionNode {
  Family family;
  IndexSet index;
  int truncation;
  DimValue symbolic_dim;
  Scalar symbolic_measure;
  bool operator==(const IndexedUnionNode&) const = default;
};

struct ProductNode {
  std::vector<Expr> children;
  bool operator==(const ProductNode&) const = default;
};

struct PruneNode {
  Expr child;
  std::uint64_t seed;
  bool operator==(const PruneNode&) const = default;
};

/// (1/2)((F u -F) + 1) for one-dimensional F.
Expr symmetrize(const Expr& expr);

/// True when the expression contains no cube, no prune, and at least one
/// Cantor primitive.
bool is_cantor_based(const Expr& expr);

/// Whether any finite union in the tree lacks a disjointness declaration.
bool has_undeclared_union(const Expr& expr);

}  // namespace frx
