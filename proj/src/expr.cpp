#include "frx/expr.hpp"

#include <variant>

#include "frx/error.hpp"

namespace frx {

struct Expr::Node {
  std::variant<CantorNode, CubeNode, AffineNode, UnionNode, IndexedUnionNode, ProductNode, PruneNode>
      data;
  int ambient;
};

namespace {

Rational power_of_half(long s) {
  Integer d;
  mpz_ui_pow_ui(d.get_mpz_t(), 2, static_cast<unsigned long>(s));
  return Rational(Integer(1), d);
}

Expr dyadic_slot(long s, const Rational& stretch, const Rational& offset, Expr child) {
  return Expr::affine({Scalar(Rational(stretch * power_of_half(s)))},
                      {Scalar(Rational(offset * power_of_half(s)))}, std::move(child));
}

Rational floor_plus_one(const Rational& l) {
  Integer f;
  mpz_fdiv_q(f.get_mpz_t(), l.get_num_mpz_t(), l.get_den_mpz_t());
  return Rational(f + 1);
}

bool any_node(const Expr& e, const auto& predicate) {
  if (predicate(e)) return true;
  switch (e.kind()) {
    case NodeKind::kAffine:
      return any_node(e.as_affine().child, predicate);
    case NodeKind::kUnion:
      for (const Expr& c : e.as_union().children) {
        if (any_node(c, predicate)) return true;
      }
      return false;
    case NodeKind::kProduct:
      for (const Expr& c : e.as_product().children) {
        if (any_node(c, predicate)) return true;
      }
      return false;
    case NodeKind::kIndexedUnion: {
      const auto& u = e.as_indexed_union();
      return any_node(u.family.member(u.index.min_element()), predicate);
    }
    case NodeKind::kPrune:
      return any_node(e.as_prune().child, predicate);
    default:
      return false;
  }
}

}  // namespace

// Expr

Expr Expr::cantor(CantorSpec spec) {
  return Expr(std::make_shared<const Node>(Node{CantorNode{std::move(spec)}, 1}));
}

Expr Expr::cube(int n) {
  if (n < 1) fail(ErrorKind::kOutOfRange, "cube dimension must be >= 1");
  return Expr(std::make_shared<const Node>(Node{CubeNode{n}, n}));
}

Expr Expr::affine(std::vector<Scalar> scales, std::vector<Scalar> shifts, Expr child) {
  const int n = child.ambient_dim();
  if (static_cast<int>(scales.size()) != n || static_cast<int>(shifts.size()) != n) {
    fail(ErrorKind::kWrongDimension, "affine map needs " + std::to_string(n) +
                                         " scales and shifts, got " + std::to_string(scales.size()) +
                                         " and " + std::to_string(shifts.size()));
  }
  for (const Scalar& c : scales) {
    if (!c.is_exact()) fail(ErrorKind::kInvalidExpression, "affine scales must be exact");
    if (c.sign() == 0) fail(ErrorKind::kOutOfRange, "affine scales must be nonzero");
  }
  for (const Scalar& c : shifts) {
    if (!c.is_exact()) fail(ErrorKind::kInvalidExpression, "affine shifts must be exact");
  }
  return Expr(std::make_shared<const Node>(
      Node{AffineNode{std::move(scales), std::move(shifts), std::move(child)}, n}));
}

Expr Expr::union_of(std::vector<Expr> children, bool disjoint) {
  if (children.empty()) fail(ErrorKind::kInvalidExpression, "union needs at least one operand");
  const int n = children.front().ambient_dim();
  for (const Expr& c : children) {
    if (c.ambient_dim() != n) {
      fail(ErrorKind::kWrongDimension, "union operands live in R^" + std::to_string(n) + " and R^" +
                                           std::to_string(c.ambient_dim()));
    }
  }
  return Expr(std::make_shared<const Node>(Node{UnionNode{std::move(children), disjoint}, n}));
}

Expr Expr::indexed_union(Family family, IndexSet index, int truncation) {
  if (truncation < 1) fail(ErrorKind::kOutOfRange, "indexed union truncation must be >= 1");
  DimValue dim = family.dim();
  Scalar measure = family.measure(index);
  return Expr(std::make_shared<const Node>(Node{
      IndexedUnionNode{std::move(family), std::move(index), truncation, std::move(dim), std::move(measure)},
      1}));
}

Expr Expr::product(std::vector<Expr> children) {
  if (children.empty()) fail(ErrorKind::kInvalidExpression, "product needs at least one factor");
  int n = 0;
  for (const Expr& c : children) n += c.ambient_dim();
  return Expr(std::make_shared<const Node>(Node{ProductNode{std::move(children)}, n}));
}

Expr Expr::prune(Expr child, std::uint64_t seed) {
  if (!is_cantor_based(child)) {
    fail(ErrorKind::kInvalidExpression,
         "prune needs a Cantor-based operand without cubes or nested prunes");
  }
  const int n = child.ambient_dim();
  return Expr(std::make_shared<const Node>(Node{PruneNode{std::move(child), seed}, n}));
}

NodeKind Expr::kind() const { return static_cast<NodeKind>(node_->data.index()); }
int Expr::ambient_dim() const { return node_->ambient; }

const CantorNode& Expr::as_cantor() const { return std::get<CantorNode>(node_->data); }
const CubeNode& Expr::as_cube() const { return std::get<CubeNode>(node_->data); }
const AffineNode& Expr::as_affine() const { return std::get<AffineNode>(node_->data); }
const UnionNode& Expr::as_union() const { return std::get<UnionNode>(node_->data); }
const IndexedUnionNode& Expr::as_indexed_union() const {
  return std::get<IndexedUnionNode>(node_->data);
}
const ProductNode& Expr::as_product() const { return std::get<ProductNode>(node_->data); }
const PruneNode& Expr::as_prune() const { return std::get<PruneNode>(node_->data); }

bool Expr::operator==(const Expr& other) const {
  if (node_ == other.node_) return true;
  return node_->ambient == other.node_->ambient && node_->data == other.node_->data;
}

// Family

Family Family::thin_blocks(Rational r) {
  r.canonicalize();
  if (r <= 0 || r >= 1) {
    fail(ErrorKind::kOutOfRange, "thin_blocks needs 0 < r < 1, got " + to_string(r));
  }
  Family f;
  f.kind_ = Kind::kThinBlocks;
  f.parameter_ = r;
  return f;
}

Family Family::ramp(int s0) {
  if (s0 < 1) fail(ErrorKind::kOutOfRange, "ramp order must be >= 1");
  Family f;
  f.kind_ = Kind::kRamp;
  f.order_ = s0;
  return f;
}

Family Family::ramp_blocks(IndexSet inner, int inner_truncation) {
  if (inner_truncation < 1) fail(ErrorKind::kOutOfRange, "ramp_blocks truncation must be >= 1");
  Family f;
  f.kind_ = Kind::kRampBlocks;
  f.inner_index_ = std::move(inner);
  f.inner_truncation_ = inner_truncation;
  return f;
}

Family Family::fat_blocks(Rational l) {
  l.canonicalize();
  if (l <= 0) fail(ErrorKind::kOutOfRange, "fat_blocks needs l > 0, got " + to_string(l));
  Family f;
  f.kind_ = Kind::kFatBlocks;
  f.parameter_ = l;
  return f;
}

Expr Family::member(long index) const {
  if (index < 1) fail(ErrorKind::kOutOfRange, "family members are indexed from 1");
  switch (kind_) {
    case Kind::kThinBlocks: {
      const int s = static_cast<int>(index);
      const CantorSpec spec{RemovingSequence::geometric(s, solve_beta_for_dim(parameter_, s), Scalar(0))};
      return dyadic_slot(index, 1, 1, Expr::cantor(spec));
    }
    case Kind::kRamp: {
      const Rational r(index, index + 1);
      const CantorSpec spec{RemovingSequence::geometric(order_, solve_beta_for_dim(r, order_), Scalar(0))};
      return dyadic_slot(index, 1, 1, Expr::cantor(spec));
    }
    case Kind::kRampBlocks: {
      Expr inner = Expr::indexed_union(Family::thin_blocks(Rational(index, index + 1)), *inner_index_,
                                       inner_truncation_);
      return dyadic_slot(index, 1, 1, std::move(inner));
    }
    case Kind::kFatBlocks: {
      const int s = static_cast<int>(index);
      const Rational width = floor_plus_one(parameter_);
      const CantorSpec spec{RemovingSequence::geometric(s, Scalar(Rational(1, 2 * (s + 1))),
                                                        Scalar(Rational(parameter_ / width)))};
      Expr stretched = Expr::affine({Scalar(width)}, {Scalar(0)}, Expr::cantor(spec));
      return dyadic_slot(index, width, width * width, std::move(stretched));
    }
  }
  fail(ErrorKind::kInvalidExpression, "unknown family");
}

DimValue Family::dim() const {
  if (kind_ == Kind::kThinBlocks) return DimValue(parameter_);
  return DimValue(1);
}

Scalar Family::measure(const IndexSet& index) const {
  if (kind_ != Kind::kFatBlocks) return Scalar(0);
  return Scalar(Rational(floor_plus_one(parameter_) * parameter_ * index.dyadic_weight()));
}

std::string Family::str() const {
  switch (kind_) {
    case Kind::kThinBlocks:
      return "thin_blocks(r=" + to_string(parameter_) + ")";
    case Kind::kRamp:
      return "ramp(s0=" + std::to_string(order_) + ")";
    case Kind::kRampBlocks:
      return "ramp_blocks(index=" + inner_index_->str() + ", truncate=" +
             std::to_string(inner_truncation_) + ")";
    case Kind::kFatBlocks:
      return "fat_blocks(l=" + to_string(parameter_) + ")";
  }
  return {};
}

// Helpers

Expr symmetrize(const Expr& expr) {
  if (expr.ambient_dim() != 1) {
    fail(ErrorKind::kWrongDimension, "symmetrize needs a one-dimensional operand, got R^" +
                                         std::to_string(expr.ambient_dim()));
  }
  const Scalar half(Rational(1, 2));
  Expr reflected = Expr::affine({Scalar(-1)}, {Scalar(0)}, expr);
  return Expr::affine({half}, {half}, Expr::union_of({expr, std::move(reflected)}, true));
}

bool is_cantor_based(const Expr& expr) {
  const bool forbidden = any_node(expr, [](const Expr& e) {
    return e.kind() == NodeKind::kCube || e.kind() == NodeKind::kPrune;
  });
  if (forbidden) return false;
  return any_node(expr, [](const Expr& e) {
    return e.kind() == NodeKind::kCantor || e.kind() == NodeKind::kIndexedUnion;
  });
}

bool has_undeclared_union(const Expr& expr) {
  return any_node(expr, [](const Expr& e) {
    return e.kind() == NodeKind::kUnion && !e.as_union().disjoint;
  });
}

}  // namespace frx
