#include "frx/cover.hpp"

#include <algorithm>
#include <array>
#include <limits>

#include "frx/error.hpp"

namespace frx {

namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

void check_cap(const Integer& count, const CoverOptions& options, const std::string& what) {
  if (count > Integer(std::to_string(options.cap))) {
    fail(ErrorKind::kCapExceeded, what + " needs " + count.get_str() + " boxes (cap " +
                                      std::to_string(options.cap) + ")");
  }
}

TreeCover cantor_tree(const CantorSpec& spec, int stage, const CoverOptions& options, bool with_boxes) {
  const unsigned long branching = static_cast<unsigned long>(spec.order()) + 1;
  Integer count;
  mpz_ui_pow_ui(count.get_mpz_t(), branching, static_cast<unsigned long>(stage));
  check_cap(count, options, "Cantor stage " + std::to_string(stage));

  TreeCover tree;
  tree.count = count.get_ui();
  tree.parent_count = stage == 0 ? 0 : tree.count / branching;
  if (stage > 0) {
    tree.parent.resize(tree.count);
    for (std::size_t i = 0; i < tree.count; ++i) tree.parent[i] = i / branching;
  }
  if (with_boxes) {
    StageCover cover = stage_cover(spec, stage, options);
    tree.boxes.reserve(cover.intervals.size());
    for (Interval& iv : cover.intervals) tree.boxes.push_back(Box{std::move(iv)});
  }
  return tree;
}

TreeCover cube_tree(int n, int stage, bool with_boxes) {
  TreeCover tree;
  tree.count = 1;
  tree.parent_count = stage == 0 ? 0 : 1;
  if (stage > 0) tree.parent = {0};
  if (with_boxes) tree.boxes.push_back(Box(static_cast<std::size_t>(n), Interval{Scalar(0), Scalar(1)}));
  return tree;
}

Box map_box(const AffineNode& a, const Box& box) {
  Box out;
  out.reserve(box.size());
  for (std::size_t axis = 0; axis < box.size(); ++axis) {
    const Scalar& c = a.scales[axis];
    const Scalar& d = a.shifts[axis];
    Scalar lo = c * box[axis].lo + d;
    Scalar hi = c * box[axis].hi + d;
    if (c.sign() < 0) std::swap(lo, hi);
    out.push_back(Interval{std::move(lo), std::move(hi)});
  }
  return out;
}

std::string box_str(const Box& box) {
  std::string out;
  for (std::size_t axis = 0; axis < box.size(); ++axis) {
    if (axis > 0) out += " x ";
    out += "[" + box[axis].lo.str() + ", " + box[axis].hi.str() + "]";
  }
  return out;
}

void check_parts_disjoint(const std::vector<TreeCover>& parts, const std::string& what) {
  std::vector<Box> hulls;
  for (const TreeCover& p : parts) hulls.push_back(hull(p.boxes));
  for (std::size_t i = 0; i < parts.size(); ++i) {
    for (std::size_t j = i + 1; j < parts.size(); ++j) {
      if (!interiors_overlap(hulls[i], hulls[j])) continue;
      std::vector<Box> boxes = parts[i].boxes;
      boxes.insert(boxes.end(), parts[j].boxes.begin(), parts[j].boxes.end());
      std::vector<std::size_t> labels(parts[i].boxes.size(), 0);
      labels.resize(boxes.size(), 1);
      if (const auto hit = find_overlap(boxes, &labels)) {
        fail(ErrorKind::kOverlapDetected, what + " operands " + std::to_string(i) + " and " +
                                              std::to_string(j) + " overlap: " + box_str(boxes[hit->first]) +
                                              " and " + box_str(boxes[hit->second]));
      }
    }
  }
}

TreeCover concat(std::vector<TreeCover> parts, int stage, const CoverOptions& options, bool check,
                 bool with_boxes, const std::string& what) {
  Integer total = 0;
  for (const TreeCover& p : parts) total += Integer(std::to_string(p.count));
  check_cap(total, options, what);
  if (check && with_boxes) check_parts_disjoint(parts, what);

  TreeCover tree;
  std::size_t offset = 0;
  for (TreeCover& p : parts) {
    for (std::size_t parent : p.parent) tree.parent.push_back(parent + offset);
    offset += p.parent_count;
    tree.count += p.count;
    if (with_boxes) {
      std::move(p.boxes.begin(), p.boxes.end(), std::back_inserter(tree.boxes));
    }
  }
  tree.parent_count = stage == 0 ? 0 : offset;
  return tree;
}

TreeCover product_tree(std::vector<TreeCover> parts, int stage, const CoverOptions& options,
                       bool with_boxes) {
  Integer total = 1;
  for (const TreeCover& p : parts) total *= Integer(std::to_string(p.count));
  check_cap(total, options, "product stage " + std::to_string(stage));

  TreeCover tree;
  tree.count = total.get_ui();
  tree.parent_count = 1;
  for (const TreeCover& p : parts) tree.parent_count *= p.parent_count;
  if (stage == 0) tree.parent_count = 0;
  if (tree.count == 0) return tree;

  // Odometer over factor indices, last factor fastest.
  std::vector<std::size_t> digit(parts.size(), 0);
  if (stage > 0) tree.parent.reserve(tree.count);
  if (with_boxes) tree.boxes.reserve(tree.count);
  for (std::size_t k = 0; k < tree.count; ++k) {
    if (stage > 0) {
      std::size_t parent = 0;
      for (std::size_t f = 0; f < parts.size(); ++f) {
        parent = parent * parts[f].parent_count + parts[f].parent[digit[f]];
      }
      tree.parent.push_back(parent);
    }
    if (with_boxes) {
      Box box;
      for (std::size_t f = 0; f < parts.size(); ++f) {
        const Box& factor = parts[f].boxes[digit[f]];
        box.insert(box.end(), factor.begin(), factor.end());
      }
      tree.boxes.push_back(std::move(box));
    }
    for (std::size_t f = parts.size(); f-- > 0;) {
      if (++digit[f] < parts[f].count) break;
      digit[f] = 0;
    }
  }
  return tree;
}

TreeCover tree_rec(const Expr& e, int stage, const CoverOptions& options, bool with_boxes);

TreeCover prune_tree(const PruneNode& p, int stage, const CoverOptions& options, bool with_boxes) {
  TreeCover level = tree_rec(p.child, 0, options, with_boxes && stage == 0);
  if (stage == 0) return level;

  std::vector<std::size_t> kept_index(level.count);
  for (std::size_t i = 0; i < level.count; ++i) kept_index[i] = i;
  std::size_t kept_before = level.count;

  TreeCover tree;
  for (int j = 1; j <= stage; ++j) {
    const bool last = j == stage;
    level = tree_rec(p.child, j, options, with_boxes && last);

    std::vector<char> keep(level.count, 0);
    std::vector<char> has_child(kept_before, 0);
    std::vector<std::size_t> best(kept_before, kNone);
    std::vector<std::uint64_t> best_hash(kept_before, std::numeric_limits<std::uint64_t>::max());
    for (std::size_t i = 0; i < level.count; ++i) {
      const std::size_t parent = kept_index[level.parent[i]];
      if (parent == kNone) continue;
      const std::uint64_t h = prune_hash(p.seed, j, i);
      if (h & 1u) {
        keep[i] = 1;
        has_child[parent] = 1;
      }
      if (best[parent] == kNone || h < best_hash[parent]) {
        best[parent] = i;
        best_hash[parent] = h;
      }
    }
    // Never drop every child of a kept node.
    for (std::size_t parent = 0; parent < kept_before; ++parent) {
      if (!has_child[parent] && best[parent] != kNone) keep[best[parent]] = 1;
    }

    std::vector<std::size_t> next_index(level.count, kNone);
    std::size_t kept = 0;
    if (last) {
      tree.parent.clear();
      tree.boxes.clear();
    }
    for (std::size_t i = 0; i < level.count; ++i) {
      if (!keep[i]) continue;
      next_index[i] = kept++;
      if (last) {
        tree.parent.push_back(kept_index[level.parent[i]]);
        if (with_boxes) tree.boxes.push_back(std::move(level.boxes[i]));
      }
    }
    if (last) {
      tree.count = kept;
      tree.parent_count = kept_before;
    }
    kept_index = std::move(next_index);
    kept_before = kept;
  }
  return tree;
}

TreeCover tree_rec(const Expr& e, int stage, const CoverOptions& options, bool with_boxes) {
  switch (e.kind()) {
    case NodeKind::kCantor:
      return cantor_tree(e.as_cantor().spec, stage, options, with_boxes);
    case NodeKind::kCube:
      return cube_tree(e.as_cube().dim, stage, with_boxes);
    case NodeKind::kAffine: {
      const AffineNode& a = e.as_affine();
      TreeCover tree = tree_rec(a.child, stage, options, with_boxes);
      for (Box& box : tree.boxes) box = map_box(a, box);
      return tree;
    }
    case NodeKind::kUnion: {
      const UnionNode& u = e.as_union();
      std::vector<TreeCover> parts;
      for (const Expr& c : u.children) parts.push_back(tree_rec(c, stage, options, with_boxes));
      return concat(std::move(parts), stage, options, u.disjoint, with_boxes,
                    "union stage " + std::to_string(stage));
    }
    case NodeKind::kIndexedUnion: {
      const IndexedUnionNode& u = e.as_indexed_union();
      const int truncation = options.truncation.value_or(u.truncation);
      if (truncation < 1) fail(ErrorKind::kOutOfRange, "truncation must be >= 1");
      std::vector<TreeCover> parts;
      for (long index : u.index.first(static_cast<std::size_t>(truncation))) {
        parts.push_back(tree_rec(u.family.member(index), stage, options, with_boxes));
      }
      return concat(std::move(parts), stage, options, true, with_boxes,
                    "iunion(" + u.family.str() + ") stage " + std::to_string(stage));
    }
    case NodeKind::kProduct: {
      std::vector<TreeCover> parts;
      for (const Expr& c : e.as_product().children) parts.push_back(tree_rec(c, stage, options, with_boxes));
      return product_tree(std::move(parts), stage, options, with_boxes);
    }
    case NodeKind::kPrune:
      return prune_tree(e.as_prune(), stage, options, with_boxes);
  }
  fail(ErrorKind::kInvalidExpression, "unknown expression node");
}

struct DoubleBox {
  std::vector<std::array<double, 2>> axes;
};

DoubleBox to_double_box(const Box& box) {
  DoubleBox out;
  out.axes.reserve(box.size());
  for (const Interval& iv : box) {
    out.axes.push_back({iv.lo.double_bounds().first, iv.hi.double_bounds().second});
  }
  return out;
}

}  // namespace

BoxCover expr_stage_cover(const Expr& expr, int stage, const CoverOptions& options) {
  if (stage < 0) fail(ErrorKind::kOutOfRange, "stage must be >= 0");
  TreeCover tree = tree_rec(expr, stage, options, true);
  return BoxCover{stage, expr.ambient_dim(), std::move(tree.boxes)};
}

TreeCover tree_cover(const Expr& expr, int stage, const CoverOptions& options, bool with_boxes) {
  if (stage < 0) fail(ErrorKind::kOutOfRange, "stage must be >= 0");
  return tree_rec(expr, stage, options, with_boxes);
}

Box bounding_box(const Expr& expr, const CoverOptions& options) {
  switch (expr.kind()) {
    case NodeKind::kCantor:
      return Box{Interval{Scalar(0), Scalar(1)}};
    case NodeKind::kCube:
      return Box(static_cast<std::size_t>(expr.as_cube().dim), Interval{Scalar(0), Scalar(1)});
    case NodeKind::kAffine:
      return map_box(expr.as_affine(), bounding_box(expr.as_affine().child, options));
    case NodeKind::kUnion: {
      std::vector<Box> parts;
      for (const Expr& c : expr.as_union().children) parts.push_back(bounding_box(c, options));
      return hull(parts);
    }
    case NodeKind::kIndexedUnion: {
      const IndexedUnionNode& u = expr.as_indexed_union();
      const int truncation = options.truncation.value_or(u.truncation);
      std::vector<Box> parts;
      for (long index : u.index.first(static_cast<std::size_t>(std::max(truncation, 1)))) {
        parts.push_back(bounding_box(u.family.member(index), options));
      }
      return hull(parts);
    }
    case NodeKind::kProduct: {
      Box out;
      for (const Expr& c : expr.as_product().children) {
        const Box part = bounding_box(c, options);
        out.insert(out.end(), part.begin(), part.end());
      }
      return out;
    }
    case NodeKind::kPrune:
      return bounding_box(expr.as_prune().child, options);
  }
  fail(ErrorKind::kInvalidExpression, "unknown expression node");
}

Box hull(const std::vector<Box>& boxes) {
  if (boxes.empty()) fail(ErrorKind::kInvalidExpression, "hull of an empty cover");
  Box out = boxes.front();
  for (const Box& box : boxes) {
    for (std::size_t axis = 0; axis < out.size(); ++axis) {
      out[axis].lo = min(out[axis].lo, box[axis].lo);
      out[axis].hi = max(out[axis].hi, box[axis].hi);
    }
  }
  return out;
}

bool interiors_overlap(const Box& a, const Box& b) {
  for (std::size_t axis = 0; axis < a.size(); ++axis) {
    if (!a[axis].lo.definitely_less(b[axis].hi) || !b[axis].lo.definitely_less(a[axis].hi)) return false;
  }
  return true;
}

bool box_contains(const Box& outer, const Box& inner) {
  for (std::size_t axis = 0; axis < outer.size(); ++axis) {
    if (!outer[axis].lo.possibly_le(inner[axis].lo) || !inner[axis].hi.possibly_le(outer[axis].hi)) {
      return false;
    }
  }
  return true;
}

Scalar box_volume(const Box& box) {
  Scalar v(1);
  for (const Interval& iv : box) v *= iv.length();
  return v;
}

std::optional<std::pair<std::size_t, std::size_t>> find_overlap(const std::vector<Box>& boxes,
                                                                const std::vector<std::size_t>* labels) {
  std::vector<DoubleBox> bounds;
  bounds.reserve(boxes.size());
  for (const Box& box : boxes) bounds.push_back(to_double_box(box));
  std::vector<std::size_t> order(boxes.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return bounds[a].axes[0][0] < bounds[b].axes[0][0];
  });

  // Sweep along axis 0 with outward double bounds, confirming exactly.
  std::vector<std::size_t> active;
  for (std::size_t i : order) {
    const DoubleBox& bi = bounds[i];
    std::erase_if(active, [&](std::size_t j) { return bounds[j].axes[0][1] <= bi.axes[0][0]; });
    for (std::size_t j : active) {
      if (labels && (*labels)[i] == (*labels)[j]) continue;
      const DoubleBox& bj = bounds[j];
      bool maybe = true;
      for (std::size_t axis = 1; axis < bi.axes.size() && maybe; ++axis) {
        maybe = bi.axes[axis][0] < bj.axes[axis][1] && bj.axes[axis][0] < bi.axes[axis][1];
      }
      if (maybe && interiors_overlap(boxes[i], boxes[j])) return std::make_pair(std::min(i, j), std::max(i, j));
    }
    active.push_back(i);
  }
  return std::nullopt;
}

std::uint64_t prune_hash(std::uint64_t seed, int stage, std::size_t index) {
  auto splitmix = [](std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
  };
  return splitmix(splitmix(seed ^ splitmix(static_cast<std::uint64_t>(stage))) ^ index);
}

}  // namespace frx
