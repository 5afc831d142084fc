#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "frx/cantor.hpp"
#include "frx/expr.hpp"

namespace frx {

/// Closed axis-aligned box, one interval per axis.
using Box = std::vector<Interval>;

struct BoxCover {
  int stage = 0;
  int dim = 0;
  std::vector<Box> boxes;
};

/// Stage cover together with the construction tree: parent[i] is the index
/// of box i's parent in the stage-1 cover of the same expression.
struct TreeCover {
  std::vector<Box> boxes;  // empty unless requested
  std::vector<std::size_t> parent;
  std::size_t count = 0;
  std::size_t parent_count = 0;
};

/// Stage-n cover. Products expand by distributing over unions; declared
/// disjoint unions are checked and throw OverlapDetected on interior
/// overlap; CapExceeded when the box count passes `options.cap`.
BoxCover expr_stage_cover(const Expr& expr, int stage, const CoverOptions& options = {});

TreeCover tree_cover(const Expr& expr, int stage, const CoverOptions& options, bool with_boxes);

/// Hull of the stage-0 cover, computed without expanding it.
Box bounding_box(const Expr& expr, const CoverOptions& options = {});
Box hull(const std::vector<Box>& boxes);

/// Open extents certainly intersect on every axis; a degenerate side stands
/// for its point, so a point strictly inside a box counts as overlapping.
bool interiors_overlap(const Box& a, const Box& b);
/// `inner` is inside `outer` unless some endpoint is certainly outside.
bool box_contains(const Box& outer, const Box& inner);
Scalar box_volume(const Box& box);

/// First pair (i < j) of boxes with overlapping interiors. When `labels` is
/// given only pairs with different labels are considered.
std::optional<std::pair<std::size_t, std::size_t>> find_overlap(
    const std::vector<Box>& boxes, const std::vector<std::size_t>* labels = nullptr);

/// Deterministic keep bit for box `index` of stage `stage`.
std::uint64_t prune_hash(std::uint64_t seed, int stage, std::size_t index);

}  // namespace frx
