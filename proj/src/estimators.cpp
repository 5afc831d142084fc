#include "frx/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "frx/analytics.hpp"
#include "frx/error.hpp"

namespace frx {

namespace {

// Inclusive integer cell ranges per axis.
struct CellBox {
  std::vector<std::int64_t> lo;
  std::vector<std::int64_t> hi;
};

std::int64_t to_int64(const Integer& v) {
  if (!v.fits_slong_p()) fail(ErrorKind::kCapExceeded, "grid index out of 64-bit range");
  return v.get_si();
}

std::uint64_t count_cells(std::vector<const CellBox*> boxes, std::size_t axis, std::size_t dims) {
  if (boxes.empty()) return 0;
  std::sort(boxes.begin(), boxes.end(),
            [axis](const CellBox* a, const CellBox* b) { return a->lo[axis] < b->lo[axis]; });
  if (axis + 1 == dims) {
    std::uint64_t total = 0;
    std::int64_t run_lo = boxes.front()->lo[axis];
    std::int64_t run_hi = boxes.front()->hi[axis];
    for (const CellBox* b : boxes) {
      if (b->lo[axis] > run_hi + 1) {
        total += static_cast<std::uint64_t>(run_hi - run_lo + 1);
        run_lo = b->lo[axis];
        run_hi = b->hi[axis];
      } else {
        run_hi = std::max(run_hi, b->hi[axis]);
      }
    }
    return total + static_cast<std::uint64_t>(run_hi - run_lo + 1);
  }

  // Slab sweep: between consecutive breakpoints the active set is fixed.
  std::vector<std::int64_t> breaks;
  breaks.reserve(boxes.size() * 2);
  for (const CellBox* b : boxes) {
    breaks.push_back(b->lo[axis]);
    breaks.push_back(b->hi[axis] + 1);
  }
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

  std::uint64_t total = 0;
  std::vector<const CellBox*> active;
  std::size_t next = 0;
  std::uint64_t slab_count = 0;
  bool changed = true;
  for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
    const std::int64_t x = breaks[k];
    const std::size_t before = active.size();
    std::erase_if(active, [&](const CellBox* b) { return b->hi[axis] + 1 <= x; });
    if (active.size() != before) changed = true;
    while (next < boxes.size() && boxes[next]->lo[axis] <= x) {
      active.push_back(boxes[next++]);
      changed = true;
    }
    if (active.empty()) continue;
    if (changed) {
      slab_count = count_cells(active, axis + 1, dims);
      changed = false;
    }
    total += static_cast<std::uint64_t>(breaks[k + 1] - x) * slab_count;
  }
  return total;
}

// Strict-weak order on scalars for sorting; ties inside overlapping
// enclosures fall back to midpoints.
bool scalar_before(const Scalar& a, const Scalar& b) {
  const auto c = a.compare(b);
  if (c == std::partial_ordering::less) return true;
  if (c == std::partial_ordering::greater || c == std::partial_ordering::equivalent) return false;
  return a.to_double() < b.to_double();
}

bool possibly_equal(const Scalar& a, const Scalar& b) {
  return !a.definitely_less(b) && !b.definitely_less(a);
}

Scalar volume_rec(const std::vector<const Box*>& boxes, std::size_t axis) {
  if (boxes.empty()) return Scalar(0);
  std::vector<Scalar> breaks;
  for (const Box* b : boxes) {
    breaks.push_back((*b)[axis].lo);
    breaks.push_back((*b)[axis].hi);
  }
  std::sort(breaks.begin(), breaks.end(), scalar_before);
  std::vector<Scalar> unique;
  for (Scalar& x : breaks) {
    if (unique.empty() || !possibly_equal(unique.back(), x)) unique.push_back(std::move(x));
  }
  Scalar total(0);
  for (std::size_t k = 0; k + 1 < unique.size(); ++k) {
    std::vector<const Box*> active;
    for (const Box* b : boxes) {
      if ((*b)[axis].lo.possibly_le(unique[k]) && unique[k + 1].possibly_le((*b)[axis].hi)) {
        active.push_back(b);
      }
    }
    if (active.empty()) continue;
    const Scalar width = unique[k + 1] - unique[k];
    total += axis + 1 == boxes.front()->size() ? width : width * volume_rec(active, axis + 1);
  }
  return total;
}

double log_double(const Scalar& x) {
  return log_of(x, 192).midpoint();
}

void least_squares(FitReport& report) {
  const auto n = static_cast<double>(report.points.size());
  double mx = 0;
  double my = 0;
  for (const FitPoint& p : report.points) {
    mx += p.log_inv_epsilon;
    my += p.log_count;
  }
  mx /= n;
  my /= n;
  double sxx = 0;
  double sxy = 0;
  for (const FitPoint& p : report.points) {
    sxx += (p.log_inv_epsilon - mx) * (p.log_inv_epsilon - mx);
    sxy += (p.log_inv_epsilon - mx) * (p.log_count - my);
  }
  if (sxx == 0) fail(ErrorKind::kOutOfRange, "box-dimension fit needs at least two distinct scales");
  report.slope = sxy / sxx;
  report.intercept = my - report.slope * mx;
  double ss = 0;
  for (const FitPoint& p : report.points) {
    const double r = p.log_count - (report.intercept + report.slope * p.log_inv_epsilon);
    ss += r * r;
  }
  report.residual = std::sqrt(ss / n);
}

Scalar abs_scale_product(const AffineNode& a) {
  Scalar factor(1);
  for (const Scalar& c : a.scales) factor *= c.abs();
  return factor;
}

std::vector<Expr> truncated_members(const IndexedUnionNode& u, const CoverOptions& options) {
  std::vector<Expr> members;
  const int truncation = options.truncation.value_or(u.truncation);
  for (long index : u.index.first(static_cast<std::size_t>(std::max(truncation, 1)))) {
    members.push_back(u.family.member(index));
  }
  return members;
}

// Analytic measure of the truncated geometry, as [lo, hi].
MeasureValue truncated_measure(const Expr& e, const CoverOptions& options) {
  switch (e.kind()) {
    case NodeKind::kIndexedUnion: {
      MeasureValue m{Scalar(0), Scalar(0)};
      for (const Expr& member : truncated_members(e.as_indexed_union(), options)) {
        const MeasureValue part = truncated_measure(member, options);
        m.lo += part.lo;
        m.hi += part.hi;
      }
      return m;
    }
    case NodeKind::kAffine: {
      const MeasureValue child = truncated_measure(e.as_affine().child, options);
      const Scalar factor = abs_scale_product(e.as_affine());
      return {factor * child.lo, factor * child.hi};
    }
    case NodeKind::kUnion: {
      const auto& u = e.as_union();
      MeasureValue m{Scalar(0), Scalar(0)};
      for (const Expr& c : u.children) {
        const MeasureValue part = truncated_measure(c, options);
        m.lo = u.disjoint ? m.lo + part.lo : max(m.lo, part.lo);
        m.hi += part.hi;
      }
      return m;
    }
    case NodeKind::kProduct: {
      MeasureValue m{Scalar(1), Scalar(1)};
      for (const Expr& c : e.as_product().children) {
        const MeasureValue part = truncated_measure(c, options);
        m.lo *= part.lo;
        m.hi *= part.hi;
      }
      return m;
    }
    case NodeKind::kPrune: {
      const MeasureValue child = truncated_measure(e.as_prune().child, options);
      return {Scalar(0), child.hi};
    }
    default:
      return analytic_measure(e);
  }
}

Scalar distance_to(const Scalar& x, const MeasureValue& m) {
  if (x.definitely_less(m.lo)) return m.lo - x;
  if (m.hi.definitely_less(x)) return x - m.hi;
  return Scalar(0);
}

void collect_leaves(const Expr& e, const CoverOptions& options, std::vector<CantorSpec>& out) {
  switch (e.kind()) {
    case NodeKind::kCantor:
      if (std::find(out.begin(), out.end(), e.as_cantor().spec) == out.end()) out.push_back(e.as_cantor().spec);
      return;
    case NodeKind::kCube:
      return;
    case NodeKind::kAffine:
      collect_leaves(e.as_affine().child, options, out);
      return;
    case NodeKind::kUnion:
      for (const Expr& c : e.as_union().children) collect_leaves(c, options, out);
      return;
    case NodeKind::kIndexedUnion:
      for (const Expr& m : truncated_members(e.as_indexed_union(), options)) collect_leaves(m, options, out);
      return;
    case NodeKind::kProduct:
      for (const Expr& c : e.as_product().children) collect_leaves(c, options, out);
      return;
    case NodeKind::kPrune:
      collect_leaves(e.as_prune().child, options, out);
      return;
  }
}

bool differs(const Scalar& a, const Scalar& b) {
  const auto c = a.compare(b);
  return c == std::partial_ordering::less || c == std::partial_ordering::greater;
}

std::optional<std::string> check_primitive(const CantorSpec& spec, const StageCover& prev,
                                           const StageCover& cur) {
  const int k = cur.stage;
  const unsigned long branching = static_cast<unsigned long>(spec.order()) + 1;
  Integer expected;
  mpz_ui_pow_ui(expected.get_mpz_t(), branching, static_cast<unsigned long>(k));
  if (Integer(std::to_string(cur.intervals.size())) != expected) {
    return "stage " + std::to_string(k) + " has " + std::to_string(cur.intervals.size()) +
           " intervals, expected " + expected.get_str();
  }
  const Scalar delta = stage_length(spec, k);
  Scalar total(0);
  for (std::size_t i = 0; i < cur.intervals.size(); ++i) {
    const Interval& iv = cur.intervals[i];
    const Scalar length = iv.length();
    if (differs(length, delta)) {
      return "stage " + std::to_string(k) + " interval " + std::to_string(i) + " has length " + length.str() +
             ", expected " + delta.str();
    }
    total += length;
    if (i + 1 < cur.intervals.size() && !iv.hi.definitely_less(cur.intervals[i + 1].lo)) {
      return "stage " + std::to_string(k) + " intervals " + std::to_string(i) + " and " + std::to_string(i + 1) +
             " are not separated by a positive gap";
    }
    if (k > 0) {
      const Interval& parent = prev.intervals[i / branching];
      if (!parent.lo.possibly_le(iv.lo) || !iv.hi.possibly_le(parent.hi)) {
        return "stage " + std::to_string(k) + " interval " + std::to_string(i) + " escapes its parent";
      }
    }
  }
  const Scalar measure = stage_measure(spec, k);
  if (differs(total, measure)) {
    return "stage " + std::to_string(k) + " total length " + total.str() + " differs from stage measure " +
           measure.str();
  }
  return std::nullopt;
}

std::optional<Integer> expected_count(const Expr& e, int stage, const CoverOptions& options) {
  switch (e.kind()) {
    case NodeKind::kCantor: {
      Integer c;
      mpz_ui_pow_ui(c.get_mpz_t(), static_cast<unsigned long>(e.as_cantor().spec.order()) + 1,
                    static_cast<unsigned long>(stage));
      return c;
    }
    case NodeKind::kCube:
      return Integer(1);
    case NodeKind::kAffine:
      return expected_count(e.as_affine().child, stage, options);
    case NodeKind::kUnion:
    case NodeKind::kIndexedUnion: {
      const std::vector<Expr> parts = e.kind() == NodeKind::kUnion
                                          ? e.as_union().children
                                          : truncated_members(e.as_indexed_union(), options);
      Integer total = 0;
      for (const Expr& c : parts) {
        const auto part = expected_count(c, stage, options);
        if (!part) return std::nullopt;
        total += *part;
      }
      return total;
    }
    case NodeKind::kProduct: {
      Integer total = 1;
      for (const Expr& c : e.as_product().children) {
        const auto part = expected_count(c, stage, options);
        if (!part) return std::nullopt;
        total *= *part;
      }
      return total;
    }
    case NodeKind::kPrune:
      return std::nullopt;
  }
  return std::nullopt;
}

// Geometric ratio q with every stage-k box a cube of side c q^k.
std::optional<Scalar> natural_ratio(const Expr& e) {
  switch (e.kind()) {
    case NodeKind::kCantor: {
      const auto& seq = e.as_cantor().spec.seq;
      if (!seq.is_geometric() || seq.geometric_family().l.sign() != 0) return std::nullopt;
      return seq.geometric_family().beta;
    }
    case NodeKind::kAffine: {
      const auto& a = e.as_affine();
      for (const Scalar& c : a.scales) {
        if (!(c.abs() == a.scales.front().abs())) return std::nullopt;
      }
      return natural_ratio(a.child);
    }
    case NodeKind::kProduct: {
      std::optional<Scalar> ratio;
      for (const Expr& c : e.as_product().children) {
        const auto part = natural_ratio(c);
        if (!part || (ratio && !(*ratio == *part))) return std::nullopt;
        ratio = part;
      }
      return ratio;
    }
    default:
      return std::nullopt;
  }
}

std::string box_str(const Box& box) {
  std::string out;
  for (std::size_t axis = 0; axis < box.size(); ++axis) {
    if (axis > 0) out += " x ";
    out += "[" + box[axis].lo.str() + ", " + box[axis].hi.str() + "]";
  }
  return out;
}

std::string format_double(double v) {
  std::ostringstream out;
  out.precision(15);
  out << v;
  return out.str();
}

}  // namespace

std::uint64_t box_count(const BoxCover& cover, const GridSpec& grid, std::uint64_t cell_cap) {
  if (cover.boxes.empty()) fail(ErrorKind::kOutOfRange, "box_count needs a nonempty cover");
  if (grid.epsilon.sign() <= 0) fail(ErrorKind::kOutOfRange, "grid epsilon must be positive");
  const std::size_t dims = cover.boxes.front().size();
  std::vector<Scalar> origin;
  if (grid.origin) {
    origin = *grid.origin;
    if (origin.size() != dims) fail(ErrorKind::kWrongDimension, "grid origin has the wrong dimension");
  } else {
    for (const Interval& iv : hull(cover.boxes)) origin.push_back(iv.lo);
  }

  const Box extent = hull(cover.boxes);
  Integer cells = 1;
  for (std::size_t axis = 0; axis < dims; ++axis) {
    Integer span = ceil_of((extent[axis].hi - origin[axis]) / grid.epsilon).value -
                   floor_of((extent[axis].lo - origin[axis]) / grid.epsilon).value;
    cells *= std::max(span, Integer(1));
  }
  if (cells > Integer(std::to_string(cell_cap))) {
    fail(ErrorKind::kCapExceeded, "grid spans " + cells.get_str() + " cells (cap " + std::to_string(cell_cap) + ")");
  }

  std::vector<CellBox> ranges;
  ranges.reserve(cover.boxes.size());
  for (const Box& box : cover.boxes) {
    CellBox cells_of_box;
    for (std::size_t axis = 0; axis < dims; ++axis) {
      const Scalar lo = (box[axis].lo - origin[axis]) / grid.epsilon;
      const std::int64_t first = to_int64(floor_of(lo).value);
      std::int64_t last = first;
      if (!(box[axis].lo == box[axis].hi)) {
        last = std::max(first, to_int64(ceil_of((box[axis].hi - origin[axis]) / grid.epsilon).value) - 1);
      }
      cells_of_box.lo.push_back(first);
      cells_of_box.hi.push_back(last);
    }
    ranges.push_back(std::move(cells_of_box));
  }
  std::vector<const CellBox*> pointers;
  pointers.reserve(ranges.size());
  for (const CellBox& c : ranges) pointers.push_back(&c);
  return count_cells(std::move(pointers), 0, dims);
}

FitReport box_dim_fit(const Expr& expr, int first_stage, int last_stage, GridMode mode,
                      const CoverOptions& options) {
  if (first_stage < 0 || last_stage < first_stage + 1) {
    fail(ErrorKind::kOutOfRange, "box-dimension fit needs a stage range with at least two stages");
  }
  FitReport report;
  report.mode = mode;
  report.first_stage = first_stage;
  report.last_stage = last_stage;

  Scalar base_side(0);
  if (mode == GridMode::kDyadic) {
    for (const Interval& iv : bounding_box(expr, options)) base_side = max(base_side, iv.length());
  }
  for (int k = first_stage; k <= last_stage; ++k) {
    const BoxCover cover = expr_stage_cover(expr, k, options);
    FitPoint point;
    point.stage = k;
    if (mode == GridMode::kNatural) {
      Scalar side(0);
      for (const Box& box : cover.boxes) {
        for (const Interval& iv : box) side = max(side, iv.length());
      }
      point.epsilon = side;
      point.count = cover.boxes.size();
    } else {
      point.epsilon = base_side * pow(Scalar(Rational(1, 2)), k);
      point.count = box_count(cover, GridSpec{point.epsilon, std::nullopt});
    }
    if (point.epsilon.sign() <= 0) fail(ErrorKind::kOutOfRange, "degenerate cover at stage " + std::to_string(k));
    point.log_inv_epsilon = -log_double(point.epsilon);
    point.log_count = log_double(Scalar(Integer(std::to_string(point.count))));
    point.ratio = point.log_inv_epsilon == 0 ? 0 : point.log_count / point.log_inv_epsilon;
    report.points.push_back(std::move(point));
  }
  least_squares(report);
  return report;
}

Scalar union_volume(const std::vector<Box>& boxes) {
  std::vector<const Box*> pointers;
  for (const Box& b : boxes) pointers.push_back(&b);
  return volume_rec(pointers, 0);
}

Scalar stage_volume(const Expr& expr, int stage, const CoverOptions& options) {
  switch (expr.kind()) {
    case NodeKind::kCantor:
      return stage_measure(expr.as_cantor().spec, stage);
    case NodeKind::kCube:
      return Scalar(1);
    case NodeKind::kAffine:
      return abs_scale_product(expr.as_affine()) * stage_volume(expr.as_affine().child, stage, options);
    case NodeKind::kUnion: {
      if (!expr.as_union().disjoint) return union_volume(expr_stage_cover(expr, stage, options).boxes);
      Scalar total(0);
      for (const Expr& c : expr.as_union().children) total += stage_volume(c, stage, options);
      return total;
    }
    case NodeKind::kIndexedUnion: {
      Scalar total(0);
      for (const Expr& m : truncated_members(expr.as_indexed_union(), options)) {
        total += stage_volume(m, stage, options);
      }
      return total;
    }
    case NodeKind::kProduct: {
      Scalar total(1);
      for (const Expr& c : expr.as_product().children) total *= stage_volume(c, stage, options);
      return total;
    }
    case NodeKind::kPrune:
      return union_volume(expr_stage_cover(expr, stage, options).boxes);
  }
  fail(ErrorKind::kInvalidExpression, "unknown expression node");
}

std::vector<MeasurePoint> measure_series(const Expr& expr, int first_stage, int last_stage,
                                         const CoverOptions& options) {
  if (first_stage < 0 || last_stage < first_stage) fail(ErrorKind::kOutOfRange, "invalid stage range");
  const MeasureValue analytic = analytic_measure(expr);
  std::vector<MeasurePoint> series;
  for (int k = first_stage; k <= last_stage; ++k) {
    Scalar volume = stage_volume(expr, k, options);
    Scalar deviation = distance_to(volume, analytic);
    series.push_back(MeasurePoint{k, std::move(volume), std::move(deviation)});
  }
  return series;
}

bool VerifyReport::passed() const {
  return std::none_of(checks.begin(), checks.end(),
                      [](const CheckResult& c) { return c.status == CheckStatus::kFail; });
}

const CheckResult* VerifyReport::find(const std::string& name) const {
  for (const CheckResult& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

std::string VerifyReport::str() const {
  std::string out;
  for (const CheckResult& c : checks) {
    const char* tag = c.status == CheckStatus::kPass ? "PASS" : (c.status == CheckStatus::kFail ? "FAIL" : "SKIP");
    out += std::string(tag) + " " + c.name + ": " + c.detail + "\n";
  }
  return out;
}

VerifyReport verify(const Expr& expr, int first_stage, int last_stage, double tolerance,
                    const CoverOptions& options) {
  if (first_stage < 0 || last_stage < first_stage) fail(ErrorKind::kOutOfRange, "invalid stage range");
  VerifyReport report;
  const std::string range = "stages " + std::to_string(first_stage) + ".." + std::to_string(last_stage);

  {
    CheckResult check{"primitives", CheckStatus::kPass, ""};
    std::vector<CantorSpec> leaves;
    collect_leaves(expr, options, leaves);
    for (const CantorSpec& spec : leaves) {
      StageCover prev = stage_cover(spec, std::max(first_stage - 1, 0), options);
      for (int k = first_stage; k <= last_stage && check.status == CheckStatus::kPass; ++k) {
        StageCover cur = stage_cover(spec, k, options);
        if (auto problem = check_primitive(spec, prev, cur)) {
          check.status = CheckStatus::kFail;
          check.detail = *problem;
        }
        prev = std::move(cur);
      }
    }
    if (check.status == CheckStatus::kPass) {
      check.detail = std::to_string(leaves.size()) + " Cantor primitive(s): count, lengths, gaps, nesting and "
                     "stage measure exact over " + range;
    }
    if (leaves.empty()) {
      check.status = CheckStatus::kSkip;
      check.detail = "no Cantor primitives";
    }
    report.checks.push_back(std::move(check));
  }

  CheckResult nesting{"nesting", CheckStatus::kPass, ""};
  CheckResult disjoint{"disjointness", CheckStatus::kPass, ""};
  CheckResult count{"count", CheckStatus::kPass, ""};
  const bool undeclared = has_undeclared_union(expr);
  if (undeclared) {
    disjoint.status = CheckStatus::kSkip;
    disjoint.detail = "expression has unions without a disjointness declaration";
  }
  std::optional<TreeCover> prev;
  if (first_stage > 0) prev = tree_cover(expr, first_stage - 1, options, true);
  std::size_t largest = 0;
  for (int k = first_stage; k <= last_stage; ++k) {
    TreeCover cur = tree_cover(expr, k, options, true);
    largest = std::max(largest, cur.count);
    const std::string at = "stage " + std::to_string(k) + ": ";
    if (prev && nesting.status == CheckStatus::kPass) {
      for (std::size_t i = 0; i < cur.count; ++i) {
        if (!box_contains(prev->boxes[cur.parent[i]], cur.boxes[i])) {
          nesting.status = CheckStatus::kFail;
          nesting.detail = at + "box " + box_str(cur.boxes[i]) + " escapes parent " +
                           box_str(prev->boxes[cur.parent[i]]);
          break;
        }
      }
    }
    if (disjoint.status == CheckStatus::kPass) {
      if (const auto hit = find_overlap(cur.boxes)) {
        disjoint.status = CheckStatus::kFail;
        disjoint.detail = at + "boxes " + std::to_string(hit->first) + " and " + std::to_string(hit->second) +
                          " overlap: " + box_str(cur.boxes[hit->first]) + " and " + box_str(cur.boxes[hit->second]);
      }
    }
    if (count.status == CheckStatus::kPass) {
      if (const auto expected = expected_count(expr, k, options);
          expected && *expected != Integer(std::to_string(cur.count))) {
        count.status = CheckStatus::kFail;
        count.detail = at + std::to_string(cur.count) + " boxes, expected " + expected->get_str();
      } else if (prev) {
        std::vector<char> has_child(prev->count, 0);
        for (std::size_t p : cur.parent) has_child[p] = 1;
        const auto orphan = std::find(has_child.begin(), has_child.end(), 0);
        if (orphan != has_child.end()) {
          count.status = CheckStatus::kFail;
          count.detail = at + "stage-" + std::to_string(k - 1) + " box " +
                         std::to_string(orphan - has_child.begin()) + " has no surviving child";
        }
      }
    }
    prev = std::move(cur);
  }
  if (nesting.status == CheckStatus::kPass) {
    nesting.detail = "every box lies in its parent over " + range;
    if (first_stage == 0 && last_stage == 0) {
      nesting.status = CheckStatus::kSkip;
      nesting.detail = "single stage 0";
    }
  }
  if (disjoint.status == CheckStatus::kPass) disjoint.detail = "no interior overlaps over " + range;
  if (count.status == CheckStatus::kPass) {
    count.detail = "box counts match the construction tree (largest " + std::to_string(largest) + ")";
  }
  report.checks.push_back(std::move(nesting));
  report.checks.push_back(std::move(disjoint));
  report.checks.push_back(std::move(count));

  {
    CheckResult check{"measure", CheckStatus::kPass, ""};
    const MeasureValue limit = truncated_measure(expr, options);
    std::optional<Scalar> last_volume;
    std::optional<Scalar> last_gap;
    for (int k = first_stage; k <= last_stage && check.status == CheckStatus::kPass; ++k) {
      const Scalar volume = stage_volume(expr, k, options);
      const Scalar gap = distance_to(volume, limit);
      if (volume.definitely_less(limit.lo)) {
        check.status = CheckStatus::kFail;
        check.detail = "stage " + std::to_string(k) + " volume " + volume.str() + " is below the limit " + limit.str();
      } else if (last_volume && last_volume->definitely_less(volume)) {
        check.status = CheckStatus::kFail;
        check.detail = "stage " + std::to_string(k) + " volume " + volume.str() + " exceeds stage " +
                       std::to_string(k - 1) + " volume " + last_volume->str();
      } else if (last_gap && last_gap->definitely_less(gap)) {
        check.status = CheckStatus::kFail;
        check.detail = "stage " + std::to_string(k) + " moved away from the limit measure";
      }
      last_volume = volume;
      last_gap = gap;
    }
    if (check.status == CheckStatus::kPass) {
      const Scalar full_gap = distance_to(*last_volume, analytic_measure(expr));
      check.detail = "volumes non-increasing toward " + limit.str() + "; stage " + std::to_string(last_stage) +
                     " volume " + last_volume->decimal(12) + ", deviation from analytic measure " +
                     full_gap.decimal(12);
    }
    report.checks.push_back(std::move(check));
  }

  {
    CheckResult check{"boxdim", CheckStatus::kSkip, ""};
    const int lo = std::max(first_stage, 1);
    const auto ratio = natural_ratio(expr);
    if (!ratio) {
      check.detail = "natural scales are not exact for this expression";
    } else if (last_stage < lo + 1) {
      check.detail = "needs at least two stages >= 1";
    } else {
      const HausdorffDim dim = analytic_hausdorff_dim(expr);
      const FitReport fit = box_dim_fit(expr, lo, last_stage, GridMode::kNatural, options);
      const double expected = dim.value.to_double();
      const double delta = std::abs(fit.slope - expected);
      check.status = delta <= tolerance ? CheckStatus::kPass : CheckStatus::kFail;
      check.detail = "slope " + format_double(fit.slope) + " vs " + dim.value.str() + " = " +
                     format_double(expected) + ", |delta| " + format_double(delta) + " (tol " +
                     format_double(tolerance) + ")";
    }
    report.checks.push_back(std::move(check));
  }
  return report;
}

VerifyReport verify_covers(const std::vector<BoxCover>& covers) {
  VerifyReport report;
  CheckResult disjoint{"disjointness", CheckStatus::kPass, "no interior overlaps"};
  CheckResult nesting{"nesting", CheckStatus::kPass, "every box lies in a box of the previous cover"};
  for (std::size_t c = 0; c < covers.size(); ++c) {
    const BoxCover& cover = covers[c];
    if (disjoint.status == CheckStatus::kPass) {
      if (const auto hit = find_overlap(cover.boxes)) {
        disjoint.status = CheckStatus::kFail;
        disjoint.detail = "cover " + std::to_string(c) + ": boxes " + std::to_string(hit->first) + " and " +
                          std::to_string(hit->second) + " overlap: " + box_str(cover.boxes[hit->first]) +
                          " and " + box_str(cover.boxes[hit->second]);
      }
    }
    if (c == 0 || nesting.status != CheckStatus::kPass) continue;
    for (std::size_t i = 0; i < cover.boxes.size(); ++i) {
      const auto& outer = covers[c - 1].boxes;
      const bool inside = std::any_of(outer.begin(), outer.end(),
                                      [&](const Box& parent) { return box_contains(parent, cover.boxes[i]); });
      if (!inside) {
        nesting.status = CheckStatus::kFail;
        nesting.detail = "cover " + std::to_string(c) + " box " + box_str(cover.boxes[i]) +
                         " lies in no box of the previous cover";
        break;
      }
    }
  }
  if (covers.size() < 2 && nesting.status == CheckStatus::kPass) {
    nesting.status = CheckStatus::kSkip;
    nesting.detail = "needs two covers";
  }
  report.checks.push_back(std::move(disjoint));
  report.checks.push_back(std::move(nesting));
  return report;
}

}  // namespace frx
