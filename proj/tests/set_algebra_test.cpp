#include <doctest.h>

#include <algorithm>
#include <set>

#include "frx/analytics.hpp"
#include "frx/cover.hpp"
#include "frx/error.hpp"
#include "frx/expr.hpp"
#include "frx/index_set.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using frx::Box;
using frx::DimValue;
using frx::ErrorKind;
using frx::Expr;
using frx::Family;
using frx::IndexSet;
using frx::Interval;
using frx::Rational;
using frx::Scalar;

namespace {

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const frx::Error& e) {
    return e.kind();
  }
  FAIL("expected an frx::Error");
  return ErrorKind::kParse;
}

Expr middle_third() { return Expr::cantor(frx::middle_third()); }

Expr fat_cantor() {
  return Expr::cantor(
      frx::CantorSpec{frx::RemovingSequence::geometric(1, Scalar(Rational(1, 4)), Scalar(Rational(1, 2)))});
}

Expr shifted(const Expr& e, std::vector<Scalar> shifts) {
  std::vector<Scalar> ones(shifts.size(), Scalar(1));
  return Expr::affine(std::move(ones), std::move(shifts), e);
}

Box box(std::initializer_list<std::pair<Rational, Rational>> sides) {
  Box b;
  for (const auto& [lo, hi] : sides) b.push_back(Interval{Scalar(lo), Scalar(hi)});
  return b;
}

}  // namespace

TEST_CASE("index set canonical forms") {
  CHECK(IndexSet::naturals().str() == "{from=1, period=1}");
  CHECK(IndexSet::evens().str() == "{from=1, period=01}");
  const IndexSet mixed = IndexSet::make({3, 1}, 6, "01");
  CHECK(mixed.str() == "{1,3; from=6, period=01}");
  CHECK(IndexSet::make({}, 1, "1010") == IndexSet::odds());
  CHECK(IndexSet::make({1, 3, 5}, 7, "10") == IndexSet::odds());
  CHECK(IndexSet::make({2}, 3, "1") == IndexSet::make({}, 2, "1"));
  CHECK(IndexSet::make({}, 2, "1").str() == "{from=2, period=1}");
  // Explicit members at or past the tail start fold into the tail.
  CHECK(IndexSet::make({1, 2, 3, 4, 5}, 2, "1") == IndexSet::naturals());
  CHECK(IndexSet::make({2, 9}, 1, "10") == IndexSet::make({2, 9}, 1, "10"));
  CHECK_FALSE(IndexSet::evens() == IndexSet::odds());
}

TEST_CASE("index set membership and weight") {
  const IndexSet mixed = IndexSet::make({1, 3}, 6, "01");
  CHECK(mixed.first(6) == std::vector<long>{1, 3, 7, 9, 11, 13});
  CHECK(mixed.contains(3));
  CHECK_FALSE(mixed.contains(6));
  CHECK_FALSE(mixed.contains(0));
  CHECK(mixed.min_element() == 1);
  CHECK(IndexSet::evens().min_element() == 2);
  CHECK(IndexSet::naturals().dyadic_weight() == 1);
  CHECK(IndexSet::evens().dyadic_weight() == Rational(1, 3));
  CHECK(IndexSet::odds().dyadic_weight() == Rational(2, 3));
  // 1/2 + 1/8 + (1/128) / (1 - 1/4)
  CHECK(mixed.dyadic_weight() == Rational(61, 96));
}

TEST_CASE("index set errors") {
  CHECK(kind_of([] { return IndexSet::make({1, 2}, 3, "00"); }) == ErrorKind::kIndexSetFinite);
  CHECK(kind_of([] { return IndexSet::make({0}, 3, "1"); }) == ErrorKind::kOutOfRange);
  CHECK(kind_of([] { return IndexSet::make({}, 1, "12"); }) == ErrorKind::kOutOfRange);
  CHECK(kind_of([] { return IndexSet::make({}, 0, "1"); }) == ErrorKind::kOutOfRange);
}

TEST_CASE("expression validation") {
  CHECK(kind_of([] { return Expr::cube(0); }) == ErrorKind::kOutOfRange);
  CHECK(kind_of([] { return Expr::affine({Scalar(1)}, {Scalar(0), Scalar(0)}, middle_third()); }) ==
        ErrorKind::kWrongDimension);
  CHECK(kind_of([] { return Expr::affine({Scalar(0)}, {Scalar(0)}, middle_third()); }) == ErrorKind::kOutOfRange);
  CHECK(kind_of([] { return Expr::union_of({middle_third(), Expr::cube(2)}); }) == ErrorKind::kWrongDimension);
  CHECK(kind_of([] { return Expr::prune(Expr::cube(1), 1); }) == ErrorKind::kInvalidExpression);
  CHECK(kind_of([] { return Expr::prune(Expr::prune(middle_third(), 1), 2); }) == ErrorKind::kInvalidExpression);
  CHECK(kind_of([] { return Expr::indexed_union(Family::ramp(1), IndexSet::naturals(), 0); }) ==
        ErrorKind::kOutOfRange);
  CHECK(kind_of([] { return frx::symmetrize(Expr::cube(2)); }) == ErrorKind::kWrongDimension);
}

TEST_CASE("expression structure") {
  const Expr square = Expr::product({middle_third(), middle_third()});
  CHECK(square.kind() == frx::NodeKind::kProduct);
  CHECK(square.ambient_dim() == 2);
  CHECK(Expr::product({square, middle_third()}).ambient_dim() == 3);
  CHECK(square == Expr::product({middle_third(), middle_third()}));
  CHECK_FALSE(square == Expr::product({middle_third(), fat_cantor()}));
  CHECK(Expr::prune(square, 1) == Expr::prune(square, 1));
  CHECK_FALSE(Expr::prune(square, 1) == Expr::prune(square, 2));
  CHECK_FALSE(Expr::union_of({square, square}) == Expr::union_of({square, square}, true));
  CHECK(frx::is_cantor_based(square));
  CHECK_FALSE(frx::is_cantor_based(Expr::cube(1)));
  CHECK(frx::has_undeclared_union(Expr::union_of({middle_third(), fat_cantor()})));
  CHECK_FALSE(frx::has_undeclared_union(Expr::union_of({middle_third(), fat_cantor()}, true)));
}

TEST_CASE("family members sit in dyadic slots") {
  const Family thin = Family::thin_blocks(Rational(1, 2));
  for (long s = 1; s <= 5; ++s) {
    const Box b = frx::bounding_box(thin.member(s));
    CHECK(b[0].lo == Scalar(oracle::qpow(Rational(1, 2), s)));
    CHECK(b[0].hi == Scalar(oracle::qpow(Rational(1, 2), s - 1)));
    CHECK(frx::hausdorff_dim_uniform(thin.member(s).as_affine().child.as_cantor().spec) == DimValue(Rational(1, 2)));
    CHECK(thin.member(s).as_affine().child.as_cantor().spec.order() == s);
  }
  const Family ramp = Family::ramp(2);
  CHECK(frx::analytic_hausdorff_dim(ramp.member(3)).value == DimValue(Rational(3, 4)));
  CHECK(Family::fat_blocks(Rational(1, 2)).measure(IndexSet::naturals()) == Scalar(Rational(1, 2)));
  CHECK(Family::fat_blocks(Rational(3, 2)).measure(IndexSet::evens()) == Scalar(Rational(1)));
  CHECK(thin.str() == "thin_blocks(r=1/2)");
  CHECK(Family::ramp_blocks(IndexSet::odds(), 4).str() == "ramp_blocks(index={from=1, period=10}, truncate=4)");
  CHECK(kind_of([&] { return thin.member(0); }) == ErrorKind::kOutOfRange);
}

TEST_CASE("analytic rules on primitives") {
  const frx::DimReport mt = frx::is_fractal(middle_third());
  CHECK(mt.hausdorff_dim.value == DimValue::log_ratio(1, 2, 3));
  CHECK(mt.hausdorff_dim.exact);
  CHECK(mt.inductive_dim == 0);
  CHECK(mt.lebesgue_measure.lo == Scalar(0));
  CHECK(mt.lebesgue_measure.is_exact());
  CHECK(mt.is_fractal);
  CHECK_FALSE(mt.trace.empty());

  const frx::DimReport fat = frx::is_fractal(fat_cantor());
  CHECK(fat.hausdorff_dim.value == DimValue(1));
  CHECK(fat.lebesgue_measure.lo == Scalar(Rational(1, 2)));
  CHECK(fat.inductive_dim == 0);
  CHECK(fat.is_fractal);

  const frx::DimReport cube = frx::is_fractal(Expr::cube(3));
  CHECK(cube.hausdorff_dim.value == DimValue(3));
  CHECK(cube.inductive_dim == 3);
  CHECK_FALSE(cube.is_fractal);
}

TEST_CASE("analytic rules on composites") {
  const Expr square = Expr::product({middle_third(), middle_third()});
  CHECK(frx::analytic_hausdorff_dim(square).value == DimValue::log_ratio(2, 2, 3));
  CHECK(frx::analytic_ind_dim(square) == 0);

  const Expr scaled = Expr::affine({Scalar(2), Scalar(-3)}, {Scalar(0), Scalar(0)}, Expr::cube(2));
  CHECK(frx::analytic_measure(scaled).lo == Scalar(6));
  CHECK(frx::analytic_hausdorff_dim(scaled).value == DimValue(2));

  const Expr overlapping = Expr::union_of({Expr::cube(1), shifted(Expr::cube(1), {Scalar(Rational(1, 2))})});
  const frx::MeasureValue bound = frx::analytic_measure(overlapping);
  CHECK(bound.lo == Scalar(1));
  CHECK(bound.hi == Scalar(2));
  CHECK_FALSE(bound.is_exact());
  CHECK(bound.str() == "[1, 2]");

  const Expr disjoint = Expr::union_of({middle_third(), shifted(fat_cantor(), {Scalar(2)})}, true);
  CHECK(frx::analytic_measure(disjoint).lo == Scalar(Rational(1, 2)));
  CHECK(frx::analytic_hausdorff_dim(disjoint).value == DimValue(1));

  const Expr thin = Expr::cantor(testing_support::to_spec({1, Rational(1, 8), 0}));
  const Expr mixed = Expr::union_of({middle_third(), shifted(thin, {Scalar(3)})}, true);
  CHECK(frx::analytic_hausdorff_dim(mixed).value == DimValue::log_ratio(1, 2, 3));
}

TEST_CASE("rules outside the calculus are reported") {
  const Expr cube_times_dust = Expr::product({Expr::cube(1), middle_third()});
  CHECK(frx::analytic_hausdorff_dim(cube_times_dust).value == DimValue(1) + DimValue::log_ratio(1, 2, 3));
  CHECK(kind_of([&] { return frx::analytic_ind_dim(cube_times_dust); }) == ErrorKind::kRuleInapplicable);
  CHECK(kind_of([&] { return frx::is_fractal(cube_times_dust); }) == ErrorKind::kRuleInapplicable);

  const Expr pruned = Expr::prune(Expr::product({middle_third(), middle_third()}), 5);
  const frx::HausdorffDim bound = frx::analytic_hausdorff_dim(pruned);
  CHECK_FALSE(bound.exact);
  CHECK(bound.str() == "<= 2*log(2)/log(3)");
  CHECK(kind_of([&] { return frx::is_fractal(pruned); }) == ErrorKind::kRuleInapplicable);

  // A bound below an exact part is absorbed by the max rule.
  const Expr absorbed = Expr::union_of({Expr::cube(1), shifted(Expr::prune(middle_third(), 1), {Scalar(2)})}, true);
  const frx::DimReport report = frx::is_fractal(absorbed);
  CHECK(report.hausdorff_dim.exact);
  CHECK(report.hausdorff_dim.value == DimValue(1));
  CHECK_FALSE(report.is_fractal);
}

TEST_CASE("indexed unions") {
  const Expr thin = Expr::indexed_union(Family::thin_blocks(Rational(1, 3)), IndexSet::evens(), 4);
  CHECK(frx::analytic_hausdorff_dim(thin).value == DimValue(Rational(1, 3)));
  CHECK(frx::analytic_measure(thin).lo == Scalar(0));
  CHECK(frx::analytic_ind_dim(thin) == 0);
  const Expr fat = Expr::indexed_union(Family::fat_blocks(Rational(1, 2)), IndexSet::odds(), 4);
  CHECK(frx::analytic_measure(fat).lo == Scalar(Rational(1, 3)));
  CHECK(frx::analytic_hausdorff_dim(fat).value == DimValue(1));
}

TEST_CASE("geometry helpers") {
  CHECK(frx::interiors_overlap(box({{0, 2}, {0, 2}}), box({{1, 3}, {1, 3}})));
  CHECK_FALSE(frx::interiors_overlap(box({{0, 1}, {0, 2}}), box({{1, 3}, {1, 3}})));
  CHECK(frx::interiors_overlap(box({{0, 1}}), box({{Rational(1, 2), Rational(1, 2)}})));
  CHECK_FALSE(frx::interiors_overlap(box({{0, 1}}), box({{1, 1}})));
  CHECK(frx::box_contains(box({{0, 1}}), box({{0, 1}})));
  CHECK_FALSE(frx::box_contains(box({{0, 1}}), box({{Rational(1, 2), 2}})));
  CHECK(frx::box_volume(box({{0, Rational(1, 2)}, {1, 4}})) == Scalar(Rational(3, 2)));
  const Box h = frx::hull({box({{0, 1}, {2, 3}}), box({{-1, 0}, {5, 6}})});
  CHECK(h == box({{-1, 1}, {2, 6}}));

  const std::vector<Box> boxes{box({{0, 1}}), box({{2, 3}}), box({{Rational(5, 2), 4}})};
  const auto hit = frx::find_overlap(boxes);
  REQUIRE(hit);
  CHECK(hit->first == 1);
  CHECK(hit->second == 2);
  const std::vector<std::size_t> same_label{0, 1, 1};
  CHECK_FALSE(frx::find_overlap(boxes, &same_label));
}

TEST_CASE("stage covers of composites") {
  const Expr square = Expr::product({middle_third(), middle_third()});
  const frx::BoxCover two = frx::expr_stage_cover(square, 2);
  CHECK(two.dim == 2);
  CHECK(two.stage == 2);
  REQUIRE(two.boxes.size() == 16);
  CHECK(two.boxes[0] == box({{0, Rational(1, 9)}, {0, Rational(1, 9)}}));
  CHECK(two.boxes[1] == box({{0, Rational(1, 9)}, {Rational(2, 9), Rational(1, 3)}}));
  const auto axis = oracle::cantor_intervals(1, Rational(1, 3), 0, 2);
  CHECK(testing_support::to_qboxes(two.boxes) == oracle::product_boxes({axis, axis}));

  const Expr mapped = Expr::affine({Scalar(-2)}, {Scalar(1)}, middle_third());
  const frx::BoxCover one = frx::expr_stage_cover(mapped, 1);
  REQUIRE(one.boxes.size() == 2);
  CHECK(one.boxes[0] == box({{Rational(1, 3), 1}}));
  CHECK(one.boxes[1] == box({{-1, Rational(-1, 3)}}));
  CHECK(frx::bounding_box(mapped) == box({{-1, 1}}));

  CHECK(frx::expr_stage_cover(Expr::cube(2), 5).boxes.size() == 1);
}

TEST_CASE("symmetrize is symmetric about 1/2") {
  const frx::BoxCover cover = frx::expr_stage_cover(frx::symmetrize(middle_third()), 3);
  CHECK(cover.boxes.size() == 16);
  std::set<std::pair<Rational, Rational>> sides;
  for (const Box& b : cover.boxes) sides.insert({b[0].lo.rational(), b[0].hi.rational()});
  for (const auto& [lo, hi] : sides) CHECK(sides.count({1 - hi, 1 - lo}) == 1);
  CHECK(frx::bounding_box(frx::symmetrize(middle_third())) == box({{0, 1}}));
}

TEST_CASE("declared disjointness is checked") {
  const Expr touching = Expr::union_of({Expr::cube(1), shifted(Expr::cube(1), {Scalar(1)})}, true);
  CHECK(frx::expr_stage_cover(touching, 0).boxes.size() == 2);
  const Expr overlapping = Expr::union_of({Expr::cube(1), shifted(Expr::cube(1), {Scalar(Rational(1, 2))})}, true);
  CHECK(kind_of([&] { return frx::expr_stage_cover(overlapping, 0); }) == ErrorKind::kOverlapDetected);
  // Overlap that only appears in the limit hull but not at the stage is fine.
  const Expr interleaved = Expr::union_of({middle_third(), shifted(middle_third(), {Scalar(Rational(1, 3))})});
  CHECK(frx::expr_stage_cover(interleaved, 1).boxes.size() == 4);
}

TEST_CASE("indexed union covers") {
  const Expr thin = Expr::indexed_union(Family::thin_blocks(Rational(1, 2)), IndexSet::naturals(), 8);
  // Member s has order s, so it contributes (s+1)^k boxes.
  long expected = 0;
  for (long s = 1; s <= 8; ++s) expected += (s + 1) * (s + 1);
  CHECK(frx::expr_stage_cover(thin, 2).boxes.size() == static_cast<std::size_t>(expected));
  frx::CoverOptions options;
  options.truncation = 2;
  CHECK(frx::expr_stage_cover(thin, 2, options).boxes.size() == 4 + 9);
  const Box extent = frx::bounding_box(thin);
  CHECK(extent[0].lo == Scalar(Rational(1, 256)));
  CHECK(extent[0].hi == Scalar(1));
}

TEST_CASE("tree parents") {
  const frx::TreeCover tree = frx::tree_cover(Expr::cantor(testing_support::to_spec({2, Rational(1, 5), 0})), 3, {}, true);
  CHECK(tree.count == 27);
  CHECK(tree.parent_count == 9);
  for (std::size_t i = 0; i < tree.count; ++i) CHECK(tree.parent[i] == i / 3);
  const frx::TreeCover without = frx::tree_cover(middle_third(), 3, {}, false);
  CHECK(without.boxes.empty());
  CHECK(without.count == 8);
}

TEST_CASE("prune keeps a seeded subtree") {
  const Expr square = Expr::product({middle_third(), middle_third()});
  for (std::uint64_t seed : {0ull, 1ull, 42ull, 1234567ull}) {
    const Expr pruned = Expr::prune(square, seed);
    std::optional<frx::TreeCover> prev;
    for (int k = 0; k <= 4; ++k) {
      const frx::TreeCover cur = frx::tree_cover(pruned, k, {}, true);
      CHECK(cur.count >= 1);
      CHECK(cur.count <= (std::size_t{1} << (2 * k)));
      if (prev) {
        std::vector<int> children(prev->count, 0);
        for (std::size_t i = 0; i < cur.count; ++i) {
          ++children[cur.parent[i]];
          CHECK(frx::box_contains(prev->boxes[cur.parent[i]], cur.boxes[i]));
        }
        for (int c : children) CHECK(c >= 1);
      }
      prev = cur;
    }
    const frx::BoxCover a = frx::expr_stage_cover(pruned, 4);
    const frx::BoxCover b = frx::expr_stage_cover(pruned, 4);
    CHECK(a.boxes == b.boxes);
  }
  CHECK_FALSE(frx::expr_stage_cover(Expr::prune(square, 1), 4).boxes ==
              frx::expr_stage_cover(Expr::prune(square, 2), 4).boxes);
  CHECK(frx::prune_hash(1, 2, 3) == frx::prune_hash(1, 2, 3));
  CHECK_FALSE(frx::prune_hash(1, 2, 3) == frx::prune_hash(2, 2, 3));
}

TEST_CASE("cover caps") {
  frx::CoverOptions options;
  options.cap = 1000;
  const Expr square = Expr::product({middle_third(), middle_third()});
  CHECK(frx::expr_stage_cover(square, 4, options).boxes.size() == 256);
  CHECK(kind_of([&] { return frx::expr_stage_cover(square, 5, options); }) == ErrorKind::kCapExceeded);
}
