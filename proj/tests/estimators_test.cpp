#include <doctest.h>

#include <cmath>

#include "frx/analytics.hpp"
#include "frx/cover.hpp"
#include "frx/error.hpp"
#include "frx/estimators.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using frx::Box;
using frx::BoxCover;
using frx::CheckStatus;
using frx::ErrorKind;
using frx::Expr;
using frx::GridSpec;
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
  return Expr::cantor(testing_support::to_spec({1, Rational(1, 4), Rational(1, 2)}));
}

Box box(std::initializer_list<std::pair<Rational, Rational>> sides) {
  Box b;
  for (const auto& [lo, hi] : sides) b.push_back(Interval{Scalar(lo), Scalar(hi)});
  return b;
}

std::uint64_t oracle_count(const BoxCover& cover, const Rational& eps, std::vector<Rational> origin) {
  return oracle::brute_force_count(testing_support::to_qboxes(cover.boxes), eps, origin);
}

std::uint64_t library_count(const BoxCover& cover, const Rational& eps, std::vector<Rational> origin) {
  std::vector<Scalar> o(origin.begin(), origin.end());
  return frx::box_count(cover, GridSpec{Scalar(eps), o});
}

}  // namespace

TEST_CASE("box counts at natural scales") {
  for (int k = 0; k <= 8; ++k) {
    const BoxCover cover = frx::expr_stage_cover(middle_third(), k);
    const Rational eps = oracle::qpow(Rational(1, 3), k);
    CHECK(frx::box_count(cover, GridSpec{Scalar(eps), std::nullopt}) == (std::uint64_t{1} << k));
  }
  const Expr square = Expr::product({middle_third(), middle_third()});
  for (int k = 0; k <= 5; ++k) {
    const BoxCover cover = frx::expr_stage_cover(square, k);
    CHECK(frx::box_count(cover, GridSpec{Scalar(oracle::qpow(Rational(1, 3), k)), std::nullopt}) ==
          (std::uint64_t{1} << (2 * k)));
  }
}

TEST_CASE("box counts agree with cell enumeration off the natural grid") {
  const BoxCover mt = frx::expr_stage_cover(middle_third(), 4);
  for (const Rational& eps : {Rational(1, 4), Rational(1, 5), Rational(1, 10), Rational(2, 7), Rational(1, 81)}) {
    for (const Rational& o : {Rational(0), Rational(-1, 7), Rational(1, 20)}) {
      CHECK(library_count(mt, eps, {o}) == oracle_count(mt, eps, {o}));
    }
  }
  const BoxCover sq = frx::expr_stage_cover(Expr::product({middle_third(), fat_cantor()}), 3);
  for (const Rational& eps : {Rational(1, 8), Rational(1, 9), Rational(3, 40)}) {
    CHECK(library_count(sq, eps, {0, Rational(-1, 3)}) == oracle_count(sq, eps, {0, Rational(-1, 3)}));
  }
}

TEST_CASE("box count conventions") {
  // A side ending on a grid line does not reach into the next cell.
  BoxCover cover{0, 1, {box({{0, Rational(1, 2)}})}};
  CHECK(frx::box_count(cover, GridSpec{Scalar(Rational(1, 4)), std::vector<Scalar>{Scalar(0)}}) == 2);
  // A point on a grid line belongs to the cell above it.
  cover.boxes = {box({{Rational(1, 4), Rational(1, 4)}})};
  CHECK(frx::box_count(cover, GridSpec{Scalar(Rational(1, 4)), std::vector<Scalar>{Scalar(0)}}) == 1);
  cover.boxes = {box({{0, Rational(1, 4)}}), box({{Rational(1, 4), Rational(1, 4)}})};
  CHECK(frx::box_count(cover, GridSpec{Scalar(Rational(1, 4)), std::vector<Scalar>{Scalar(0)}}) == 2);
  // Overlapping boxes are counted once per cell.
  cover.boxes = {box({{0, 1}}), box({{Rational(1, 2), Rational(3, 2)}})};
  CHECK(frx::box_count(cover, GridSpec{Scalar(Rational(1, 2)), std::nullopt}) == 3);
}

TEST_CASE("box count errors") {
  BoxCover cover{0, 1, {box({{0, 1}})}};
  CHECK(kind_of([&] { return frx::box_count(cover, GridSpec{Scalar(0), std::nullopt}); }) == ErrorKind::kOutOfRange);
  CHECK(kind_of([&] { return frx::box_count(cover, GridSpec{Scalar(Rational(1, 1000)), std::nullopt}, 100); }) ==
        ErrorKind::kCapExceeded);
  CHECK(kind_of([&] { return frx::box_count(BoxCover{}, GridSpec{Scalar(1), std::nullopt}); }) ==
        ErrorKind::kOutOfRange);
  CHECK(kind_of([&] {
          return frx::box_count(cover, GridSpec{Scalar(1), std::vector<Scalar>{Scalar(0), Scalar(0)}});
        }) == ErrorKind::kWrongDimension);
}

TEST_CASE("natural fit of the middle third is exact") {
  const frx::FitReport fit = frx::box_dim_fit(middle_third(), 1, 8);
  const double expected = std::log(2.0) / std::log(3.0);
  CHECK(std::abs(fit.slope - expected) <= 1e-12);
  CHECK(std::abs(fit.intercept) <= 1e-12);
  CHECK(fit.residual <= 1e-12);
  REQUIRE(fit.points.size() == 8);
  for (const frx::FitPoint& p : fit.points) {
    CHECK(std::abs(p.ratio - expected) <= 1e-12);
    CHECK(p.count == (std::uint64_t{1} << p.stage));
    CHECK(p.epsilon == Scalar(oracle::qpow(Rational(1, 3), p.stage)));
  }
}

TEST_CASE("dyadic fit uses grid counts") {
  const frx::FitReport fit = frx::box_dim_fit(middle_third(), 1, 8, frx::GridMode::kDyadic);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const frx::FitPoint& p : fit.points) {
    const Rational eps = oracle::qpow(Rational(1, 2), p.stage);
    CHECK(p.epsilon == Scalar(eps));
    const std::uint64_t count = oracle_count(frx::expr_stage_cover(middle_third(), p.stage), eps, {0});
    CHECK(p.count == count);
    const double x = p.stage * std::log(2.0);
    const double y = std::log(static_cast<double>(count));
    sx += x, sy += y, sxx += x * x, sxy += x * y;
  }
  const double m = static_cast<double>(fit.points.size());
  CHECK(std::abs(fit.slope - (m * sxy - sx * sy) / (m * sxx - sx * sx)) <= 1e-12);
}

TEST_CASE("fat Cantor ratios approach one") {
  const frx::FitReport fit = frx::box_dim_fit(fat_cantor(), 1, 10);
  for (std::size_t i = 1; i < fit.points.size(); ++i) CHECK(fit.points[i].ratio > fit.points[i - 1].ratio);
  CHECK(fit.points.back().ratio > 0.9);
}

TEST_CASE("fit errors") {
  CHECK(kind_of([] { return frx::box_dim_fit(middle_third(), 3, 3); }) == ErrorKind::kOutOfRange);
  CHECK(kind_of([] { return frx::box_dim_fit(middle_third(), -1, 3); }) == ErrorKind::kOutOfRange);
}

TEST_CASE("stage volumes") {
  CHECK(frx::stage_volume(fat_cantor(), 10) == Scalar(Rational(1, 2) + Rational(1, 2048)));
  CHECK(frx::stage_volume(Expr::product({fat_cantor(), fat_cantor()}), 1) == Scalar(Rational(9, 16)));
  const Expr overlapping = Expr::union_of(
      {fat_cantor(), Expr::affine({Scalar(1)}, {Scalar(Rational(1, 3))}, fat_cantor())});
  for (int k = 0; k <= 4; ++k) {
    const auto boxes = testing_support::to_qboxes(frx::expr_stage_cover(overlapping, k).boxes);
    CHECK(frx::stage_volume(overlapping, k).rational() == oracle::brute_force_volume(boxes));
  }
  const Expr pruned = Expr::prune(Expr::product({fat_cantor(), fat_cantor()}), 9);
  const auto boxes = testing_support::to_qboxes(frx::expr_stage_cover(pruned, 3).boxes);
  CHECK(frx::stage_volume(pruned, 3).rational() == oracle::brute_force_volume(boxes));
  // Overlap inside a pruned union is counted once.
  const Expr pruned_overlap = Expr::prune(Expr::union_of({fat_cantor(), fat_cantor()}), 3);
  CHECK(frx::stage_volume(pruned_overlap, 0) == Scalar(1));
}

TEST_CASE("union volume") {
  const std::vector<Box> boxes{box({{0, 2}, {0, 2}}), box({{1, 3}, {1, 3}}), box({{5, 6}, {0, 1}})};
  CHECK(frx::union_volume(boxes) == Scalar(8));
  CHECK(frx::union_volume({}) == Scalar(0));
}

TEST_CASE("measure series") {
  const auto series = frx::measure_series(fat_cantor(), 0, 6);
  REQUIRE(series.size() == 7);
  for (std::size_t i = 0; i < series.size(); ++i) {
    const int k = series[i].stage;
    CHECK(series[i].deviation.rational() == Rational(1, 2) * oracle::qpow(Rational(1, 2), k));
    if (i > 0) CHECK(series[i].volume.definitely_less(series[i - 1].volume));
  }
}

TEST_CASE("verify passes on sound expressions") {
  const frx::VerifyReport mt = frx::verify(middle_third(), 1, 8);
  CHECK_MESSAGE(mt.passed(), mt.str());
  REQUIRE(mt.find("boxdim") != nullptr);
  CHECK(mt.find("boxdim")->status == CheckStatus::kPass);
  CHECK(mt.find("count")->status == CheckStatus::kPass);
  CHECK(mt.find("nonexistent") == nullptr);
  CHECK(mt.str().find("PASS measure") != std::string::npos);

  const frx::VerifyReport fat = frx::verify(fat_cantor(), 0, 8);
  CHECK_MESSAGE(fat.passed(), fat.str());

  const Expr undeclared = Expr::union_of({middle_third(), Expr::affine({Scalar(1)}, {Scalar(2)}, middle_third())});
  const frx::VerifyReport u = frx::verify(undeclared, 1, 3);
  CHECK(u.passed());
  CHECK(u.find("disjointness")->status == CheckStatus::kSkip);

  const frx::VerifyReport pruned = frx::verify(Expr::prune(Expr::product({middle_third(), middle_third()}), 4), 1, 4);
  CHECK_MESSAGE(pruned.passed(), pruned.str());
  CHECK(pruned.find("boxdim")->status == CheckStatus::kSkip);
}

TEST_CASE("verify reports overlapping undeclared unions through covers") {
  const Expr overlapping =
      Expr::union_of({Expr::cube(1), Expr::affine({Scalar(1)}, {Scalar(Rational(1, 2))}, Expr::cube(1))});
  const frx::BoxCover cover = frx::expr_stage_cover(overlapping, 0);
  const frx::VerifyReport report = frx::verify_covers({cover});
  CHECK_FALSE(report.passed());
  CHECK(report.find("disjointness")->status == CheckStatus::kFail);
  CHECK(report.find("disjointness")->detail.find("boxes 0 and 1") != std::string::npos);
}

TEST_CASE("verify_covers catches broken nesting") {
  BoxCover outer{0, 1, {box({{0, 1}})}};
  BoxCover inner{1, 1, {box({{0, Rational(1, 3)}}), box({{Rational(2, 3), Rational(4, 3)}})}};
  const frx::VerifyReport report = frx::verify_covers({outer, inner});
  CHECK(report.find("nesting")->status == CheckStatus::kFail);
  CHECK(report.find("disjointness")->status == CheckStatus::kPass);
  inner.boxes[1] = box({{Rational(2, 3), 1}});
  CHECK(frx::verify_covers({outer, inner}).passed());
}
