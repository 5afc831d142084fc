#include <doctest.h>

#include <string>

#include "frx/constructors.hpp"
#include "frx/error.hpp"
#include "frx/frx_format.hpp"

using frx::ErrorKind;
using frx::Expr;
using frx::IndexSet;
using frx::ParseError;
using frx::Rational;
using frx::Scalar;

namespace {

ParseError parse_error(const std::string& text) {
  try {
    frx::parse_frx(text);
  } catch (const ParseError& e) {
    return e;
  }
  FAIL("expected a ParseError for: " << text);
  return ParseError(ErrorKind::kParse, 0, 0, {}, "");
}

bool expects(const ParseError& e, const std::string& token) {
  for (const std::string& t : e.expected()) {
    if (t == token) return true;
  }
  return false;
}

void round_trip(const Expr& e) {
  const std::string text = frx::emit_frx(e);
  const Expr back = frx::parse_frx(text);
  CHECK_MESSAGE(back == e, text);
  CHECK(frx::emit_frx(back) == text);
}

}  // namespace

TEST_CASE("middle third") {
  const Expr e = frx::parse_frx("cantor(s=1, beta=1/3, l=0)");
  CHECK(e == Expr::cantor(frx::middle_third()));
  CHECK(frx::emit_frx(e) == "cantor(s=1, beta=1/3, l=0)\n");
}

TEST_CASE("keyword order, whitespace and comments") {
  const Expr e = frx::parse_frx("# dust\nproduct(\n  cantor(l=0, beta=1/3, s=1),  # x\n  cantor(s=1,beta=1/3,l=0)\n)\n");
  CHECK(e == Expr::product({Expr::cantor(frx::middle_third()), Expr::cantor(frx::middle_third())}));
  CHECK(frx::emit_frx(e) == "product(\n  cantor(s=1, beta=1/3, l=0),\n  cantor(s=1, beta=1/3, l=0)\n)\n");
}

TEST_CASE("scalars") {
  const Expr decimal = frx::parse_frx("cantor(s=1, beta=0.25, l=0.5)");
  CHECK(decimal.as_cantor().spec.seq.geometric_family().beta == Scalar(Rational(1, 4)));
  CHECK(decimal.as_cantor().spec.seq.geometric_family().l == Scalar(Rational(1, 2)));
  const Expr power = frx::parse_frx("cantor(s=1, beta=pow(2, -3/2), l=0)");
  CHECK(power.as_cantor().spec.seq.geometric_family().beta == Scalar::power(2, Rational(-3, 2)));
  CHECK(frx::emit_frx(power) == "cantor(s=1, beta=pow(2, -3/2), l=0)\n");
  // Integer powers collapse to rationals.
  CHECK(frx::emit_frx(frx::parse_frx("cantor(s=1, beta=pow(2, -3), l=0)")) == "cantor(s=1, beta=1/8, l=0)\n");
  CHECK(frx::emit_frx(frx::parse_frx("affine(scale=[-2], shift=[+1/2], cube(n=1))")) ==
        "affine(scale=[-2], shift=[1/2],\n  cube(n=1)\n)\n");
}

TEST_CASE("symbolic parameters print exactly") {
  CHECK(frx::emit_frx(frx::lemma31(Rational(1, 2), 0, 1)).find("beta=1/4") != std::string::npos);
  CHECK(frx::emit_frx(frx::lemma31(Rational(1, 3), 0, 1)).find("beta=1/8") != std::string::npos);
  CHECK(frx::emit_frx(frx::lemma31(Rational(2, 3), 0, 1)).find("beta=pow(2, -3/2)") != std::string::npos);
}

TEST_CASE("all constructs") {
  const std::string text =
      "union(\n"
      "  prune(\n"
      "    product(\n"
      "      iunion(family=thin_blocks(r=1/2), index={1,3; from=6, period=01}, truncate=4),\n"
      "      iunion(family=ramp_blocks(index={from=1, period=10}, truncate=3), index={from=1, period=1}, truncate=3)\n"
      "    ),\n"
      "    seed=18446744073709551615\n"
      "  ),\n"
      "  affine(scale=[1, 1], shift=[2, 2],\n"
      "    product(\n"
      "      iunion(family=ramp(s0=2), index={from=1, period=1}, truncate=2),\n"
      "      iunion(family=fat_blocks(l=3/2), index={from=1, period=01}, truncate=2)\n"
      "    )\n"
      "  ),\n"
      "  disjoint=true\n"
      ")\n";
  const Expr e = frx::parse_frx(text);
  CHECK(frx::emit_frx(e) == text);
  CHECK(e.as_union().disjoint);
  CHECK(e.as_union().children[0].as_prune().seed == 18446744073709551615ull);
  CHECK(e.as_union().children[0].as_prune().child.as_product().children[0].as_indexed_union().index ==
        IndexSet::make({1, 3}, 6, "01"));
}

TEST_CASE("symmetrize expands at parse time") {
  const Expr e = frx::parse_frx("symmetrize(cantor(s=1, beta=1/3, l=0))");
  CHECK(e == frx::symmetrize(Expr::cantor(frx::middle_third())));
  round_trip(e);
}

TEST_CASE("explicit disjoint=false is the default") {
  CHECK(frx::parse_frx("union(cube(n=1), cube(n=1), disjoint=false)") ==
        Expr::union_of({Expr::cube(1), Expr::cube(1)}));
}

TEST_CASE("round trip of constructor outputs") {
  round_trip(frx::lemma31(1, 0, 2, 5));
  round_trip(frx::lemma31(1, Rational(7, 3)));
  round_trip(frx::lemma32(1, 0, IndexSet::make({2}, 5, "011")));
  round_trip(frx::lemma33(2, Rational(1, 2), 2, {IndexSet::evens(), IndexSet::odds()}));
  round_trip(frx::nonfractal_family(3, 99));
  frx::ConstructionRequest request;
  request.r = Rational(3, 4);
  request.n = 2;
  request.prune_seed = 5;
  round_trip(frx::thm34(request));
}

TEST_CASE("syntax errors carry position and expectations") {
  const ParseError unknown = parse_error("cantor(s=1, beta=1/3, l=0)\n  extra");
  CHECK(unknown.kind() == ErrorKind::kParse);
  CHECK(unknown.line() == 2);
  CHECK(unknown.column() == 3);
  CHECK(expects(unknown, "end of input"));

  const ParseError bad_name = parse_error("cantr(s=1)");
  CHECK(bad_name.line() == 1);
  CHECK(bad_name.column() == 1);
  CHECK(expects(bad_name, "'cantor'"));

  const ParseError missing_paren = parse_error("cube(n=1");
  CHECK(expects(missing_paren, "')'"));
  CHECK(missing_paren.column() == 9);

  const ParseError bad_key = parse_error("cube(m=1)");
  CHECK(expects(bad_key, "'n='"));
  CHECK(bad_key.column() == 6);

  const ParseError missing = parse_error("cantor(s=1, beta=1/3)");
  CHECK(expects(missing, "'l='"));

  CHECK(parse_error("cube(n=1, n=2)").kind() == ErrorKind::kParse);
  CHECK(parse_error("cube(n=1/2)").kind() == ErrorKind::kParse);
  CHECK(parse_error("affine(scale=[1], shift=[0])").kind() == ErrorKind::kParse);
  CHECK(parse_error("cube(n=1) $").kind() == ErrorKind::kParse);
  CHECK(parse_error("cantor(s=1, beta=1/0, l=0)").kind() == ErrorKind::kParse);
  CHECK(parse_error("").kind() == ErrorKind::kParse);
}

TEST_CASE("semantic errors keep their kind and point at the construct") {
  const ParseError beta = parse_error("union(\n  cube(n=1),\n  cantor(s=1, beta=1/2, l=0)\n)");
  CHECK(beta.kind() == ErrorKind::kOutOfRange);
  CHECK(beta.line() == 3);
  CHECK(beta.column() == 3);
  CHECK(std::string(beta.what()).find("beta") != std::string::npos);

  const ParseError dims = parse_error("union(cube(n=1), cube(n=2))");
  CHECK(dims.kind() == ErrorKind::kWrongDimension);
  CHECK(dims.column() == 1);

  CHECK(parse_error("affine(scale=[1, 2], shift=[0], cube(n=1))").kind() == ErrorKind::kWrongDimension);
  CHECK(parse_error("prune(cube(n=1), seed=1)").kind() == ErrorKind::kInvalidExpression);
  CHECK(parse_error("iunion(family=ramp(s0=1), index={1, 2}, truncate=2)").kind() == ErrorKind::kIndexSetFinite);
  CHECK(parse_error("iunion(family=ramp(s0=1), index={from=1, period=00}, truncate=2)").kind() ==
        ErrorKind::kIndexSetFinite);
  CHECK(parse_error("iunion(family=thin_blocks(r=3/2), index={from=1, period=1}, truncate=2)").kind() ==
        ErrorKind::kOutOfRange);
  CHECK(parse_error("symmetrize(cube(n=2))").kind() == ErrorKind::kWrongDimension);
}

TEST_CASE("index set text") {
  CHECK(frx::parse_index_set("{1,3; from=6, period=01}") == IndexSet::make({1, 3}, 6, "01"));
  CHECK(frx::parse_index_set("{period=01}") == IndexSet::evens());
  CHECK(frx::parse_index_set("{2, 4, period=1}") == IndexSet::make({2, 4}, 5, "1"));
  CHECK(frx::parse_index_set(IndexSet::make({4, 7}, 10, "0110").str()) == IndexSet::make({4, 7}, 10, "0110"));
  CHECK_THROWS_AS(frx::parse_index_set("{1,2"), ParseError);
  CHECK_THROWS_AS(frx::parse_index_set("{period=012}"), ParseError);
}

TEST_CASE("explicit sequences have no text form") {
  frx::ExplicitFamily family;
  family.name = "halves";
  family.term = [](long n) { return frx::pow(Scalar(Rational(1, 2)), n); };
  family.partial_sum = [](long n) { return Scalar(1) - frx::pow(Scalar(Rational(1, 2)), n); };
  const Expr e = Expr::cantor(frx::CantorSpec{frx::RemovingSequence::explicit_rule(1, family)});
  try {
    frx::emit_frx(e);
    FAIL("expected NotRepresentable");
  } catch (const frx::Error& err) {
    CHECK(err.kind() == ErrorKind::kNotRepresentable);
  }
}
