#include "frx/constructors.hpp"

#include "frx/cover.hpp"
#include "frx/error.hpp"

namespace frx {

namespace {

Rational floor_plus_one(const Rational& l) {
  Integer f;
  mpz_fdiv_q(f.get_mpz_t(), l.get_num_mpz_t(), l.get_den_mpz_t());
  return Rational(f + 1);
}

Integer ceiling(const Rational& r) {
  Integer c;
  mpz_cdiv_q(c.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return c;
}

void check_one_dim_request(const Rational& r, const Rational& l) {
  if (r <= 0 || r > 1) fail(ErrorKind::kOutOfRange, "r = " + to_string(r) + " must satisfy 0 < r <= 1");
  if (l < 0) fail(ErrorKind::kOutOfRange, "l = " + to_string(l) + " must be >= 0");
  if (r < 1 && l > 0) {
    fail(ErrorKind::kInfeasible, "DNE: no set has fractional dimension " + to_string(r) +
                                     " and positive measure " + to_string(l));
  }
}

Expr line_product(std::vector<Expr> factors) {
  if (factors.size() == 1) return factors.front();
  return Expr::product(std::move(factors));
}

}  // namespace

DimValue target_dim(const Rational& r, const Rational& l, int n) {
  if (l > 0) return DimValue(static_cast<long>(n));
  return DimValue(r);
}

Expr lemma31(const Rational& r, const Rational& l, int s0, int truncation) {
  check_one_dim_request(r, l);
  if (s0 < 1) fail(ErrorKind::kOutOfRange, "s0 must be >= 1");
  if (r < 1) {
    return Expr::cantor(CantorSpec{RemovingSequence::geometric(s0, solve_beta_for_dim(r, s0), Scalar(0))});
  }
  if (l == 0) return Expr::indexed_union(Family::ramp(s0), IndexSet::naturals(), truncation);
  const Rational width = floor_plus_one(l);
  const CantorSpec fat{RemovingSequence::geometric(s0, Scalar(Rational(1, 2 * (s0 + 1))),
                                                   Scalar(Rational(l / width)))};
  return Expr::affine({Scalar(width)}, {Scalar(0)}, Expr::cantor(fat));
}

Expr lemma32(const Rational& r, const Rational& l, const IndexSet& index, int truncation) {
  check_one_dim_request(r, l);
  if (r < 1) return Expr::indexed_union(Family::thin_blocks(r), index, truncation);
  if (l == 0) {
    return Expr::indexed_union(Family::ramp_blocks(index, truncation), IndexSet::naturals(), truncation);
  }
  const Rational width = floor_plus_one(l);
  Rational rescale = Rational(1) / (width * index.dyadic_weight());
  rescale.canonicalize();
  return Expr::affine({Scalar(rescale)}, {Scalar(0)},
                      Expr::indexed_union(Family::fat_blocks(l), index, truncation));
}

Expr lemma33(const Rational& r, const Rational& l, int n, const std::vector<IndexSet>& index_sets,
             int truncation) {
  if (r <= 0) fail(ErrorKind::kOutOfRange, "r = " + to_string(r) + " must be > 0");
  if (l < 0) fail(ErrorKind::kOutOfRange, "l = " + to_string(l) + " must be >= 0");
  if (n < 1 || Integer(n) < ceiling(r)) {
    fail(ErrorKind::kOutOfRange, "n = " + std::to_string(n) + " must be at least ceil(r) = " +
                                     ceiling(r).get_str());
  }
  if (static_cast<int>(index_sets.size()) != n) {
    fail(ErrorKind::kOutOfRange, "need exactly " + std::to_string(n) + " index sets, got " +
                                     std::to_string(index_sets.size()));
  }
  Rational per_axis = r / n;
  per_axis.canonicalize();
  if (l > 0 && per_axis < 1) {
    fail(ErrorKind::kInfeasible, "DNE: per-axis dimension r/n = " + to_string(per_axis) +
                                     " is fractional while l = " + to_string(l) + " > 0");
  }

  std::vector<Expr> factors;
  for (const IndexSet& index : index_sets) factors.push_back(lemma32(per_axis, l, index, truncation));
  Expr result = line_product(std::move(factors));
  if (l > 0 && n >= 2) {
    Rational stretch = 1;
    for (int k = 1; k < n; ++k) stretch /= l;
    std::vector<Scalar> scales(static_cast<std::size_t>(n), Scalar(1));
    scales.front() = Scalar(stretch);
    result = Expr::affine(std::move(scales), std::vector<Scalar>(static_cast<std::size_t>(n), Scalar(0)),
                          std::move(result));
  }
  return result;
}

Expr thm34(const ConstructionRequest& request) {
  std::vector<IndexSet> index_sets = request.index_sets;
  if (static_cast<int>(index_sets.size()) > request.n) {
    fail(ErrorKind::kOutOfRange, "more index sets than axes");
  }
  while (static_cast<int>(index_sets.size()) < request.n) index_sets.push_back(IndexSet::naturals());

  Expr solid = lemma33(request.r, request.l, request.n, index_sets, request.truncation);

  // beta = 2^-(2n/r + 1) keeps the dust's dimension n r / (2n + r) below r/2.
  const Scalar beta = Scalar::power(2, -(Rational(2 * request.n) / request.r + 1));
  const CantorSpec dust_axis{RemovingSequence::geometric(1, beta, Scalar(0))};
  const Rational width = floor_plus_one(request.l);
  const Box extent = bounding_box(solid);

  std::vector<Expr> factors;
  for (int axis = 0; axis < request.n; ++axis) {
    const Scalar shift = max(Scalar(width), extent[static_cast<std::size_t>(axis)].hi);
    factors.push_back(Expr::affine({Scalar(1)}, {shift}, Expr::cantor(dust_axis)));
  }
  Expr dust = Expr::prune(line_product(std::move(factors)), request.prune_seed);
  return Expr::union_of({std::move(dust), std::move(solid)}, true);
}

Expr nonfractal_family(int n, std::uint64_t seed) {
  if (n < 1) fail(ErrorKind::kOutOfRange, "n must be >= 1");
  std::vector<Expr> factors;
  for (int axis = 0; axis < n; ++axis) {
    factors.push_back(Expr::affine({Scalar(1)}, {Scalar(1)}, Expr::cantor(middle_third())));
  }
  Expr dust = Expr::prune(line_product(std::move(factors)), seed);
  return Expr::union_of({Expr::cube(n), std::move(dust)}, true);
}

}  // namespace frx
