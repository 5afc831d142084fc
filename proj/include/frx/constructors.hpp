#pragma once

#include <cstdint>
#include <vector>

#include "frx/dim_value.hpp"
#include "frx/expr.hpp"
#include "frx/index_set.hpp"

namespace frx {

inline constexpr int kDefaultTruncation = 8;

struct ConstructionRequest {
  Rational r;
  Rational l;
  int n = 1;
  int s0 = 1;
  /// One per axis; missing entries default to all naturals.
  std::vector<IndexSet> index_sets;
  std::uint64_t prune_seed = 0;
  int truncation = kDefaultTruncation;
};

/// Dimension every feasible construction attains: r when l = 0, n when l > 0.
DimValue target_dim(const Rational& r, const Rational& l, int n);

/// One-dimensional set with dimension r in (0, 1] and measure l.
/// Infeasible when 0 < r < 1 and l > 0.
Expr lemma31(const Rational& r, const Rational& l, int s0 = 1, int truncation = kDefaultTruncation);

/// Index-parameterized one-dimensional set; distinct index sets give
/// distinct sets.
Expr lemma32(const Rational& r, const Rational& l, const IndexSet& index,
             int truncation = kDefaultTruncation);

/// Product of n per-axis lemma32 sets with dimension r/n each. When l > 0
/// (only feasible for r = n) the first axis is stretched by (1/l)^(n-1) so
/// the measure is l.
Expr lemma33(const Rational& r, const Rational& l, int n, const std::vector<IndexSet>& index_sets,
             int truncation = kDefaultTruncation);

/// Union of a seeded pruned dust of low dimension with the lemma33 set.
Expr thm34(const ConstructionRequest& request);

/// Unit cube joined with a seeded pruned Cantor dust in [1,2]^n.
Expr nonfractal_family(int n, std::uint64_t seed);

}  // namespace frx
