#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "frx/dim_value.hpp"
#include "frx/scalar.hpp"

namespace frx {

inline constexpr std::size_t kDefaultBoxCap = 2'000'000;
inline constexpr int kDefaultPrefixLength = 64;

/// Removal masses beta_n = ((s+1)beta)^(n-1) (1-(s+1)beta) (1-l).
struct GeometricFamily {
  Scalar beta;
  Scalar l;
  bool operator==(const GeometricFamily&) const = default;
};

/// User-supplied closed forms. `limsup_decay` declares
/// limsup(-log(beta_n)/(n-1)) = log(limsup_decay); without it the l = 0
/// dimension has no analytic value.
struct ExplicitFamily {
  std::string name;
  std::function<Scalar(long)> term;
  std::function<Scalar(long)> partial_sum;
  std::optional<Scalar> total;
  std::optional<Rational> limsup_decay;

  bool operator==(const ExplicitFamily& other) const { return name == other.name; }
};

class RemovingSequence {
 public:
  /// Validates 0 < beta < 1/(s+1) and 0 <= l < 1.
  static RemovingSequence geometric(int order, Scalar beta, Scalar l);
  static RemovingSequence explicit_rule(int order, ExplicitFamily family);

  int order() const { return order_; }
  bool is_geometric() const { return std::holds_alternative<GeometricFamily>(family_); }
  const GeometricFamily& geometric_family() const { return std::get<GeometricFamily>(family_); }
  const ExplicitFamily& explicit_family() const { return std::get<ExplicitFamily>(family_); }

  bool operator==(const RemovingSequence&) const = default;

 private:
  RemovingSequence(int order, std::variant<GeometricFamily, ExplicitFamily> family)
      : order_(order), family_(std::move(family)) {}

  int order_;
  std::variant<GeometricFamily, ExplicitFamily> family_;
};

/// Uniform Cantor set of a given order generated by a removing sequence.
struct CantorSpec {
  RemovingSequence seq;

  int order() const { return seq.order(); }
  bool operator==(const CantorSpec&) const = default;
};

CantorSpec middle_third();

struct Interval {
  Scalar lo;
  Scalar hi;

  Scalar length() const { return hi - lo; }
  bool operator==(const Interval&) const = default;
};

struct StageCover {
  int stage = 0;
  std::vector<Interval> intervals;
};

struct CoverOptions {
  std::size_t cap = kDefaultBoxCap;
  /// Overrides every indexed union's own truncation when set.
  std::optional<int> truncation;
  int digits = kDefaultDigits;
};

Scalar beta_term(const RemovingSequence& seq, long n);
Scalar partial_sum(const RemovingSequence& seq, long n);

/// Length of each stage-n interval, (1 - partial_sum(n)) / (s+1)^n.
Scalar stage_length(const CantorSpec& spec, long n);
/// Length of each gap opened at stage n, beta_n / (s (s+1)^(n-1)).
Scalar stage_gap(const CantorSpec& spec, long n);

StageCover stage_cover(const CantorSpec& spec, int n, const CoverOptions& options = {});
Scalar stage_measure(const CantorSpec& spec, long n);
Scalar limit_measure(const CantorSpec& spec);

DimValue hausdorff_dim_uniform(const CantorSpec& spec, int prefix_length = kDefaultPrefixLength);

/// beta0 = (s+1)^(-1/r), the geometric ratio with dimension r at l = 0.
Scalar solve_beta_for_dim(const Rational& r, int order);

}  // namespace frx
