#pragma once

#include <compare>
#include <map>
#include <string>
#include <utility>

#include "frx/scalar.hpp"

namespace frx {

/// Symbolic dimension value: a rational constant plus a rational combination
/// of log-ratios log(a)/log(b). Log arguments are reduced to primitive roots
/// greater than one, so ratios of powers of a common base fold into the
/// constant (log 3 / log 9 is stored as 1/2).
class DimValue {
 public:
  DimValue() = default;
  DimValue(long v) : constant_(v) {}
  DimValue(const Rational& v) : constant_(v) {}

  /// coefficient * log(numerator_arg) / log(denominator_arg), both args > 0.
  static DimValue log_ratio(const Rational& coefficient, const Rational& numerator_arg,
                            const Rational& denominator_arg);

  bool is_rational() const { return terms_.empty(); }
  /// The exact value; throws NotRepresentable when log terms remain.
  const Rational& rational() const;
  const Rational& constant() const { return constant_; }

  friend DimValue operator+(const DimValue& a, const DimValue& b);
  friend DimValue operator-(const DimValue& a, const DimValue& b);
  friend DimValue operator*(const Rational& c, const DimValue& a);

  /// Structural equality of the canonical forms.
  bool operator==(const DimValue& other) const = default;
  /// Exact when the difference is structurally zero or rational; otherwise
  /// decided by refining enclosures. Throws Undecidable if refinement stalls.
  std::strong_ordering compare(const DimValue& other) const;

  RealInterval enclose(mpfr_prec_t bits) const;
  double to_double() const;
  std::string str() const;
  std::string decimal(int digits) const;

 private:
  using Key = std::pair<Rational, Rational>;  // (numerator root, denominator root)

  Rational constant_{0};
  std::map<Key, Rational> terms_;
};

DimValue max(const DimValue& a, const DimValue& b);

}  // namespace frx
