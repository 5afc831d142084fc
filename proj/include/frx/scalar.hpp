#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <compare>
#include <string>
#include <utility>
#include <variant>

namespace frx {

using Integer = mpz_class;
using Rational = mpq_class;

/// Decimal digits used when an irrational value has to be materialized.
inline constexpr int kDefaultDigits = 50;

/// Working precision in bits for `digits` decimal digits, with guard bits.
mpfr_prec_t digits_to_bits(int digits);

/// Owning wrapper around mpfr_t.
class BigFloat {
 public:
  explicit BigFloat(mpfr_prec_t bits);
  BigFloat(const BigFloat& other);
  BigFloat(BigFloat&& other) noexcept;
  BigFloat& operator=(const BigFloat& other);
  BigFloat& operator=(BigFloat&& other) noexcept;
  ~BigFloat();

  mpfr_ptr get() { return value_; }
  mpfr_srcptr get() const { return value_; }
  mpfr_prec_t precision() const { return mpfr_get_prec(value_); }

 private:
  mpfr_t value_;
};

/// Closed real interval [lower, upper] maintained with outward rounding, so
/// the true value is always enclosed. Width is the tracked error bound.
class RealInterval {
 public:
  explicit RealInterval(mpfr_prec_t bits);

  static RealInterval from_rational(const Rational& q, mpfr_prec_t bits);
  /// Encloses base^exponent for an integer base >= 1.
  static RealInterval from_power(const Integer& base, const Rational& exponent,
                                 mpfr_prec_t bits);

  const BigFloat& lower() const { return lower_; }
  const BigFloat& upper() const { return upper_; }
  mpfr_prec_t precision() const { return lower_.precision(); }

  RealInterval operator-() const;
  friend RealInterval operator+(const RealInterval& a, const RealInterval& b);
  friend RealInterval operator-(const RealInterval& a, const RealInterval& b);
  friend RealInterval operator*(const RealInterval& a, const RealInterval& b);
  friend RealInterval operator/(const RealInterval& a, const RealInterval& b);

  /// Natural logarithm; requires a strictly positive enclosure.
  RealInterval log() const;

  bool contains(const Rational& q) const;
  bool contains_zero() const;
  bool overlaps(const RealInterval& other) const;
  /// +1 / -1 when the sign is certain, 0 when the enclosure straddles zero.
  int certain_sign() const;

  double midpoint() const;
  /// Half-width of the enclosure, rounded up.
  double radius() const;
  /// Midpoint rounded to `digits` places after the decimal point.
  std::string to_decimal(int digits) const;

  bool operator==(const RealInterval& other) const;

 private:
  BigFloat lower_;
  BigFloat upper_;
};

/// b^e with b >= 2 not a perfect power and e a non-integer rational. Values in
/// this normal form are irrational, and two normal forms are equal iff their
/// fields are equal.
struct PowerForm {
  Integer base;
  Rational exponent;

  bool operator==(const PowerForm& other) const {
    return base == other.base && exponent == other.exponent;
  }
};

/// Exact-where-possible real scalar: a reduced rational, a symbolic power, or
/// a precision-tracked enclosure once irrational arithmetic leaves the exact
/// forms.
class Scalar {
 public:
  Scalar() : value_(Rational(0)) {}
  Scalar(int v) : value_(Rational(v)) {}
  Scalar(long v) : value_(Rational(v)) {}
  Scalar(const Integer& v) : value_(Rational(v)) {}
  Scalar(Rational v);
  explicit Scalar(RealInterval v) : value_(std::move(v)) {}

  /// base^exponent, normalized: integer results collapse to rationals and
  /// the base is reduced to its primitive root.
  static Scalar power(const Integer& base, const Rational& exponent);

  bool is_rational() const { return std::holds_alternative<Rational>(value_); }
  bool is_power() const { return std::holds_alternative<PowerForm>(value_); }
  bool is_real() const { return std::holds_alternative<RealInterval>(value_); }
  bool is_exact() const { return !is_real(); }

  const Rational& rational() const;
  const PowerForm& power_form() const;
  const RealInterval& real() const;

  /// Enclosure at `bits` precision (reals keep their own enclosure).
  RealInterval enclose(mpfr_prec_t bits) const;
  /// Precision carried by a real scalar, or the default for exact ones.
  mpfr_prec_t precision() const;

  /// Sign; throws Undecidable when a real enclosure straddles zero.
  int sign() const;
  /// Exact ordering for exact operands (refining power enclosures as
  /// needed); unordered when real enclosures overlap.
  std::partial_ordering compare(const Scalar& other) const;

  bool definitely_less(const Scalar& other) const {
    return compare(other) == std::partial_ordering::less;
  }
  /// Not definitely greater: true when <= holds or the enclosures overlap.
  bool possibly_le(const Scalar& other) const {
    return compare(other) != std::partial_ordering::greater;
  }

  /// Structural equality; for exact values this is value equality.
  bool operator==(const Scalar& other) const { return value_ == other.value_; }

  Scalar operator-() const;
  Scalar abs() const;
  friend Scalar operator+(const Scalar& a, const Scalar& b);
  friend Scalar operator-(const Scalar& a, const Scalar& b);
  friend Scalar operator*(const Scalar& a, const Scalar& b);
  friend Scalar operator/(const Scalar& a, const Scalar& b);
  Scalar& operator+=(const Scalar& b) { return *this = *this + b; }
  Scalar& operator-=(const Scalar& b) { return *this = *this - b; }
  Scalar& operator*=(const Scalar& b) { return *this = *this * b; }

  /// Exact text ("p/q", "pow(b, p/q)"); reals render as decimals.
  std::string str() const;
  std::string decimal(int digits = kDefaultDigits) const;
  double to_double() const;
  /// Outward-rounded double bounds.
  std::pair<double, double> double_bounds() const;

 private:
  std::variant<Rational, PowerForm, RealInterval> value_;
};

Scalar pow(const Scalar& x, long n);
Scalar min(const Scalar& a, const Scalar& b);
Scalar max(const Scalar& a, const Scalar& b);

/// floor/ceil of a scalar. A real enclosure straddling an integer k is
/// treated as exactly k and reported via `snapped`.
struct IntegerPart {
  Integer value;
  bool snapped = false;
};
IntegerPart floor_of(const Scalar& x);
IntegerPart ceil_of(const Scalar& x);

/// Natural-log enclosure of a positive scalar.
RealInterval log_of(const Scalar& x, mpfr_prec_t bits);

/// Rational parsed from "p", "p/q", or a decimal literal such as "-0.125".
Rational parse_rational(const std::string& text);

std::string to_string(const Rational& q);

}  // namespace frx
