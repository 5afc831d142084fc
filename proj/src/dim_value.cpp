#include "frx/dim_value.hpp"

#include "frx/error.hpp"

namespace frx {

namespace {

struct LogArg {
  Rational root;  // > 1, not a perfect power
  Rational multiplicity;
};

bool exact_root(const Integer& x, unsigned long k, Integer& out) {
  return mpz_root(out.get_mpz_t(), x.get_mpz_t(), k) != 0;
}

// log(u) = multiplicity * log(root).
LogArg canonical_log_arg(Rational u) {
  u.canonicalize();
  if (sgn(u) <= 0) fail(ErrorKind::kOutOfRange, "log of a non-positive value");
  Rational sign = 1;
  if (u < 1) {
    u = Rational(1) / u;
    sign = -1;
  }
  const Integer& n = u.get_num();
  const Integer& d = u.get_den();
  const auto bits = std::max(mpz_sizeinbase(n.get_mpz_t(), 2), mpz_sizeinbase(d.get_mpz_t(), 2));
  for (unsigned long k = bits; k >= 2; --k) {
    Integer rn, rd;
    if (exact_root(n, k, rn) && exact_root(d, k, rd)) {
      return {Rational(rn, rd), sign * Rational(static_cast<long>(k))};
    }
  }
  return {u, sign};
}

constexpr mpfr_prec_t kMaxBits = 1 << 15;

}  // namespace

DimValue DimValue::log_ratio(const Rational& coefficient, const Rational& numerator_arg,
                             const Rational& denominator_arg) {
  DimValue v;
  if (coefficient == 0 || numerator_arg == 1) return v;
  if (denominator_arg == 1) fail(ErrorKind::kOutOfRange, "log ratio with log(1) denominator");
  const LogArg a = canonical_log_arg(numerator_arg);
  const LogArg b = canonical_log_arg(denominator_arg);
  Rational c = coefficient * a.multiplicity / b.multiplicity;
  c.canonicalize();
  if (a.root == 1) return v;
  if (a.root == b.root) {
    v.constant_ = c;
  } else {
    v.terms_.emplace(Key{a.root, b.root}, c);
  }
  return v;
}

const Rational& DimValue::rational() const {
  if (!is_rational()) fail(ErrorKind::kNotRepresentable, "dimension is not rational: " + str());
  return constant_;
}

DimValue operator+(const DimValue& a, const DimValue& b) {
  DimValue r = a;
  r.constant_ += b.constant_;
  for (const auto& [key, c] : b.terms_) {
    Rational& slot = r.terms_[key];
    slot += c;
    if (slot == 0) r.terms_.erase(key);
  }
  return r;
}

DimValue operator*(const Rational& c, const DimValue& a) {
  DimValue r;
  if (c == 0) return r;
  r.constant_ = c * a.constant_;
  for (const auto& [key, t] : a.terms_) r.terms_.emplace(key, c * t);
  return r;
}

DimValue operator-(const DimValue& a, const DimValue& b) { return a + Rational(-1) * b; }

std::strong_ordering DimValue::compare(const DimValue& other) const {
  const DimValue diff = *this - other;
  if (diff.is_rational()) {
    const int s = sgn(diff.constant_);
    return s < 0 ? std::strong_ordering::less
                 : (s > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }
  for (mpfr_prec_t bits = 128; bits <= kMaxBits; bits *= 2) {
    const int s = diff.enclose(bits).certain_sign();
    if (s < 0) return std::strong_ordering::less;
    if (s > 0) return std::strong_ordering::greater;
  }
  fail(ErrorKind::kUndecidable, "cannot order " + str() + " and " + other.str());
}

RealInterval DimValue::enclose(mpfr_prec_t bits) const {
  RealInterval sum = RealInterval::from_rational(constant_, bits);
  for (const auto& [key, c] : terms_) {
    const RealInterval ratio = RealInterval::from_rational(key.first, bits).log() /
                               RealInterval::from_rational(key.second, bits).log();
    sum = sum + RealInterval::from_rational(c, bits) * ratio;
  }
  return sum;
}

double DimValue::to_double() const {
  if (is_rational()) return constant_.get_d();
  return enclose(128).midpoint();
}

std::string DimValue::str() const {
  std::string out;
  if (constant_ != 0 || terms_.empty()) out = to_string(constant_);
  for (const auto& [key, c] : terms_) {
    Rational magnitude = abs(c);
    if (!out.empty()) {
      out += sgn(c) < 0 ? " - " : " + ";
    } else if (sgn(c) < 0) {
      out += "-";
    }
    if (magnitude != 1) out += to_string(magnitude) + "*";
    out += "log(" + to_string(key.first) + ")/log(" + to_string(key.second) + ")";
  }
  return out;
}

std::string DimValue::decimal(int digits) const {
  return enclose(digits_to_bits(digits) + 16).to_decimal(digits);
}

DimValue max(const DimValue& a, const DimValue& b) { return a.compare(b) < 0 ? b : a; }

}  // namespace frx
