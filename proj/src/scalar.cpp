#include "frx/scalar.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <optional>

#include "frx/error.hpp"

namespace frx {

namespace {

constexpr mpfr_prec_t kMaxRefineBits = 1 << 15;

// b = root^k with k maximal; root is then not a perfect power.
std::pair<Integer, unsigned long> primitive_root(const Integer& b) {
  const auto bits = mpz_sizeinbase(b.get_mpz_t(), 2);
  for (unsigned long k = bits; k >= 2; --k) {
    Integer r;
    if (mpz_root(r.get_mpz_t(), b.get_mpz_t(), k) != 0) return {r, k};
  }
  return {b, 1};
}

// Returns k when q == base^k for an integer k.
std::optional<long> integer_log(const Rational& q, const Integer& base) {
  if (sgn(q) <= 0) return std::nullopt;
  const bool inverse = q.get_num() == 1;
  Integer n = inverse ? Integer(q.get_den()) : Integer(q.get_num());
  if (!inverse && q.get_den() != 1) return std::nullopt;
  long k = 0;
  while (n > 1) {
    if (!mpz_divisible_p(n.get_mpz_t(), base.get_mpz_t())) return std::nullopt;
    n /= base;
    ++k;
  }
  return inverse ? -k : k;
}

mpfr_prec_t mixed_bits(const Scalar& a, const Scalar& b) {
  if (a.is_real() && b.is_real()) return std::max(a.precision(), b.precision());
  if (a.is_real()) return a.precision();
  if (b.is_real()) return b.precision();
  return digits_to_bits(kDefaultDigits);
}

Scalar reciprocal(const Scalar& x) {
  if (x.is_rational()) return Scalar(Rational(1) / x.rational());
  if (x.is_power()) return Scalar::power(x.power_form().base, -x.power_form().exponent);
  return Scalar(RealInterval::from_rational(1, x.precision()) / x.real());
}

}  // namespace

mpfr_prec_t digits_to_bits(int digits) {
  return static_cast<mpfr_prec_t>(std::ceil(digits * 3.3219280948873623)) + 32;
}

// ---------------------------------------------------------------------------
// BigFloat

BigFloat::BigFloat(mpfr_prec_t bits) {
  mpfr_init2(value_, bits);
  mpfr_set_zero(value_, 1);
}

BigFloat::BigFloat(const BigFloat& other) {
  mpfr_init2(value_, other.precision());
  mpfr_set(value_, other.value_, MPFR_RNDN);
}

BigFloat::BigFloat(BigFloat&& other) noexcept {
  mpfr_init2(value_, MPFR_PREC_MIN);
  mpfr_swap(value_, other.value_);
}

BigFloat& BigFloat::operator=(const BigFloat& other) {
  if (this != &other) {
    mpfr_set_prec(value_, other.precision());
    mpfr_set(value_, other.value_, MPFR_RNDN);
  }
  return *this;
}

BigFloat& BigFloat::operator=(BigFloat&& other) noexcept {
  mpfr_swap(value_, other.value_);
  return *this;
}

BigFloat::~BigFloat() { mpfr_clear(value_); }

// ---------------------------------------------------------------------------
// RealInterval

RealInterval::RealInterval(mpfr_prec_t bits) : lower_(bits), upper_(bits) {}

RealInterval RealInterval::from_rational(const Rational& q, mpfr_prec_t bits) {
  RealInterval r(bits);
  mpfr_set_q(r.lower_.get(), q.get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(r.upper_.get(), q.get_mpq_t(), MPFR_RNDU);
  return r;
}

RealInterval RealInterval::from_power(const Integer& base, const Rational& exponent,
                                      mpfr_prec_t bits) {
  if (base < 1) fail(ErrorKind::kOutOfRange, "power base must be a positive integer");
  const Integer& p = exponent.get_num();
  if (mpz_cmpabs_ui(p.get_mpz_t(), 1u << 20) > 0) {
    fail(ErrorKind::kOutOfRange, "power exponent numerator too large");
  }
  const unsigned long q = mpz_get_ui(exponent.get_den().get_mpz_t());
  Integer t;
  mpz_pow_ui(t.get_mpz_t(), base.get_mpz_t(), mpz_get_ui(Integer(::abs(p)).get_mpz_t()));

  RealInterval r(bits);
  mpfr_set_z(r.lower_.get(), t.get_mpz_t(), MPFR_RNDD);
  mpfr_set_z(r.upper_.get(), t.get_mpz_t(), MPFR_RNDU);
  mpfr_rootn_ui(r.lower_.get(), r.lower_.get(), q, MPFR_RNDD);
  mpfr_rootn_ui(r.upper_.get(), r.upper_.get(), q, MPFR_RNDU);
  if (sgn(p) < 0) {
    RealInterval inv(bits);
    mpfr_ui_div(inv.lower_.get(), 1, r.upper_.get(), MPFR_RNDD);
    mpfr_ui_div(inv.upper_.get(), 1, r.lower_.get(), MPFR_RNDU);
    return inv;
  }
  return r;
}

RealInterval RealInterval::operator-() const {
  RealInterval r(precision());
  mpfr_neg(r.lower_.get(), upper_.get(), MPFR_RNDD);
  mpfr_neg(r.upper_.get(), lower_.get(), MPFR_RNDU);
  return r;
}

RealInterval operator+(const RealInterval& a, const RealInterval& b) {
  RealInterval r(std::max(a.precision(), b.precision()));
  mpfr_add(r.lower_.get(), a.lower_.get(), b.lower_.get(), MPFR_RNDD);
  mpfr_add(r.upper_.get(), a.upper_.get(), b.upper_.get(), MPFR_RNDU);
  return r;
}

RealInterval operator-(const RealInterval& a, const RealInterval& b) {
  RealInterval r(std::max(a.precision(), b.precision()));
  mpfr_sub(r.lower_.get(), a.lower_.get(), b.upper_.get(), MPFR_RNDD);
  mpfr_sub(r.upper_.get(), a.upper_.get(), b.lower_.get(), MPFR_RNDU);
  return r;
}

namespace {

template <typename Op>
void hull_of_corners(RealInterval& r, BigFloat& lo, BigFloat& hi, const RealInterval& a,
                     const RealInterval& b, Op op) {
  const mpfr_prec_t bits = r.precision();
  BigFloat t(bits);
  bool first = true;
  for (const BigFloat* x : {&a.lower(), &a.upper()}) {
    for (const BigFloat* y : {&b.lower(), &b.upper()}) {
      op(t.get(), x->get(), y->get(), MPFR_RNDD);
      if (first || mpfr_less_p(t.get(), lo.get())) mpfr_set(lo.get(), t.get(), MPFR_RNDD);
      op(t.get(), x->get(), y->get(), MPFR_RNDU);
      if (first || mpfr_greater_p(t.get(), hi.get())) mpfr_set(hi.get(), t.get(), MPFR_RNDU);
      first = false;
    }
  }
}

}  // namespace

RealInterval operator*(const RealInterval& a, const RealInterval& b) {
  RealInterval r(std::max(a.precision(), b.precision()));
  hull_of_corners(r, r.lower_, r.upper_, a, b, mpfr_mul);
  return r;
}

RealInterval operator/(const RealInterval& a, const RealInterval& b) {
  if (b.contains_zero()) fail(ErrorKind::kUndecidable, "division by an enclosure containing zero");
  RealInterval r(std::max(a.precision(), b.precision()));
  hull_of_corners(r, r.lower_, r.upper_, a, b, mpfr_div);
  return r;
}

RealInterval RealInterval::log() const {
  if (mpfr_sgn(lower_.get()) <= 0) fail(ErrorKind::kOutOfRange, "log of a non-positive value");
  RealInterval r(precision());
  mpfr_log(r.lower_.get(), lower_.get(), MPFR_RNDD);
  mpfr_log(r.upper_.get(), upper_.get(), MPFR_RNDU);
  return r;
}

bool RealInterval::contains(const Rational& q) const {
  return mpfr_cmp_q(lower_.get(), q.get_mpq_t()) <= 0 &&
         mpfr_cmp_q(upper_.get(), q.get_mpq_t()) >= 0;
}

bool RealInterval::contains_zero() const {
  return mpfr_sgn(lower_.get()) <= 0 && mpfr_sgn(upper_.get()) >= 0;
}

bool RealInterval::overlaps(const RealInterval& other) const {
  return mpfr_lessequal_p(lower_.get(), other.upper_.get()) &&
         mpfr_lessequal_p(other.lower_.get(), upper_.get());
}

int RealInterval::certain_sign() const {
  if (mpfr_sgn(lower_.get()) > 0) return 1;
  if (mpfr_sgn(upper_.get()) < 0) return -1;
  return 0;
}

double RealInterval::midpoint() const {
  BigFloat m(precision() + 1);
  mpfr_add(m.get(), lower_.get(), upper_.get(), MPFR_RNDN);
  mpfr_div_2ui(m.get(), m.get(), 1, MPFR_RNDN);
  return mpfr_get_d(m.get(), MPFR_RNDN);
}

double RealInterval::radius() const {
  BigFloat w(precision());
  mpfr_sub(w.get(), upper_.get(), lower_.get(), MPFR_RNDU);
  mpfr_div_2ui(w.get(), w.get(), 1, MPFR_RNDU);
  return mpfr_get_d(w.get(), MPFR_RNDU);
}

std::string RealInterval::to_decimal(int digits) const {
  BigFloat m(precision() + 1);
  mpfr_add(m.get(), lower_.get(), upper_.get(), MPFR_RNDN);
  mpfr_div_2ui(m.get(), m.get(), 1, MPFR_RNDN);
  char* out = nullptr;
  if (mpfr_asprintf(&out, "%.*Rf", digits, m.get()) < 0) {
    fail(ErrorKind::kOutOfRange, "decimal rendering failed");
  }
  std::string text(out);
  mpfr_free_str(out);
  if (text.starts_with('-') && text.find_first_not_of("-0.") == std::string::npos) {
    text.erase(0, 1);
  }
  return text;
}

bool RealInterval::operator==(const RealInterval& other) const {
  return mpfr_equal_p(lower_.get(), other.lower_.get()) &&
         mpfr_equal_p(upper_.get(), other.upper_.get());
}

// ---------------------------------------------------------------------------
// Scalar

Scalar::Scalar(Rational v) {
  v.canonicalize();
  value_ = std::move(v);
}

Scalar Scalar::power(const Integer& base, const Rational& exponent) {
  if (base < 1) fail(ErrorKind::kOutOfRange, "power base must be a positive integer");
  Rational e = exponent;
  e.canonicalize();
  if (base == 1 || e == 0) return Scalar(1);
  const auto [root, k] = primitive_root(base);
  e *= Rational(static_cast<long>(k));
  e.canonicalize();
  if (e.get_den() == 1) {
    const Integer& p = e.get_num();
    if (mpz_cmpabs_ui(p.get_mpz_t(), 1u << 20) > 0) {
      fail(ErrorKind::kOutOfRange, "power exponent too large");
    }
    Integer magnitude;
    mpz_pow_ui(magnitude.get_mpz_t(), root.get_mpz_t(), mpz_get_ui(Integer(::abs(p)).get_mpz_t()));
    return sgn(p) >= 0 ? Scalar(Rational(magnitude)) : Scalar(Rational(Integer(1), magnitude));
  }
  Scalar s;
  s.value_ = PowerForm{root, e};
  return s;
}

const Rational& Scalar::rational() const {
  if (!is_rational()) fail(ErrorKind::kNotRepresentable, "scalar is not rational: " + str());
  return std::get<Rational>(value_);
}

const PowerForm& Scalar::power_form() const { return std::get<PowerForm>(value_); }
const RealInterval& Scalar::real() const { return std::get<RealInterval>(value_); }

RealInterval Scalar::enclose(mpfr_prec_t bits) const {
  if (is_rational()) return RealInterval::from_rational(std::get<Rational>(value_), bits);
  if (is_power()) {
    const auto& p = std::get<PowerForm>(value_);
    return RealInterval::from_power(p.base, p.exponent, bits);
  }
  return real();
}

mpfr_prec_t Scalar::precision() const {
  return is_real() ? real().precision() : digits_to_bits(kDefaultDigits);
}

int Scalar::sign() const {
  if (is_rational()) return sgn(std::get<Rational>(value_));
  if (is_power()) return 1;
  const int s = real().certain_sign();
  if (s == 0 && !(mpfr_zero_p(real().lower().get()) && mpfr_zero_p(real().upper().get()))) {
    fail(ErrorKind::kUndecidable, "sign of an enclosure straddling zero");
  }
  return s;
}

std::partial_ordering Scalar::compare(const Scalar& other) const {
  if (is_rational() && other.is_rational()) {
    const int c = cmp(std::get<Rational>(value_), std::get<Rational>(other.value_));
    return c < 0 ? std::partial_ordering::less
                 : (c > 0 ? std::partial_ordering::greater : std::partial_ordering::equivalent);
  }
  if (is_exact() && other.is_exact()) {
    if (*this == other) return std::partial_ordering::equivalent;
    if (is_power() && other.is_power() && power_form().base == other.power_form().base) {
      const int c = cmp(power_form().exponent, other.power_form().exponent);
      return c < 0 ? std::partial_ordering::less : std::partial_ordering::greater;
    }
    // Distinct normal forms are distinct reals, so refinement terminates.
    for (mpfr_prec_t bits = 128; bits <= kMaxRefineBits; bits *= 2) {
      const RealInterval a = enclose(bits);
      const RealInterval b = other.enclose(bits);
      if (mpfr_less_p(a.upper().get(), b.lower().get())) return std::partial_ordering::less;
      if (mpfr_greater_p(a.lower().get(), b.upper().get())) return std::partial_ordering::greater;
    }
    fail(ErrorKind::kUndecidable, "could not separate " + str() + " and " + other.str());
  }
  const mpfr_prec_t bits = mixed_bits(*this, other);
  const RealInterval a = enclose(bits);
  const RealInterval b = other.enclose(bits);
  if (mpfr_less_p(a.upper().get(), b.lower().get())) return std::partial_ordering::less;
  if (mpfr_greater_p(a.lower().get(), b.upper().get())) return std::partial_ordering::greater;
  if (mpfr_equal_p(a.lower().get(), a.upper().get()) && a == b) {
    return std::partial_ordering::equivalent;
  }
  return std::partial_ordering::unordered;
}

Scalar Scalar::operator-() const {
  if (is_rational()) return Scalar(Rational(-std::get<Rational>(value_)));
  return Scalar(-enclose(precision()));
}

Scalar Scalar::abs() const { return sign() < 0 ? -*this : *this; }

Scalar operator+(const Scalar& a, const Scalar& b) {
  if (a.is_rational() && b.is_rational()) return Scalar(Rational(a.rational() + b.rational()));
  if (a.is_rational() && a.rational() == 0) return b;
  if (b.is_rational() && b.rational() == 0) return a;
  const mpfr_prec_t bits = mixed_bits(a, b);
  return Scalar(a.enclose(bits) + b.enclose(bits));
}

Scalar operator-(const Scalar& a, const Scalar& b) {
  if (a.is_rational() && b.is_rational()) return Scalar(Rational(a.rational() - b.rational()));
  if (b.is_rational() && b.rational() == 0) return a;
  const mpfr_prec_t bits = mixed_bits(a, b);
  return Scalar(a.enclose(bits) - b.enclose(bits));
}

Scalar operator*(const Scalar& a, const Scalar& b) {
  if (a.is_rational() && b.is_rational()) return Scalar(Rational(a.rational() * b.rational()));
  if ((a.is_rational() && a.rational() == 0) || (b.is_rational() && b.rational() == 0)) {
    return Scalar(0);
  }
  if (a.is_rational() && a.rational() == 1) return b;
  if (b.is_rational() && b.rational() == 1) return a;
  if (a.is_power() && b.is_power() && a.power_form().base == b.power_form().base) {
    return Scalar::power(a.power_form().base, a.power_form().exponent + b.power_form().exponent);
  }
  if (a.is_power() != b.is_power() && a.is_exact() && b.is_exact()) {
    const PowerForm& p = a.is_power() ? a.power_form() : b.power_form();
    const Rational& q = a.is_power() ? b.rational() : a.rational();
    if (auto k = integer_log(q, p.base)) return Scalar::power(p.base, p.exponent + Rational(*k));
  }
  const mpfr_prec_t bits = mixed_bits(a, b);
  return Scalar(a.enclose(bits) * b.enclose(bits));
}

Scalar operator/(const Scalar& a, const Scalar& b) {
  if (b.is_exact() && b.sign() == 0) fail(ErrorKind::kOutOfRange, "division by zero");
  if (b.is_exact()) return a * reciprocal(b);
  const mpfr_prec_t bits = mixed_bits(a, b);
  return Scalar(a.enclose(bits) / b.enclose(bits));
}

std::string Scalar::str() const {
  if (is_rational()) return to_string(std::get<Rational>(value_));
  if (is_power()) {
    const auto& p = std::get<PowerForm>(value_);
    return "pow(" + p.base.get_str() + ", " + to_string(p.exponent) + ")";
  }
  return decimal(kDefaultDigits);
}

std::string Scalar::decimal(int digits) const {
  if (is_real()) return real().to_decimal(digits);
  return enclose(digits_to_bits(digits) + 16).to_decimal(digits);
}

double Scalar::to_double() const {
  if (is_rational()) return std::get<Rational>(value_).get_d();
  return enclose(precision()).midpoint();
}

std::pair<double, double> Scalar::double_bounds() const {
  const RealInterval e = enclose(is_real() ? precision() : 64);
  return {mpfr_get_d(e.lower().get(), MPFR_RNDD), mpfr_get_d(e.upper().get(), MPFR_RNDU)};
}

Scalar pow(const Scalar& x, long n) {
  if (n == 0) return Scalar(1);
  if (n < 0) return Scalar(1) / pow(x, -n);
  if (x.is_rational()) {
    Rational r;
    mpz_pow_ui(r.get_num_mpz_t(), x.rational().get_num_mpz_t(), static_cast<unsigned long>(n));
    mpz_pow_ui(r.get_den_mpz_t(), x.rational().get_den_mpz_t(), static_cast<unsigned long>(n));
    return Scalar(r);
  }
  if (x.is_power()) return Scalar::power(x.power_form().base, x.power_form().exponent * n);
  Scalar result(1);
  Scalar base = x;
  while (n > 0) {
    if (n & 1) result *= base;
    n >>= 1;
    if (n > 0) base = base * base;
  }
  return result;
}

Scalar min(const Scalar& a, const Scalar& b) { return b.definitely_less(a) ? b : a; }
Scalar max(const Scalar& a, const Scalar& b) { return a.definitely_less(b) ? b : a; }

IntegerPart floor_of(const Scalar& x) {
  if (x.is_rational()) {
    Integer f;
    mpz_fdiv_q(f.get_mpz_t(), x.rational().get_num_mpz_t(), x.rational().get_den_mpz_t());
    return {f, false};
  }
  for (mpfr_prec_t bits = x.is_real() ? x.precision() : 128;; bits *= 2) {
    const RealInterval e = x.enclose(bits);
    Integer lo, hi;
    mpfr_get_z(lo.get_mpz_t(), e.lower().get(), MPFR_RNDD);
    mpfr_get_z(hi.get_mpz_t(), e.upper().get(), MPFR_RNDD);
    if (lo == hi) return {lo, false};
    if (x.is_real() || bits >= kMaxRefineBits) return {hi, true};
  }
}

IntegerPart ceil_of(const Scalar& x) {
  if (x.is_rational()) {
    Integer c;
    mpz_cdiv_q(c.get_mpz_t(), x.rational().get_num_mpz_t(), x.rational().get_den_mpz_t());
    return {c, false};
  }
  for (mpfr_prec_t bits = x.is_real() ? x.precision() : 128;; bits *= 2) {
    const RealInterval e = x.enclose(bits);
    Integer lo, hi;
    mpfr_get_z(lo.get_mpz_t(), e.lower().get(), MPFR_RNDU);
    mpfr_get_z(hi.get_mpz_t(), e.upper().get(), MPFR_RNDU);
    if (lo == hi) return {lo, false};
    if (x.is_real() || bits >= kMaxRefineBits) return {lo, true};
  }
}

RealInterval log_of(const Scalar& x, mpfr_prec_t bits) { return x.enclose(bits).log(); }

Rational parse_rational(const std::string& raw) {
  std::string text;
  for (char c : raw) {
    if (!std::isspace(static_cast<unsigned char>(c))) text.push_back(c);
  }
  auto bad = [&]() -> Rational { fail(ErrorKind::kParse, "malformed number '" + raw + "'"); };
  if (text.empty()) return bad();
  bool negative = false;
  std::size_t pos = 0;
  if (text[0] == '-' || text[0] == '+') {
    negative = text[0] == '-';
    pos = 1;
  }
  auto all_digits = [](std::string_view s) {
    return !s.empty() && std::all_of(s.begin(), s.end(),
                                     [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
  };
  const std::string body = text.substr(pos);
  Rational value;
  if (const auto slash = body.find('/'); slash != std::string::npos) {
    const std::string num = body.substr(0, slash);
    const std::string den = body.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) return bad();
    if (Integer(den, 10) == 0) fail(ErrorKind::kParse, "zero denominator in '" + raw + "'");
    value = Rational(Integer(num, 10), Integer(den, 10));
  } else if (const auto dot = body.find('.'); dot != std::string::npos) {
    const std::string whole = body.substr(0, dot);
    const std::string frac = body.substr(dot + 1);
    if ((!whole.empty() && !all_digits(whole)) || !all_digits(frac)) return bad();
    Integer den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, frac.size());
    value = Rational(Integer((whole.empty() ? "0" : whole) + frac, 10), den);
  } else {
    if (!all_digits(body)) return bad();
    value = Rational(Integer(body, 10));
  }
  value.canonicalize();
  return negative ? Rational(-value) : value;
}

std::string to_string(const Rational& q) { return q.get_str(); }

}  // namespace frx
