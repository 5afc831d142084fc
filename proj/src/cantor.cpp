#include "frx/cantor.hpp"

#include "frx/error.hpp"

namespace frx {

namespace {

Scalar ratio_q(const RemovingSequence& seq) {
  return Scalar(seq.order() + 1) * seq.geometric_family().beta;
}

Integer children_per_node(const CantorSpec& spec) { return Integer(spec.order() + 1); }

// Exact values stay exact; irrational ones are materialized at `digits`.
Scalar at_precision(const Scalar& x, int digits) {
  if (x.is_rational() || x.is_real()) return x;
  return Scalar(x.enclose(digits_to_bits(digits)));
}

}  // namespace

RemovingSequence RemovingSequence::geometric(int order, Scalar beta, Scalar l) {
  if (order < 1) fail(ErrorKind::kOutOfRange, "order s must be >= 1");
  if (!beta.is_exact() || !l.is_exact()) {
    fail(ErrorKind::kOutOfRange, "geometric parameters must be exact");
  }
  const Scalar bound = Scalar(Rational(1, order + 1));
  if (beta.sign() <= 0 || !beta.definitely_less(bound)) {
    fail(ErrorKind::kOutOfRange,
         "beta = " + beta.str() + " must satisfy 0 < beta < 1/(s+1) = " + bound.str());
  }
  if (l.sign() < 0 || !l.definitely_less(Scalar(1))) {
    fail(ErrorKind::kOutOfRange, "l = " + l.str() + " must satisfy 0 <= l < 1");
  }
  return RemovingSequence(order, GeometricFamily{std::move(beta), std::move(l)});
}

RemovingSequence RemovingSequence::explicit_rule(int order, ExplicitFamily family) {
  if (order < 1) fail(ErrorKind::kOutOfRange, "order s must be >= 1");
  if (!family.term || !family.partial_sum) {
    fail(ErrorKind::kOutOfRange, "explicit sequence needs term and partial-sum rules");
  }
  return RemovingSequence(order, std::move(family));
}

CantorSpec middle_third() {
  return CantorSpec{RemovingSequence::geometric(1, Scalar(Rational(1, 3)), Scalar(0))};
}

Scalar beta_term(const RemovingSequence& seq, long n) {
  if (n < 1) fail(ErrorKind::kOutOfRange, "beta_n is defined for n >= 1");
  if (!seq.is_geometric()) return seq.explicit_family().term(n);
  const auto& g = seq.geometric_family();
  const Scalar q = ratio_q(seq);
  return pow(q, n - 1) * (Scalar(1) - q) * (Scalar(1) - g.l);
}

Scalar partial_sum(const RemovingSequence& seq, long n) {
  if (n < 0) fail(ErrorKind::kOutOfRange, "partial sums are defined for n >= 0");
  if (n == 0) return Scalar(0);
  if (!seq.is_geometric()) return seq.explicit_family().partial_sum(n);
  const auto& g = seq.geometric_family();
  return (Scalar(1) - g.l) * (Scalar(1) - pow(ratio_q(seq), n));
}

Scalar stage_measure(const CantorSpec& spec, long n) {
  if (n < 0) fail(ErrorKind::kOutOfRange, "stage must be >= 0");
  if (!spec.seq.is_geometric()) return Scalar(1) - partial_sum(spec.seq, n);
  // l + (1-l) q^n keeps beta^n exact for power-form ratios.
  const auto& g = spec.seq.geometric_family();
  return g.l + (Scalar(1) - g.l) * pow(ratio_q(spec.seq), n);
}

Scalar stage_length(const CantorSpec& spec, long n) {
  return stage_measure(spec, n) / pow(Scalar(spec.order() + 1), n);
}

Scalar stage_gap(const CantorSpec& spec, long n) {
  return beta_term(spec.seq, n) /
         (Scalar(spec.order()) * pow(Scalar(spec.order() + 1), n - 1));
}

StageCover stage_cover(const CantorSpec& spec, int n, const CoverOptions& options) {
  if (n < 0) fail(ErrorKind::kOutOfRange, "stage must be >= 0");
  Integer count;
  mpz_pow_ui(count.get_mpz_t(), children_per_node(spec).get_mpz_t(), static_cast<unsigned long>(n));
  if (count > Integer(std::to_string(options.cap))) {
    fail(ErrorKind::kCapExceeded, "stage " + std::to_string(n) + " needs " + count.get_str() +
                                      " intervals (cap " + std::to_string(options.cap) + ")");
  }

  const int s = spec.order();
  StageCover cover{0, {Interval{Scalar(0), Scalar(1)}}};
  Scalar previous_length(1);
  for (int k = 1; k <= n; ++k) {
    const Scalar length = at_precision(stage_length(spec, k), options.digits);
    const Scalar gap = at_precision(stage_gap(spec, k), options.digits);
    const Scalar rebuilt = Scalar(s + 1) * length + Scalar(s) * gap;
    const auto consistency = rebuilt.compare(previous_length);
    if (consistency == std::partial_ordering::less || consistency == std::partial_ordering::greater) {
      fail(ErrorKind::kInvalidExpression,
           "removing sequence is inconsistent at stage " + std::to_string(k) + ": (s+1)*delta + s*gap = " +
               rebuilt.str() + " but the parent length is " + previous_length.str());
    }
    std::vector<Scalar> offsets;
    offsets.reserve(static_cast<std::size_t>(s) + 1);
    const Scalar step = length + gap;
    for (int j = 0; j <= s; ++j) offsets.push_back(Scalar(j) * step);

    std::vector<Interval> next;
    next.reserve(cover.intervals.size() * static_cast<std::size_t>(s + 1));
    for (const Interval& parent : cover.intervals) {
      for (const Scalar& offset : offsets) {
        Scalar lo = parent.lo + offset;
        Scalar hi = lo + length;
        next.push_back(Interval{std::move(lo), std::move(hi)});
      }
    }
    cover.intervals = std::move(next);
    cover.stage = k;
    previous_length = length;
  }
  return cover;
}

Scalar limit_measure(const CantorSpec& spec) {
  if (spec.seq.is_geometric()) return spec.seq.geometric_family().l;
  const auto& family = spec.seq.explicit_family();
  if (!family.total) {
    fail(ErrorKind::kNoClosedForm, "sequence '" + family.name + "' has no closed-form total");
  }
  return Scalar(1) - *family.total;
}

DimValue hausdorff_dim_uniform(const CantorSpec& spec, int prefix_length) {
  const int s = spec.order();
  if (spec.seq.is_geometric()) {
    const auto& g = spec.seq.geometric_family();
    if (g.l.sign() > 0) return DimValue(1);
    if (g.beta.is_rational()) {
      return DimValue::log_ratio(1, Rational(s + 1), Rational(1) / g.beta.rational());
    }
    // beta = b^e: log(s+1) / (-e log b).
    const PowerForm& p = g.beta.power_form();
    return DimValue::log_ratio(Rational(-1) / p.exponent, Rational(s + 1), Rational(p.base));
  }

  const auto& family = spec.seq.explicit_family();
  if (!family.total) {
    fail(ErrorKind::kConditionUnverified,
         "sequence '" + family.name + "' has no closed-form total, so l is unknown");
  }
  const Scalar l = Scalar(1) - *family.total;
  if (l.sign() > 0) return DimValue(1);

  for (long n = 1; n <= prefix_length; ++n) {
    const Scalar term = family.term(n);
    const Scalar before = n == 1 ? Scalar(0) : family.partial_sum(n - 1);
    const Scalar remaining = Scalar(1) - before;
    if (term.sign() <= 0 || remaining.sign() <= 0) {
      fail(ErrorKind::kConditionUnverified,
           "prefix check failed at n = " + std::to_string(n) + ": beta_n or remaining mass not positive");
    }
    const Scalar step = family.partial_sum(n) - before;
    const auto agree = step.compare(term);
    if (agree == std::partial_ordering::less || agree == std::partial_ordering::greater) {
      fail(ErrorKind::kConditionUnverified,
           "term and partial-sum rules disagree at n = " + std::to_string(n));
    }
    if ((term / remaining).sign() <= 0) {
      fail(ErrorKind::kConditionUnverified, "ratio beta_n / remaining mass vanishes");
    }
  }
  if (!family.limsup_decay) {
    fail(ErrorKind::kConditionUnverified,
         "sequence '" + family.name + "' declares no limsup rule; a finite prefix cannot certify it");
  }
  const Rational& x = *family.limsup_decay;
  if (x < 1) fail(ErrorKind::kConditionUnverified, "limsup decay base must be >= 1");
  return DimValue::log_ratio(1, Rational(s + 1), Rational(s + 1) * x);
}

Scalar solve_beta_for_dim(const Rational& r, int order) {
  if (order < 1) fail(ErrorKind::kOutOfRange, "order s must be >= 1");
  if (r <= 0 || r >= 1) {
    fail(ErrorKind::kOutOfRange, "target dimension r = " + to_string(r) + " must lie in (0,1)");
  }
  return Scalar::power(Integer(order + 1), Rational(-1) / r);
}

}  // namespace frx
