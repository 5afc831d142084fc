#include "frx/analytics.hpp"

#include "frx/error.hpp"

namespace frx {

namespace {

class Tracer {
 public:
  explicit Tracer(Trace* out) : out_(out) {}

  void note(int depth, const std::string& text) const {
    if (out_) out_->push_back(std::string(static_cast<std::size_t>(depth) * 2, ' ') + text);
  }

 private:
  Trace* out_;
};

std::string node_label(const Expr& e) {
  switch (e.kind()) {
    case NodeKind::kCantor: {
      const auto& seq = e.as_cantor().spec.seq;
      std::string label = "cantor(s=" + std::to_string(seq.order());
      if (seq.is_geometric()) {
        label += ", beta=" + seq.geometric_family().beta.str() + ", l=" + seq.geometric_family().l.str();
      } else {
        label += ", sequence=" + seq.explicit_family().name;
      }
      return label + ")";
    }
    case NodeKind::kCube:
      return "cube(n=" + std::to_string(e.as_cube().dim) + ")";
    case NodeKind::kAffine:
      return "affine";
    case NodeKind::kUnion:
      return e.as_union().disjoint ? "union[disjoint]" : "union";
    case NodeKind::kIndexedUnion:
      return "iunion(" + e.as_indexed_union().family.str() + ")";
    case NodeKind::kProduct:
      return "product";
    case NodeKind::kPrune:
      return "prune(seed=" + std::to_string(e.as_prune().seed) + ")";
  }
  return "?";
}

Scalar abs_scale_product(const AffineNode& a) {
  Scalar factor(1);
  for (const Scalar& c : a.scales) factor *= c.abs();
  return factor;
}

// Cantor primitives reached through affine maps, unions and products only.
bool cantor_derived(const Expr& e) {
  switch (e.kind()) {
    case NodeKind::kCantor:
    case NodeKind::kIndexedUnion:
      return true;
    case NodeKind::kAffine:
      return cantor_derived(e.as_affine().child);
    case NodeKind::kUnion:
      for (const Expr& c : e.as_union().children) {
        if (!cantor_derived(c)) return false;
      }
      return true;
    case NodeKind::kProduct:
      for (const Expr& c : e.as_product().children) {
        if (!cantor_derived(c)) return false;
      }
      return true;
    default:
      return false;
  }
}

MeasureValue measure_rec(const Expr& e, const Tracer& t, int depth) {
  MeasureValue m;
  std::string rule;
  switch (e.kind()) {
    case NodeKind::kCantor:
      m.lo = m.hi = limit_measure(e.as_cantor().spec);
      rule = "limit measure 1 - sum of removed masses";
      break;
    case NodeKind::kCube:
      m.lo = m.hi = Scalar(1);
      rule = "unit cube";
      break;
    case NodeKind::kAffine: {
      const MeasureValue child = measure_rec(e.as_affine().child, t, depth + 1);
      const Scalar factor = abs_scale_product(e.as_affine());
      m.lo = factor * child.lo;
      m.hi = factor * child.hi;
      rule = "affine: times |product of scales| = " + factor.str();
      break;
    }
    case NodeKind::kUnion: {
      const auto& u = e.as_union();
      m.lo = m.hi = Scalar(0);
      for (const Expr& c : u.children) {
        const MeasureValue child = measure_rec(c, t, depth + 1);
        m.lo = u.disjoint ? m.lo + child.lo : max(m.lo, child.lo);
        m.hi = m.hi + child.hi;
      }
      rule = u.disjoint ? "disjoint union: additivity" : "union without disjointness: [max, sum]";
      break;
    }
    case NodeKind::kIndexedUnion:
      m.lo = m.hi = e.as_indexed_union().symbolic_measure;
      rule = "indexed union: dyadic-weight closed form";
      break;
    case NodeKind::kProduct: {
      m.lo = m.hi = Scalar(1);
      for (const Expr& c : e.as_product().children) {
        const MeasureValue child = measure_rec(c, t, depth + 1);
        m.lo *= child.lo;
        m.hi *= child.hi;
      }
      rule = "product measure";
      break;
    }
    case NodeKind::kPrune: {
      const MeasureValue child = measure_rec(e.as_prune().child, t, depth + 1);
      m.lo = Scalar(0);
      m.hi = child.hi;
      rule = child.hi.sign() == 0 ? "subset of a null set" : "subset: [0, parent measure]";
      break;
    }
  }
  t.note(depth, "measure " + node_label(e) + ": " + rule + " -> " + m.str());
  return m;
}

// Positive-measure rule: returns the ambient dimension when the measure is
// certainly positive.
std::optional<int> positive_measure_dim(const Expr& e) {
  try {
    const MeasureValue m = analytic_measure(e);
    if (m.lo.sign() > 0) return e.ambient_dim();
  } catch (const Error& err) {
    if (err.kind() != ErrorKind::kNoClosedForm) throw;
  }
  return std::nullopt;
}

HausdorffDim combine_max(const std::vector<HausdorffDim>& parts) {
  std::optional<DimValue> exact;
  std::optional<DimValue> bound;
  for (const HausdorffDim& p : parts) {
    auto& slot = p.exact ? exact : bound;
    slot = slot ? max(*slot, p.value) : p.value;
  }
  if (!bound) return {*exact, true};
  if (!exact) return {*bound, false};
  if (bound->compare(*exact) <= 0) return {*exact, true};
  return {*bound, false};
}

HausdorffDim dim_rec(const Expr& e, const Tracer& t, int depth) {
  HausdorffDim d;
  std::string rule;
  if (e.kind() != NodeKind::kCube) {
    if (const auto n = positive_measure_dim(e)) {
      d = {DimValue(static_cast<long>(*n)), true};
      t.note(depth, "dim " + node_label(e) + ": positive Lebesgue measure forces ambient dimension -> " +
                        d.str());
      return d;
    }
  }
  switch (e.kind()) {
    case NodeKind::kCantor:
      d = {hausdorff_dim_uniform(e.as_cantor().spec), true};
      rule = "uniform Cantor closed form";
      break;
    case NodeKind::kCube:
      d = {DimValue(static_cast<long>(e.as_cube().dim)), true};
      rule = "cube";
      break;
    case NodeKind::kAffine: {
      const auto& a = e.as_affine();
      d = dim_rec(a.child, t, depth + 1);
      rule = "affine invariance (bi-Lipschitz)";
      bool reflects = false;
      bool anisotropic = false;
      for (const Scalar& c : a.scales) {
        if (c.sign() < 0) reflects = true;
        if (!(c.abs() == a.scales.front().abs())) anisotropic = true;
      }
      if (reflects) rule += "; extension: reflection";
      if (anisotropic) rule += "; extension: anisotropic scaling";
      break;
    }
    case NodeKind::kUnion: {
      std::vector<HausdorffDim> parts;
      for (const Expr& c : e.as_union().children) parts.push_back(dim_rec(c, t, depth + 1));
      d = combine_max(parts);
      rule = "union: max rule";
      break;
    }
    case NodeKind::kIndexedUnion:
      d = {e.as_indexed_union().symbolic_dim, true};
      rule = "indexed union: supremum over family";
      break;
    case NodeKind::kProduct: {
      const auto& p = e.as_product();
      bool has_cantor = false;
      for (const Expr& c : p.children) has_cantor = has_cantor || cantor_derived(c);
      if (!has_cantor) {
        fail(ErrorKind::kRuleInapplicable,
             "product sum rule needs a factor derived from a uniform Cantor set");
      }
      d = {DimValue(0), true};
      for (const Expr& c : p.children) {
        const HausdorffDim part = dim_rec(c, t, depth + 1);
        d.value = d.value + part.value;
        d.exact = d.exact && part.exact;
      }
      rule = "product: sum rule with a uniform Cantor factor";
      break;
    }
    case NodeKind::kPrune:
      d = {dim_rec(e.as_prune().child, t, depth + 1).value, false};
      rule = "subset: bounded by parent";
      break;
  }
  t.note(depth, "dim " + node_label(e) + ": " + rule + " -> " + d.str());
  return d;
}

int ind_rec(const Expr& e, const Tracer& t, int depth) {
  int value = 0;
  std::string rule;
  switch (e.kind()) {
    case NodeKind::kCantor:
      rule = "Cantor set: clopen base";
      break;
    case NodeKind::kIndexedUnion:
      rule = "countable union of 0-dimensional closed sets";
      break;
    case NodeKind::kCube:
      value = e.as_cube().dim;
      rule = "cube";
      break;
    case NodeKind::kAffine:
      value = ind_rec(e.as_affine().child, t, depth + 1);
      rule = "homeomorphism invariance";
      break;
    case NodeKind::kPrune:
      ind_rec(e.as_prune().child, t, depth + 1);
      rule = "subset of a 0-dimensional set";
      break;
    case NodeKind::kUnion: {
      const int n = e.ambient_dim();
      bool all_zero = true;
      bool reaches_ambient = false;
      for (const Expr& c : e.as_union().children) {
        const int child = ind_rec(c, t, depth + 1);
        all_zero = all_zero && child == 0;
        reaches_ambient = reaches_ambient || child == n;
      }
      if (reaches_ambient) {
        value = n;
        rule = "union containing an n-dimensional part: monotone and capped at n";
      } else if (all_zero) {
        rule = "countable union of 0-dimensional sets";
      } else {
        fail(ErrorKind::kRuleInapplicable, "inductive dimension of a union mixing dimensions below " +
                                               std::to_string(n) + " is outside the rule set");
      }
      break;
    }
    case NodeKind::kProduct: {
      bool all_zero = true;
      bool all_full = true;
      int sum = 0;
      for (const Expr& c : e.as_product().children) {
        const int child = ind_rec(c, t, depth + 1);
        all_zero = all_zero && child == 0;
        all_full = all_full && child == c.ambient_dim();
        sum += child;
      }
      if (all_zero) {
        rule = "product of 0-dimensional sets";
      } else if (all_full) {
        value = sum;
        rule = "product of full-dimensional factors";
      } else {
        fail(ErrorKind::kRuleInapplicable,
             "inductive dimension of a product mixing 0-dimensional and solid factors is outside the rule set");
      }
      break;
    }
  }
  t.note(depth, "ind " + node_label(e) + ": " + rule + " -> " + std::to_string(value));
  return value;
}

}  // namespace

std::string MeasureValue::str() const {
  if (is_exact()) return lo.str();
  return "[" + lo.str() + ", " + hi.str() + "]";
}

std::string HausdorffDim::str() const { return (exact ? "" : "<= ") + value.str(); }

HausdorffDim analytic_hausdorff_dim(const Expr& expr, Trace* trace) {
  return dim_rec(expr, Tracer(trace), 0);
}

int analytic_ind_dim(const Expr& expr, Trace* trace) { return ind_rec(expr, Tracer(trace), 0); }

MeasureValue analytic_measure(const Expr& expr, Trace* trace) {
  return measure_rec(expr, Tracer(trace), 0);
}

DimReport is_fractal(const Expr& expr) {
  DimReport report;
  report.hausdorff_dim = analytic_hausdorff_dim(expr, &report.trace);
  report.inductive_dim = analytic_ind_dim(expr, &report.trace);
  report.lebesgue_measure = analytic_measure(expr, &report.trace);
  const auto order = report.hausdorff_dim.value.compare(DimValue(static_cast<long>(report.inductive_dim)));
  if (report.hausdorff_dim.exact) {
    report.is_fractal = order > 0;
  } else if (order <= 0) {
    report.is_fractal = false;
  } else {
    fail(ErrorKind::kRuleInapplicable, "only the upper bound " + report.hausdorff_dim.str() +
                                           " is known, so the fractal test is undetermined");
  }
  report.trace.push_back(std::string("fractal test: dim_H ") + report.hausdorff_dim.str() +
                         (report.is_fractal ? " > " : " <= ") + "dim_ind " +
                         std::to_string(report.inductive_dim));
  return report;
}

}  // namespace frx
