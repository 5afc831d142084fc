#pragma once

#include <string>
#include <vector>

#include "frx/dim_value.hpp"
#include "frx/expr.hpp"
#include "frx/scalar.hpp"

namespace frx {

/// Lebesgue measure, exact when lo == hi. Unions without a disjointness
/// declaration only give the bound [max child, sum of children].
struct MeasureValue {
  Scalar lo;
  Scalar hi;

  bool is_exact() const { return lo == hi; }
  std::string str() const;
};

/// Hausdorff dimension value; `exact == false` means `value` is only an
/// upper bound.
struct HausdorffDim {
  DimValue value;
  bool exact = true;

  std::string str() const;
};

/// Rule applications, one line per node, indented by depth.
using Trace = std::vector<std::string>;

HausdorffDim analytic_hausdorff_dim(const Expr& expr, Trace* trace = nullptr);
int analytic_ind_dim(const Expr& expr, Trace* trace = nullptr);
MeasureValue analytic_measure(const Expr& expr, Trace* trace = nullptr);

struct DimReport {
  HausdorffDim hausdorff_dim;
  int inductive_dim = 0;
  MeasureValue lebesgue_measure;
  bool is_fractal = false;
  Trace trace;
};

/// Full report. Throws RuleInapplicable when only an upper bound above the
/// inductive dimension is known, since the verdict is then undetermined.
DimReport is_fractal(const Expr& expr);

}  // namespace frx
