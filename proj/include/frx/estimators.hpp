#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "frx/cover.hpp"
#include "frx/expr.hpp"

namespace frx {

inline constexpr std::uint64_t kDefaultCellCap = 1'000'000'000'000'000ull;

/// Uniform grid of half-open cells [o + k eps, o + (k+1) eps) per axis. The
/// origin defaults to the lower corner of the cover's hull.
struct GridSpec {
  Scalar epsilon;
  std::optional<std::vector<Scalar>> origin;
};

/// Number of grid cells whose interior meets some box; a degenerate box
/// side occupies the cell containing it. CapExceeded when the grid spanned
/// by the cover has more than `cell_cap` cells.
std::uint64_t box_count(const BoxCover& cover, const GridSpec& grid,
                        std::uint64_t cell_cap = kDefaultCellCap);

enum class GridMode { kNatural, kDyadic };

struct FitPoint {
  int stage = 0;
  Scalar epsilon;
  std::uint64_t count = 0;
  double log_inv_epsilon = 0;
  double log_count = 0;
  /// log N / log(1/eps) at this single scale.
  double ratio = 0;
};

struct FitReport {
  GridMode mode = GridMode::kNatural;
  int first_stage = 0;
  int last_stage = 0;
  std::vector<FitPoint> points;
  double slope = 0;
  double intercept = 0;
  /// Root-mean-square residual of the least-squares line.
  double residual = 0;
};

/// Least-squares slope of log N against log(1/eps). Natural mode uses the
/// stage-k box count with eps the largest box side; dyadic mode counts grid
/// cells of side E 2^-k, E being the largest side of the bounding box.
FitReport box_dim_fit(const Expr& expr, int first_stage, int last_stage, GridMode mode = GridMode::kNatural,
                      const CoverOptions& options = {});

/// Exact volume of the stage cover, computed structurally where the tree
/// declares disjointness and by a sweep elsewhere.
Scalar stage_volume(const Expr& expr, int stage, const CoverOptions& options = {});
/// Exact volume of a union of boxes.
Scalar union_volume(const std::vector<Box>& boxes);

struct MeasurePoint {
  int stage = 0;
  Scalar volume;
  /// Distance from the volume to the analytic measure (or its bound).
  Scalar deviation;
};

std::vector<MeasurePoint> measure_series(const Expr& expr, int first_stage, int last_stage,
                                         const CoverOptions& options = {});

enum class CheckStatus { kPass, kFail, kSkip };

struct CheckResult {
  std::string name;
  CheckStatus status = CheckStatus::kPass;
  std::string detail;
};

struct VerifyReport {
  std::vector<CheckResult> checks;

  bool passed() const;
  const CheckResult* find(const std::string& name) const;
  std::string str() const;
};

inline constexpr double kDefaultTolerance = 1e-9;

/// Runs the invariant suite over stages [first_stage, last_stage]:
/// primitives, nesting, disjointness, count, measure, boxdim.
VerifyReport verify(const Expr& expr, int first_stage, int last_stage, double tolerance = kDefaultTolerance,
                    const CoverOptions& options = {});

/// Disjointness within each cover and nesting of consecutive covers, for
/// externally supplied covers.
VerifyReport verify_covers(const std::vector<BoxCover>& covers);

}  // namespace frx
