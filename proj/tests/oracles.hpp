#pragma once

// Reference computations used to cross-check the library. They work on plain
// GMP rationals and take a different route from the production code.

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <limits>
#include <set>
#include <unordered_set>
#include <utility>
#include <vector>

namespace oracle {

using Q = mpq_class;
using Span = std::pair<Q, Q>;
using QBox = std::vector<Span>;

inline Q qpow(Q base, long n) {
  Q out = 1;
  for (long i = 0; i < n; ++i) out *= base;
  return out;
}

/// Mass removed at stage k of a geometric removing sequence.
inline Q removal_term(int s, const Q& beta, const Q& l, long k) {
  return qpow((s + 1) * beta, k - 1) * (1 - (s + 1) * beta) * (1 - l);
}

/// 1 minus the first n removal terms, summed term by term.
inline Q remaining_mass(int s, const Q& beta, const Q& l, long n) {
  Q total = 1;
  for (long k = 1; k <= n; ++k) total -= removal_term(s, beta, l, k);
  return total;
}

/// Stage-n intervals built by splitting each parent symmetrically: the s+1
/// children share the remaining mass equally and are spread evenly, the
/// outer two flush with the parent's endpoints.
inline std::vector<Span> cantor_intervals(int s, const Q& beta, const Q& l, int n) {
  std::vector<Span> current{{Q(0), Q(1)}};
  for (int k = 1; k <= n; ++k) {
    const Q child = remaining_mass(s, beta, l, k) / qpow(Q(s + 1), k);
    std::vector<Span> next;
    for (const auto& [a, b] : current) {
      const Q step = (b - a - child) / s;
      for (int j = 0; j <= s; ++j) next.push_back({a + j * step, a + j * step + child});
    }
    current = std::move(next);
  }
  return current;
}

inline Q floor_q(const Q& x) {
  mpz_class f;
  mpz_fdiv_q(f.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return Q(f);
}

/// Does grid cell k (side eps, origin o) meet the side [lo, hi]? Positive
/// sides need the open cell to meet the open side; a point side belongs to
/// the half-open cell [o + k eps, o + (k+1) eps) holding it.
inline bool cell_meets(long k, const Q& origin, const Q& eps, const Span& side) {
  const Q cell_lo = origin + k * eps;
  const Q cell_hi = cell_lo + eps;
  if (side.first == side.second) return cell_lo <= side.first && side.first < cell_hi;
  return side.first < cell_hi && cell_lo < side.second;
}

/// Counts occupied cells. A box meets a cell iff it meets it on every axis,
/// so each axis is tested separately with `cell_meets` over every cell near
/// the box (one cell of slack on both sides); hits are collected in a set of
/// packed cell indices.
inline std::uint64_t brute_force_count(const std::vector<QBox>& boxes, const Q& eps, const std::vector<Q>& origin) {
  const std::size_t dims = origin.size();
  std::vector<std::vector<std::vector<long>>> hits(boxes.size(), std::vector<std::vector<long>>(dims));
  std::vector<long> min_index(dims, std::numeric_limits<long>::max());
  std::vector<long> max_index(dims, std::numeric_limits<long>::min());
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    for (std::size_t a = 0; a < dims; ++a) {
      const long lo = floor_q((boxes[i][a].first - origin[a]) / eps).get_num().get_si() - 1;
      const long hi = floor_q((boxes[i][a].second - origin[a]) / eps).get_num().get_si() + 1;
      for (long k = lo; k <= hi; ++k) {
        if (!cell_meets(k, origin[a], eps, boxes[i][a])) continue;
        hits[i][a].push_back(k);
        min_index[a] = std::min(min_index[a], k);
        max_index[a] = std::max(max_index[a], k);
      }
    }
  }
  std::unordered_set<std::uint64_t> occupied;
  for (const auto& per_axis : hits) {
    if (std::any_of(per_axis.begin(), per_axis.end(), [](const auto& v) { return v.empty(); })) continue;
    std::vector<std::size_t> at(dims, 0);
    while (true) {
      std::uint64_t key = 0;
      for (std::size_t a = 0; a < dims; ++a) {
        key = key * static_cast<std::uint64_t>(max_index[a] - min_index[a] + 1) +
              static_cast<std::uint64_t>(per_axis[a][at[a]] - min_index[a]);
      }
      occupied.insert(key);
      std::size_t a = 0;
      while (a < dims && ++at[a] == per_axis[a].size()) at[a] = 0, ++a;
      if (a == dims) break;
    }
  }
  return occupied.size();
}

/// Grid cells spanned by the hull of `boxes`.
inline Q grid_cells(const std::vector<QBox>& boxes, const Q& eps, const std::vector<Q>& origin) {
  Q cells = 1;
  for (std::size_t a = 0; a < origin.size(); ++a) {
    Q min_lo = boxes.front()[a].first;
    Q max_hi = boxes.front()[a].second;
    for (const QBox& b : boxes) {
      min_lo = std::min(min_lo, b[a].first);
      max_hi = std::max(max_hi, b[a].second);
    }
    cells *= floor_q((max_hi - origin[a]) / eps) - floor_q((min_lo - origin[a]) / eps) + 1;
  }
  return cells;
}

/// Union volume by coordinate compression: every elementary cell between
/// consecutive endpoints is either inside some box or not.
inline Q brute_force_volume(const std::vector<QBox>& boxes) {
  if (boxes.empty()) return 0;
  const std::size_t dims = boxes.front().size();
  std::vector<std::vector<Q>> cuts(dims);
  for (std::size_t a = 0; a < dims; ++a) {
    std::set<Q> points;
    for (const QBox& b : boxes) points.insert(b[a].first), points.insert(b[a].second);
    cuts[a].assign(points.begin(), points.end());
    if (cuts[a].size() < 2) return 0;
  }
  Q total = 0;
  std::vector<std::size_t> idx(dims, 0);
  while (true) {
    Q volume = 1;
    bool inside = false;
    for (const QBox& b : boxes) {
      bool all = true;
      for (std::size_t a = 0; a < dims && all; ++a) {
        all = b[a].first <= cuts[a][idx[a]] && cuts[a][idx[a] + 1] <= b[a].second;
      }
      if (all) {
        inside = true;
        break;
      }
    }
    if (inside) {
      for (std::size_t a = 0; a < dims; ++a) volume *= cuts[a][idx[a] + 1] - cuts[a][idx[a]];
      total += volume;
    }
    std::size_t a = 0;
    while (a < dims && ++idx[a] + 1 >= cuts[a].size()) idx[a] = 0, ++a;
    if (a == dims) break;
  }
  return total;
}

/// Cartesian product of per-axis interval lists, last axis fastest.
inline std::vector<QBox> product_boxes(const std::vector<std::vector<Span>>& axes) {
  std::vector<QBox> out{QBox{}};
  for (const auto& axis : axes) {
    std::vector<QBox> next;
    for (const QBox& prefix : out) {
      for (const Span& s : axis) {
        QBox b = prefix;
        b.push_back(s);
        next.push_back(std::move(b));
      }
    }
    out = std::move(next);
  }
  return out;
}

}  // namespace oracle
