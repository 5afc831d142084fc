#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "frx/scalar.hpp"

namespace frx {

/// Infinite, eventually periodic subset of {1, 2, 3, ...}: a finite explicit
/// part below `tail_start`, then `pattern` repeated from `tail_start` on
/// (bit i of the pattern selects tail_start + i + k*period).
///
/// Values are kept in a canonical form (primitive period, smallest tail
/// start), so structural equality is set equality.
class IndexSet {
 public:
  /// Throws IndexSetFinite when the pattern has no 1 bit and OutOfRange for
  /// non-positive elements or malformed patterns. `tail_start` defaults to
  /// max(explicit) + 1, or 1 when the explicit part is empty.
  static IndexSet make(std::vector<long> explicit_part, std::optional<long> tail_start,
                       const std::string& pattern);

  static IndexSet naturals();
  static IndexSet evens();
  static IndexSet odds();

  const std::vector<long>& explicit_part() const { return explicit_; }
  long tail_start() const { return tail_start_; }
  const std::string& pattern() const { return pattern_; }

  bool contains(long s) const;
  /// The `count` smallest elements in increasing order.
  std::vector<long> first(std::size_t count) const;
  long min_element() const { return first(1).front(); }

  /// Sum over s in the set of 2^(-s), exact.
  Rational dyadic_weight() const;

  /// frx syntax, e.g. "{1,3; from=6, period=01}".
  std::string str() const;

  bool operator==(const IndexSet&) const = default;

 private:
  IndexSet() = default;
  void canonicalize();

  std::vector<long> explicit_;
  long tail_start_ = 1;
  std::string pattern_ = "1";
};

}  // namespace frx
