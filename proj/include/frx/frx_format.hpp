#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "frx/error.hpp"
#include "frx/expr.hpp"
#include "frx/index_set.hpp"

namespace frx {

/// Error raised while reading .frx text. Syntax errors have kind Parse and
/// list the expected tokens; semantic errors keep the library's kind and
/// point at the offending construct.
class ParseError : public Error {
 public:
  ParseError(ErrorKind kind, int line, int column, std::vector<std::string> expected, const std::string& message);

  int line() const { return line_; }
  int column() const { return column_; }
  const std::vector<std::string>& expected() const { return expected_; }

 private:
  int line_;
  int column_;
  std::vector<std::string> expected_;
};

/// Grammar:
///   expr    := cantor(s=INT, beta=SCALAR, l=SCALAR)
///            | cube(n=INT)
///            | affine(scale=[SCALAR, ...], shift=[SCALAR, ...], expr)
///            | union(expr, ..., [disjoint=true|false])
///            | iunion(family=FAMILY, index=INDEXSET, truncate=INT)
///            | product(expr, ...)
///            | prune(expr, seed=INT)
///            | symmetrize(expr)
///   SCALAR  := [-]INT[/INT] | [-]DECIMAL | pow(INT, [-]INT[/INT])
///   FAMILY  := thin_blocks(r=SCALAR) | ramp(s0=INT)
///            | ramp_blocks(index=INDEXSET, truncate=INT) | fat_blocks(l=SCALAR)
///   INDEXSET:= {INT, ...; from=INT, period=BITS}
/// Keyword arguments may appear in any order; `#` starts a comment.
Expr parse_frx(std::string_view text);

/// Canonical text, two-space indentation, trailing newline.
/// Throws NotRepresentable for explicit removing sequences.
std::string emit_frx(const Expr& expr);

IndexSet parse_index_set(std::string_view text);

}  // namespace frx
