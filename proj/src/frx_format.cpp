#include "frx/frx_format.hpp"

#include <cctype>
#include <map>
#include <optional>
#include <variant>

namespace frx {

namespace {

enum class Tok { kIdent, kNumber, kSymbol, kEnd };

struct Token {
  Tok kind;
  std::string text;
  int line;
  int column;
};

std::string describe(const Token& t) {
  if (t.kind == Tok::kEnd) return "end of input";
  return "'" + t.text + "'";
}

std::string join_expected(const std::vector<std::string>& expected) {
  std::string out;
  for (std::size_t i = 0; i < expected.size(); ++i) {
    if (i > 0) out += ", ";
    out += expected[i];
  }
  return out;
}

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> tokens;
  int line = 1;
  int column = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
      ++i;
    }
  };
  while (i < text.size()) {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '#') {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    const int start_line = line;
    const int start_column = column;
    std::size_t j = i;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_')) ++j;
      tokens.push_back({Tok::kIdent, std::string(text.substr(i, j - i)), start_line, start_column});
    } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      while (j < text.size() && (std::isdigit(static_cast<unsigned char>(text[j])) || text[j] == '.')) ++j;
      tokens.push_back({Tok::kNumber, std::string(text.substr(i, j - i)), start_line, start_column});
    } else if (std::string_view("()[]{},=;/-+").find(c) != std::string_view::npos) {
      j = i + 1;
      tokens.push_back({Tok::kSymbol, std::string(1, c), start_line, start_column});
    } else {
      throw ParseError(ErrorKind::kParse, start_line, start_column, {},
                       "unexpected character '" + std::string(1, c) + "'");
    }
    advance(j - i);
  }
  tokens.push_back({Tok::kEnd, "", line, column});
  return tokens;
}

enum class ArgType { kInt, kScalar, kScalarList, kBool, kIndexSet, kFamily };

using ArgValue = std::variant<Integer, Scalar, std::vector<Scalar>, bool, IndexSet, Family>;

struct Args {
  std::map<std::string, ArgValue> keyword;
  std::vector<Expr> positional;
};

class Parser {
 public:
  explicit Parser(std::string_view text) : tokens_(tokenize(text)) {}

  Expr document() {
    Expr e = expr();
    expect_end();
    return e;
  }

  IndexSet index_set_document() {
    IndexSet set = index_set();
    expect_end();
    return set;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    return tokens_[std::min(pos_ + ahead, tokens_.size() - 1)];
  }
  const Token& next() { return tokens_[pos_ < tokens_.size() - 1 ? pos_++ : pos_]; }

  [[noreturn]] void syntax(const Token& at, std::vector<std::string> expected) const {
    const std::string message = "expected " + join_expected(expected) + ", found " + describe(at);
    throw ParseError(ErrorKind::kParse, at.line, at.column, std::move(expected), message);
  }

  [[noreturn]] void semantic(const Token& at, const Error& err) const {
    std::string message = err.what();
    const std::string prefix = std::string(to_string(err.kind())) + ": ";
    if (message.starts_with(prefix)) message.erase(0, prefix.size());
    throw ParseError(err.kind(), at.line, at.column, {}, message);
  }

  bool is_symbol(const Token& t, char c) const { return t.kind == Tok::kSymbol && t.text[0] == c; }

  void expect_symbol(char c) {
    if (!is_symbol(peek(), c)) syntax(peek(), {"'" + std::string(1, c) + "'"});
    next();
  }

  void expect_end() {
    if (peek().kind != Tok::kEnd) syntax(peek(), {"end of input"});
  }

  std::string ident(std::vector<std::string> expected) {
    if (peek().kind != Tok::kIdent) syntax(peek(), std::move(expected));
    return next().text;
  }

  std::string integer_text() {
    std::string sign;
    if (is_symbol(peek(), '-') || is_symbol(peek(), '+')) sign = next().text;
    const Token& t = peek();
    if (t.kind != Tok::kNumber || t.text.find('.') != std::string::npos) syntax(t, {"integer"});
    return sign + next().text;
  }

  Integer integer() {
    const Token at = peek();
    try {
      return Integer(integer_text(), 10);
    } catch (const std::invalid_argument&) {
      syntax(at, {"integer"});
    }
  }

  Rational rational_literal() {
    std::string text;
    if (is_symbol(peek(), '-') || is_symbol(peek(), '+')) text = next().text;
    const Token at = peek();
    if (at.kind != Tok::kNumber) syntax(at, {"number"});
    text += next().text;
    if (is_symbol(peek(), '/')) {
      next();
      if (peek().kind != Tok::kNumber) syntax(peek(), {"denominator"});
      text += "/" + next().text;
    }
    try {
      return parse_rational(text);
    } catch (const Error&) {
      syntax(at, {"number"});
    }
  }

  Scalar scalar() {
    const Token at = peek();
    if (at.kind == Tok::kIdent && at.text == "pow") {
      next();
      expect_symbol('(');
      const Integer base = integer();
      expect_symbol(',');
      const Rational exponent = rational_literal();
      expect_symbol(')');
      try {
        return Scalar::power(base, exponent);
      } catch (const Error& err) {
        semantic(at, err);
      }
    }
    if (at.kind != Tok::kNumber && !is_symbol(at, '-') && !is_symbol(at, '+')) {
      syntax(at, {"number", "'pow'"});
    }
    return Scalar(rational_literal());
  }

  std::vector<Scalar> scalar_list() {
    expect_symbol('[');
    std::vector<Scalar> values;
    if (!is_symbol(peek(), ']')) {
      values.push_back(scalar());
      while (is_symbol(peek(), ',')) {
        next();
        values.push_back(scalar());
      }
    }
    expect_symbol(']');
    return values;
  }

  bool boolean() {
    const Token& t = peek();
    if (t.kind == Tok::kIdent && (t.text == "true" || t.text == "false")) return next().text == "true";
    syntax(t, {"'true'", "'false'"});
  }

  IndexSet index_set() {
    const Token at = peek();
    expect_symbol('{');
    std::vector<long> elements;
    std::optional<long> from;
    std::optional<std::string> period;
    while (!is_symbol(peek(), '}')) {
      const Token& t = peek();
      if (t.kind == Tok::kNumber) {
        const Integer v = integer();
        if (!v.fits_slong_p()) syntax(t, {"index element"});
        elements.push_back(v.get_si());
      } else if (t.kind == Tok::kIdent && t.text == "from") {
        next();
        expect_symbol('=');
        const Integer v = integer();
        if (!v.fits_slong_p()) syntax(t, {"tail start"});
        from = v.get_si();
      } else if (t.kind == Tok::kIdent && t.text == "period") {
        next();
        expect_symbol('=');
        const Token& bits = peek();
        if (bits.kind != Tok::kNumber || bits.text.find_first_not_of("01") != std::string::npos) {
          syntax(bits, {"bit pattern"});
        }
        period = next().text;
      } else {
        syntax(t, {"integer", "'from'", "'period'", "'}'"});
      }
      if (is_symbol(peek(), ',') || is_symbol(peek(), ';')) {
        next();
      } else if (!is_symbol(peek(), '}')) {
        syntax(peek(), {"','", "';'", "'}'"});
      }
    }
    next();
    try {
      if (!period) fail(ErrorKind::kIndexSetFinite, "index set without a periodic tail is finite");
      return IndexSet::make(std::move(elements), from, *period);
    } catch (const Error& err) {
      semantic(at, err);
    }
  }

  Family family() {
    const Token at = peek();
    static const std::map<std::string, std::map<std::string, ArgType>> kFamilies = {
        {"thin_blocks", {{"r", ArgType::kScalar}}},
        {"ramp", {{"s0", ArgType::kInt}}},
        {"ramp_blocks", {{"index", ArgType::kIndexSet}, {"truncate", ArgType::kInt}}},
        {"fat_blocks", {{"l", ArgType::kScalar}}},
    };
    const std::vector<std::string> names = {"'thin_blocks'", "'ramp'", "'ramp_blocks'", "'fat_blocks'"};
    const std::string name = ident(names);
    const auto it = kFamilies.find(name);
    if (it == kFamilies.end()) syntax(at, names);
    const Args args = arguments(it->second, false);
    try {
      if (name == "thin_blocks") return Family::thin_blocks(rational_arg(args, "r", at));
      if (name == "ramp") return Family::ramp(int_arg(args, "s0", at));
      if (name == "ramp_blocks") {
        return Family::ramp_blocks(std::get<IndexSet>(required(args, "index", at)), int_arg(args, "truncate", at));
      }
      return Family::fat_blocks(rational_arg(args, "l", at));
    } catch (const ParseError&) {
      throw;
    } catch (const Error& err) {
      semantic(at, err);
    }
  }

  ArgValue value(ArgType type) {
    switch (type) {
      case ArgType::kInt:
        return integer();
      case ArgType::kScalar:
        return scalar();
      case ArgType::kScalarList:
        return scalar_list();
      case ArgType::kBool:
        return boolean();
      case ArgType::kIndexSet:
        return index_set();
      case ArgType::kFamily:
        return family();
    }
    return Integer(0);
  }

  Args arguments(const std::map<std::string, ArgType>& keys, bool allow_positional) {
    Args args;
    expect_symbol('(');
    std::vector<std::string> key_names;
    for (const auto& [key, type] : keys) key_names.push_back("'" + key + "='");
    while (!is_symbol(peek(), ')')) {
      const Token& t = peek();
      if (t.kind == Tok::kIdent && is_symbol(peek(1), '=')) {
        const auto it = keys.find(t.text);
        if (it == keys.end()) syntax(t, key_names);
        if (args.keyword.count(t.text)) {
          throw ParseError(ErrorKind::kParse, t.line, t.column, {}, "duplicate argument '" + t.text + "'");
        }
        const std::string key = next().text;
        next();
        args.keyword.emplace(key, value(it->second));
      } else if (allow_positional) {
        args.positional.push_back(expr());
      } else {
        syntax(t, key_names);
      }
      if (is_symbol(peek(), ',')) {
        next();
      } else if (!is_symbol(peek(), ')')) {
        syntax(peek(), {"','", "')'"});
      }
    }
    next();
    return args;
  }

  const ArgValue& required(const Args& args, const std::string& key, const Token& at) const {
    const auto it = args.keyword.find(key);
    if (it == args.keyword.end()) {
      throw ParseError(ErrorKind::kParse, at.line, at.column, {"'" + key + "='"},
                       "missing argument '" + key + "' in " + at.text + "(...)");
    }
    return it->second;
  }

  int int_arg(const Args& args, const std::string& key, const Token& at) const {
    const Integer& v = std::get<Integer>(required(args, key, at));
    if (!v.fits_sint_p()) fail(ErrorKind::kOutOfRange, key + " is out of range");
    return static_cast<int>(v.get_si());
  }

  Rational rational_arg(const Args& args, const std::string& key, const Token& at) const {
    const Scalar& v = std::get<Scalar>(required(args, key, at));
    if (!v.is_rational()) fail(ErrorKind::kOutOfRange, key + " must be rational");
    return v.rational();
  }

  void positional_count(const Args& args, const Token& at, std::size_t lo, std::size_t hi) const {
    if (args.positional.size() < lo || args.positional.size() > hi) {
      const std::string want = lo == hi ? std::to_string(lo) : "at least " + std::to_string(lo);
      throw ParseError(ErrorKind::kParse, at.line, at.column, {"expression"},
                       at.text + " takes " + want + " operand(s), got " + std::to_string(args.positional.size()));
    }
  }

  Expr expr() {
    static const std::vector<std::string> kNames = {"'cantor'", "'cube'",  "'affine'", "'union'",
                                                    "'iunion'", "'product'", "'prune'", "'symmetrize'"};
    const Token at = peek();
    const std::string name = ident(kNames);
    constexpr std::size_t kMany = static_cast<std::size_t>(-1);
    try {
      if (name == "cantor") {
        const Args args =
            arguments({{"s", ArgType::kInt}, {"beta", ArgType::kScalar}, {"l", ArgType::kScalar}}, false);
        const int s = int_arg(args, "s", at);
        const Scalar& beta = std::get<Scalar>(required(args, "beta", at));
        const Scalar& measure = std::get<Scalar>(required(args, "l", at));
        return Expr::cantor(CantorSpec{RemovingSequence::geometric(s, beta, measure)});
      }
      if (name == "cube") {
        const Args args = arguments({{"n", ArgType::kInt}}, false);
        return Expr::cube(int_arg(args, "n", at));
      }
      if (name == "affine") {
        const Args args = arguments({{"scale", ArgType::kScalarList}, {"shift", ArgType::kScalarList}}, true);
        positional_count(args, at, 1, 1);
        return Expr::affine(std::get<std::vector<Scalar>>(required(args, "scale", at)),
                            std::get<std::vector<Scalar>>(required(args, "shift", at)), args.positional.front());
      }
      if (name == "union") {
        const Args args = arguments({{"disjoint", ArgType::kBool}}, true);
        positional_count(args, at, 1, kMany);
        const auto flag = args.keyword.find("disjoint");
        return Expr::union_of(args.positional, flag != args.keyword.end() && std::get<bool>(flag->second));
      }
      if (name == "iunion") {
        const Args args = arguments(
            {{"family", ArgType::kFamily}, {"index", ArgType::kIndexSet}, {"truncate", ArgType::kInt}}, false);
        return Expr::indexed_union(std::get<Family>(required(args, "family", at)),
                                   std::get<IndexSet>(required(args, "index", at)), int_arg(args, "truncate", at));
      }
      if (name == "product") {
        const Args args = arguments({}, true);
        positional_count(args, at, 1, kMany);
        return Expr::product(args.positional);
      }
      if (name == "prune") {
        const Args args = arguments({{"seed", ArgType::kInt}}, true);
        positional_count(args, at, 1, 1);
        const Integer& seed = std::get<Integer>(required(args, "seed", at));
        if (seed < 0 || !seed.fits_ulong_p()) fail(ErrorKind::kOutOfRange, "seed must fit in 64 bits");
        return Expr::prune(args.positional.front(), seed.get_ui());
      }
      if (name == "symmetrize") {
        const Args args = arguments({}, true);
        positional_count(args, at, 1, 1);
        return symmetrize(args.positional.front());
      }
    } catch (const ParseError&) {
      throw;
    } catch (const Error& err) {
      semantic(at, err);
    }
    syntax(at, kNames);
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

void emit(const Expr& e, int indent, std::string& out) {
  const std::string pad(static_cast<std::size_t>(indent), ' ');
  const std::string inner(static_cast<std::size_t>(indent) + 2, ' ');
  auto list = [](const std::vector<Scalar>& values) {
    std::string s = "[";
    for (std::size_t i = 0; i < values.size(); ++i) s += (i > 0 ? ", " : "") + values[i].str();
    return s + "]";
  };
  auto children = [&](const std::vector<Expr>& items) {
    for (std::size_t i = 0; i < items.size(); ++i) {
      out += inner;
      emit(items[i], indent + 2, out);
      if (i + 1 < items.size()) out += ",";
      out += "\n";
    }
  };
  switch (e.kind()) {
    case NodeKind::kCantor: {
      const auto& seq = e.as_cantor().spec.seq;
      if (!seq.is_geometric()) {
        fail(ErrorKind::kNotRepresentable, "explicit removing sequences have no .frx form");
      }
      out += "cantor(s=" + std::to_string(seq.order()) + ", beta=" + seq.geometric_family().beta.str() +
             ", l=" + seq.geometric_family().l.str() + ")";
      return;
    }
    case NodeKind::kCube:
      out += "cube(n=" + std::to_string(e.as_cube().dim) + ")";
      return;
    case NodeKind::kAffine: {
      const auto& a = e.as_affine();
      out += "affine(scale=" + list(a.scales) + ", shift=" + list(a.shifts) + ",\n" + inner;
      emit(a.child, indent + 2, out);
      out += "\n" + pad + ")";
      return;
    }
    case NodeKind::kUnion: {
      const auto& u = e.as_union();
      out += "union(\n";
      children(u.children);
      if (u.disjoint) {
        out.pop_back();
        out += ",\n" + inner + "disjoint=true\n";
      }
      out += pad + ")";
      return;
    }
    case NodeKind::kIndexedUnion: {
      const auto& u = e.as_indexed_union();
      out += "iunion(family=" + u.family.str() + ", index=" + u.index.str() +
             ", truncate=" + std::to_string(u.truncation) + ")";
      return;
    }
    case NodeKind::kProduct:
      out += "product(\n";
      children(e.as_product().children);
      out += pad + ")";
      return;
    case NodeKind::kPrune: {
      const auto& p = e.as_prune();
      out += "prune(\n" + inner;
      emit(p.child, indent + 2, out);
      out += ",\n" + inner + "seed=" + std::to_string(p.seed) + "\n" + pad + ")";
      return;
    }
  }
}

}  // namespace

ParseError::ParseError(ErrorKind kind, int line, int column, std::vector<std::string> expected,
                       const std::string& message)
    : Error(kind, "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message),
      line_(line),
      column_(column),
      expected_(std::move(expected)) {}

Expr parse_frx(std::string_view text) { return Parser(text).document(); }

IndexSet parse_index_set(std::string_view text) { return Parser(text).index_set_document(); }

std::string emit_frx(const Expr& expr) {
  std::string out;
  emit(expr, 0, out);
  out += "\n";
  return out;
}

}  // namespace frx
