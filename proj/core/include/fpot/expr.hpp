#pragma once

// Expression language for generator functions f(x) and h(x).
//
//   expr   := term { ("+"|"-") term }
//   term   := factor { ("*"|"/") factor }
//   factor := ["-"] power
//   power  := atom ["^" factor]
//   atom   := number | "x" | "pi" | "e" | name "(" expr ")" | "(" expr ")"

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "fpot/jet.hpp"

namespace fpot {

enum class Func {
  exp, ln, sqrt,
  sin, cos, tan, sec, csc, cot,
  asin, acos, atan, arcsec, arccsc,
  sinh, cosh, tanh, coth,
  arsinh, arcosh, artanh, arcoth,
};

std::string_view func_name(Func f) noexcept;
std::optional<Func> func_from_name(std::string_view name) noexcept;
std::span<const std::string_view> function_catalog() noexcept;

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
  enum class Kind { number, variable, pi, e, call, add, sub, mul, div, pow, neg };

  Kind kind = Kind::number;
  double number = 0.0;
  Func func = Func::exp;
  NodePtr lhs;  // operand for call/neg, left operand for binaries
  NodePtr rhs;
  std::size_t offset = 0;  // byte offset in the source text
};

/// Immutable parsed expression; cheap to copy and safe to share across threads.
class Expr {
 public:
  /// Throws ParseError with byte offset on malformed input or unknown names.
  static Expr parse(std::string_view source);

  /// (f, f', f'') at x. Throws EvaluationError carrying the node offset on a
  /// domain violation or non-finite intermediate.
  Jet2 eval_jet(double x) const;
  double eval(double x) const;

  /// True when the expression does not reference x.
  bool is_constant() const;

  /// Fully parenthesized text that parses back to the same tree.
  std::string to_string() const;
  const std::string& source() const noexcept { return source_; }
  const Node& root() const noexcept { return *root_; }

  bool structurally_equal(const Expr& other) const;

 private:
  Expr(NodePtr root, std::string source) : root_(std::move(root)), source_(std::move(source)) {}

  NodePtr root_;
  std::string source_;
};

inline Expr parse(std::string_view source) { return Expr::parse(source); }

}  // namespace fpot
