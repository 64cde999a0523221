#include "fpot/expr.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>

#include "fpot/error.hpp"

namespace fpot {

namespace {

constexpr std::array<std::string_view, 22> kFuncNames = {
    "exp",  "ln",   "sqrt",   "sin",    "cos",    "tan",    "sec",    "csc",
    "cot",  "asin", "acos",   "atan",   "arcsec", "arccsc", "sinh",   "cosh",
    "tanh", "coth", "arsinh", "arcosh", "artanh", "arcoth"};

std::string catalog_list() {
  std::string out;
  for (auto name : kFuncNames) {
    if (!out.empty()) {
      out += ", ";
    }
    out += name;
  }
  return out;
}

bool is_ident_start(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; }
bool is_ident_char(char c) { return is_ident_start(c) || (c >= '0' && c <= '9'); }
bool is_digit(char c) { return c >= '0' && c <= '9'; }

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) {}

  NodePtr parse_all() {
    skip_ws();
    if (pos_ >= src_.size()) {
      throw ParseError("empty expression", 0);
    }
    NodePtr root = parse_expr();
    skip_ws();
    if (pos_ < src_.size()) {
      throw ParseError(std::string("unexpected '") + src_[pos_] +
                           "', expected operator or end of input",
                       pos_);
    }
    return root;
  }

 private:
  void skip_ws() {
    while (pos_ < src_.size() && (src_[pos_] == ' ' || src_[pos_] == '\t' ||
                                  src_[pos_] == '\n' || src_[pos_] == '\r')) {
      ++pos_;
    }
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c, const char* hint) {
    if (!accept(c)) {
      throw ParseError(std::string("expected '") + c + "' " + hint, pos_);
    }
  }

  static NodePtr make(Node::Kind kind, std::size_t offset, NodePtr lhs = {}, NodePtr rhs = {}) {
    auto n = std::make_shared<Node>();
    n->kind = kind;
    n->offset = offset;
    n->lhs = std::move(lhs);
    n->rhs = std::move(rhs);
    return n;
  }

  NodePtr parse_expr() {
    NodePtr left = parse_term();
    for (;;) {
      skip_ws();
      const std::size_t at = pos_;
      if (accept('+')) {
        left = make(Node::Kind::add, at, left, parse_term());
      } else if (accept('-')) {
        left = make(Node::Kind::sub, at, left, parse_term());
      } else {
        return left;
      }
    }
  }

  NodePtr parse_term() {
    NodePtr left = parse_factor();
    for (;;) {
      skip_ws();
      const std::size_t at = pos_;
      if (accept('*')) {
        left = make(Node::Kind::mul, at, left, parse_factor());
      } else if (accept('/')) {
        left = make(Node::Kind::div, at, left, parse_factor());
      } else {
        return left;
      }
    }
  }

  NodePtr parse_factor() {
    skip_ws();
    const std::size_t at = pos_;
    if (accept('-')) {
      return make(Node::Kind::neg, at, parse_power());
    }
    return parse_power();
  }

  NodePtr parse_power() {
    NodePtr base = parse_atom();
    skip_ws();
    const std::size_t at = pos_;
    if (accept('^')) {
      return make(Node::Kind::pow, at, base, parse_factor());
    }
    return base;
  }

  NodePtr parse_atom() {
    skip_ws();
    const std::size_t at = pos_;
    if (pos_ >= src_.size()) {
      throw ParseError("unexpected end of input, expected number, x, constant, function or '('",
                       pos_);
    }
    const char c = src_[pos_];
    if (is_digit(c) || c == '.') {
      return parse_number();
    }
    if (accept('(')) {
      NodePtr inner = parse_expr();
      expect(')', "to close parenthesis");
      return inner;
    }
    if (is_ident_start(c)) {
      std::size_t end = pos_;
      while (end < src_.size() && is_ident_char(src_[end])) {
        ++end;
      }
      const std::string_view name = src_.substr(pos_, end - pos_);
      pos_ = end;
      if (name == "x") {
        return make(Node::Kind::variable, at);
      }
      if (name == "pi") {
        return make(Node::Kind::pi, at);
      }
      if (name == "e") {
        return make(Node::Kind::e, at);
      }
      const auto func = func_from_name(name);
      if (!func) {
        throw ParseError("unknown identifier '" + std::string(name) +
                             "'; variable is x, constants are pi and e, functions are: " +
                             catalog_list(),
                         at);
      }
      expect('(', "after function name");
      NodePtr arg = parse_expr();
      expect(')', "to close function call");
      auto n = std::make_shared<Node>();
      n->kind = Node::Kind::call;
      n->func = *func;
      n->offset = at;
      n->lhs = std::move(arg);
      return n;
    }
    throw ParseError(std::string("unexpected '") + c +
                         "', expected number, x, constant, function or '('",
                     at);
  }

  NodePtr parse_number() {
    const std::size_t start = pos_;
    std::size_t end = pos_;
    while (end < src_.size() && is_digit(src_[end])) {
      ++end;
    }
    if (end < src_.size() && src_[end] == '.') {
      ++end;
      while (end < src_.size() && is_digit(src_[end])) {
        ++end;
      }
    }
    if (end < src_.size() && (src_[end] == 'e' || src_[end] == 'E')) {
      std::size_t k = end + 1;
      if (k < src_.size() && (src_[k] == '+' || src_[k] == '-')) {
        ++k;
      }
      if (k < src_.size() && is_digit(src_[k])) {
        while (k < src_.size() && is_digit(src_[k])) {
          ++k;
        }
        end = k;
      }
    }
    double value = 0.0;
    const auto res = std::from_chars(src_.data() + start, src_.data() + end, value);
    if (res.ec != std::errc() || res.ptr != src_.data() + end) {
      throw ParseError("malformed number", start);
    }
    pos_ = end;
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::number;
    n->number = value;
    n->offset = start;
    return n;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

// ---------------------------------------------------------------------------
// Evaluation

[[noreturn]] void domain_fail(const Node& n, const std::string& what, double x) {
  throw EvaluationError(what + " (node at byte " + std::to_string(n.offset) + ")", x, n.offset);
}

Jet2 apply_func(const Node& n, Func f, Jet2 u, double x) {
  const double v = u.value;
  switch (f) {
    case Func::exp: {
      const double e = std::exp(v);
      return chain(u, e, e, e);
    }
    case Func::ln:
      if (!(v > 0.0)) domain_fail(n, "ln of nonpositive argument", x);
      return chain(u, std::log(v), 1.0 / v, -1.0 / (v * v));
    case Func::sqrt: {
      if (v < 0.0) domain_fail(n, "sqrt of negative argument", x);
      const double s = std::sqrt(v);
      return chain(u, s, 0.5 / s, -0.25 / (s * s * s));
    }
    case Func::sin: {
      const double s = std::sin(v), c = std::cos(v);
      return chain(u, s, c, -s);
    }
    case Func::cos: {
      const double s = std::sin(v), c = std::cos(v);
      return chain(u, c, -s, -c);
    }
    case Func::tan: {
      const double t = std::tan(v);
      const double s2 = 1.0 + t * t;
      return chain(u, t, s2, 2.0 * t * s2);
    }
    case Func::sec: {
      const double c = std::cos(v);
      if (c == 0.0) domain_fail(n, "sec at a pole", x);
      const double s = 1.0 / c, t = std::tan(v);
      return chain(u, s, s * t, s * (t * t + s * s));
    }
    case Func::csc: {
      const double sn = std::sin(v);
      if (sn == 0.0) domain_fail(n, "csc at a pole", x);
      const double cs = 1.0 / sn, ct = std::cos(v) / sn;
      return chain(u, cs, -cs * ct, cs * (ct * ct + cs * cs));
    }
    case Func::cot: {
      const double sn = std::sin(v);
      if (sn == 0.0) domain_fail(n, "cot at a pole", x);
      const double ct = std::cos(v) / sn;
      const double q = 1.0 + ct * ct;
      return chain(u, ct, -q, 2.0 * ct * q);
    }
    case Func::asin: {
      if (!(std::abs(v) < 1.0)) domain_fail(n, "asin requires |argument| < 1", x);
      const double w = 1.0 - v * v;
      return chain(u, std::asin(v), 1.0 / std::sqrt(w), v / (w * std::sqrt(w)));
    }
    case Func::acos: {
      if (!(std::abs(v) < 1.0)) domain_fail(n, "acos requires |argument| < 1", x);
      const double w = 1.0 - v * v;
      return chain(u, std::acos(v), -1.0 / std::sqrt(w), -v / (w * std::sqrt(w)));
    }
    case Func::atan: {
      const double w = 1.0 + v * v;
      return chain(u, std::atan(v), 1.0 / w, -2.0 * v / (w * w));
    }
    case Func::arcsec:
    case Func::arccsc: {
      if (!(std::abs(v) > 1.0)) {
        domain_fail(n, std::string(func_name(f)) + " requires |argument| > 1", x);
      }
      const double q = v * v * (v * v - 1.0);  // x^4 - x^2
      const double g1 = 1.0 / std::sqrt(q);
      const double g2 = -(2.0 * v * v * v - v) * g1 * g1 * g1;
      if (f == Func::arcsec) {
        return chain(u, std::acos(1.0 / v), g1, g2);
      }
      return chain(u, std::asin(1.0 / v), -g1, -g2);
    }
    case Func::sinh: {
      const double s = std::sinh(v), c = std::cosh(v);
      return chain(u, s, c, s);
    }
    case Func::cosh: {
      const double s = std::sinh(v), c = std::cosh(v);
      return chain(u, c, s, c);
    }
    case Func::tanh: {
      const double t = std::tanh(v);
      const double w = 1.0 - t * t;
      return chain(u, t, w, -2.0 * t * w);
    }
    case Func::coth: {
      if (v == 0.0) domain_fail(n, "coth at zero", x);
      const double c = 1.0 / std::tanh(v);
      const double w = 1.0 - c * c;
      return chain(u, c, w, -2.0 * c * w);
    }
    case Func::arsinh: {
      const double w = 1.0 + v * v;
      return chain(u, std::asinh(v), 1.0 / std::sqrt(w), -v / (w * std::sqrt(w)));
    }
    case Func::arcosh: {
      if (!(v > 1.0)) domain_fail(n, "arcosh requires argument > 1", x);
      const double w = v * v - 1.0;
      return chain(u, std::acosh(v), 1.0 / std::sqrt(w), -v / (w * std::sqrt(w)));
    }
    case Func::artanh: {
      if (!(std::abs(v) < 1.0)) domain_fail(n, "artanh requires |argument| < 1", x);
      const double w = 1.0 - v * v;
      return chain(u, std::atanh(v), 1.0 / w, 2.0 * v / (w * w));
    }
    case Func::arcoth: {
      if (!(std::abs(v) > 1.0)) domain_fail(n, "arcoth requires |argument| > 1", x);
      const double w = 1.0 - v * v;
      return chain(u, 0.5 * std::log((v + 1.0) / (v - 1.0)), 1.0 / w, 2.0 * v / (w * w));
    }
  }
  domain_fail(n, "unknown function", x);
}

Jet2 eval_node(const Node& n, double x) {
  Jet2 r;
  switch (n.kind) {
    case Node::Kind::number: return Jet2::constant(n.number);
    case Node::Kind::variable: return Jet2::variable(x);
    case Node::Kind::pi: return Jet2::constant(std::numbers::pi);
    case Node::Kind::e: return Jet2::constant(std::numbers::e);
    case Node::Kind::call: r = apply_func(n, n.func, eval_node(*n.lhs, x), x); break;
    case Node::Kind::neg: r = -eval_node(*n.lhs, x); break;
    case Node::Kind::add: r = eval_node(*n.lhs, x) + eval_node(*n.rhs, x); break;
    case Node::Kind::sub: r = eval_node(*n.lhs, x) - eval_node(*n.rhs, x); break;
    case Node::Kind::mul: r = eval_node(*n.lhs, x) * eval_node(*n.rhs, x); break;
    case Node::Kind::div: {
      const Jet2 num = eval_node(*n.lhs, x);
      const Jet2 den = eval_node(*n.rhs, x);
      if (den.value == 0.0) domain_fail(n, "division by zero", x);
      r = num / den;
      break;
    }
    case Node::Kind::pow: {
      const Jet2 base = eval_node(*n.lhs, x);
      const Jet2 expo = eval_node(*n.rhs, x);
      if (expo.d1 == 0.0 && expo.d2 == 0.0) {
        const double p = expo.value;
        if (p == std::trunc(p) && std::abs(p) <= 1024.0) {
          if (p < 0.0 && base.value == 0.0) domain_fail(n, "zero to a negative power", x);
          r = ipow(base, static_cast<long long>(p));
          break;
        }
        if (!(base.value > 0.0)) {
          domain_fail(n, "non-integer power of a nonpositive base", x);
        }
        const double b = base.value;
        const double g0 = std::pow(b, p);
        r = chain(base, g0, p * g0 / b, p * (p - 1.0) * g0 / (b * b));
        break;
      }
      if (!(base.value > 0.0)) {
        domain_fail(n, "variable exponent requires a positive base", x);
      }
      const Jet2 lnb = chain(base, std::log(base.value), 1.0 / base.value,
                             -1.0 / (base.value * base.value));
      const Jet2 t = expo * lnb;
      const double e = std::exp(t.value);
      r = chain(t, e, e, e);
      break;
    }
  }
  if (!r.is_finite()) {
    domain_fail(n, "non-finite value or derivative", x);
  }
  return r;
}

bool references_x(const Node& n) {
  if (n.kind == Node::Kind::variable) return true;
  if (n.lhs && references_x(*n.lhs)) return true;
  if (n.rhs && references_x(*n.rhs)) return true;
  return false;
}

void print(const Node& n, std::string& out) {
  auto binary = [&](const char* op) {
    out += '(';
    print(*n.lhs, out);
    out += op;
    print(*n.rhs, out);
    out += ')';
  };
  switch (n.kind) {
    case Node::Kind::number: {
      char buf[64];
      const auto res = std::to_chars(buf, buf + sizeof buf, n.number);
      out.append(buf, res.ptr);
      return;
    }
    case Node::Kind::variable: out += 'x'; return;
    case Node::Kind::pi: out += "pi"; return;
    case Node::Kind::e: out += 'e'; return;
    case Node::Kind::call:
      out += func_name(n.func);
      out += '(';
      print(*n.lhs, out);
      out += ')';
      return;
    case Node::Kind::neg:
      out += "(-";
      print(*n.lhs, out);
      out += ')';
      return;
    case Node::Kind::add: binary(" + "); return;
    case Node::Kind::sub: binary(" - "); return;
    case Node::Kind::mul: binary(" * "); return;
    case Node::Kind::div: binary(" / "); return;
    case Node::Kind::pow: binary("^"); return;
  }
}

bool equal_nodes(const Node* a, const Node* b) {
  if (a == nullptr || b == nullptr) return a == b;
  if (a->kind != b->kind) return false;
  if (a->kind == Node::Kind::number && a->number != b->number) return false;
  if (a->kind == Node::Kind::call && a->func != b->func) return false;
  return equal_nodes(a->lhs.get(), b->lhs.get()) && equal_nodes(a->rhs.get(), b->rhs.get());
}

}  // namespace

std::string_view func_name(Func f) noexcept { return kFuncNames[static_cast<std::size_t>(f)]; }

std::optional<Func> func_from_name(std::string_view name) noexcept {
  for (std::size_t i = 0; i < kFuncNames.size(); ++i) {
    if (kFuncNames[i] == name) {
      return static_cast<Func>(i);
    }
  }
  return std::nullopt;
}

std::span<const std::string_view> function_catalog() noexcept { return kFuncNames; }

Expr Expr::parse(std::string_view source) {
  Parser p(source);
  return Expr(p.parse_all(), std::string(source));
}

Jet2 Expr::eval_jet(double x) const { return eval_node(*root_, x); }

double Expr::eval(double x) const { return eval_node(*root_, x).value; }

bool Expr::is_constant() const { return !references_x(*root_); }

std::string Expr::to_string() const {
  std::string out;
  print(*root_, out);
  return out;
}

bool Expr::structurally_equal(const Expr& other) const {
  return equal_nodes(root_.get(), other.root_.get());
}

}  // namespace fpot
