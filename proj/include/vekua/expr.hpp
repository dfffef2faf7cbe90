#pragma once

// A small arithmetic expression language for scalar fields.
//
// Grammar (EBNF):
//
//   expr    = term { ("+" | "-") term } ;
//   term    = unary { ("*" | "/") unary } ;
//   unary   = ("-" | "+") unary | power ;
//   power   = primary [ "^" unary ] ;            (right associative)
//   primary = number | constant | variable
//           | function "(" expr ")" | "(" expr ")" ;
//   function = "exp" | "ln" | "sin" | "cos" | "sqrt" ;
//   constant = "pi" | "e" ;
//   variable = "x1" | "x2" | "x3" | "x" | "y" | "z" | "t" | "rho" ;
//
// Plane aliases follow the identification z = x + iy with x = x2, y = x1:
// "x" names x2, "y" names x1 and "z" names x3. "t" is a curve parameter and
// "rho" the argument of profile functions f(rho).

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "vekua/error.hpp"
#include "vekua/jet.hpp"

namespace vekua {

enum class Var : std::uint8_t { X1, X2, X3, T, Rho };
inline constexpr int kVarCount = 5;

enum class Fn : std::uint8_t { Exp, Ln, Sin, Cos, Sqrt };

inline const char* var_name(Var v) {
  switch (v) {
    case Var::X1: return "x1";
    case Var::X2: return "x2";
    case Var::X3: return "x3";
    case Var::T: return "t";
    case Var::Rho: return "rho";
  }
  return "?";
}

inline const char* fn_name(Fn f) {
  switch (f) {
    case Fn::Exp: return "exp";
    case Fn::Ln: return "ln";
    case Fn::Sin: return "sin";
    case Fn::Cos: return "cos";
    case Fn::Sqrt: return "sqrt";
  }
  return "?";
}

namespace detail {

enum class Op : std::uint8_t { Num, Var, Add, Sub, Mul, Div, Pow, Neg, Call };

struct ExprNode {
  Op op = Op::Num;
  double num = 0.0;
  Var var = Var::X1;
  Fn fn = Fn::Exp;
  std::shared_ptr<const ExprNode> a, b;
};

using NodePtr = std::shared_ptr<const ExprNode>;

inline NodePtr make_num(double v) {
  auto n = std::make_shared<ExprNode>();
  n->op = Op::Num;
  n->num = v;
  return n;
}
inline NodePtr make_var(Var v) {
  auto n = std::make_shared<ExprNode>();
  n->op = Op::Var;
  n->var = v;
  return n;
}
inline NodePtr make_node(Op op, NodePtr a, NodePtr b = nullptr) {
  auto n = std::make_shared<ExprNode>();
  n->op = op;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}
inline NodePtr make_call(Fn fn, NodePtr a) {
  auto n = std::make_shared<ExprNode>();
  n->op = Op::Call;
  n->fn = fn;
  n->a = std::move(a);
  return n;
}

inline bool is_num(const NodePtr& n, double v) { return n->op == Op::Num && n->num == v; }
inline bool is_num(const NodePtr& n) { return n->op == Op::Num; }

// Smart constructors with light constant folding, used by the symbolic
// derivative so that results stay readable.
inline NodePtr add(NodePtr a, NodePtr b) {
  if (is_num(a, 0.0)) return b;
  if (is_num(b, 0.0)) return a;
  if (is_num(a) && is_num(b)) return make_num(a->num + b->num);
  return make_node(Op::Add, std::move(a), std::move(b));
}
inline NodePtr neg(NodePtr a) {
  if (is_num(a)) return make_num(-a->num);
  if (a->op == Op::Neg) return a->a;
  return make_node(Op::Neg, std::move(a));
}
inline NodePtr sub(NodePtr a, NodePtr b) {
  if (is_num(b, 0.0)) return a;
  if (is_num(a, 0.0)) return neg(std::move(b));
  if (is_num(a) && is_num(b)) return make_num(a->num - b->num);
  return make_node(Op::Sub, std::move(a), std::move(b));
}
inline NodePtr mul(NodePtr a, NodePtr b) {
  if (is_num(a, 0.0) || is_num(b, 0.0)) return make_num(0.0);
  if (is_num(a, 1.0)) return b;
  if (is_num(b, 1.0)) return a;
  if (is_num(a) && is_num(b)) return make_num(a->num * b->num);
  return make_node(Op::Mul, std::move(a), std::move(b));
}
inline NodePtr div(NodePtr a, NodePtr b) {
  if (is_num(a, 0.0) && !is_num(b, 0.0)) return make_num(0.0);
  if (is_num(b, 1.0)) return a;
  return make_node(Op::Div, std::move(a), std::move(b));
}
inline NodePtr pow(NodePtr a, NodePtr b) {
  if (is_num(b, 1.0)) return a;
  if (is_num(b, 0.0)) return make_num(1.0);
  return make_node(Op::Pow, std::move(a), std::move(b));
}

/// Integer exponent if the node is an integral literal of modest size.
inline std::optional<int> integer_literal(const NodePtr& n) {
  if (n->op == Op::Neg) {
    if (auto k = integer_literal(n->a)) return -*k;
    return std::nullopt;
  }
  if (n->op != Op::Num) return std::nullopt;
  const double r = std::round(n->num);
  if (r != n->num || std::abs(r) > 1024) return std::nullopt;
  return static_cast<int>(r);
}

}  // namespace detail

/// Parsed expression: an immutable abstract syntax tree.
class Expr {
 public:
  Expr() : root_(detail::make_num(0.0)) {}
  explicit Expr(detail::NodePtr root) : root_(std::move(root)) {}

  static Expr number(double v) { return Expr(detail::make_num(v)); }
  static Expr variable(Var v) { return Expr(detail::make_var(v)); }

  const detail::NodePtr& root() const { return root_; }

  /// True if the expression references `v`.
  bool uses(Var v) const { return uses(root_, v); }

  bool is_constant() const {
    for (int k = 0; k < kVarCount; ++k)
      if (uses(static_cast<Var>(k))) return false;
    return true;
  }

  friend Expr operator+(const Expr& a, const Expr& b) { return Expr(detail::add(a.root_, b.root_)); }
  friend Expr operator-(const Expr& a, const Expr& b) { return Expr(detail::sub(a.root_, b.root_)); }
  friend Expr operator*(const Expr& a, const Expr& b) { return Expr(detail::mul(a.root_, b.root_)); }
  friend Expr operator/(const Expr& a, const Expr& b) { return Expr(detail::div(a.root_, b.root_)); }
  friend Expr operator-(const Expr& a) { return Expr(detail::neg(a.root_)); }

 private:
  static bool uses(const detail::NodePtr& n, Var v) {
    if (!n) return false;
    if (n->op == detail::Op::Var) return n->var == v;
    return uses(n->a, v) || uses(n->b, v);
  }

  detail::NodePtr root_;
};

inline Expr call(Fn fn, const Expr& a) { return Expr(detail::make_call(fn, a.root())); }
inline Expr power(const Expr& a, const Expr& b) { return Expr(detail::pow(a.root(), b.root())); }

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

struct ParseOptions {
  /// Variables the expression may reference; others are unknown identifiers.
  std::set<Var> allowed{Var::X1, Var::X2, Var::X3};
};

namespace detail {

class Parser {
 public:
  Parser(std::string_view src, const ParseOptions& opts) : src_(src), opts_(opts) {}

  NodePtr parse() {
    skip_ws();
    if (pos_ >= src_.size()) fail({"expression"});
    NodePtr e = expr();
    skip_ws();
    if (pos_ < src_.size()) fail({"operator", "end of input"});
    return e;
  }

 private:
  [[noreturn]] void fail(std::vector<std::string> expected) const {
    std::string msg = "syntax error at offset " + std::to_string(pos_) + ": expected ";
    for (std::size_t k = 0; k < expected.size(); ++k) {
      if (k) msg += " or ";
      msg += expected[k];
    }
    if (pos_ < src_.size()) {
      msg += ", found '";
      msg += src_[pos_];
      msg += "'";
    } else {
      msg += ", found end of input";
    }
    throw SyntaxError(pos_, std::move(expected), msg);
  }

  void skip_ws() {
    while (pos_ < src_.size() && (src_[pos_] == ' ' || src_[pos_] == '\t' || src_[pos_] == '\n' ||
                                  src_[pos_] == '\r'))
      ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr expr() {
    NodePtr lhs = term();
    for (;;) {
      if (accept('+')) {
        lhs = make_node(Op::Add, lhs, term());
      } else if (accept('-')) {
        lhs = make_node(Op::Sub, lhs, term());
      } else {
        return lhs;
      }
    }
  }

  NodePtr term() {
    NodePtr lhs = unary();
    for (;;) {
      if (accept('*')) {
        lhs = make_node(Op::Mul, lhs, unary());
      } else if (accept('/')) {
        lhs = make_node(Op::Div, lhs, unary());
      } else {
        return lhs;
      }
    }
  }

  NodePtr unary() {
    if (accept('-')) return make_node(Op::Neg, unary());
    if (accept('+')) return unary();
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (accept('^')) return make_node(Op::Pow, base, unary());
    return base;
  }

  NodePtr primary() {
    skip_ws();
    if (pos_ >= src_.size()) fail({"number", "identifier", "'('"});
    const char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr e = expr();
      if (!accept(')')) fail({"')'"});
      return e;
    }
    if ((c >= '0' && c <= '9') || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    fail({"number", "identifier", "'('"});
  }

  NodePtr number() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() && (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.'))
      ++pos_;
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      // Exponent only if followed by digits (so "2e" stays an error, not "2*e").
      std::size_t p = pos_ + 1;
      if (p < src_.size() && (src_[p] == '+' || src_[p] == '-')) ++p;
      if (p < src_.size() && std::isdigit(static_cast<unsigned char>(src_[p]))) {
        pos_ = p;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      }
    }
    double value = 0.0;
    const auto* first = src_.data() + start;
    const auto* last = src_.data() + pos_;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) {
      pos_ = start;
      fail({"number"});
    }
    return make_num(value);
  }

  NodePtr identifier() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
      ++pos_;
    const std::string name(src_.substr(start, pos_ - start));

    static const std::array<std::pair<const char*, Fn>, 5> functions{
        {{"exp", Fn::Exp}, {"ln", Fn::Ln}, {"sin", Fn::Sin}, {"cos", Fn::Cos}, {"sqrt", Fn::Sqrt}}};
    for (const auto& [fname, fn] : functions) {
      if (name == fname) {
        if (!accept('(')) fail({"'('"});
        NodePtr arg = expr();
        if (!accept(')')) fail({"')'"});
        return make_call(fn, arg);
      }
    }
    if (name == "pi") return make_num(3.14159265358979323846);
    if (name == "e") return make_num(2.71828182845904523536);

    static const std::array<std::pair<const char*, Var>, 8> variables{
        {{"x1", Var::X1}, {"x2", Var::X2}, {"x3", Var::X3}, {"x", Var::X2}, {"y", Var::X1},
         {"z", Var::X3}, {"t", Var::T}, {"rho", Var::Rho}}};
    for (const auto& [vname, v] : variables) {
      if (name == vname) {
        if (!opts_.allowed.count(v)) throw UnknownIdentifier(start, name);
        return make_var(v);
      }
    }
    throw UnknownIdentifier(start, name);
  }

  std::string_view src_;
  const ParseOptions& opts_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Parses `src`; throws SyntaxError (with offset and expected tokens) or
/// UnknownIdentifier.
inline Expr parse(std::string_view src, const ParseOptions& opts = {}) {
  return Expr(detail::Parser(src, opts).parse());
}

// ---------------------------------------------------------------------------
// Printing
// ---------------------------------------------------------------------------

namespace detail {

inline std::string format_number(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, ptr);
}

inline void print_infix(const NodePtr& n, std::string& out) {
  switch (n->op) {
    case Op::Num:
      if (n->num < 0) {
        out += "(" + format_number(n->num) + ")";
      } else {
        out += format_number(n->num);
      }
      return;
    case Op::Var:
      out += var_name(n->var);
      return;
    case Op::Neg:
      out += "(-";
      print_infix(n->a, out);
      out += ")";
      return;
    case Op::Call:
      out += fn_name(n->fn);
      out += "(";
      print_infix(n->a, out);
      out += ")";
      return;
    default: {
      const char* sym = n->op == Op::Add   ? " + "
                        : n->op == Op::Sub ? " - "
                        : n->op == Op::Mul ? " * "
                        : n->op == Op::Div ? " / "
                                           : "^";
      out += "(";
      print_infix(n->a, out);
      out += sym;
      print_infix(n->b, out);
      out += ")";
    }
  }
}

inline void print_tree(const NodePtr& n, std::string& out) {
  auto binary = [&](const char* name) {
    out += name;
    out += "(";
    print_tree(n->a, out);
    out += ",";
    print_tree(n->b, out);
    out += ")";
  };
  switch (n->op) {
    case Op::Num: out += format_number(n->num); return;
    case Op::Var: out += var_name(n->var); return;
    case Op::Add: binary("add"); return;
    case Op::Sub: binary("sub"); return;
    case Op::Mul: binary("mul"); return;
    case Op::Div: binary("div"); return;
    case Op::Pow: binary("pow"); return;
    case Op::Neg:
      out += "neg(";
      print_tree(n->a, out);
      out += ")";
      return;
    case Op::Call:
      out += fn_name(n->fn);
      out += "(";
      print_tree(n->a, out);
      out += ")";
      return;
  }
}

}  // namespace detail

/// Fully parenthesized infix form; parse(to_string(e)) reproduces e.
inline std::string to_string(const Expr& e) {
  std::string out;
  detail::print_infix(e.root(), out);
  return out;
}

/// Tree form such as add(pow(x2,2),pow(x1,2)).
inline std::string to_tree_string(const Expr& e) {
  std::string out;
  detail::print_tree(e.root(), out);
  return out;
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

/// Values (plain numbers or jets) bound to the variables of an expression.
template <class V>
struct Bindings {
  std::array<std::optional<V>, kVarCount> values;

  Bindings& set(Var v, V x) {
    values[static_cast<int>(v)] = std::move(x);
    return *this;
  }
  const V& get(Var v) const {
    const auto& slot = values[static_cast<int>(v)];
    if (!slot) throw DomainError(std::string("variable '") + var_name(v) + "' is not bound");
    return *slot;
  }
};

namespace detail {

template <class V>
V constant_like(double c) {
  if constexpr (std::is_arithmetic_v<V>) {
    return c;
  } else {
    return V::constant(typename V::value_type(c));
  }
}

template <class V>
double real_value(const V& x) {
  return std::real(value_of(x));
}

template <class V>
V eval_node(const NodePtr& n, const Bindings<V>& b) {
  using std::cos;
  using std::exp;
  using std::log;
  using std::sin;
  using std::sqrt;
  switch (n->op) {
    case Op::Num: return constant_like<V>(n->num);
    case Op::Var: return b.get(n->var);
    case Op::Add: return eval_node(n->a, b) + eval_node(n->b, b);
    case Op::Sub: return eval_node(n->a, b) - eval_node(n->b, b);
    case Op::Mul: return eval_node(n->a, b) * eval_node(n->b, b);
    case Op::Neg: return -eval_node(n->a, b);
    case Op::Div: {
      V den = eval_node(n->b, b);
      if (real_value(den) == 0.0) throw DomainError("division by zero");
      return eval_node(n->a, b) / den;
    }
    case Op::Pow: {
      V base = eval_node(n->a, b);
      if (auto k = integer_literal(n->b)) {
        if (*k < 0 && real_value(base) == 0.0) throw DomainError("zero raised to a negative power");
        return ipow(base, *k);
      }
      if (n->b->op == Op::Num) {
        const double p = n->b->num;
        if (real_value(base) < 0.0 || (real_value(base) == 0.0 && p < 2.0))
          throw DomainError("non-integer power of a non-positive base");
        if constexpr (std::is_arithmetic_v<V>) {
          return std::pow(base, p);
        } else {
          return pow(base, p);
        }
      }
      if (real_value(base) <= 0.0) throw DomainError("variable power of a non-positive base");
      return exp(eval_node(n->b, b) * log(base));
    }
    case Op::Call: {
      V arg = eval_node(n->a, b);
      switch (n->fn) {
        case Fn::Exp: return exp(arg);
        case Fn::Ln:
          if (real_value(arg) <= 0.0) throw DomainError("ln of a non-positive number");
          return log(arg);
        case Fn::Sin: return sin(arg);
        case Fn::Cos: return cos(arg);
        case Fn::Sqrt:
          if constexpr (std::is_arithmetic_v<V>) {
            if (arg < 0.0) throw DomainError("sqrt of a negative number");
          } else {
            if (real_value(arg) <= 0.0) throw DomainError("sqrt is not differentiable at a non-positive number");
          }
          return sqrt(arg);
      }
    }
  }
  throw DomainError("malformed expression");
}

}  // namespace detail

/// Evaluates `e` with the given variable bindings. V is double or a Jet.
template <class V>
V evaluate(const Expr& e, const Bindings<V>& b) {
  return detail::eval_node(e.root(), b);
}

// ---------------------------------------------------------------------------
// Symbolic differentiation and substitution
// ---------------------------------------------------------------------------

namespace detail {

inline NodePtr derive(const NodePtr& n, Var v) {
  switch (n->op) {
    case Op::Num: return make_num(0.0);
    case Op::Var: return make_num(n->var == v ? 1.0 : 0.0);
    case Op::Add: return add(derive(n->a, v), derive(n->b, v));
    case Op::Sub: return sub(derive(n->a, v), derive(n->b, v));
    case Op::Neg: return neg(derive(n->a, v));
    case Op::Mul: return add(mul(derive(n->a, v), n->b), mul(n->a, derive(n->b, v)));
    case Op::Div: {
      // (a/b)' = a'/b - a b' / b^2
      NodePtr da = derive(n->a, v);
      NodePtr db = derive(n->b, v);
      return sub(div(da, n->b), div(mul(n->a, db), pow(n->b, make_num(2.0))));
    }
    case Op::Pow: {
      NodePtr da = derive(n->a, v);
      if (n->b->op == Op::Num || integer_literal(n->b)) {
        const double p = n->b->op == Op::Num ? n->b->num : static_cast<double>(*integer_literal(n->b));
        return mul(mul(make_num(p), pow(n->a, make_num(p - 1.0))), da);
      }
      // (a^b)' = a^b (b' ln a + b a'/a)
      NodePtr db = derive(n->b, v);
      NodePtr inner = add(mul(db, make_call(Fn::Ln, n->a)), div(mul(n->b, da), n->a));
      return mul(n, inner);
    }
    case Op::Call: {
      NodePtr da = derive(n->a, v);
      if (is_num(da, 0.0)) return make_num(0.0);
      switch (n->fn) {
        case Fn::Exp: return mul(n, da);
        case Fn::Ln: return div(da, n->a);
        case Fn::Sin: return mul(make_call(Fn::Cos, n->a), da);
        case Fn::Cos: return neg(mul(make_call(Fn::Sin, n->a), da));
        case Fn::Sqrt: return div(da, mul(make_num(2.0), n));
      }
    }
  }
  return make_num(0.0);
}

inline NodePtr substitute(const NodePtr& n, Var v, const NodePtr& repl) {
  switch (n->op) {
    case Op::Num: return n;
    case Op::Var: return n->var == v ? repl : n;
    case Op::Call: return make_call(n->fn, substitute(n->a, v, repl));
    case Op::Neg: return make_node(Op::Neg, substitute(n->a, v, repl));
    default: return make_node(n->op, substitute(n->a, v, repl), substitute(n->b, v, repl));
  }
}

}  // namespace detail

/// d e / d v, with light constant folding.
inline Expr derivative(const Expr& e, Var v) { return Expr(detail::derive(e.root(), v)); }

/// Replaces every occurrence of `v` by `replacement`.
inline Expr substitute(const Expr& e, Var v, const Expr& replacement) {
  return Expr(detail::substitute(e.root(), v, replacement.root()));
}

}  // namespace vekua
