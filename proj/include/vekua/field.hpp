#pragma once

// Scalar fields on R^N as immutable expression DAGs.
//
// A Field<T, N> (T = double or Complex) evaluates to a second-order Jet at a
// point. Fields are built from parsed expressions, constants, pointwise
// arithmetic, and potentials: real functions phi with a prescribed complex
// gradient dz(phi) = g, realized by Gauss-Legendre integration along the ray
// from an anchor point.
//
// Derivatives of fields (partial, dz, dzbar) are symbolic: they build new
// DAG nodes, so differentiated fields keep exact second-order jets. The
// derivative of a potential is read off its defining gradient, never from the
// quadrature.
//
// Plane coordinates: a Point2 is (x, y) with x = x2 and y = x1; slot 0 of a
// planar jet is d/dx and slot 1 is d/dy. Wirtinger derivatives carry no 1/2:
//   dz = d/dx - i d/dy,   dzbar = d/dx + i d/dy,   dz dzbar = Laplacian.
//
// Evaluation state (jet memo, ray samples) lives in an EvalContext owned by
// the caller, so a Field can be shared freely across threads.

#include <array>
#include <cmath>
#include <complex>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "vekua/error.hpp"
#include "vekua/expr.hpp"
#include "vekua/jet.hpp"
#include "vekua/quadrature.hpp"

namespace vekua {

template <int N>
using Point = std::array<double, N>;
using Point2 = Point<2>;
using Point3 = Point<3>;

template <int N>
std::string format_point(const Point<N>& p) {
  std::ostringstream os;
  os.precision(17);
  os << "(";
  for (int k = 0; k < N; ++k) os << (k ? ", " : "") << p[k];
  os << ")";
  return os.str();
}

/// Fixed composite rule used for every potential evaluation.
inline const CumulativeRule& ray_rule() {
  static const CumulativeRule rule(32, 8);
  return rule;
}

/// The quadrature nodes of the segment from -> to, followed by `to` itself,
/// with per-node sample caches.
template <int N>
class RayGrid {
 public:
  RayGrid(const Point<N>& from, const Point<N>& to) : from_(from), to_(to) {
    const auto t = ray_rule().nodes();
    points_.reserve(t.size() + 1);
    for (double tk : t) {
      Point<N> q;
      for (int c = 0; c < N; ++c) q[c] = from[c] + tk * (to[c] - from[c]);
      points_.push_back(q);
    }
    points_.push_back(to);
  }

  const Point<N>& from() const { return from_; }
  const Point<N>& to() const { return to_; }
  std::size_t size() const { return points_.size(); }
  const Point<N>& point(std::size_t k) const { return points_[k]; }

  template <class T>
  const std::vector<T>* find(const void* key) const {
    const auto& m = cache<T>();
    auto it = m.find(key);
    return it == m.end() ? nullptr : &it->second;
  }

  template <class T>
  const std::vector<T>& store(const void* key, std::vector<T> values) {
    return cache<T>().insert_or_assign(key, std::move(values)).first->second;
  }

 private:
  template <class T>
  auto& cache() {
    if constexpr (std::is_same_v<T, double>) return real_;
    else return complex_;
  }
  template <class T>
  const auto& cache() const {
    if constexpr (std::is_same_v<T, double>) return real_;
    else return complex_;
  }

  Point<N> from_, to_;
  std::vector<Point<N>> points_;
  std::unordered_map<const void*, std::vector<double>> real_;
  std::unordered_map<const void*, std::vector<Complex>> complex_;
};

/// Per-point evaluation state. Not thread-safe; use one per thread.
template <int N>
class EvalContext {
 public:
  explicit EvalContext(const Point<N>& p) : point_(p) {}

  const Point<N>& point() const { return point_; }

  RayGrid<N>& ray_from(const Point<N>& anchor) {
    auto& slot = rays_[anchor];
    if (!slot) slot = std::make_unique<RayGrid<N>>(anchor, point_);
    return *slot;
  }

  template <class T>
  const Jet<T, N>* find(const void* key) const {
    const auto& m = memo<T>();
    auto it = m.find(key);
    return it == m.end() ? nullptr : &it->second;
  }

  template <class T>
  const Jet<T, N>& store(const void* key, const Jet<T, N>& j) {
    return memo<T>().insert_or_assign(key, j).first->second;
  }

 private:
  template <class T>
  auto& memo() {
    if constexpr (std::is_same_v<T, double>) return real_;
    else return complex_;
  }
  template <class T>
  const auto& memo() const {
    if constexpr (std::is_same_v<T, double>) return real_;
    else return complex_;
  }

  Point<N> point_;
  std::map<Point<N>, std::unique_ptr<RayGrid<N>>> rays_;
  std::unordered_map<const void*, Jet<double, N>> real_;
  std::unordered_map<const void*, Jet<Complex, N>> complex_;
};

template <class T, int N>
class Node : public std::enable_shared_from_this<Node<T, N>> {
 public:
  using Ptr = std::shared_ptr<const Node>;
  virtual ~Node() = default;

  Jet<T, N> jet(EvalContext<N>& ctx) const {
    if (const auto* hit = ctx.template find<T>(this)) return *hit;
    return ctx.store(this, compute_jet(ctx));
  }

  /// Values at every point of the grid, memoized on the grid.
  const std::vector<T>& values(RayGrid<N>& grid) const {
    if (const auto* hit = grid.template find<T>(this)) return *hit;
    return grid.store(this, compute_values(grid));
  }

  /// Symbolic partial derivative along `slot`.
  virtual Ptr diff(int slot) const = 0;

  /// True only for nodes known to be identically zero.
  virtual bool is_zero() const { return false; }

  Ptr self() const { return this->shared_from_this(); }

 protected:
  virtual Jet<T, N> compute_jet(EvalContext<N>& ctx) const = 0;

  virtual std::vector<T> compute_values(RayGrid<N>& grid) const {
    std::vector<T> out(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) {
      EvalContext<N> ctx(grid.point(k));
      out[k] = jet(ctx).v;
    }
    return out;
  }
};

template <class T, int N>
using NodePtr = typename Node<T, N>::Ptr;

namespace dag {

template <class T, int N>
class ConstantNode final : public Node<T, N> {
 public:
  explicit ConstantNode(T c) : c_(c) {}
  NodePtr<T, N> diff(int) const override { return std::make_shared<ConstantNode>(T(0)); }
  bool is_zero() const override { return c_ == T(0); }
  T constant() const { return c_; }

 protected:
  Jet<T, N> compute_jet(EvalContext<N>&) const override { return Jet<T, N>::constant(c_); }
  std::vector<T> compute_values(RayGrid<N>& grid) const override {
    return std::vector<T>(grid.size(), c_);
  }

 private:
  T c_;
};

template <class T, int N>
NodePtr<T, N> constant_node(T c) {
  return std::make_shared<ConstantNode<T, N>>(c);
}

template <class T, int N>
std::optional<T> constant_value(const NodePtr<T, N>& n) {
  if (const auto* c = dynamic_cast<const ConstantNode<T, N>*>(n.get())) return c->constant();
  return std::nullopt;
}

/// Variable bound to each jet slot: planar fields use (x2, x1), spatial
/// fields (x1, x2, x3).
template <int N>
constexpr Var slot_var(int slot) {
  if constexpr (N == 2) return slot == 0 ? Var::X2 : Var::X1;
  else return static_cast<Var>(slot);
}

/// A real field given by an expression in the coordinates.
template <int N>
class ExprNode final : public Node<double, N> {
 public:
  explicit ExprNode(Expr e) : e_(std::move(e)) {}

  NodePtr<double, N> diff(int slot) const override {
    Expr d = derivative(e_, slot_var<N>(slot));
    if (d.is_constant()) return constant_node<double, N>(evaluate(d, Bindings<double>{}));
    return std::make_shared<ExprNode>(std::move(d));
  }

  const Expr& expr() const { return e_; }

 protected:
  Jet<double, N> compute_jet(EvalContext<N>& ctx) const override {
    Bindings<Jet<double, N>> b;
    for (int k = 0; k < N; ++k) b.set(slot_var<N>(k), Jet<double, N>::variable(ctx.point()[k], k));
    return guarded([&] { return evaluate(e_, b); }, ctx.point());
  }

  std::vector<double> compute_values(RayGrid<N>& grid) const override {
    std::vector<double> out(grid.size());
    Bindings<double> b;
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const auto& p = grid.point(k);
      for (int s = 0; s < N; ++s) b.set(slot_var<N>(s), p[s]);
      out[k] = guarded([&] { return evaluate(e_, b); }, p);
    }
    return out;
  }

 private:
  template <class F>
  static auto guarded(F&& f, const Point<N>& p) {
    try {
      return f();
    } catch (const DomainError& err) {
      throw DomainError(std::string(err.what()) + " at " + format_point<N>(p));
    }
  }

  Expr e_;
};

enum class UnaryOp { Neg, Exp, Log, Sqrt, Reciprocal, Conj };

template <class T, int N>
class UnaryNode final : public Node<T, N> {
 public:
  UnaryNode(UnaryOp op, NodePtr<T, N> a) : op_(op), a_(std::move(a)) {}

  NodePtr<T, N> diff(int slot) const override;

 protected:
  Jet<T, N> compute_jet(EvalContext<N>& ctx) const override {
    const Jet<T, N> a = a_->jet(ctx);
    check(a.v, ctx.point());
    switch (op_) {
      case UnaryOp::Neg: return -a;
      case UnaryOp::Exp: return exp(a);
      case UnaryOp::Log: return log(a);
      case UnaryOp::Sqrt: return sqrt(a);
      case UnaryOp::Reciprocal: return reciprocal(a);
      case UnaryOp::Conj:
        if constexpr (is_complex_v<T>) return conj(a);
        else return a;
    }
    return a;
  }

  std::vector<T> compute_values(RayGrid<N>& grid) const override {
    using std::exp;
    using std::log;
    using std::sqrt;
    const auto& a = a_->values(grid);
    std::vector<T> out(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
      check(a[k], grid.point(k));
      switch (op_) {
        case UnaryOp::Neg: out[k] = -a[k]; break;
        case UnaryOp::Exp: out[k] = exp(a[k]); break;
        case UnaryOp::Log: out[k] = log(a[k]); break;
        case UnaryOp::Sqrt: out[k] = sqrt(a[k]); break;
        case UnaryOp::Reciprocal: out[k] = T(1) / a[k]; break;
        case UnaryOp::Conj:
          if constexpr (is_complex_v<T>) out[k] = std::conj(a[k]);
          else out[k] = a[k];
          break;
      }
    }
    return out;
  }

 private:
  void check(const T& a, const Point<N>& p) const {
    if (op_ == UnaryOp::Reciprocal && std::abs(a) < 1e-10)
      throw DomainError("reciprocal of a vanishing quantity at " + format_point<N>(p));
    if constexpr (!is_complex_v<T>) {
      if ((op_ == UnaryOp::Log || op_ == UnaryOp::Sqrt) && !(a > 0.0))
        throw DomainError(std::string(op_ == UnaryOp::Log ? "ln" : "sqrt") +
                          " of a non-positive quantity at " + format_point<N>(p));
    } else {
      if ((op_ == UnaryOp::Log || op_ == UnaryOp::Sqrt) && std::abs(a) < 1e-10)
        throw DomainError("branch point reached at " + format_point<N>(p));
    }
  }

  UnaryOp op_;
  NodePtr<T, N> a_;
};

enum class BinaryOp { Add, Sub, Mul, Div };

template <class T, int N>
class BinaryNode final : public Node<T, N> {
 public:
  BinaryNode(BinaryOp op, NodePtr<T, N> a, NodePtr<T, N> b)
      : op_(op), a_(std::move(a)), b_(std::move(b)) {}

  NodePtr<T, N> diff(int slot) const override;

 protected:
  Jet<T, N> compute_jet(EvalContext<N>& ctx) const override {
    const Jet<T, N> a = a_->jet(ctx);
    const Jet<T, N> b = b_->jet(ctx);
    switch (op_) {
      case BinaryOp::Add: return a + b;
      case BinaryOp::Sub: return a - b;
      case BinaryOp::Mul: return a * b;
      case BinaryOp::Div: guard(a.v, b.v, ctx.point()); return a / b;
    }
    return a;
  }

  std::vector<T> compute_values(RayGrid<N>& grid) const override {
    const auto& a = a_->values(grid);
    const auto& b = b_->values(grid);
    std::vector<T> out(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
      switch (op_) {
        case BinaryOp::Add: out[k] = a[k] + b[k]; break;
        case BinaryOp::Sub: out[k] = a[k] - b[k]; break;
        case BinaryOp::Mul: out[k] = a[k] * b[k]; break;
        case BinaryOp::Div:
          guard(a[k], b[k], grid.point(k));
          out[k] = a[k] / b[k];
          break;
      }
    }
    return out;
  }

 private:
  // Vanish threshold relative to the numerator's scale.
  static void guard(const T& num, const T& den, const Point<N>& p) {
    if (std::abs(den) < 1e-10 * std::max(1.0, std::abs(num)))
      throw DomainError("division by a vanishing quantity at " + format_point<N>(p));
  }

  BinaryOp op_;
  NodePtr<T, N> a_, b_;
};

// Arithmetic on node pointers with zero/one folding.

template <class T, int N>
NodePtr<T, N> add(const NodePtr<T, N>& a, const NodePtr<T, N>& b) {
  if (a->is_zero()) return b;
  if (b->is_zero()) return a;
  return std::make_shared<BinaryNode<T, N>>(BinaryOp::Add, a, b);
}

template <class T, int N>
NodePtr<T, N> neg(const NodePtr<T, N>& a) {
  if (a->is_zero()) return a;
  if (auto c = constant_value<T, N>(a)) return constant_node<T, N>(-*c);
  return std::make_shared<UnaryNode<T, N>>(UnaryOp::Neg, a);
}

template <class T, int N>
NodePtr<T, N> sub(const NodePtr<T, N>& a, const NodePtr<T, N>& b) {
  if (b->is_zero()) return a;
  if (a->is_zero()) return neg<T, N>(b);
  return std::make_shared<BinaryNode<T, N>>(BinaryOp::Sub, a, b);
}

template <class T, int N>
NodePtr<T, N> mul(const NodePtr<T, N>& a, const NodePtr<T, N>& b) {
  if (a->is_zero()) return a;
  if (b->is_zero()) return b;
  if (auto c = constant_value<T, N>(a); c && *c == T(1)) return b;
  if (auto c = constant_value<T, N>(b); c && *c == T(1)) return a;
  return std::make_shared<BinaryNode<T, N>>(BinaryOp::Mul, a, b);
}

template <class T, int N>
NodePtr<T, N> div(const NodePtr<T, N>& a, const NodePtr<T, N>& b) {
  if (a->is_zero()) return a;
  if (auto c = constant_value<T, N>(b); c && *c == T(1)) return a;
  return std::make_shared<BinaryNode<T, N>>(BinaryOp::Div, a, b);
}

template <class T, int N>
NodePtr<T, N> unary(UnaryOp op, const NodePtr<T, N>& a) {
  if (op == UnaryOp::Neg) return neg<T, N>(a);
  if (op == UnaryOp::Conj && a->is_zero()) return a;
  return std::make_shared<UnaryNode<T, N>>(op, a);
}

template <class T, int N>
NodePtr<T, N> UnaryNode<T, N>::diff(int slot) const {
  const NodePtr<T, N> da = a_->diff(slot);
  if (da->is_zero()) return constant_node<T, N>(T(0));
  switch (op_) {
    case UnaryOp::Neg: return neg<T, N>(da);
    case UnaryOp::Exp: return mul<T, N>(this->self(), da);
    case UnaryOp::Log: return div<T, N>(da, a_);
    case UnaryOp::Sqrt: return div<T, N>(da, mul<T, N>(constant_node<T, N>(T(2)), this->self()));
    case UnaryOp::Reciprocal: return neg<T, N>(mul<T, N>(da, mul<T, N>(this->self(), this->self())));
    case UnaryOp::Conj: return unary<T, N>(UnaryOp::Conj, da);
  }
  return da;
}

template <class T, int N>
NodePtr<T, N> BinaryNode<T, N>::diff(int slot) const {
  const NodePtr<T, N> da = a_->diff(slot);
  const NodePtr<T, N> db = b_->diff(slot);
  switch (op_) {
    case BinaryOp::Add: return add<T, N>(da, db);
    case BinaryOp::Sub: return sub<T, N>(da, db);
    case BinaryOp::Mul: return add<T, N>(mul<T, N>(da, b_), mul<T, N>(a_, db));
    case BinaryOp::Div:
      // (a/b)' = (a' - (a/b) b') / b
      return div<T, N>(sub<T, N>(da, mul<T, N>(this->self(), db)), b_);
  }
  return da;
}

// Real <-> complex bridges.

template <int N>
class MakeComplexNode final : public Node<Complex, N> {
 public:
  MakeComplexNode(NodePtr<double, N> re, NodePtr<double, N> im) : re_(std::move(re)), im_(std::move(im)) {}

  NodePtr<Complex, N> diff(int slot) const override;
  bool is_zero() const override { return re_->is_zero() && im_->is_zero(); }

 protected:
  Jet<Complex, N> compute_jet(EvalContext<N>& ctx) const override {
    return make_complex(re_->jet(ctx), im_->jet(ctx));
  }
  std::vector<Complex> compute_values(RayGrid<N>& grid) const override {
    const auto& re = re_->values(grid);
    const auto& im = im_->values(grid);
    std::vector<Complex> out(re.size());
    for (std::size_t k = 0; k < re.size(); ++k) out[k] = {re[k], im[k]};
    return out;
  }

 private:
  NodePtr<double, N> re_, im_;
};

template <int N>
NodePtr<Complex, N> make_complex_node(const NodePtr<double, N>& re, const NodePtr<double, N>& im) {
  auto cr = constant_value<double, N>(re);
  auto ci = constant_value<double, N>(im);
  if (cr && ci) return constant_node<Complex, N>(Complex(*cr, *ci));
  return std::make_shared<MakeComplexNode<N>>(re, im);
}

template <int N>
NodePtr<Complex, N> MakeComplexNode<N>::diff(int slot) const {
  return make_complex_node<N>(re_->diff(slot), im_->diff(slot));
}

template <int N>
class PartNode final : public Node<double, N> {
 public:
  PartNode(bool imag_part, NodePtr<Complex, N> a) : imag_(imag_part), a_(std::move(a)) {}

  NodePtr<double, N> diff(int slot) const override;
  bool is_zero() const override { return a_->is_zero(); }

 protected:
  Jet<double, N> compute_jet(EvalContext<N>& ctx) const override {
    const auto a = a_->jet(ctx);
    return imag_ ? imag(a) : real(a);
  }
  std::vector<double> compute_values(RayGrid<N>& grid) const override {
    const auto& a = a_->values(grid);
    std::vector<double> out(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) out[k] = imag_ ? a[k].imag() : a[k].real();
    return out;
  }

 private:
  bool imag_;
  NodePtr<Complex, N> a_;
};

template <int N>
NodePtr<double, N> part_node(bool imag_part, const NodePtr<Complex, N>& a) {
  if (auto c = constant_value<Complex, N>(a)) return constant_node<double, N>(imag_part ? c->imag() : c->real());
  return std::make_shared<PartNode<N>>(imag_part, a);
}

template <int N>
NodePtr<double, N> PartNode<N>::diff(int slot) const {
  return part_node<N>(imag_, a_->diff(slot));
}

/// Real phi with dz(phi) = g and phi(anchor) = anchor_value.
class PotentialNode final : public Node<double, 2> {
 public:
  PotentialNode(NodePtr<Complex, 2> g, Point2 anchor, double anchor_value)
      : g_(std::move(g)), anchor_(anchor), anchor_value_(anchor_value) {}

  NodePtr<double, 2> diff(int slot) const override {
    // phi_x = Re g, phi_y = -Im g.
    if (slot == 0) return part_node<2>(false, g_);
    return neg<double, 2>(part_node<2>(true, g_));
  }

  const Point2& anchor() const { return anchor_; }

 protected:
  Jet<double, 2> compute_jet(EvalContext<2>& ctx) const override {
    Jet<double, 2> r;
    r.v = values(ctx.ray_from(anchor_)).back();
    const Jet<Complex, 2> g = g_->jet(ctx);
    r.order = std::min(2, g.order + 1);
    r.d[0] = g.v.real();
    r.d[1] = -g.v.imag();
    r.dd[0][0] = g.d[0].real();
    r.dd[1][1] = -g.d[1].imag();
    r.dd[0][1] = r.dd[1][0] = 0.5 * (g.d[1].real() - g.d[0].imag());
    return r;
  }

  std::vector<double> compute_values(RayGrid<2>& grid) const override {
    if (grid.from() != anchor_) {
      std::vector<double> out(grid.size());
      for (std::size_t k = 0; k < grid.size(); ++k) {
        RayGrid<2> ray(anchor_, grid.point(k));
        out[k] = values(ray).back();
      }
      return out;
    }
    const auto& g = g_->values(grid);
    const Complex step(grid.to()[0] - anchor_[0], grid.to()[1] - anchor_[1]);
    const std::size_t m = grid.size() - 1;
    std::vector<double> integrand(m);
    for (std::size_t k = 0; k < m; ++k) {
      integrand[k] = (g[k] * step).real();
      if (!std::isfinite(integrand[k]))
        throw DomainError("singular integrand on the path from " + format_point<2>(anchor_) + " at " +
                          format_point<2>(grid.point(k)));
    }
    std::vector<double> out = ray_rule().running(integrand);
    for (double& v : out) v += anchor_value_;
    return out;
  }

 private:
  NodePtr<Complex, 2> g_;
  Point2 anchor_;
  double anchor_value_;
};

}  // namespace dag

// ---------------------------------------------------------------------------
// Field handle
// ---------------------------------------------------------------------------

template <class T, int N>
class Field {
 public:
  using value_type = T;
  static constexpr int dim = N;

  Field() : node_(dag::constant_node<T, N>(T(0))) {}
  explicit Field(NodePtr<T, N> node) : node_(std::move(node)) {}

  static Field constant(T c) { return Field(dag::constant_node<T, N>(c)); }

  Jet<T, N> jet(const Point<N>& p) const {
    EvalContext<N> ctx(p);
    return node_->jet(ctx);
  }
  Jet<T, N> jet(EvalContext<N>& ctx) const { return node_->jet(ctx); }
  T operator()(const Point<N>& p) const { return jet(p).v; }

  const NodePtr<T, N>& node() const { return node_; }
  bool is_zero() const { return node_->is_zero(); }

  friend Field operator+(const Field& a, const Field& b) { return Field(dag::add<T, N>(a.node_, b.node_)); }
  friend Field operator-(const Field& a, const Field& b) { return Field(dag::sub<T, N>(a.node_, b.node_)); }
  friend Field operator*(const Field& a, const Field& b) { return Field(dag::mul<T, N>(a.node_, b.node_)); }
  friend Field operator/(const Field& a, const Field& b) { return Field(dag::div<T, N>(a.node_, b.node_)); }
  friend Field operator-(const Field& a) { return Field(dag::neg<T, N>(a.node_)); }

  friend Field operator*(T s, const Field& a) { return constant(s) * a; }
  friend Field operator*(const Field& a, T s) { return a * constant(s); }
  friend Field operator+(const Field& a, T s) { return a + constant(s); }
  friend Field operator+(T s, const Field& a) { return constant(s) + a; }
  friend Field operator-(const Field& a, T s) { return a - constant(s); }
  friend Field operator-(T s, const Field& a) { return constant(s) - a; }
  friend Field operator/(const Field& a, T s) { return a / constant(s); }
  friend Field operator/(T s, const Field& a) { return constant(s) / a; }

 private:
  NodePtr<T, N> node_;
};

template <int N>
using RealField = Field<double, N>;
using RealField2 = Field<double, 2>;
using RealField3 = Field<double, 3>;
using ComplexField = Field<Complex, 2>;

/// Parses a real field. Planar fields may use x, y (or x1, x2); spatial
/// fields x1, x2, x3 (or x, y, z).
template <int N>
RealField<N> parse_field(std::string_view src) {
  ParseOptions opts;
  opts.allowed = N == 2 ? std::set<Var>{Var::X1, Var::X2} : std::set<Var>{Var::X1, Var::X2, Var::X3};
  return RealField<N>(std::make_shared<dag::ExprNode<N>>(parse(src, opts)));
}

template <int N>
RealField<N> expr_field(const Expr& e) {
  if (e.is_constant()) return RealField<N>::constant(evaluate(e, Bindings<double>{}));
  return RealField<N>(std::make_shared<dag::ExprNode<N>>(e));
}

template <int N>
Field<Complex, N> make_complex(const RealField<N>& re, const RealField<N>& im) {
  return Field<Complex, N>(dag::make_complex_node<N>(re.node(), im.node()));
}

inline ComplexField parse_complex_field(std::string_view re, std::string_view im) {
  return make_complex(parse_field<2>(re), parse_field<2>(im));
}

template <int N>
Field<Complex, N> to_complex(const RealField<N>& a) {
  return make_complex(a, RealField<N>::constant(0.0));
}

template <int N>
RealField<N> real(const Field<Complex, N>& a) {
  return RealField<N>(dag::part_node<N>(false, a.node()));
}

template <int N>
RealField<N> imag(const Field<Complex, N>& a) {
  return RealField<N>(dag::part_node<N>(true, a.node()));
}

template <int N>
Field<Complex, N> conj(const Field<Complex, N>& a) {
  return Field<Complex, N>(dag::unary<Complex, N>(dag::UnaryOp::Conj, a.node()));
}

template <class T, int N>
Field<T, N> exp(const Field<T, N>& a) {
  return Field<T, N>(dag::unary<T, N>(dag::UnaryOp::Exp, a.node()));
}

template <class T, int N>
Field<T, N> log(const Field<T, N>& a) {
  return Field<T, N>(dag::unary<T, N>(dag::UnaryOp::Log, a.node()));
}

template <class T, int N>
Field<T, N> sqrt(const Field<T, N>& a) {
  return Field<T, N>(dag::unary<T, N>(dag::UnaryOp::Sqrt, a.node()));
}

template <class T, int N>
Field<T, N> reciprocal(const Field<T, N>& a) {
  return Field<T, N>(dag::unary<T, N>(dag::UnaryOp::Reciprocal, a.node()));
}

// Mixed real/complex arithmetic promotes the real operand.
template <int N>
Field<Complex, N> operator*(const RealField<N>& a, const Field<Complex, N>& b) {
  return to_complex(a) * b;
}
template <int N>
Field<Complex, N> operator*(const Field<Complex, N>& a, const RealField<N>& b) {
  return a * to_complex(b);
}
template <int N>
Field<Complex, N> operator/(const Field<Complex, N>& a, const RealField<N>& b) {
  return a / to_complex(b);
}
template <int N>
Field<Complex, N> operator*(Complex s, const RealField<N>& a) {
  return s * to_complex(a);
}

template <class T, int N>
Field<T, N> partial(const Field<T, N>& f, int slot) {
  return Field<T, N>(f.node()->diff(slot));
}

/// dz f = f_x - i f_y.
inline ComplexField dz(const RealField2& f) { return make_complex(partial(f, 0), -partial(f, 1)); }
inline ComplexField dz(const ComplexField& f) {
  return partial(f, 0) - Complex(0, 1) * partial(f, 1);
}

/// dzbar f = f_x + i f_y.
inline ComplexField dzbar(const RealField2& f) { return make_complex(partial(f, 0), partial(f, 1)); }
inline ComplexField dzbar(const ComplexField& f) {
  return partial(f, 0) + Complex(0, 1) * partial(f, 1);
}

/// Real phi with dz(phi) = g and phi(anchor) = anchor_value. Values come from
/// integration along the segment anchor -> p; derivatives from g directly.
/// Well defined only where g is a Wirtinger gradient (see curl_residual).
inline RealField2 potential(const ComplexField& g, const Point2& anchor, double anchor_value = 0.0) {
  if (g.is_zero()) return RealField2::constant(anchor_value);
  return RealField2(std::make_shared<dag::PotentialNode>(g.node(), anchor, anchor_value));
}

/// |Im dzbar g| = |Im g_x + Re g_y|; vanishes iff g = dz(phi) for a real phi.
inline double curl_residual(const ComplexField& g, const Point2& p) {
  const auto j = g.jet(p);
  return std::abs(j.d[0].imag() + j.d[1].real());
}

// Wirtinger derivatives read off a planar jet.
inline Complex jet_dz(const Jet<Complex, 2>& j) { return j.d[0] - Complex(0, 1) * j.d[1]; }
inline Complex jet_dzbar(const Jet<Complex, 2>& j) { return j.d[0] + Complex(0, 1) * j.d[1]; }
inline Complex jet_dz(const Jet<double, 2>& j) { return {j.d[0], -j.d[1]}; }
inline Complex jet_dzbar(const Jet<double, 2>& j) { return {j.d[0], j.d[1]}; }

/// (f_z, f_zbar) of a planar field at p.
inline std::pair<Complex, Complex> wirtinger(const RealField2& f, const Point2& p) {
  const auto j = f.jet(p);
  return {jet_dz(j), jet_dzbar(j)};
}
inline std::pair<Complex, Complex> wirtinger(const ComplexField& f, const Point2& p) {
  const auto j = f.jet(p);
  return {jet_dz(j), jet_dzbar(j)};
}

// ---------------------------------------------------------------------------
// Domains
// ---------------------------------------------------------------------------

/// Axis-aligned box [x0, x1] x [y0, y1] in plane coordinates.
struct Box {
  double x0 = 0.1, x1 = 1.1, y0 = 0.1, y1 = 1.1;

  Point2 center() const { return {(x0 + x1) / 2, (y0 + y1) / 2}; }
  bool degenerate() const { return !(x1 > x0) || !(y1 > y0); }
};

/// n x n grid including the box edges, row-major in y then x.
inline std::vector<Point2> sample_grid(const Box& box, int n = 21) {
  if (n < 2) throw Error("sample grid needs at least 2 points per side");
  std::vector<Point2> pts;
  pts.reserve(static_cast<std::size_t>(n) * n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      pts.push_back({box.x0 + (box.x1 - box.x0) * i / (n - 1), box.y0 + (box.y1 - box.y0) * j / (n - 1)});
  return pts;
}

}  // namespace vekua
