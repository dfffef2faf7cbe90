#pragma once

// Piecewise-smooth plane curves and complex line integrals along them.

#include <cmath>
#include <complex>
#include <functional>
#include <string_view>
#include <vector>

#include "vekua/error.hpp"
#include "vekua/expr.hpp"
#include "vekua/field.hpp"
#include "vekua/quadrature.hpp"

namespace vekua {

class Curve {
 public:
  /// One smooth piece t in [0, 1] -> plane.
  struct Piece {
    std::function<Point2(double)> at;
    std::function<Complex(double)> velocity;  // dx/dt + i dy/dt
  };

  /// x(t), y(t) for t in [0, 1], given as expressions in t.
  static Curve parametric(const Expr& x, const Expr& y, QuadratureSpec spec = {}) {
    const Expr dx = derivative(x, Var::T);
    const Expr dy = derivative(y, Var::T);
    auto eval = [](const Expr& e, double t) { return evaluate(e, Bindings<double>{}.set(Var::T, t)); };
    Piece piece{[=](double t) { return Point2{eval(x, t), eval(y, t)}; },
                [=](double t) { return Complex(eval(dx, t), eval(dy, t)); }};
    return Curve({std::move(piece)}, spec);
  }

  static Curve parametric(std::string_view x, std::string_view y, QuadratureSpec spec = {}) {
    ParseOptions opts;
    opts.allowed = {Var::T};
    return parametric(parse(x, opts), parse(y, opts), spec);
  }

  static Curve polyline(const std::vector<Point2>& vertices, QuadratureSpec spec = {}) {
    if (vertices.size() < 2) throw Error("a polyline needs at least two vertices");
    std::vector<Piece> pieces;
    for (std::size_t k = 0; k + 1 < vertices.size(); ++k) pieces.push_back(segment_piece(vertices[k], vertices[k + 1]));
    return Curve(std::move(pieces), spec);
  }

  static Curve segment(const Point2& a, const Point2& b, QuadratureSpec spec = {}) {
    return Curve({segment_piece(a, b)}, spec);
  }

  static Curve circle(const Point2& center, double radius, QuadratureSpec spec = {}) {
    constexpr double two_pi = 6.283185307179586476925;
    Piece piece{[=](double t) {
                  return Point2{center[0] + radius * std::cos(two_pi * t), center[1] + radius * std::sin(two_pi * t)};
                },
                [=](double t) {
                  return Complex(-two_pi * radius * std::sin(two_pi * t), two_pi * radius * std::cos(two_pi * t));
                }};
    return Curve({std::move(piece)}, spec);
  }

  const std::vector<Piece>& pieces() const { return pieces_; }
  const QuadratureSpec& quadrature() const { return spec_; }

  Point2 start() const { return pieces_.front().at(0.0); }
  Point2 end() const { return pieces_.back().at(1.0); }

  bool closed() const {
    const Point2 a = start(), b = end();
    return std::hypot(a[0] - b[0], a[1] - b[1]) <= 1e-12;
  }

 private:
  Curve(std::vector<Piece> pieces, QuadratureSpec spec) : pieces_(std::move(pieces)), spec_(spec) {}

  static Piece segment_piece(const Point2& a, const Point2& b) {
    const Complex v(b[0] - a[0], b[1] - a[1]);
    return {[=](double t) { return Point2{a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])}; },
            [=](double) { return v; }};
  }

  std::vector<Piece> pieces_;
  QuadratureSpec spec_;
};

/// Integral of f dz along the curve, f given pointwise.
template <class F>
Complex contour_integral(F&& f, const Curve& curve) {
  Complex total{};
  for (const auto& piece : curve.pieces()) {
    auto integrand = [&](double t) { return Complex(f(piece.at(t))) * piece.velocity(t); };
    total += integrate<Complex>(integrand, curve.quadrature()).value;
  }
  return total;
}

inline Complex contour_integral(const ComplexField& f, const Curve& curve) {
  return contour_integral([&](const Point2& p) { return f(p); }, curve);
}

}  // namespace vekua
