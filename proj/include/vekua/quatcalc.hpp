#pragma once

// The Moisil-Teodorescu operator D = i d1 + j d2 + k d3 on quaternion-valued
// fields of (x1, x2, x3), and residual evaluators built on it: the
// quaternionic Riccati equation, the factorization of the Schrodinger
// operator, the Maxwell correspondence and the planar splitting.
//
// D acts from the left: D(q) = sum_k e_k * d_k q, so that
//   D(q0) = grad q0,   D(vec q) = -div q + rot q,   D^2 = -Laplacian.

#include <array>
#include <cmath>
#include <string_view>
#include <utility>

#include "vekua/cquat.hpp"
#include "vekua/error.hpp"
#include "vekua/field.hpp"

namespace vekua {

/// Quaternion field with real scalar field components q0 + q1 i + q2 j + q3 k.
struct QuatField {
  std::array<RealField3, 4> c;

  static QuatField scalar(const RealField3& f) { return {{f, RealField3{}, RealField3{}, RealField3{}}}; }
  static QuatField vector(const RealField3& f1, const RealField3& f2, const RealField3& f3) {
    return {{RealField3{}, f1, f2, f3}};
  }
  static QuatField parse(std::string_view q0, std::string_view q1, std::string_view q2, std::string_view q3) {
    return {{parse_field<3>(q0), parse_field<3>(q1), parse_field<3>(q2), parse_field<3>(q3)}};
  }

  CQuat operator()(const Point3& p) const {
    EvalContext<3> ctx(p);
    return {c[0].jet(ctx).v, c[1].jet(ctx).v, c[2].jet(ctx).v, c[3].jet(ctx).v};
  }

  std::array<Jet<double, 3>, 4> jets(EvalContext<3>& ctx) const {
    return {c[0].jet(ctx), c[1].jet(ctx), c[2].jet(ctx), c[3].jet(ctx)};
  }

  friend QuatField operator+(const QuatField& a, const QuatField& b) {
    return {{a.c[0] + b.c[0], a.c[1] + b.c[1], a.c[2] + b.c[2], a.c[3] + b.c[3]}};
  }
  friend QuatField operator*(const RealField3& s, const QuatField& a) {
    return {{s * a.c[0], s * a.c[1], s * a.c[2], s * a.c[3]}};
  }
  friend QuatField operator/(const QuatField& a, const RealField3& s) {
    return {{a.c[0] / s, a.c[1] / s, a.c[2] / s, a.c[3] / s}};
  }
};

namespace quat_detail {

inline CQuat first_partial(const std::array<Jet<double, 3>, 4>& j, int k) {
  return {j[0].d[k], j[1].d[k], j[2].d[k], j[3].d[k]};
}

inline CQuat second_partial(const std::array<Jet<double, 3>, 4>& j, int k, int l) {
  return {j[0].dd[k][l], j[1].dd[k][l], j[2].dd[k][l], j[3].dd[k][l]};
}

inline CQuat value(const std::array<Jet<double, 3>, 4>& j) { return {j[0].v, j[1].v, j[2].v, j[3].v}; }

inline CQuat apply_D(const std::array<Jet<double, 3>, 4>& j) {
  CQuat r;
  for (int k = 0; k < 3; ++k) r += CQuat::unit(k) * first_partial(j, k);
  return r;
}

}  // namespace quat_detail

/// Dq at p.
inline CQuat apply_D(const QuatField& q, const Point3& p) {
  EvalContext<3> ctx(p);
  return quat_detail::apply_D(q.jets(ctx));
}

/// D(Dq) at p from the Hessians of the components.
inline CQuat apply_D2(const QuatField& q, const Point3& p) {
  EvalContext<3> ctx(p);
  const auto j = q.jets(ctx);
  CQuat r;
  for (int k = 0; k < 3; ++k)
    for (int l = 0; l < 3; ++l) r += CQuat::unit(k) * CQuat::unit(l) * quat_detail::second_partial(j, k, l);
  return r;
}

/// Componentwise Laplacian at p.
inline CQuat laplacian(const QuatField& q, const Point3& p) {
  EvalContext<3> ctx(p);
  const auto j = q.jets(ctx);
  return {j[0].laplacian(), j[1].laplacian(), j[2].laplacian(), j[3].laplacian()};
}

/// Dq + q^2 + u at p; zero iff the pure-vector field q solves Dq + q^2 = -u there.
inline CQuat riccati_residual(const QuatField& q, const RealField3& u, const Point3& p) {
  EvalContext<3> ctx(p);
  const auto j = q.jets(ctx);
  const CQuat qv = quat_detail::value(j);
  if (std::abs(qv.q0) > 1e-12 * (1.0 + max_abs(qv)))
    throw DomainError("Riccati residual needs a pure-vector field; scalar part at " + format_point<3>(p) +
                      " is " + std::to_string(qv.q0.real()));
  return quat_detail::apply_D(j) + qv * qv + CQuat(Complex(u.jet(ctx).v));
}

/// |(D + M^h)(D - M^h) f - (-Laplacian + u) f| at p. The inner first-order
/// expression g = Df - f h is exact; the outer D uses central differences of g
/// with step 1e-4 (1 + |p|).
inline double factorization_residual(const QuatField& h, const RealField3& f, const RealField3& u, const Point3& p) {
  auto inner = [&](const Point3& x) {
    EvalContext<3> ctx(x);
    const auto fj = f.jet(ctx);
    const CQuat df = CQuat::vector(fj.d[0], fj.d[1], fj.d[2]);
    return df - Complex(fj.v) * quat_detail::value(h.jets(ctx));
  };
  const double norm = std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]);
  const double step = 1e-4 * (1.0 + norm);
  CQuat dg;
  for (int k = 0; k < 3; ++k) {
    Point3 a = p, b = p;
    a[k] += step;
    b[k] -= step;
    if (a[k] == p[k] || b[k] == p[k]) throw DomainError("finite-difference step underflows at " + format_point<3>(p));
    dg += CQuat::unit(k) * ((inner(a) - inner(b)) * Complex(1.0 / (a[k] - b[k])));
  }
  EvalContext<3> ctx(p);
  const auto fj = f.jet(ctx);
  const CQuat lhs = dg + inner(p) * quat_detail::value(h.jets(ctx));
  const CQuat rhs(Complex(-fj.laplacian() + u.jet(ctx).v * fj.v));
  return max_abs(lhs - rhs);
}

/// Df / f as a pure-vector field. Evaluation fails where |f| < 1e-10.
inline QuatField log_derivative(const RealField3& f) {
  return QuatField::vector(partial(f, 0) / f, partial(f, 1) / f, partial(f, 2) / f);
}

enum class MaxwellDirection { Forward, Backward };

/// Forward: F = sqrt(eps) E. Backward: E = F / sqrt(eps). eps must be positive.
inline QuatField maxwell_transform(const QuatField& field, const RealField3& eps, MaxwellDirection dir) {
  const RealField3 root = sqrt(eps);
  return dir == MaxwellDirection::Forward ? root * field : field / root;
}

struct MaxwellResiduals {
  double div_eps_e = 0;  // |div(eps E)|
  double rot_e = 0;      // max |rot E|
  double dirac = 0;      // max |(D + M^h) F|, F = sqrt(eps) E, h = D sqrt(eps) / sqrt(eps)
};

inline MaxwellResiduals maxwell_residuals(const QuatField& e, const RealField3& eps, const Point3& p) {
  EvalContext<3> ctx(p);
  const auto ej = e.jets(ctx);
  const auto epsj = eps.jet(ctx);
  MaxwellResiduals r;
  double div = 0;
  for (int k = 0; k < 3; ++k) div += epsj.d[k] * ej[k + 1].v + epsj.v * ej[k + 1].d[k];
  r.div_eps_e = std::abs(div);
  const CQuat de = quat_detail::apply_D(ej);
  r.rot_e = max_abs(de.vec());

  const RealField3 root = sqrt(eps);
  const QuatField f = root * e;
  const QuatField h = log_derivative(root);
  const auto fj = f.jets(ctx);
  r.dirac = max_abs(quat_detail::apply_D(fj) + quat_detail::value(fj) * quat_detail::value(h.jets(ctx)));
  return r;
}

/// Largest |d3 q_n| over 16 points around the plane point pt (x = x2, y = x1).
inline double x3_dependence(const QuatField& q, const Point2& pt) {
  double worst = 0;
  for (int n = 0; n < 16; ++n) {
    const double dx = 0.05 * ((n & 1) ? 1 : -1), dy = 0.05 * ((n & 2) ? 1 : -1);
    const double x3 = -1.0 + 2.0 * (n >> 2) / 3.0;
    EvalContext<3> ctx({pt[1] + dy, pt[0] + dx, x3});
    for (const auto& j : q.jets(ctx)) worst = std::max(worst, std::abs(j.d[2]));
  }
  return worst;
}

/// Residuals of the two decoupled planar equations for p = P1 + P2 j under
/// h = H1 + H2 j:
///   dzbar P1 + conj(H2 P1)   and   dzbar P2 + H2 conj(P2),
/// with k identified with the complex unit. p and h must not depend on x3.
inline std::pair<Complex, Complex> split_to_vekua(const QuatField& p, const QuatField& h, const Point2& pt) {
  const double dep = std::max(x3_dependence(p, pt), x3_dependence(h, pt));
  if (dep >= 1e-10) throw DomainError("fields depend on x3 (|d3| = " + std::to_string(dep) + ")");

  EvalContext<3> ctx({pt[1], pt[0], 0.0});
  const auto pj = p.jets(ctx);
  const auto hj = h.jets(ctx);
  // Plane slots: d/dx = d/dx2 (index 1), d/dy = d/dx1 (index 0).
  auto dzbar_of = [](const Jet<double, 3>& re, const Jet<double, 3>& im) {
    return Complex(re.d[1], im.d[1]) + Complex(0, 1) * Complex(re.d[0], im.d[0]);
  };
  const Complex P1(pj[0].v, pj[3].v), P2(pj[2].v, -pj[1].v);
  const Complex H2(hj[2].v, -hj[1].v);
  const Jet<double, 3> minus_p1 = -pj[1];
  const Complex res1 = dzbar_of(pj[0], pj[3]) + std::conj(H2 * P1);
  const Complex res2 = dzbar_of(pj[2], minus_p1) + H2 * std::conj(P2);
  return {res1, res2};
}

}  // namespace vekua
