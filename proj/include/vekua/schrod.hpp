#pragma once

// The two-dimensional stationary Schrodinger equation (-Laplacian + u) f = 0
// through its main Vekua equation. With a nonvanishing particular solution f0
// the pair (F, G) = (1/f0, i f0) has coefficients a = 0, b = -f0_zbar / f0,
// A = 0, B = -f0_z / f0, giving
//
//   Vek1:  w_zbar + (f0_zbar / f0) conj(w) = 0
//   Vek2:  v_zbar + (f0_z / f0) conj(v) = 0
//
// and every Vek2 solution v produces a Schrodinger solution f = C exp(Phi)
// with Psi_z = v / f0 and Phi_z = f0_z / f0 + Psi_z / Psi.
//
// When rho(x, y) satisfies Laplacian(rho) / |grad rho|^2 = s(rho) and
// f0 = f0(rho), the pair (F_I, G_I) = (i f0 e^{-S} rho_z, -e^{-S} rho_z / f0),
// S' = s, is explicit and solves Vek2; its adjoint has (F, G) as successor,
// which closes the cycle w -> v -> f -> w' that generates new solutions.

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "vekua/bers.hpp"
#include "vekua/curve.hpp"
#include "vekua/error.hpp"
#include "vekua/expr.hpp"
#include "vekua/field.hpp"
#include "vekua/parallel.hpp"
#include "vekua/quadrature.hpp"

namespace vekua {

// ---------------------------------------------------------------------------
// Residual sweeps
// ---------------------------------------------------------------------------

struct Sweep {
  double max = 0;
  Point2 worst{};
  std::size_t samples = 0;
};

/// Largest value of `metric` over the samples, evaluated in parallel.
template <class F>
Sweep sweep(const std::vector<Point2>& samples, F&& metric) {
  const auto values = parallel_map<double>(samples.size(), [&](std::size_t k) { return metric(samples[k]); });
  Sweep s;
  s.samples = samples.size();
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (std::isnan(values[k])) {
      s.max = std::numeric_limits<double>::quiet_NaN();
      s.worst = samples[k];
      return s;
    }
    if (values[k] > s.max) {
      s.max = values[k];
      s.worst = samples[k];
    }
  }
  return s;
}

/// Throws ResidualError if the sweep exceeds tol (or produced NaN).
inline void require(const std::string& check, const Sweep& s, double tol) {
  if (!(s.max <= tol)) throw ResidualError(check + " at " + format_point<2>(s.worst), s.max, tol);
}

/// |(-Laplacian + u) f| / (1 + |f| |u|) at p.
inline double schrodinger_residual(const RealField2& f, const RealField2& u, const Point2& p) {
  EvalContext<2> ctx(p);
  const auto fj = f.jet(ctx);
  const double uv = u.jet(ctx).v;
  return std::abs(-fj.laplacian() + uv * fj.v) / (1.0 + std::abs(fj.v) * std::abs(uv));
}

/// |w_zbar - a w - b conj(w)| / (1 + |a w| + |b w|) at p.
inline double vekua_metric(const ComplexField& w, const PairCoefficients& c, const Point2& p) {
  EvalContext<2> ctx(p);
  const auto wj = w.jet(ctx);
  const Complex a = c.a.jet(ctx).v * wj.v;
  const Complex b = c.b.jet(ctx).v * std::conj(wj.v);
  return std::abs(jet_dzbar(wj) - a - b) / (1.0 + std::abs(a) + std::abs(b));
}

namespace fd {

// Fourth-order central differences of the value channel only. They cross-check
// the jet-based residuals, whose derivatives come from the same identities that
// define the potentials.

inline double step(const Point2& p) { return 1e-3 * (1.0 + std::hypot(p[0], p[1])); }

template <class T, class F>
T derivative(F&& value, const Point2& p, int slot, double h) {
  auto at = [&](double t) {
    Point2 q = p;
    q[slot] += t;
    return value(q);
  };
  return (at(-2 * h) - 8.0 * at(-h) + 8.0 * at(h) - at(2 * h)) / (12.0 * h);
}

inline double vekua_metric(const ComplexField& w, const PairCoefficients& c, const Point2& p) {
  const double h = step(p);
  auto value = [&](const Point2& q) { return w(q); };
  const Complex wzb = derivative<Complex>(value, p, 0, h) + Complex(0, 1) * derivative<Complex>(value, p, 1, h);
  const Complex wv = w(p);
  const Complex a = c.a(p) * wv, b = c.b(p) * std::conj(wv);
  return std::abs(wzb - a - b) / (1.0 + std::abs(a) + std::abs(b));
}

inline double schrodinger_residual(const RealField2& f, const RealField2& u, const Point2& p) {
  const double h = step(p);
  const double fv = f(p);
  double lap = 0;
  for (int slot = 0; slot < 2; ++slot) {
    auto at = [&](double t) {
      Point2 q = p;
      q[slot] += t;
      return f(q);
    };
    lap += (-at(2 * h) + 16 * at(h) - 30 * fv + 16 * at(-h) - at(-2 * h)) / (12 * h * h);
  }
  const double uv = u(p);
  return std::abs(-lap + uv * fv) / (1.0 + std::abs(fv) * std::abs(uv));
}

}  // namespace fd

// ---------------------------------------------------------------------------
// Problem and main pair
// ---------------------------------------------------------------------------

struct SchrodingerProblem {
  RealField2 u;
  RealField2 f0;
  Box box;
  double zeta = 1e-10;  // |f0| must exceed this on the grid
  int grid = 21;

  std::vector<Point2> samples() const { return sample_grid(box, grid); }

  /// Checks |f0| > zeta and the Schrodinger residual of f0 on the grid.
  void validate(double tol = 1e-6) const {
    if (box.degenerate()) throw Error("empty domain box");
    const auto pts = samples();
    for (const auto& p : pts) {
      const double v = f0(p);
      if (!(std::abs(v) > zeta)) throw DomainError("f0 vanishes at " + format_point<2>(p));
    }
    require("Schrodinger residual of f0", sweep(pts, [&](const Point2& p) { return schrodinger_residual(f0, u, p); }),
            tol);
  }
};

/// (F, G) = (1/f0, i f0) with adjoint (-i/f0, f0).
inline GeneratingPair main_pair(const SchrodingerProblem& prob) {
  for (const auto& p : prob.samples())
    if (!(std::abs(prob.f0(p)) > prob.zeta)) throw DomainError("f0 vanishes at " + format_point<2>(p));
  const ComplexField f0 = to_complex(prob.f0);
  const Complex I(0, 1);
  GeneratingPair pair(Complex(1.0) / f0, I * f0, prob.samples());
  pair.with_adjoint(-I / f0, f0);
  return pair;
}

/// Coefficients of Vek1 (the main pair) in closed form.
inline PairCoefficients vek1_coefficients(const SchrodingerProblem& prob) {
  const ComplexField f0 = to_complex(prob.f0);
  return {ComplexField{}, -dzbar(prob.f0) / f0, ComplexField{}, -dz(prob.f0) / f0};
}

/// Coefficients of Vek2: a = 0, b = -f0_z / f0 (A and B are left empty).
inline PairCoefficients vek2_coefficients(const SchrodingerProblem& prob) {
  return {ComplexField{}, -dz(prob.f0) / to_complex(prob.f0), ComplexField{}, ComplexField{}};
}

inline Sweep vek1_sweep(const ComplexField& w, const SchrodingerProblem& prob, const std::vector<Point2>& samples) {
  const auto c = vek1_coefficients(prob);
  return sweep(samples, [&](const Point2& p) { return vekua_metric(w, c, p); });
}

inline Sweep vek2_sweep(const ComplexField& v, const SchrodingerProblem& prob, const std::vector<Point2>& samples) {
  const auto c = vek2_coefficients(prob);
  return sweep(samples, [&](const Point2& p) { return vekua_metric(v, c, p); });
}

inline Sweep schrodinger_sweep(const RealField2& f, const SchrodingerProblem& prob,
                               const std::vector<Point2>& samples) {
  return sweep(samples, [&](const Point2& p) { return schrodinger_residual(f, prob.u, p); });
}

/// v = i (w_z + (f0_z / f0) conj(w)), the (F,G)-derivative of w times i.
inline ComplexField vek1_to_vek2(const ComplexField& w, const SchrodingerProblem& prob, double tol = 1e-6) {
  const auto samples = prob.samples();
  require("Vek1 residual of w", vek1_sweep(w, prob, samples), tol);
  const ComplexField v = Complex(0, 1) * (dz(w) + dz(prob.f0) / to_complex(prob.f0) * conj(w));
  require("Vek2 residual of v", vek2_sweep(v, prob, samples), tol);
  return v;
}

/// v = f0 dz(f1 / f0) for a Schrodinger solution f1.
inline ComplexField schrod_to_vek2(const RealField2& f1, const SchrodingerProblem& prob, double tol = 1e-6) {
  const auto samples = prob.samples();
  require("Schrodinger residual of f1", schrodinger_sweep(f1, prob, samples), tol);
  const ComplexField v = prob.f0 * dz(f1 / prob.f0);
  require("Vek2 residual of v", vek2_sweep(v, prob, samples), tol);
  return v;
}

// ---------------------------------------------------------------------------
// Potentials and solution generation
// ---------------------------------------------------------------------------

/// Largest curl residual |Im dzbar Q| relative to 1 + |Q| over the samples.
inline Sweep curl_sweep(const ComplexField& q, const std::vector<Point2>& samples) {
  return sweep(samples, [&](const Point2& p) { return curl_residual(q, p) / (1.0 + std::abs(q(p))); });
}

/// Phi(p) - Phi(anchor) for Q = dz(Phi), as the line integral Re int Q dz
/// along `path` (default: the straight segment). The curl of Q is checked at
/// points of the path and the value is compared with a second route (the
/// L-shaped polyline through (p.x, anchor.y)).
inline double potential_from_gradient_2d(const ComplexField& q, const Point2& anchor, const Point2& p,
                                         std::optional<Curve> path = std::nullopt, double tol = 1e-8) {
  const Curve main = path ? *path : Curve::segment(anchor, p);
  std::vector<Point2> probes;
  for (const auto& piece : main.pieces())
    for (int k = 0; k <= 16; ++k) probes.push_back(piece.at(k / 16.0));
  require("curl of Q", curl_sweep(q, probes), tol);
  if (q.is_zero()) return 0.0;
  const double value = contour_integral(q, main).real();
  const Curve other = path ? Curve::segment(anchor, p) : Curve::polyline({anchor, {p[0], anchor[1]}, p});
  const double check = contour_integral(q, other).real();
  if (std::abs(value - check) > tol * (1.0 + std::abs(value)))
    throw PathDependence("potential depends on the path: " + std::to_string(std::abs(value - check)));
  return value;
}

/// Field form: the potential of Q normalized to anchor_value at the anchor,
/// after a curl check on the samples.
inline RealField2 gradient_potential(const ComplexField& q, const Point2& anchor, double anchor_value,
                                     const std::vector<Point2>& samples, double tol = 1e-8) {
  require("curl of Q", curl_sweep(q, samples), tol);
  return potential(q, anchor, anchor_value);
}

struct GeneratedSolution {
  RealField2 psi;  // Psi with Psi_z = v / f0
  RealField2 phi;  // Phi with Phi_z = f0_z / f0 + Psi_z / Psi
  RealField2 f;    // C exp(Phi)
};

/// Schrodinger solution f = C exp(Phi) from a Vek2 solution v. Psi is pinned
/// to psi_anchor and Phi to 0 at the anchor, so f(anchor) = C. Psi must keep
/// one sign on the sample grid.
inline GeneratedSolution generate_solution_parts(const ComplexField& v, const SchrodingerProblem& prob,
                                                 const Point2& anchor, double C = 1.0, double psi_anchor = 1.0,
                                                 double tol = 1e-6) {
  const auto samples = prob.samples();
  const ComplexField f0 = to_complex(prob.f0);
  const ComplexField psi_z = v / f0;
  GeneratedSolution out;
  out.psi = gradient_potential(psi_z, anchor, psi_anchor, samples, tol);
  // ln|Psi| is only usable on a component where Psi keeps the sign it has at
  // the anchor.
  const double sign = psi_anchor < 0 ? -1.0 : 1.0;
  for (const auto& p : samples) {
    const double value = out.psi(p);
    if (!(sign * value > prob.zeta))
      throw DomainError("Psi vanishes near " + format_point<2>(p) + " (value " + std::to_string(value) + ")");
  }
  const ComplexField q = dz(prob.f0) / f0 + psi_z / to_complex(out.psi);
  out.phi = potential(q, anchor, 0.0);
  out.f = C * exp(out.phi);
  require("Schrodinger residual of f", schrodinger_sweep(out.f, prob, samples), tol);
  return out;
}

inline RealField2 generate_solution(const ComplexField& v, const SchrodingerProblem& prob, const Point2& anchor,
                                    double C = 1.0, double psi_anchor = 1.0, double tol = 1e-6) {
  return generate_solution_parts(v, prob, anchor, C, psi_anchor, tol).f;
}

// ---------------------------------------------------------------------------
// Condition on rho and the explicit pair
// ---------------------------------------------------------------------------

struct RhoStructure {
  Expr rho;                 // in x, y
  Expr s;                   // in rho
  std::optional<Expr> S;    // antiderivative of s; integrated numerically if absent
  Expr f0_of_rho;           // in rho
  std::optional<double> rho_ref;  // lower limit for the numeric S (default rho at the box center)

  static RhoStructure parse(std::string_view rho, std::string_view s, std::optional<std::string_view> S,
                            std::string_view f0_of_rho) {
    ParseOptions plane{{Var::X1, Var::X2}};
    ParseOptions profile{{Var::Rho}};
    RhoStructure r;
    r.rho = vekua::parse(rho, plane);
    r.s = vekua::parse(s, profile);
    if (S) r.S = vekua::parse(*S, profile);
    r.f0_of_rho = vekua::parse(f0_of_rho, profile);
    return r;
  }

  double s_at(double r) const { return evaluate(s, Bindings<double>{}.set(Var::Rho, r)); }

  /// S(r): the closed form, or the integral of s from rho_ref.
  double S_at(double r, double ref) const {
    if (S) return evaluate(*S, Bindings<double>{}.set(Var::Rho, r));
    const double len = r - ref;
    if (len == 0) return 0;
    return integrate<double>([&](double t) { return s_at(ref + t * len) * len; }).value;
  }

  double f0_at(double r) const { return evaluate(f0_of_rho, Bindings<double>{}.set(Var::Rho, r)); }
  double f0_prime_at(double r) const {
    return evaluate(derivative(f0_of_rho, Var::Rho), Bindings<double>{}.set(Var::Rho, r));
  }
};

namespace schrod_detail {

/// S(rho(x, y)) when S is only known through s: values by adaptive
/// quadrature of s, derivatives by the chain rule with S' = s.
class IntegratedProfileNode final : public Node<double, 2> {
 public:
  IntegratedProfileNode(RhoStructure rs, double ref) : rs_(std::move(rs)), ref_(ref), rho_(expr_field<2>(rs_.rho)) {}

  NodePtr<double, 2> diff(int slot) const override {
    const RealField2 s_of_rho = expr_field<2>(substitute(rs_.s, Var::Rho, rs_.rho));
    return (s_of_rho * partial(rho_, slot)).node();
  }

 protected:
  Jet<double, 2> compute_jet(EvalContext<2>& ctx) const override {
    const auto r = rho_.jet(ctx);
    Jet<double, 2> out;
    out.order = r.order;
    out.v = rs_.S_at(r.v, ref_);
    const double s = rs_.s_at(r.v);
    const double ds = evaluate(derivative(rs_.s, Var::Rho), Bindings<double>{}.set(Var::Rho, r.v));
    for (int k = 0; k < 2; ++k) {
      out.d[k] = s * r.d[k];
      for (int l = 0; l < 2; ++l) out.dd[k][l] = ds * r.d[k] * r.d[l] + s * r.dd[k][l];
    }
    return out;
  }

 private:
  RhoStructure rs_;
  double ref_;
  RealField2 rho_;
};

}  // namespace schrod_detail

/// Planar fields derived from a RhoStructure.
struct RhoFields {
  RealField2 rho;
  ComplexField rho_z;
  RealField2 s;   // s(rho(x, y))
  RealField2 S;   // S(rho(x, y))
  RealField2 f0;  // f0(rho(x, y))
};

inline RhoFields rho_fields(const RhoStructure& rs, const Box& box) {
  RhoFields out;
  out.rho = expr_field<2>(rs.rho);
  out.rho_z = dz(out.rho);
  out.s = expr_field<2>(substitute(rs.s, Var::Rho, rs.rho));
  if (rs.S) {
    out.S = expr_field<2>(substitute(*rs.S, Var::Rho, rs.rho));
  } else {
    const double ref = rs.rho_ref ? *rs.rho_ref : out.rho(box.center());
    out.S = RealField2(std::make_shared<schrod_detail::IntegratedProfileNode>(rs, ref));
  }
  out.f0 = expr_field<2>(substitute(rs.f0_of_rho, Var::Rho, rs.rho));
  return out;
}

/// Checks the structure against the problem: grad rho nonvanishing on the grid,
/// Laplacian(rho) / |grad rho|^2 = s(rho) at 100 seeded random points,
/// S' = s, and f0 = f0(rho).
inline void validate_rho(const RhoStructure& rs, const SchrodingerProblem& prob, double tol = 1e-8) {
  const RhoFields rf = rho_fields(rs, prob.box);
  const auto grid = prob.samples();
  for (const auto& p : grid) {
    const auto j = rf.rho.jet(p);
    if (!(std::hypot(j.d[0], j.d[1]) > prob.zeta))
      throw DegeneratePair("grad rho vanishes at " + format_point<2>(p));
  }

  std::mt19937 rng(20240917);
  std::uniform_real_distribution<double> ux(prob.box.x0, prob.box.x1), uy(prob.box.y0, prob.box.y1);
  std::vector<Point2> random(100);
  for (auto& p : random) p = {ux(rng), uy(rng)};
  require("condition on rho", sweep(random, [&](const Point2& p) {
            const auto j = rf.rho.jet(p);
            const double g2 = j.d[0] * j.d[0] + j.d[1] * j.d[1];
            const double s = rs.s_at(j.v);
            return std::abs(j.laplacian() / g2 - s) / (1.0 + std::abs(s));
          }),
          tol);

  if (rs.S) {
    const Expr dS = derivative(*rs.S, Var::Rho);
    require("S' = s", sweep(random, [&](const Point2& p) {
              const double r = rf.rho(p);
              const double s = rs.s_at(r);
              return std::abs(evaluate(dS, Bindings<double>{}.set(Var::Rho, r)) - s) / (1.0 + std::abs(s));
            }),
            tol);
  }

  require("f0 = f0(rho)", sweep(grid, [&](const Point2& p) {
            const double a = prob.f0(p);
            return std::abs(a - rf.f0(p)) / (1.0 + std::abs(a));
          }),
          tol);
}

/// (F_I, G_I) = (i f0 e^{-S} rho_z, -e^{-S} rho_z / f0), with the closed-form
/// adjoint (-f0 e^S / rho_z, -i e^S / (f0 rho_z)).
inline GeneratingPair rho_pair(const SchrodingerProblem& prob, const RhoStructure& rs) {
  validate_rho(rs, prob);
  const RhoFields rf = rho_fields(rs, prob.box);
  const ComplexField f0 = to_complex(prob.f0);
  const ComplexField em = to_complex(exp(-rf.S)), ep = to_complex(exp(rf.S));
  const Complex I(0, 1);
  GeneratingPair pair(I * f0 * em * rf.rho_z, -(em * rf.rho_z) / f0, prob.samples());
  pair.with_adjoint(-(f0 * ep) / rf.rho_z, -I * ep / (f0 * rf.rho_z));
  return pair;
}

/// The profile derivatives phi' = e^{-S} f0^2 and psi' = e^{-S} / f0^2 as
/// functions of rho, with their derivatives.
struct RhoProfile {
  std::function<double(double)> phi_prime, phi_second, psi_prime, psi_second;

  /// phi'' + (s - 2 f0'/f0) phi' at rho.
  std::function<double(double)> ode_residual;
};

inline RhoProfile phi_profile(const RhoStructure& rs, double rho_ref = 0.0) {
  const double ref = rs.rho_ref ? *rs.rho_ref : rho_ref;
  RhoProfile p;
  p.phi_prime = [rs, ref](double r) { return std::exp(-rs.S_at(r, ref)) * std::pow(rs.f0_at(r), 2); };
  p.psi_prime = [rs, ref](double r) { return std::exp(-rs.S_at(r, ref)) / std::pow(rs.f0_at(r), 2); };
  p.phi_second = [rs, ref](double r) {
    const double f = rs.f0_at(r);
    return std::exp(-rs.S_at(r, ref)) * (2 * f * rs.f0_prime_at(r) - rs.s_at(r) * f * f);
  };
  p.psi_second = [rs, ref](double r) {
    const double f = rs.f0_at(r);
    return std::exp(-rs.S_at(r, ref)) * (-2 * rs.f0_prime_at(r) / (f * f * f) - rs.s_at(r) / (f * f));
  };
  p.ode_residual = [rs, p](double r) {
    return p.phi_second(r) + (rs.s_at(r) - 2 * rs.f0_prime_at(r) / rs.f0_at(r)) * p.phi_prime(r);
  };
  return p;
}

/// The profile solutions (phi, psi) of phi_zbar + i f0^2 psi_zbar = 0:
/// kind 1 has phi_z = e^{-S} f0^2 rho_z, psi_z = -i e^{-S} rho_z;
/// kind 2 has phi_z = i e^{-S} rho_z, psi_z = e^{-S} rho_z / f0^2.
/// Both vanish at the anchor.
inline std::pair<RealField2, RealField2> profile_solutions(const SchrodingerProblem& prob, const RhoStructure& rs,
                                                           const Point2& anchor, int kind = 1) {
  const RhoFields rf = rho_fields(rs, prob.box);
  const ComplexField base = exp(-rf.S) * rf.rho_z;
  const RealField2 f2 = prob.f0 * prob.f0;
  const Complex I(0, 1);
  if (kind == 1) return {potential(f2 * base, anchor), potential(-I * base, anchor)};
  if (kind == 2) return {potential(I * base, anchor), potential(base / f2, anchor)};
  throw Error("profile solution kind must be 1 or 2");
}

/// |phi_zbar + i f0^2 psi_zbar| / (1 + |phi_zbar| + |f0^2 psi_zbar|) at p.
inline double phipsi_residual(const RealField2& phi, const RealField2& psi, const RealField2& f0, const Point2& p) {
  EvalContext<2> ctx(p);
  const Complex a = jet_dzbar(phi.jet(ctx));
  const double f = f0.jet(ctx).v;
  const Complex b = Complex(0, f * f) * jet_dzbar(psi.jet(ctx));
  return std::abs(a + b) / (1.0 + std::abs(a) + std::abs(b));
}

/// |i f0^2 phi1_zbar - psi1_zbar| / (1 + |f0^2 phi1_zbar| + |psi1_zbar|) at p.
inline double second_kind_residual(const RealField2& phi1, const RealField2& psi1, const RealField2& f0,
                                   const Point2& p) {
  EvalContext<2> ctx(p);
  const double f = f0.jet(ctx).v;
  const Complex a = Complex(0, f * f) * jet_dzbar(phi1.jet(ctx));
  const Complex b = jet_dzbar(psi1.jet(ctx));
  return std::abs(a - b) / (1.0 + std::abs(a) + std::abs(b));
}

/// max |phi_x psi_x + phi_y psi_y| over the samples, for (phi, psi) solving
/// phi_zbar + i f0^2 psi_zbar = 0.
inline double orthogonality_check(const RealField2& phi, const RealField2& psi, const SchrodingerProblem& prob,
                                  const std::vector<Point2>& samples, double tol = 1e-6) {
  require("phi/psi system residual",
          sweep(samples, [&](const Point2& p) { return phipsi_residual(phi, psi, prob.f0, p); }), tol);
  return sweep(samples, [&](const Point2& p) {
           EvalContext<2> ctx(p);
           const auto a = phi.jet(ctx), b = psi.jet(ctx);
           return std::abs(a.d[0] * b.d[0] + a.d[1] * b.d[1]);
         }).max;
}

/// (phi1, psi1) = (psi, -phi), which solves i f0^2 phi1_zbar - psi1_zbar = 0.
inline std::pair<RealField2, RealField2> second_kind_swap(const RealField2& phi, const RealField2& psi,
                                                          const SchrodingerProblem& prob,
                                                          const std::vector<Point2>& samples, double tol = 1e-6) {
  require("phi/psi system residual",
          sweep(samples, [&](const Point2& p) { return phipsi_residual(phi, psi, prob.f0, p); }), tol);
  std::pair<RealField2, RealField2> out{psi, -phi};
  require("second-kind residual", sweep(samples, [&](const Point2& p) {
            return second_kind_residual(out.first, out.second, prob.f0, p);
          }),
          tol);
  return out;
}

// ---------------------------------------------------------------------------
// Cauchy integral check
// ---------------------------------------------------------------------------

struct CauchyIntegrals {
  double I1 = 0;  // Re int dz(f1/f0) dz
  double I2 = 0;  // Im int f0^2 dz(f1/f0) dz
};

inline CauchyIntegrals cauchy_check(const SchrodingerProblem& prob, const RealField2& f1, const Curve& gamma) {
  if (!gamma.closed()) throw Error("the Cauchy check needs a closed curve");
  const ComplexField g = dz(f1 / prob.f0);
  return {contour_integral(g, gamma).real(), contour_integral(prob.f0 * prob.f0 * g, gamma).imag()};
}

// ---------------------------------------------------------------------------
// Solution sequence
// ---------------------------------------------------------------------------

struct StepRecord {
  int n = 0;
  double curl_star = 0;   // integrability of w against (F_I*, G_I*)
  double vek2 = 0;        // v against Vek2
  double schrodinger = 0; // f
  double curl_main = 0;   // integrability of i v against (F, G)
  double vek1 = 0;        // w' against Vek1
};

/// Immutable snapshot of the cycle after n steps.
struct SequenceState {
  int n = 0;
  ComplexField w;  // current Vek1 solution
  ComplexField v;  // latest Vek2 solution
  RealField2 f;    // latest Schrodinger solution
  std::vector<StepRecord> log;

  static SequenceState start(ComplexField w0) {
    SequenceState s;
    s.w = std::move(w0);
    return s;
  }
};

struct SequenceOptions {
  Point2 anchor{0.6, 0.6};
  double C = 1.0;
  double psi_anchor = 1.0;
  double tol = 1e-6;
};

/// The fixed data of the cycle: the main pair, the explicit pair and the
/// adjoint of the explicit pair (which has the main pair as successor).
class SequenceDriver {
 public:
  SequenceDriver(SchrodingerProblem prob, const RhoStructure& rs, SequenceOptions opts)
      : prob_(std::move(prob)),
        opts_(opts),
        samples_(prob_.samples()),
        main_(main_pair(prob_)),
        explicit_(rho_pair(prob_, rs)),
        explicit_adjoint_(adjoint(explicit_)) {}

  const SchrodingerProblem& problem() const { return prob_; }
  const SequenceOptions& options() const { return opts_; }
  const std::vector<Point2>& samples() const { return samples_; }
  const GeneratingPair& main() const { return main_; }
  const GeneratingPair& explicit_pair() const { return explicit_; }
  const GeneratingPair& explicit_adjoint() const { return explicit_adjoint_; }

  /// (phi, psi) from the star antiderivative of w against (F_I*, G_I*).
  std::pair<RealField2, RealField2> star_of_w(const ComplexField& w) const {
    return star_potentials(w, explicit_adjoint_, opts_.anchor);
  }

  SequenceState step(const SequenceState& state) const {
    StepRecord rec;
    rec.n = state.n + 1;
    const double tol = opts_.tol;

    rec.curl_star = max_curl(state.w, explicit_adjoint_);
    if (!(rec.curl_star <= tol)) throw ResidualError("integrability of w", rec.curl_star, tol);
    const auto [phi, psi] = star_of_w(state.w);
    const ComplexField v = phi * explicit_.F() + psi * explicit_.G();

    const Sweep vek2 = vek2_sweep(v, prob_, samples_);
    rec.vek2 = vek2.max;
    require("Vek2 residual of v", vek2, tol);

    const RealField2 f = generate_solution(v, prob_, opts_.anchor, opts_.C, opts_.psi_anchor, tol);
    rec.schrodinger = schrodinger_sweep(f, prob_, samples_).max;

    const ComplexField iv = Complex(0, 1) * v;
    rec.curl_main = max_curl(iv, main_);
    if (!(rec.curl_main <= tol)) throw ResidualError("integrability of i v", rec.curl_main, tol);
    const auto [phi2, psi2] = star_potentials(iv, main_, opts_.anchor);
    const ComplexField w2 = phi2 * main_.F() + psi2 * main_.G();

    const Sweep vek1 = vek1_sweep(w2, prob_, samples_);
    rec.vek1 = vek1.max;
    require("Vek1 residual of w'", vek1, tol);

    SequenceState next;
    next.n = rec.n;
    next.w = w2;
    next.v = v;
    next.f = f;
    next.log = state.log;
    next.log.push_back(rec);
    return next;
  }

 private:
  double max_curl(const ComplexField& w, const GeneratingPair& pair) const {
    const GeneratingPair adj = adjoint(pair);
    const ComplexField g1 = adj.G() * w, g2 = adj.F() * w;
    return sweep(samples_, [&](const Point2& p) {
             return std::max(curl_residual(g1, p) / (1.0 + std::abs(g1(p))),
                             curl_residual(g2, p) / (1.0 + std::abs(g2(p))));
           }).max;
  }

  SchrodingerProblem prob_;
  SequenceOptions opts_;
  std::vector<Point2> samples_;
  GeneratingPair main_, explicit_, explicit_adjoint_;
};

inline SequenceState sequence_step(const SequenceState& state, const SequenceDriver& driver) {
  return driver.step(state);
}

}  // namespace vekua
