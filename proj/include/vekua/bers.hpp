#pragma once

// Pseudoanalytic functions in the sense of Bers.
//
// A generating pair (F, G) has Im(conj(F) G) > 0, so every complex w is
// uniquely phi F + psi G with real phi, psi. The characteristic coefficients
// a, b, A, B of the pair define the Vekua equation w_zbar = a w + b conj(w)
// and the (F,G)-derivative  w' = w_z - A w - B conj(w).
//
// All Wirtinger derivatives are without the 1/2 factor (see field.hpp).

#include <cmath>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "vekua/curve.hpp"
#include "vekua/error.hpp"
#include "vekua/field.hpp"

namespace vekua {

struct PairCoefficients {
  ComplexField a, b, A, B;
};

class GeneratingPair {
 public:
  /// Validates Im(conj(F) G) > 0 at every sample; throws DegeneratePair.
  GeneratingPair(ComplexField F, ComplexField G, std::vector<Point2> samples = {})
      : F_(std::move(F)), G_(std::move(G)), samples_(std::move(samples)) {
    validate();
  }

  GeneratingPair(ComplexField F, ComplexField G, const Box& box, int n = 21)
      : GeneratingPair(std::move(F), std::move(G), sample_grid(box, n)) {}

  /// Attaches a closed form of the adjoint pair, used by adjoint() instead of
  /// the general formula.
  GeneratingPair& with_adjoint(ComplexField Fstar, ComplexField Gstar) {
    adjoint_ = std::make_shared<std::pair<ComplexField, ComplexField>>(std::move(Fstar), std::move(Gstar));
    return *this;
  }

  const ComplexField& F() const { return F_; }
  const ComplexField& G() const { return G_; }
  const std::vector<Point2>& samples() const { return samples_; }
  const std::shared_ptr<std::pair<ComplexField, ComplexField>>& closed_adjoint() const { return adjoint_; }

  /// F conj(G) - conj(F) G = -2i Im(conj(F) G).
  ComplexField determinant() const { return F_ * conj(G_) - conj(F_) * G_; }

  /// Im(conj(F) G) as a field.
  RealField2 im_fg() const { return imag(conj(F_) * G_); }

 private:
  void validate() const {
    for (const auto& p : samples_) {
      const Complex f = F_(p), g = G_(p);
      const double im = (std::conj(f) * g).imag();
      if (!(im > 1e-12 * std::abs(f) * std::abs(g)) || !std::isfinite(im))
        throw DegeneratePair("Im(conj(F) G) = " + std::to_string(im) + " is not positive at " +
                             format_point<2>(p));
    }
  }

  ComplexField F_, G_;
  std::vector<Point2> samples_;
  std::shared_ptr<std::pair<ComplexField, ComplexField>> adjoint_;
};

/// The characteristic coefficients from their closed forms.
inline PairCoefficients coefficients(const GeneratingPair& pair) {
  const ComplexField& F = pair.F();
  const ComplexField& G = pair.G();
  const ComplexField det = pair.determinant();
  const ComplexField Fb = conj(F), Gb = conj(G);
  const ComplexField Fz = dz(F), Gz = dz(G), Fzb = dzbar(F), Gzb = dzbar(G);
  return {-(Fb * Gzb - Fzb * Gb) / det, (F * Gzb - Fzb * G) / det, -(Fb * Gz - Fz * Gb) / det,
          (F * Gz - Fz * G) / det};
}

/// Real (phi, psi) with w = phi F + psi G.
inline std::pair<double, double> decompose(Complex w, Complex F, Complex G) {
  const double im = (std::conj(F) * G).imag();
  if (!(im > 1e-14 * std::abs(F) * std::abs(G)))
    throw DegeneratePair("cannot decompose: Im(conj(F) G) = " + std::to_string(im));
  // Im(w conj(G)) = phi Im(F conj(G)) and Im(w conj(F)) = psi Im(G conj(F)).
  return {(w * std::conj(G)).imag() / -im, (w * std::conj(F)).imag() / im};
}

/// (phi, psi) as fields.
inline std::pair<RealField2, RealField2> decompose(const ComplexField& w, const GeneratingPair& pair) {
  const RealField2 im = pair.im_fg();
  return {-imag(w * conj(pair.G())) / im, imag(w * conj(pair.F())) / im};
}

/// w_z - A w - B conj(w) at p.
inline Complex fg_derivative(const ComplexField& w, const PairCoefficients& c, const Point2& p) {
  EvalContext<2> ctx(p);
  const auto wj = w.jet(ctx);
  return jet_dz(wj) - c.A.jet(ctx).v * wj.v - c.B.jet(ctx).v * std::conj(wj.v);
}

inline ComplexField fg_derivative(const ComplexField& w, const PairCoefficients& c) {
  return dz(w) - c.A * w - c.B * conj(w);
}

/// w_zbar - a w - b conj(w) at p.
inline Complex vekua_residual(const ComplexField& w, const PairCoefficients& c, const Point2& p) {
  EvalContext<2> ctx(p);
  const auto wj = w.jet(ctx);
  return jet_dzbar(wj) - c.a.jet(ctx).v * wj.v - c.b.jet(ctx).v * std::conj(wj.v);
}

/// (F*, G*) = (-2 conj(F) / det, 2 conj(G) / det), always from the general formula.
inline std::pair<ComplexField, ComplexField> adjoint_formula(const GeneratingPair& pair) {
  const ComplexField det = pair.determinant();
  return {Complex(-2.0) * conj(pair.F()) / det, Complex(2.0) * conj(pair.G()) / det};
}

/// The adjoint pair; its own adjoint is the original pair.
inline GeneratingPair adjoint(const GeneratingPair& pair) {
  auto [Fs, Gs] = pair.closed_adjoint() ? *pair.closed_adjoint() : adjoint_formula(pair);
  GeneratingPair result(Fs, Gs, pair.samples());
  result.with_adjoint(pair.F(), pair.G());
  return result;
}

/// Largest violation of a_succ = a_pred, b_succ = -B_pred over the samples.
inline double successor_defect(const PairCoefficients& pred, const PairCoefficients& succ,
                               const std::vector<Point2>& samples) {
  double worst = 0;
  for (const auto& p : samples) {
    EvalContext<2> ctx(p);
    worst = std::max(worst, std::abs(succ.a.jet(ctx).v - pred.a.jet(ctx).v));
    worst = std::max(worst, std::abs(succ.b.jet(ctx).v + pred.B.jet(ctx).v));
  }
  return worst;
}

inline bool successor_check(const PairCoefficients& pred, const PairCoefficients& succ,
                            const std::vector<Point2>& samples, double tol = 1e-8) {
  return successor_defect(pred, succ, samples) <= tol;
}

/// Re int F* w dz - i Re int G* w dz along gamma.
inline Complex fg_integral(const ComplexField& w, const GeneratingPair& pair, const Curve& gamma) {
  const GeneratingPair adj = adjoint(pair);
  const Complex a = contour_integral(adj.F() * w, gamma);
  const Complex b = contour_integral(adj.G() * w, gamma);
  return {a.real(), -b.real()};
}

/// Re int G* w dz + i Re int F* w dz along gamma.
inline Complex star_integral(const ComplexField& w, const GeneratingPair& pair, const Curve& gamma) {
  const GeneratingPair adj = adjoint(pair);
  const Complex a = contour_integral(adj.G() * w, gamma);
  const Complex b = contour_integral(adj.F() * w, gamma);
  return {a.real(), b.real()};
}

/// Star integral from z0 to z1 along `path`, cross-checked against a second
/// path (the L-shaped route through (z1.x, z0.y), or the straight segment if
/// `path` is omitted). Throws PathDependence if they differ by more than tol.
inline Complex star_antiderivative(const ComplexField& w, const GeneratingPair& pair, const Point2& z0,
                                   const Point2& z1, std::optional<Curve> path = std::nullopt,
                                   double tol = 1e-8) {
  const Curve main = path ? *path : Curve::segment(z0, z1);
  auto off = [](const Point2& a, const Point2& b) { return std::hypot(a[0] - b[0], a[1] - b[1]) > 1e-12; };
  if (off(main.start(), z0) || off(main.end(), z1))
    throw Error("path does not join " + format_point<2>(z0) + " to " + format_point<2>(z1));
  const Complex value = star_integral(w, pair, main);
  const Curve other = path ? Curve::segment(z0, z1) : Curve::polyline({z0, {z1[0], z0[1]}, z1});
  const Complex check = star_integral(w, pair, other);
  if (std::abs(value - check) > tol * (1.0 + std::abs(value)))
    throw PathDependence("star integral depends on the path: " + std::to_string(std::abs(value - check)));
  return value;
}

/// Real potentials (phi, psi) with phi_z = G* w and psi_z = F* w, normalized
/// to zero at the anchor, where (F*, G*) is the adjoint of `pair`. Their
/// increments are the real and imaginary parts of the star integral.
inline std::pair<RealField2, RealField2> star_potentials(const ComplexField& w, const GeneratingPair& pair,
                                                         const Point2& anchor) {
  const GeneratingPair adj = adjoint(pair);
  return {potential(adj.G() * w, anchor), potential(adj.F() * w, anchor)};
}

/// Largest curl residual of the two star integrands over the samples; small
/// iff w is integrable with respect to the pair.
inline double star_integrability(const ComplexField& w, const GeneratingPair& pair,
                                 const std::vector<Point2>& samples) {
  const GeneratingPair adj = adjoint(pair);
  const ComplexField g1 = adj.G() * w, g2 = adj.F() * w;
  double worst = 0;
  for (const auto& p : samples) worst = std::max({worst, curl_residual(g1, p), curl_residual(g2, p)});
  return worst;
}

}  // namespace vekua
