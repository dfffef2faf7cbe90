#pragma once

// Composite Gauss-Legendre quadrature on [0, 1].
//
// Two entry points: integrate() for a definite integral with adaptive panel
// doubling, and CumulativeRule for running integrals at every node of a fixed
// composite grid (used to build potentials along rays).

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <mutex>
#include <span>
#include <string>
#include <vector>

#include "vekua/error.hpp"
#include "vekua/jet.hpp"

namespace vekua {

struct QuadratureSpec {
  int panels = 32;
  int order = 8;
  double abs_tol = 1e-10;
  double rel_tol = 1e-9;
  int max_panels = 8192;
};

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1], with the
/// cumulative integration matrix W: W[i][j] = integral from -1 to node i of
/// the j-th Lagrange basis polynomial.
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;
  std::vector<std::vector<double>> cumulative;
};

namespace detail {

// Legendre P_0..P_n at x by the three-term recurrence.
inline std::vector<long double> legendre_values(int n, long double x) {
  std::vector<long double> p(n + 1);
  p[0] = 1.0L;
  if (n >= 1) p[1] = x;
  for (int k = 2; k <= n; ++k) p[k] = ((2 * k - 1) * x * p[k - 1] - (k - 1) * p[k - 2]) / k;
  return p;
}

inline GaussLegendre build_gauss_legendre(int n) {
  GaussLegendre r;
  r.nodes.resize(n);
  r.weights.resize(n);
  const long double pi = 3.141592653589793238462643383279502884L;
  for (int i = 0; i < n; ++i) {
    long double x = std::cos(pi * (i + 0.75L) / (n + 0.5L));
    for (int it = 0; it < 100; ++it) {
      auto p = legendre_values(n, x);
      const long double dp = n * (x * p[n] - p[n - 1]) / (x * x - 1.0L);
      const long double dx = p[n] / dp;
      x -= dx;
      if (std::abs(dx) < 1e-19L) break;
    }
    auto p = legendre_values(n, x);
    const long double dp = n * (x * p[n] - p[n - 1]) / (x * x - 1.0L);
    // Ascending order.
    r.nodes[n - 1 - i] = static_cast<double>(x);
    r.weights[n - 1 - i] = static_cast<double>(2.0L / ((1.0L - x * x) * dp * dp));
  }

  // Lagrange basis in the Legendre basis: l_j = sum_k (2k+1)/2 w_j P_k(x_j) P_k.
  // Integral of P_0 from -1 to s is s + 1; of P_k (k >= 1) is (P_{k+1} - P_{k-1})/(2k+1).
  r.cumulative.assign(n, std::vector<double>(n, 0.0));
  for (int i = 0; i < n; ++i) {
    auto pi_vals = legendre_values(n, r.nodes[i]);
    for (int j = 0; j < n; ++j) {
      auto pj = legendre_values(n - 1, r.nodes[j]);
      long double s = (r.nodes[i] + 1.0L) / 2.0L;
      for (int k = 1; k <= n - 1; ++k) s += pj[k] * (pi_vals[k + 1] - pi_vals[k - 1]) / 2.0L;
      r.cumulative[i][j] = static_cast<double>(r.weights[j] * s);
    }
  }
  return r;
}

}  // namespace detail

/// Thread-safe cached rule of order n (1 <= n <= 64).
inline const GaussLegendre& gauss_legendre(int n) {
  if (n < 1 || n > 64) throw QuadratureError("Gauss-Legendre order must lie in [1, 64]");
  static std::array<GaussLegendre, 65> rules;
  static std::array<std::once_flag, 65> flags;
  std::call_once(flags[n], [n] { rules[n] = detail::build_gauss_legendre(n); });
  return rules[n];
}

/// Pairwise (tree) summation; fixed order makes results reproducible.
template <class T>
T pairwise_sum(std::span<const T> xs) {
  if (xs.empty()) return T{};
  if (xs.size() <= 4) {
    T s{};
    for (const auto& x : xs) s += x;
    return s;
  }
  const std::size_t half = xs.size() / 2;
  return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

/// Composite rule with `panels` equal panels on [0, 1].
template <class T, class F>
T integrate_fixed(F&& f, int panels, int order) {
  const auto& gl = gauss_legendre(order);
  const double h = 1.0 / panels;
  std::vector<T> per_panel(panels);
  for (int p = 0; p < panels; ++p) {
    const double mid = (p + 0.5) * h;
    T s{};
    for (int j = 0; j < order; ++j) s += gl.weights[j] * f(mid + 0.5 * h * gl.nodes[j]);
    per_panel[p] = s * (0.5 * h);
  }
  return pairwise_sum(std::span<const T>(per_panel));
}

template <class T>
struct QuadratureResult {
  T value{};
  int panels = 0;
  double error_estimate = 0.0;
};

/// Integral over [0, 1] with panel doubling until two successive values agree
/// to abs_tol or rel_tol. Throws QuadratureError on non-convergence or a
/// non-finite integrand.
template <class T, class F>
QuadratureResult<T> integrate(F&& f, const QuadratureSpec& spec = {}) {
  auto checked = [&](double t) {
    T v = f(t);
    if (!std::isfinite(std::abs(v)))
      throw QuadratureError("non-finite integrand at t = " + std::to_string(t));
    return v;
  };
  int panels = spec.panels;
  T coarse = integrate_fixed<T>(checked, panels, spec.order);
  while (panels * 2 <= spec.max_panels) {
    panels *= 2;
    T fine = integrate_fixed<T>(checked, panels, spec.order);
    const double diff = std::abs(fine - coarse);
    if (diff < spec.abs_tol || diff < spec.rel_tol * std::abs(fine)) return {fine, panels, diff};
    coarse = fine;
  }
  throw QuadratureError("quadrature did not converge with " + std::to_string(panels) + " panels");
}

/// Node positions of a composite rule on [0, 1] and running integrals at them.
class CumulativeRule {
 public:
  CumulativeRule(int panels, int order) : panels_(panels), order_(order), gl_(&gauss_legendre(order)) {
    const double h = 1.0 / panels;
    t_.reserve(static_cast<std::size_t>(panels) * order);
    for (int p = 0; p < panels; ++p)
      for (int j = 0; j < order; ++j) t_.push_back((p + 0.5) * h + 0.5 * h * gl_->nodes[j]);
  }

  std::span<const double> nodes() const { return t_; }
  int panels() const { return panels_; }
  int order() const { return order_; }

  /// Given integrand samples at nodes(), returns the integral from 0 to every
  /// node followed by the integral over all of [0, 1] (size nodes()+1).
  std::vector<double> running(std::span<const double> f) const {
    const double h = 1.0 / panels_;
    std::vector<double> out(t_.size() + 1);
    double base = 0.0;
    for (int p = 0; p < panels_; ++p) {
      const double* fp = f.data() + static_cast<std::size_t>(p) * order_;
      for (int i = 0; i < order_; ++i) {
        double s = 0.0;
        for (int j = 0; j < order_; ++j) s += gl_->cumulative[i][j] * fp[j];
        out[static_cast<std::size_t>(p) * order_ + i] = base + 0.5 * h * s;
      }
      double total = 0.0;
      for (int j = 0; j < order_; ++j) total += gl_->weights[j] * fp[j];
      base += 0.5 * h * total;
    }
    out.back() = base;
    return out;
  }

 private:
  int panels_;
  int order_;
  const GaussLegendre* gl_;
  std::vector<double> t_;
};

}  // namespace vekua
