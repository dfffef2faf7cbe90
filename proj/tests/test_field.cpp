#include <gtest/gtest.h>

#include <random>

#include "vekua/field.hpp"

using namespace vekua;

namespace {

const Complex I(0, 1);

// Five-point central difference of the value channel along `slot`.
template <class F>
auto fd5(const F& f, Point2 p, int slot, double h) {
  auto at = [&](double s) {
    Point2 q = p;
    q[slot] += s;
    return f(q);
  };
  return (at(-2 * h) - 8.0 * at(-h) + 8.0 * at(h) - at(2 * h)) / (12 * h);
}

const char* const kCatalog[] = {"x^2+y^2", "exp(x*y)", "exp(-x*y)", "x*y", "sqrt(x^2+y^2)",
                                "exp(sqrt(x^2+y^2))", "1+1/sqrt(x^2+y^2)", "(y^2-x^2+2)*exp(x*y)",
                                "exp(-x*y)+exp(x*y)", "sin(x)*cos(2*y)+ln(1+x^2)"};

}  // namespace

TEST(FieldJet, Examples) {
  const auto r2 = parse_field<2>("x^2+y^2");
  const auto j = r2.jet({3, 4});
  EXPECT_DOUBLE_EQ(j.v, 25.0);
  EXPECT_DOUBLE_EQ(j.laplacian(), 4.0);

  const auto e = parse_field<2>("exp(x*y)").jet({1, 2});
  const double e2 = std::exp(2.0);
  EXPECT_NEAR(e.v, e2, 1e-14);
  EXPECT_NEAR(e.d[0], 2 * e2, 1e-13);  // d/dx
  EXPECT_NEAR(e.d[1], e2, 1e-13);      // d/dy
  for (int s = 0; s < 2; ++s) {
    const double fd = fd5(parse_field<2>("exp(x*y)"), Point2{1, 2}, s, 1e-5);
    EXPECT_NEAR(e.d[s], fd, 1e-6 * std::abs(fd));
  }

  EXPECT_THROW(parse_field<2>("ln(x)").jet({0, 1}), DomainError);
}

TEST(FieldJet, PlaneCoordinatesMapToIndexedVariables) {
  // x = x2, y = x1.
  const auto a = parse_field<2>("x2 - 10*x1");
  EXPECT_DOUBLE_EQ(a({3, 1}), 3.0 - 10.0);
  EXPECT_THROW(parse_field<2>("x3"), UnknownIdentifier);
  const auto b = parse_field<3>("x1 + 10*x2 + 100*z");
  EXPECT_DOUBLE_EQ(b({1, 2, 3}), 321.0);
}

TEST(FieldJetProperty, MatchesFiniteDifferences) {
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> u(0.2, 1.2);
  for (const char* src : kCatalog) {
    const auto f = parse_field<2>(src);
    for (int n = 0; n < 100; ++n) {
      const Point2 p{u(rng), u(rng)};
      const auto j = f.jet(p);
      const double scale = 1.0 + std::abs(j.v);
      for (int s = 0; s < 2; ++s) {
        EXPECT_NEAR(j.d[s], fd5(f, p, s, 1e-3), 1e-6 * scale) << src;
        auto ds = [&](const Point2& q) { return f.jet(q).d[s]; };
        for (int t = 0; t < 2; ++t) EXPECT_NEAR(j.dd[s][t], fd5(ds, p, t, 1e-3), 1e-6 * scale) << src;
      }
    }
  }
}

TEST(Wirtinger, Conventions) {
  const auto f = parse_field<2>("exp(x*y)");
  const Point2 p{0.7, 0.3};
  const auto [fz, fzb] = wirtinger(f, p);
  const double x = p[0], y = p[1];
  EXPECT_LE(std::abs(fz - Complex(y, -x) * std::exp(x * y)), 1e-14);
  EXPECT_LE(std::abs(-fzb / f(p) + Complex(y, x)), 1e-14);

  const auto [gz, gzb] = wirtinger(parse_field<2>("x"), p);
  EXPECT_EQ(gz, Complex(1));
  EXPECT_EQ(gzb, Complex(1));
  const auto [cz, czb] = wirtinger(RealField2::constant(3.0), p);
  EXPECT_EQ(cz, Complex(0));
  EXPECT_EQ(czb, Complex(0));
}

TEST(WirtingerProperty, DzDzbarIsLaplacian) {
  std::mt19937 rng(8);
  std::uniform_real_distribution<double> u(0.2, 1.2);
  for (const char* src : kCatalog) {
    const auto f = parse_field<2>(src);
    const auto lap = dz(dzbar(f));
    for (int n = 0; n < 20; ++n) {
      const Point2 p{u(rng), u(rng)};
      const double expected = f.jet(p).laplacian();
      EXPECT_LE(std::abs(lap(p) - expected), 1e-9 * (1 + std::abs(expected))) << src;
    }
  }
}

TEST(FieldAlgebra, SymbolicDerivativesOfComposites) {
  const auto f = parse_field<2>("exp(x*y)");
  const auto g = parse_complex_field("x^2-y^2", "2*x*y");
  const ComplexField h = (f * g) / (1.0 + f) + conj(g) * exp(to_complex(f) / 4.0);
  const Point2 p{0.4, 0.9};
  const auto j = h.jet(p);
  for (int s = 0; s < 2; ++s) {
    const Complex fd = fd5(h, p, s, 1e-3);
    EXPECT_LE(std::abs(j.d[s] - fd), 1e-9);
    EXPECT_LE(std::abs(partial(h, s)(p) - j.d[s]), 1e-12);
    for (int t = 0; t < 2; ++t) EXPECT_LE(std::abs(partial(partial(h, s), t)(p) - j.dd[s][t]), 1e-11);
  }
}

TEST(FieldAlgebra, DivisionGuardReportsPoint) {
  const auto f = parse_field<2>("x - 0.5");
  try {
    (1.0 / f)({0.5, 0.25});
    FAIL();
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("0.25"), std::string::npos);
  }
}

TEST(Potential, ReproducesKnownPotential) {
  const auto phi = parse_field<2>("(x^2-y^2)/2 + exp(-2*x*y)");
  const Point2 anchor{0.6, 0.6};
  const auto rebuilt = potential(dz(phi), anchor, phi(anchor));
  for (const auto& p : sample_grid(Box{}, 7)) {
    const auto a = rebuilt.jet(p), b = phi.jet(p);
    EXPECT_NEAR(a.v, b.v, 1e-13);
    for (int s = 0; s < 2; ++s) {
      EXPECT_NEAR(a.d[s], b.d[s], 1e-13);
      for (int t = 0; t < 2; ++t) EXPECT_NEAR(a.dd[s][t], b.dd[s][t], 1e-12);
    }
  }
  EXPECT_LE(curl_residual(dz(phi), {0.3, 0.8}), 1e-12);
  EXPECT_GT(curl_residual(parse_complex_field("0", "x"), {0.3, 0.8}), 0.5);
}

TEST(Potential, NestedPotentialsShareTheRay) {
  // The outer integrand contains the inner potential; both are integrated on
  // the same ray, so the outer value is exact up to quadrature error.
  const Point2 a{0, 0};
  const auto phi = potential(parse_complex_field("x", "y"), a, 0.0);
  const auto outer = potential(2.0 * to_complex(phi), a, 0.0);
  const Point2 p{0.8, 0.3};
  EXPECT_NEAR(phi(p), (0.64 - 0.09) / 2, 1e-14);
  // Along t p the integrand is 2 t^2 phi(p) p_x.
  EXPECT_NEAR(outer(p), 0.8 * (0.64 - 0.09) / 3, 1e-14);
}

TEST(Potential, ZeroGradientIsConstant) {
  const auto c = potential(ComplexField{}, {0.5, 0.5}, 2.5);
  EXPECT_EQ(c({3, 4}), 2.5);
}

TEST(Box, GridIncludesEdges) {
  const auto pts = sample_grid(Box{0.1, 1.1, 0.1, 1.1}, 21);
  ASSERT_EQ(pts.size(), 441u);
  EXPECT_DOUBLE_EQ(pts.front()[0], 0.1);
  EXPECT_DOUBLE_EQ(pts.back()[1], 1.1);
  EXPECT_TRUE((Box{0, 0, 0, 1}).degenerate());
}
