#include <gtest/gtest.h>

#include <numeric>

#include "vekua/curve.hpp"
#include "vekua/parallel.hpp"
#include "vekua/quadrature.hpp"

using namespace vekua;

TEST(GaussLegendre, IntegratesPolynomialsExactly) {
  for (int n : {1, 2, 5, 8, 16}) {
    const auto& gl = gauss_legendre(n);
    double wsum = std::accumulate(gl.weights.begin(), gl.weights.end(), 0.0);
    EXPECT_NEAR(wsum, 2.0, 1e-14);
    // x^(2n-2) integrates to 2/(2n-1).
    double s = 0;
    for (int j = 0; j < n; ++j) s += gl.weights[j] * std::pow(gl.nodes[j], 2 * n - 2);
    EXPECT_NEAR(s, 2.0 / (2 * n - 1), 1e-14) << n;
  }
  EXPECT_THROW(gauss_legendre(0), QuadratureError);
}

TEST(GaussLegendre, CumulativeMatrixIntegratesToEachNode) {
  const auto& gl = gauss_legendre(8);
  // f(x) = 3x^2 + 1 has antiderivative x^3 + x; from -1: x^3 + x + 2.
  for (int i = 0; i < 8; ++i) {
    double s = 0;
    for (int j = 0; j < 8; ++j) s += gl.cumulative[i][j] * (3 * gl.nodes[j] * gl.nodes[j] + 1);
    const double x = gl.nodes[i];
    EXPECT_NEAR(s, x * x * x + x + 2, 1e-14);
  }
}

TEST(CumulativeRule, RunningIntegral) {
  const CumulativeRule rule(32, 8);
  std::vector<double> f;
  for (double t : rule.nodes()) f.push_back(std::cos(3 * t));
  const auto run = rule.running(f);
  ASSERT_EQ(run.size(), rule.nodes().size() + 1);
  for (std::size_t k = 0; k < rule.nodes().size(); ++k)
    EXPECT_NEAR(run[k], std::sin(3 * rule.nodes()[k]) / 3, 1e-15);
  EXPECT_NEAR(run.back(), std::sin(3.0) / 3, 1e-15);
}

TEST(Integrate, AdaptiveConverges) {
  auto r = integrate<double>([](double t) { return std::exp(t); });
  EXPECT_NEAR(r.value, std::exp(1.0) - 1.0, 1e-14);
  auto c = integrate<Complex>([](double t) { return std::exp(Complex(0, 20 * t)); });
  EXPECT_NEAR(std::abs(c.value - (std::exp(Complex(0, 20)) - 1.0) / Complex(0, 20)), 0.0, 1e-13);
  QuadratureSpec tight;
  tight.max_panels = 64;
  EXPECT_THROW(integrate<double>([](double t) { return 1.0 / std::sqrt(t); }, tight), QuadratureError);
  EXPECT_THROW(integrate<double>([](double t) { return t < 0.5 ? 1.0 : NAN; }), QuadratureError);
}

TEST(PairwiseSum, MatchesSerialForExactValues) {
  std::vector<double> xs(1000);
  std::iota(xs.begin(), xs.end(), 1.0);
  EXPECT_EQ(pairwise_sum(std::span<const double>(xs)), 500500.0);
}

TEST(Curve, ClosedAndOpen) {
  EXPECT_TRUE(Curve::circle({0, 0}, 1).closed());
  EXPECT_TRUE(Curve::parametric("cos(2*pi*t)", "sin(2*pi*t)").closed());
  EXPECT_FALSE(Curve::segment({0, 0}, {1, 1}).closed());
  EXPECT_TRUE(Curve::polyline({{0, 0}, {1, 0}, {1, 1}, {0, 0}}).closed());
  EXPECT_THROW(Curve::polyline({{0, 0}}), Error);
}

TEST(Curve, ContourIntegrals) {
  // Closed integral of z dz vanishes, of zbar dz is 2 pi i r^2.
  const auto circle = Curve::parametric("cos(2*pi*t)", "sin(2*pi*t)");
  auto z = [](const Point2& p) { return Complex(p[0], p[1]); };
  EXPECT_LE(std::abs(contour_integral(z, circle)), 1e-13);
  auto zbar = [](const Point2& p) { return Complex(p[0], -p[1]); };
  EXPECT_LE(std::abs(contour_integral(zbar, circle) - Complex(0, 2 * M_PI)), 1e-13);
  // Open path: integral of z dz from 0 to 1+i along a polyline is (1+i)^2/2.
  const auto poly = Curve::polyline({{0, 0}, {1, 0}, {1, 1}});
  EXPECT_LE(std::abs(contour_integral(z, poly) - Complex(0, 1)), 1e-14);
}

TEST(Parallel, OrderIndependentResults) {
  auto serial = parallel_map<double>(100, [](std::size_t k) { return std::sqrt(double(k)); }, 1);
  auto threaded = parallel_map<double>(100, [](std::size_t k) { return std::sqrt(double(k)); }, 4);
  EXPECT_EQ(serial, threaded);
  EXPECT_THROW(parallel_map<int>(10, [](std::size_t k) -> int { if (k == 3) throw Error("boom"); return 0; }, 3),
               Error);
}
