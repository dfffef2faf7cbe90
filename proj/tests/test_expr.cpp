#include <gtest/gtest.h>

#include <random>

#include "vekua/expr.hpp"

using namespace vekua;

namespace {

double eval_at(const Expr& e, double x1, double x2, double x3 = 0.0) {
  return evaluate(e, Bindings<double>{}.set(Var::X1, x1).set(Var::X2, x2).set(Var::X3, x3));
}

}  // namespace

TEST(Parse, TreeForm) {
  // x names x2 and y names x1.
  EXPECT_EQ(to_tree_string(parse("exp(x*y)")), "exp(mul(x2,x1))");
  EXPECT_EQ(to_tree_string(parse("x^2+y^2")), "add(pow(x2,2),pow(x1,2))");
  EXPECT_EQ(to_tree_string(parse("x1 - -x3")), "sub(x1,neg(x3))");
}

TEST(Parse, Precedence) {
  EXPECT_DOUBLE_EQ(eval_at(parse("1 + 2*3^2"), 0, 0), 19.0);
  EXPECT_DOUBLE_EQ(eval_at(parse("2^3^2"), 0, 0), 512.0);
  EXPECT_DOUBLE_EQ(eval_at(parse("-2^2"), 0, 0), -4.0);
  EXPECT_DOUBLE_EQ(eval_at(parse("2^-1"), 0, 0), 0.5);
  EXPECT_DOUBLE_EQ(eval_at(parse("8/4/2"), 0, 0), 1.0);
  EXPECT_DOUBLE_EQ(eval_at(parse("1.5e2 + .5"), 0, 0), 150.5);
  EXPECT_NEAR(eval_at(parse("cos(pi) + ln(e)"), 0, 0), 0.0, 1e-15);
}

TEST(Parse, SyntaxErrorOffset) {
  try {
    parse("exp(");
    FAIL() << "expected a syntax error";
  } catch (const SyntaxError& e) {
    EXPECT_EQ(e.offset(), 4u);
    EXPECT_FALSE(e.expected().empty());
  }
  EXPECT_THROW(parse(""), SyntaxError);
  EXPECT_THROW(parse("x +"), SyntaxError);
  EXPECT_THROW(parse("(x"), SyntaxError);
  EXPECT_THROW(parse("x y"), SyntaxError);
  EXPECT_THROW(parse("exp x"), SyntaxError);
  EXPECT_THROW(parse("3 $ 4"), SyntaxError);
}

TEST(Parse, UnknownIdentifier) {
  try {
    parse("x + foo");
    FAIL();
  } catch (const UnknownIdentifier& e) {
    EXPECT_EQ(e.offset(), 4u);
    EXPECT_EQ(e.name(), "foo");
  }
  EXPECT_THROW(parse("t"), UnknownIdentifier);
  ParseOptions only_t;
  only_t.allowed = {Var::T};
  EXPECT_NO_THROW(parse("cos(2*pi*t)", only_t));
  EXPECT_THROW(parse("x", only_t), UnknownIdentifier);
}

TEST(Parse, PrintRoundTrip) {
  for (const char* src : {"exp(x*y)", "x^2+y^2", "-(x1-x2)/(1+x3^2)", "sqrt(x)*sin(y)^-2", "2^x - ln(1+y)",
                          "-3.25e-3*x", "cos(-x)"}) {
    const Expr e = parse(src);
    const Expr again = parse(to_string(e));
    EXPECT_EQ(to_tree_string(again), to_tree_string(e)) << src;
    EXPECT_EQ(to_string(again), to_string(e)) << src;
  }
}

TEST(Evaluate, Values) {
  EXPECT_DOUBLE_EQ(eval_at(parse("x^2+y^2"), 4, 3), 25.0);
  EXPECT_DOUBLE_EQ(eval_at(parse("x1*10 + x2"), 1, 2), 12.0);
  EXPECT_DOUBLE_EQ(eval_at(parse("z"), 0, 0, 7), 7.0);
}

TEST(Evaluate, DomainErrors) {
  EXPECT_THROW(eval_at(parse("ln(x)"), 1, 0), DomainError);
  EXPECT_THROW(eval_at(parse("ln(x)"), 1, -1), DomainError);
  EXPECT_THROW(eval_at(parse("1/x"), 1, 0), DomainError);
  EXPECT_THROW(eval_at(parse("sqrt(x)"), 1, -1), DomainError);
  EXPECT_THROW(eval_at(parse("x^0.5"), 1, -1), DomainError);
  EXPECT_THROW(eval_at(parse("x^-1"), 1, 0), DomainError);
  // Integer powers accept negative bases.
  EXPECT_DOUBLE_EQ(eval_at(parse("x^3"), 0, -2), -8.0);
  EXPECT_THROW(evaluate(parse("x"), Bindings<double>{}), DomainError);
}

TEST(Derivative, Symbolic) {
  const Expr e = parse("exp(x*y) + sin(x)^2 + x^y");
  std::mt19937 rng(1);
  std::uniform_real_distribution<double> u(0.2, 1.5);
  for (int n = 0; n < 20; ++n) {
    const double x1 = u(rng), x2 = u(rng);
    const double h = 1e-6;
    for (Var v : {Var::X1, Var::X2}) {
      const double fd = v == Var::X1 ? (eval_at(e, x1 + h, x2) - eval_at(e, x1 - h, x2)) / (2 * h)
                                     : (eval_at(e, x1, x2 + h) - eval_at(e, x1, x2 - h)) / (2 * h);
      EXPECT_NEAR(eval_at(derivative(e, v), x1, x2), fd, 1e-7 * (1 + std::abs(fd)));
    }
  }
  EXPECT_TRUE(derivative(parse("x^2"), Var::X1).is_constant());
  EXPECT_EQ(to_tree_string(derivative(parse("3*x"), Var::X2)), "3");
}

TEST(Substitute, ReplacesVariable) {
  ParseOptions rho_only;
  rho_only.allowed = {Var::Rho};
  const Expr profile = parse("exp(rho)", rho_only);
  const Expr composed = substitute(profile, Var::Rho, parse("x*y"));
  EXPECT_NEAR(eval_at(composed, 2, 0.5), std::exp(1.0), 1e-15);
  EXPECT_FALSE(composed.uses(Var::Rho));
  EXPECT_TRUE(composed.uses(Var::X1));
}
