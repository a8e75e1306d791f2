#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "weil/expr.hpp"
#include "weil/suite.hpp"

using namespace weil;

namespace {

const Expr x1 = variable(0);
const Expr x2 = variable(1);
const Expr x3 = variable(2);

double fd_partial(const Expr& f, std::vector<double> p, int i, double step) {
  std::vector<double> hi = p;
  std::vector<double> lo = p;
  hi[static_cast<std::size_t>(i)] += step;
  lo[static_cast<std::size_t>(i)] -= step;
  return (eval(f, hi) - eval(f, lo)) / (2.0 * step);
}

} // namespace

TEST_CASE("evaluation matches direct arithmetic") {
  Expr f = pow(x1 + constant(2.0) * x2, 2) * sin(x3);
  std::vector<double> p = {1.5, -0.25, 0.8};
  CHECK(eval(f, p) == (1.5 + 2.0 * -0.25) * (1.5 + 2.0 * -0.25) * std::sin(0.8));

  Expr g = (x1 - constant(1.0) / x2) / (x1 + x2);
  CHECK(eval(g, {2.0, 4.0}) == (2.0 - 1.0 / 4.0) / (2.0 + 4.0));

  Expr h = exp(log(x1)) * sqrt(x2);
  CHECK(eval(h, {1.7, 2.25}) == std::exp(std::log(1.7)) * std::sqrt(2.25));

  CHECK(eval(pow(x1, -2), {2.0}) == 0.25);
  CHECK(eval(-x1, {3.5}) == -3.5);
}

TEST_CASE("constant folding happens at construction") {
  CHECK(constant(2.0) + constant(3.0) == constant(5.0));
  CHECK(constant(2.0) * constant(3.0) == constant(6.0));
  CHECK(x1 + constant(0.0) == x1);
  CHECK(constant(0.0) + x1 == x1);
  CHECK(x1 * constant(1.0) == x1);
  CHECK(x1 * constant(0.0) == constant(0.0));
  CHECK(x1 - constant(0.0) == x1);
  CHECK(pow(x1, 1) == x1);
  CHECK(pow(x1, 0) == constant(1.0));
  CHECK(-(-x1) == x1);
  CHECK(-constant(3.0) == constant(-3.0));
  CHECK(sin(constant(0.0)) == constant(0.0));

  // Division by a constant zero is kept so evaluation can report it.
  Expr bad = x1 / constant(0.0);
  CHECK(bad.kind() == ExprKind::Div);
  CHECK_THROWS_AS(eval(bad, {1.0}), DomainError);
}

TEST_CASE("structural equality and variable counting") {
  CHECK(x1 + x2 == x1 + x2);
  CHECK(x1 + x2 != x2 + x1);
  CHECK(sin(x1) != cos(x1));
  CHECK(pow(x1, 2) != pow(x1, 3));
  CHECK(Expr{} == constant(0.0));

  CHECK((x1 + x3).num_variables() == 3);
  CHECK(constant(4.0).num_variables() == 0);
  CHECK(sin(x2).num_variables() == 2);
}

TEST_CASE("derivatives evaluate to the calculus answers") {
  CHECK(eval(diff(pow(x1, 3), 0), {1.5}) == 3.0 * (1.5 * 1.5));

  Expr f = x1 * sin(x1);
  CHECK(eval(diff(f, 0), {0.9}) == std::sin(0.9) + 0.9 * std::cos(0.9));

  CHECK(eval(diff(sqrt(x1), 0), {4.0}) == 0.25);
  CHECK(eval(diff(log(x1), 0), {5.0}) == 1.0 / 5.0);
  CHECK(eval(diff(exp(x1), 0), {1.1}) == std::exp(1.1));

  Expr q = x1 / x2;
  CHECK(eval(diff(q, 1), {3.0, 2.0}) == -0.75);

  // Independent variables drop out.
  CHECK(diff(x1, 1) == constant(0.0));
  CHECK(diff(constant(7.0), 0) == constant(0.0));
}

TEST_CASE("derivatives agree with central differences on random expressions") {
  Rng rng(20240817);
  for (int trial = 0; trial < 200; ++trial) {
    Expr f = random_smooth_expr(rng, 3, 3);
    std::vector<double> p = {rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0),
                             rng.uniform(-2.0, 2.0)};
    for (int i = 0; i < 3; ++i) {
      double analytic = eval(diff(f, i), p);
      double fd = fd_partial(f, p, i, 1e-5);
      CHECK(std::abs(analytic - fd) <=
            1e-6 * std::max(1.0, std::abs(analytic)));
    }
  }
}

TEST_CASE("printing and parsing are mutually inverse") {
  std::vector<Expr> cases = {
      x1,
      constant(0.1),
      constant(-2.5) * x1,
      x1 * constant(-2.0),
      -pow(x1, 2),
      pow(-x1, 2),
      pow(pow(x1, 2), 3),
      pow(x1, -2),
      x1 / (x2 / x3),
      (x1 / x2) / x3,
      x1 - (x2 - x3),
      (x1 - x2) - x3,
      x1 + (x2 + x3),
      sin(x1 + x2) * cos(x3),
      exp(x1) * log(x2 + constant(3.0)),
      sqrt(pow(x1, 2) + constant(1.0)),
      constant(1.0) / pow(x2, 2),
      (x1 + constant(0.5)) / (x2 * x3),
      constant(1e-17) * x1,
      -(x1 + x2),
  };
  for (const Expr& f : cases) {
    std::string printed = to_string(f);
    CAPTURE(printed);
    Expr reparsed = parse_expr(printed);
    CHECK(reparsed == f);
    CHECK(to_string(reparsed) == printed);
  }
}

TEST_CASE("random expressions survive the print/parse round trip") {
  Rng rng(99);
  for (int trial = 0; trial < 100; ++trial) {
    Expr f = random_smooth_expr(rng, 3, 3);
    std::string printed = to_string(f);
    CAPTURE(printed);
    CHECK(parse_expr(printed) == f);
  }
}

TEST_CASE("parser accepts the documented grammar") {
  CHECK(parse_expr("x1") == x1);
  CHECK(parse_expr("x12") == variable(11));
  CHECK(parse_expr(" 1 + 2 * x1 ") == constant(1.0) + constant(2.0) * x1);
  CHECK(parse_expr("1/x2^2") == constant(1.0) / pow(x2, 2));
  CHECK(parse_expr("sin(x1)^2") == pow(sin(x1), 2));
  CHECK(parse_expr("-x1^2") == -pow(x1, 2));
  CHECK(parse_expr("(-x1)^2") == pow(-x1, 2));
  CHECK(parse_expr("x1^-1") == pow(x1, -1));
  CHECK(parse_expr("2e-3") == constant(2e-3));
  CHECK(parse_expr("-(x1 - x2)") == -(x1 - x2));
  CHECK(parse_expr("sqrt(exp(log(x1)))") == sqrt(exp(log(x1))));
}

TEST_CASE("parser rejects malformed input") {
  CHECK_THROWS_AS(parse_expr(""), ConfigError);
  CHECK_THROWS_AS(parse_expr("x0"), ConfigError);
  CHECK_THROWS_AS(parse_expr("x"), ConfigError);
  CHECK_THROWS_AS(parse_expr("x1 +"), ConfigError);
  CHECK_THROWS_AS(parse_expr("(x1"), ConfigError);
  CHECK_THROWS_AS(parse_expr("sin"), ConfigError);
  CHECK_THROWS_AS(parse_expr("sin x1"), ConfigError);
  CHECK_THROWS_AS(parse_expr("foo(x1)"), ConfigError);
  CHECK_THROWS_AS(parse_expr("x1^x2"), ConfigError);
  CHECK_THROWS_AS(parse_expr("x1^2.5"), ConfigError);
  CHECK_THROWS_AS(parse_expr("x1 x2"), ConfigError);
  CHECK_THROWS_AS(parse_expr("tan(x1)"), ConfigError);
}

TEST_CASE("evaluation reports domain problems") {
  CHECK_THROWS_AS(eval(log(x1), {-1.0}), DomainError);
  CHECK_THROWS_AS(eval(log(x1), {0.0}), DomainError);
  CHECK_THROWS_AS(eval(sqrt(x1), {-0.5}), DomainError);
  CHECK_THROWS_AS(eval(x1 / x2, {1.0, 0.0}), DomainError);
  CHECK_THROWS_AS(eval(pow(x2, -1), {1.0, 0.0}), DomainError);
  CHECK(eval(sqrt(x1), {0.0}) == 0.0); // closure point is fine for real eval
  CHECK_THROWS_AS(eval(variable(5), {1.0, 2.0}), Error);
}
