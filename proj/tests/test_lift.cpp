#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "weil/lift.hpp"
#include "weil/suite.hpp"

using namespace weil;

namespace {

AlgebraPtr make_jet(int vars, int order) {
  return WeilAlgebra::create(AlgebraSpec{vars, order, {}});
}

AlgebraPtr make_hyperdual(int vars) {
  AlgebraSpec spec;
  spec.vars = vars;
  spec.order = vars;
  for (int i = 0; i < vars; ++i) {
    std::vector<int> rel(vars, 0);
    rel[static_cast<std::size_t>(i)] = 2;
    spec.zero_monomials.push_back(rel);
  }
  return WeilAlgebra::create(spec);
}

} // namespace

TEST_CASE("squaring a second-order jet coordinate") {
  AlgebraPtr a = make_jet(1, 2); // basis 1, e, e^2
  APoint xi{a, {a->element({1.5, 0.7, -0.3})}};
  AElement got = lift_eval(pow(variable(0), 2), xi);

  // (x0 + x1 e + x2 e^2)^2 truncated past e^2, accumulated in basis-pair
  // order exactly as the algebra product does.
  CHECK(got.component(0) == 1.5 * 1.5);
  CHECK(got.component(1) == 1.5 * 0.7 + 0.7 * 1.5);
  CHECK(got.component(2) == 1.5 * -0.3 + 0.7 * 0.7 + -0.3 * 1.5);
  CHECK(got.component(0) == doctest::Approx(2.25).epsilon(1e-15));
  CHECK(got.component(1) == doctest::Approx(2.1).epsilon(1e-15));
  CHECK(got.component(2) == doctest::Approx(-0.41).epsilon(1e-14));
}

TEST_CASE("sine of a pure nilpotent reproduces its Maclaurin coefficients") {
  AlgebraPtr a = make_jet(1, 3); // truncate past e^3
  APoint xi{a, {a->generator(0)}};
  AElement got = lift_eval(sin(variable(0)), xi);
  CHECK(got.component(0) == 0.0);
  CHECK(got.component(1) == 1.0);
  CHECK(got.component(2) == 0.0);
  CHECK(got.component(3) == -1.0 / 6.0);

  AElement cos_got = lift_eval(cos(variable(0)), xi);
  CHECK(cos_got.component(0) == 1.0);
  CHECK(cos_got.component(1) == 0.0);
  CHECK(cos_got.component(2) == -0.5);
  CHECK(cos_got.component(3) == 0.0);
}

TEST_CASE("product of two first-order directions keeps the cross term") {
  AlgebraPtr a = make_hyperdual(2); // basis 1, e1, e2, e1*e2
  APoint xi{a,
            {a->from_real(1.2) + a->generator(0),
             a->from_real(-0.8) + a->generator(1)}};
  AElement got = lift_eval(variable(0) * variable(1), xi);
  CHECK(got.component(0) == 1.2 * -0.8);
  CHECK(got.component(1) == -0.8);
  CHECK(got.component(2) == 1.2);
  CHECK(got.component(3) == 1.0);
}

TEST_CASE("coordinate lifts reproduce the coordinates exactly") {
  AlgebraPtr a = make_jet(2, 2);
  Rng rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<AElement> coords;
    for (int i = 0; i < 3; ++i) {
      coords.push_back(random_a_element(a, rng));
    }
    APoint xi{a, coords};
    for (int i = 0; i < 3; ++i) {
      CHECK(max_abs_diff(lift_eval(variable(i), xi), coords[i]) == 0.0);
    }
  }
}

TEST_CASE("tree interpretation agrees with the Taylor expansion oracle") {
  std::vector<AlgebraPtr> algebras = {make_jet(1, 2), make_jet(1, 3),
                                      make_jet(2, 2), make_hyperdual(2)};
  Rng rng(31337);
  for (const AlgebraPtr& a : algebras) {
    for (int trial = 0; trial < 50; ++trial) {
      Expr f = random_smooth_expr(rng, 2, 3);
      std::vector<AElement> coords;
      for (int i = 0; i < 2; ++i) {
        AElement u = random_a_element(a, rng);
        u += a->from_real(rng.uniform(-2.0, 2.0) - u.augment());
        coords.push_back(u);
      }
      APoint xi{a, coords};
      CHECK(max_abs_diff(lift_eval(f, xi), taylor_oracle(f, xi)) <= 1e-10);
    }
  }
}

TEST_CASE("lifting is a ring homomorphism") {
  AlgebraPtr a = make_jet(2, 2);
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    Expr f = random_smooth_expr(rng, 2, 3);
    Expr g = random_smooth_expr(rng, 2, 3);
    APoint xi{a, {random_a_element(a, rng), random_a_element(a, rng)}};
    EvalCache cache(xi);
    CHECK(max_abs_diff(cache.eval(f + g), cache.eval(f) + cache.eval(g)) ==
          0.0);
    CHECK(max_abs_diff(cache.eval(f * g), cache.eval(f) * cache.eval(g)) ==
          0.0);
    CHECK(max_abs_diff(lift_eval(f * g, xi),
                       taylor_oracle(f, xi) * taylor_oracle(g, xi)) <= 1e-9);
  }
}

TEST_CASE("primitive lifts agree with the Taylor oracle") {
  AlgebraPtr a = make_jet(1, 3);
  APoint xi{a, {a->element({0.8, 0.5, 0.25, -0.1})}};
  for (const Expr& f :
       {log(variable(0)), exp(variable(0)), sqrt(variable(0)),
        constant(1.0) / variable(0), pow(variable(0), -2),
        sin(variable(0)) * exp(variable(0))}) {
    CAPTURE(to_string(f));
    CHECK(max_abs_diff(lift_eval(f, xi), taylor_oracle(f, xi)) <= 1e-13);
  }
}

TEST_CASE("first-order logarithm coefficient is the reciprocal rule") {
  AlgebraPtr dual = make_jet(1, 1);
  APoint xi{dual, {dual->element({0.8, 0.5})}};
  AElement got = lift_eval(log(variable(0)), xi);
  CHECK(got.component(0) == std::log(0.8));
  CHECK(got.component(1) == 0.625); // 0.5 * (1 / 0.8)
}

TEST_CASE("lift evaluation checks domains on the scalar part") {
  AlgebraPtr a = make_jet(1, 2);
  APoint neg{a, {a->element({-1.0, 0.5, 0.0})}};
  APoint zero{a, {a->element({0.0, 0.5, 0.0})}};
  CHECK_THROWS_AS(lift_eval(log(variable(0)), neg), DomainError);
  CHECK_THROWS_AS(lift_eval(log(variable(0)), zero), DomainError);
  // The smooth square root needs a strictly positive scalar part: at zero
  // the derivative coefficients are already undefined.
  CHECK_THROWS_AS(lift_eval(sqrt(variable(0)), zero), DomainError);
  CHECK_THROWS_AS(lift_eval(sqrt(variable(0)), neg), DomainError);
  CHECK_THROWS_AS(lift_eval(constant(1.0) / variable(0), zero),
                  NonInvertibleError);
  CHECK_THROWS_AS(lift_eval(pow(variable(0), -1), zero), NonInvertibleError);
}

TEST_CASE("embedding a real point keeps no nilpotent part") {
  AlgebraPtr a = make_jet(2, 2);
  std::vector<double> p = {0.3, -1.25};
  APoint xi = APoint::embed(a, p);
  CHECK(xi.dim() == 2);
  CHECK(xi.base_point() == p);
  for (const AElement& coord : xi.coords) {
    CHECK(max_abs_diff(coord, a->from_real(coord.augment())) == 0.0);
  }
  // With no nilpotent directions the lift collapses to real evaluation.
  Expr f = sin(variable(0)) * variable(1) + exp(variable(1));
  AElement lifted = lift_eval(f, xi);
  CHECK(lifted.component(0) == eval(f, p));
  CHECK(nilpotent_part(lifted).max_abs() == 0.0);
}

TEST_CASE("cached evaluation is stable across repeated queries") {
  AlgebraPtr a = make_jet(1, 2);
  APoint xi{a, {a->element({1.1, -0.4, 0.2})}};
  Expr f = variable(0) + sin(variable(0));
  Expr g = f * f + f;
  EvalCache cache(xi);
  AElement first = cache.eval(g);
  AElement second = cache.eval(g);
  CHECK(max_abs_diff(first, second) == 0.0);
  CHECK(max_abs_diff(first, taylor_oracle(g, xi)) <= 1e-12);
}

TEST_CASE("mixed partial coefficients surface in the hyperdual lift") {
  AlgebraPtr a = make_hyperdual(2);
  APoint xi{a,
            {a->from_real(0.3) + a->generator(0),
             a->from_real(-1.1) + a->generator(1)}};
  Expr f = exp(variable(0)) * variable(1);
  AElement got = lift_eval(f, xi);
  CHECK(got.component(0) == doctest::Approx(std::exp(0.3) * -1.1).epsilon(1e-15));
  CHECK(got.component(1) == doctest::Approx(std::exp(0.3) * -1.1).epsilon(1e-15));
  CHECK(got.component(2) == doctest::Approx(std::exp(0.3)).epsilon(1e-15));
  CHECK(got.component(3) == doctest::Approx(std::exp(0.3)).epsilon(1e-15));
  CHECK(max_abs_diff(got, taylor_oracle(f, xi)) <= 1e-13);
}
