#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "weil/prolong.hpp"
#include "weil/suite.hpp"

using namespace weil;

namespace {

const Expr x1 = variable(0);
const Expr x2 = variable(1);

AlgebraPtr make_jet(int vars, int order) {
  return WeilAlgebra::create(AlgebraSpec{vars, order, {}});
}

Metric poincare_metric() {
  Expr conformal = parse_expr("1/x2^2");
  return Metric{{{conformal, constant(0.0)}, {constant(0.0), conformal}}};
}

APoint upper_half_point(const AlgebraPtr& a) {
  // Base point (0.4, 1.3) with fixed nilpotent directions.
  std::vector<AElement> coords;
  for (int i = 0; i < 2; ++i) {
    std::vector<double> c(a->dim(), 0.0);
    c[0] = i == 0 ? 0.4 : 1.3;
    for (std::size_t alpha = 1; alpha < a->dim(); ++alpha) {
      c[alpha] = 0.1 * static_cast<double>(alpha + a->dim() * (i + 1));
    }
    coords.push_back(a->element(std::move(c)));
  }
  return APoint{a, coords};
}

} // namespace

TEST_CASE("combination values evaluate termwise") {
  AlgebraPtr a = make_jet(1, 2);
  APoint xi{a, {a->element({1.5, 0.7, -0.3}), a->element({0.2, 0.0, 1.0})}};
  ALiftFunction phi(
      a, {{a->from_real(2.0), pow(x1, 2)}, {a->generator(0), x2}});
  AElement direct = a->from_real(2.0) * lift_eval(pow(x1, 2), xi) +
                    a->generator(0) * lift_eval(x2, xi);
  CHECK(max_abs_diff(phi.evaluate(xi), direct) <= 1e-15);
}

TEST_CASE("zero terms are pruned at construction") {
  AlgebraPtr a = make_jet(1, 1);
  ALiftFunction z1(a, {{a->zero(), pow(x1, 2)}});
  CHECK(z1.is_zero());
  ALiftFunction z2(a, {{a->unit(), constant(0.0)}});
  CHECK(z2.is_zero());
  ALiftFunction kept(a, {{a->unit(), x1}, {a->zero(), x2}});
  CHECK(kept.terms().size() == 1);
}

TEST_CASE("frame fields differentiate coordinates to deltas") {
  AlgebraPtr a = make_jet(1, 2);
  APoint xi = upper_half_point(a);
  EvalCache cache(xi);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      AElement got = apply_vector_field(frame_field(a, 2, i),
                                        lift_function(a, variable(j)))
                         .evaluate(cache);
      CHECK(max_abs_diff(got, i == j ? a->unit() : a->zero()) == 0.0);
    }
  }
}

TEST_CASE("lifted fields act as derivations matching the base action") {
  AlgebraPtr a = make_jet(2, 2);
  VectorField theta{{x2, x1 * x1}};
  Expr f = sin(x1) * x2;
  APoint xi = upper_half_point(a);
  EvalCache cache(xi);
  ALiftFunction lhs =
      apply_vector_field(lift_vector_field(a, theta), lift_function(a, f));
  ALiftFunction rhs = lift_function(a, directional_derivative(theta, f));
  CHECK(max_abs_diff(lhs.evaluate(cache), rhs.evaluate(cache)) <= 1e-13);
}

TEST_CASE("bracket commutes with lifting") {
  AlgebraPtr a = make_jet(1, 3);
  VectorField theta{{x2, -x1}};
  VectorField eta{{constant(1.0), x1 * x2}};
  APoint xi = upper_half_point(a);
  EvalCache cache(xi);
  AVectorField lhs =
      bracket(lift_vector_field(a, theta), lift_vector_field(a, eta));
  AVectorField rhs = lift_vector_field(a, bracket(theta, eta));
  for (int k = 0; k < 2; ++k) {
    CHECK(max_abs_diff(lhs.coeff(k).evaluate(cache),
                       rhs.coeff(k).evaluate(cache)) <= 1e-12);
  }
}

TEST_CASE("flat covariant derivative differentiates the coefficients") {
  AlgebraPtr a = make_jet(1, 2);
  Connection flat = Connection::flat(2);
  AVectorField x = frame_field(a, 2, 0);
  AVectorField y(a, {lift_function(a, pow(x1, 2)), ALiftFunction(a)});
  AVectorField got = covariant_derivative(flat, x, y);
  APoint xi = upper_half_point(a);
  EvalCache cache(xi);
  ALiftFunction expected = lift_function(a, diff(pow(x1, 2), 0));
  CHECK(max_abs_diff(got.coeff(0).evaluate(cache),
                     expected.evaluate(cache)) == 0.0);
  CHECK(got.coeff(1).evaluate(cache).max_abs() == 0.0);
}

TEST_CASE("prolonged connection restricts to the base connection on lifts") {
  AlgebraPtr a = make_jet(1, 2);
  Connection conn = levi_civita(poincare_metric());
  VectorField theta{{x1 * x2, sin(x1)}};
  VectorField eta{{cos(x2), x1 + x2}};
  APoint xi = upper_half_point(a);
  EvalCache cache(xi);
  AVectorField lhs = covariant_derivative(
      conn, lift_vector_field(a, theta), lift_vector_field(a, eta));
  AVectorField rhs = lift_vector_field(a, covariant_derivative(conn, theta, eta));
  for (int k = 0; k < 2; ++k) {
    CHECK(max_abs_diff(lhs.coeff(k).evaluate(cache),
                       rhs.coeff(k).evaluate(cache)) <= 1e-12);
  }
}

TEST_CASE("prolonged torsion vanishes for a metric connection") {
  AlgebraPtr a = make_jet(2, 2);
  Connection conn = levi_civita(poincare_metric());
  Rng rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    AVectorField x = random_a_vector_field(a, rng, 2);
    AVectorField y = random_a_vector_field(a, rng, 2);
    APoint xi = upper_half_point(a);
    EvalCache cache(xi);
    AVectorField t = torsion(conn, x, y);
    for (int k = 0; k < 2; ++k) {
      CHECK(t.coeff(k).evaluate(cache).max_abs() <= 1e-11);
    }
  }
}

TEST_CASE("metric prolongation restricts to the base pairing on lifts") {
  AlgebraPtr a = make_jet(1, 2);
  Metric g = poincare_metric();
  VectorField theta{{x1 * x2, sin(x1)}};
  VectorField eta{{cos(x2), x1 + x2}};
  APoint xi = upper_half_point(a);
  EvalCache cache(xi);
  ALiftFunction lhs =
      metric_apply(g, lift_vector_field(a, theta), lift_vector_field(a, eta));
  ALiftFunction rhs = lift_function(a, metric_apply(g, theta, eta));
  CHECK(max_abs_diff(lhs.evaluate(cache), rhs.evaluate(cache)) <= 1e-12);
}

TEST_CASE("algebra coefficients factor out of the metric pairing") {
  AlgebraPtr a = make_jet(1, 2);
  Metric g = poincare_metric();
  VectorField theta{{x2, constant(1.0)}};
  VectorField eta{{constant(1.0), x1}};
  AElement ca = a->element({1.0, 0.5, -0.25});
  AElement cb = a->element({-0.5, 1.0, 0.75});
  APoint xi = upper_half_point(a);
  EvalCache cache(xi);
  ALiftFunction lhs = metric_apply(g, ca * lift_vector_field(a, theta),
                                   cb * lift_vector_field(a, eta));
  ALiftFunction rhs =
      (ca * cb) * lift_function(a, metric_apply(g, theta, eta));
  CHECK(max_abs_diff(lhs.evaluate(cache), rhs.evaluate(cache)) <= 1e-13);
}

TEST_CASE("constant Gram matrices invert exactly") {
  AlgebraPtr a = make_jet(1, 2);
  Metric mink{{{constant(-1.0), constant(0.0)}, {constant(0.0), constant(1.0)}}};
  APoint xi = upper_half_point(a);
  auto ginv = gram_inverse(mink, xi);
  CHECK(max_abs_diff(ginv[0][0], a->from_real(-1.0)) == 0.0);
  CHECK(max_abs_diff(ginv[1][1], a->from_real(1.0)) == 0.0);
  CHECK(ginv[0][1].max_abs() == 0.0);
  CHECK(ginv[1][0].max_abs() == 0.0);
}

TEST_CASE("Gram inverse times Gram is the identity") {
  AlgebraPtr a = make_jet(2, 2);
  Metric g = poincare_metric();
  APoint xi = upper_half_point(a);
  auto ginv = gram_inverse(g, xi);
  EvalCache cache(xi);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      AElement entry = a->zero();
      for (int l = 0; l < 2; ++l) {
        entry += cache.eval(g.at(i, l)) * ginv[l][j];
      }
      AElement expected = i == j ? a->unit() : a->zero();
      CHECK(max_abs_diff(entry, expected) <= 1e-13);
    }
  }
}

TEST_CASE("a scalar-degenerate Gram matrix is rejected") {
  AlgebraPtr a = make_jet(1, 2);
  Metric degenerate{{{x1, constant(0.0)}, {constant(0.0), constant(1.0)}}};
  // Scalar part of the first coordinate is 0; nilpotent directions alone
  // cannot rescue invertibility.
  APoint xi{a, {a->element({0.0, 1.0, 0.5}), a->element({1.0, 0.0, 0.0})}};
  CHECK_THROWS_AS(gram_inverse(degenerate, xi), NonInvertibleError);
}

TEST_CASE("decomposition lists exactly the basis coordinates") {
  AlgebraPtr dual = make_jet(1, 1);
  ALiftFunction phi = lift_function(dual, pow(x1, 2));
  APoint xi{dual, {dual->element({1.5, 0.7})}};
  std::vector<DecomposedTerm> terms = decompose(phi, xi);
  REQUIRE(terms.size() == 2);
  CHECK(terms[0].basis_index == 0);
  CHECK(terms[0].value == 1.5 * 1.5);
  CHECK(terms[1].basis_index == 1);
  CHECK(terms[1].value == 1.5 * 0.7 + 0.7 * 1.5);

  AElement rebuilt = dual->zero();
  for (const DecomposedTerm& term : terms) {
    rebuilt += dual->basis_element(term.basis_index) * term.value;
  }
  CHECK(max_abs_diff(rebuilt, phi.evaluate(xi)) == 0.0);
}

TEST_CASE("field arithmetic evaluates componentwise") {
  AlgebraPtr a = make_jet(1, 2);
  Rng rng(23);
  AVectorField x = random_a_vector_field(a, rng, 2);
  AVectorField y = random_a_vector_field(a, rng, 2);
  APoint xi = upper_half_point(a);
  EvalCache cache(xi);
  for (int k = 0; k < 2; ++k) {
    AElement sum = (x + y).coeff(k).evaluate(cache);
    AElement parts = x.coeff(k).evaluate(cache) + y.coeff(k).evaluate(cache);
    CHECK(max_abs_diff(sum, parts) <= 1e-13);

    AElement negated = (-x).coeff(k).evaluate(cache);
    CHECK(max_abs_diff(negated, -(x.coeff(k).evaluate(cache))) == 0.0);
  }
}

TEST_CASE("mismatched algebras are rejected") {
  AlgebraPtr a = make_jet(1, 1);
  AlgebraPtr b = make_jet(1, 2);
  ALiftFunction fa = lift_function(a, x1);
  ALiftFunction fb = lift_function(b, x1);
  CHECK_THROWS_AS(fa + fb, Error);
  CHECK_THROWS_AS(fa * fb, Error);
}
