#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <vector>

#include "weil/descriptors.hpp"

using namespace weil;
using nlohmann::json;

TEST_CASE("algebra descriptors build the advertised shapes") {
  AlgebraPtr dual = make_algebra(json{{"kind", "dual"}});
  CHECK(dual->dim() == 2);
  CHECK(dual->num_generators() == 1);
  CHECK(dual->truncation_order() == 1);

  AlgebraPtr jet = make_algebra(json{{"kind", "jet"}, {"vars", 2}, {"order", 2}});
  CHECK(jet->dim() == 6); // 1, e1, e2, e1^2, e1e2, e2^2

  AlgebraPtr hyper = make_algebra(json{{"kind", "hyperdual"}, {"vars", 3}});
  CHECK(hyper->dim() == 8); // squarefree monomials in three generators

  AlgebraPtr scalars = make_algebra(
      json{{"kind", "custom"}, {"vars", 0}});
  CHECK(scalars->dim() == 1);

  AlgebraPtr custom = make_algebra(json{
      {"kind", "custom"},
      {"vars", 2},
      {"order", 3},
      {"zero_monomials", json::array({json::array({0, 2})})}});
  // e2^2 dies, so no basis monomial contains it.
  for (const auto& mono : custom->basis()) {
    CHECK(mono[1] <= 1);
  }
}

TEST_CASE("tensor descriptors multiply out factor shapes") {
  json two_duals = json{
      {"kind", "tensor"},
      {"factors", json::array({json{{"kind", "dual"}}, json{{"kind", "dual"}}})}};
  AlgebraPtr product = make_algebra(two_duals);
  AlgebraPtr hyper = make_algebra(json{{"kind", "hyperdual"}, {"vars", 2}});
  REQUIRE(product->dim() == hyper->dim());
  CHECK(product->basis() == hyper->basis());
  for (std::size_t i = 0; i < product->dim(); ++i) {
    for (std::size_t j = 0; j < product->dim(); ++j) {
      CHECK(product->product_index(i, j) == hyper->product_index(i, j));
    }
  }
}

TEST_CASE("algebra echo reports the dimension") {
  json echo = algebra_echo(json{{"kind", "jet"}, {"vars", 1}, {"order", 3}});
  CHECK(echo.at("dim") == 4);
  CHECK(echo.at("kind") == "jet");
}

TEST_CASE("algebra shorthand forms parse") {
  CHECK(parse_algebra_arg("dual") == json{{"kind", "dual"}});
  CHECK(parse_algebra_arg("jet(2,3)") ==
        json{{"kind", "jet"}, {"vars", 2}, {"order", 3}});
  CHECK(parse_algebra_arg("hyperdual(2)") ==
        json{{"kind", "hyperdual"}, {"vars", 2}});
  json nested = parse_algebra_arg("tensor(dual,jet(1,2))");
  CHECK(nested.at("kind") == "tensor");
  REQUIRE(nested.at("factors").size() == 2);
  CHECK(nested.at("factors")[0] == json{{"kind", "dual"}});
  CHECK(nested.at("factors")[1] ==
        json{{"kind", "jet"}, {"vars", 1}, {"order", 2}});
  CHECK(parse_algebra_arg(R"({"kind":"dual"})") == json{{"kind", "dual"}});

  CHECK_THROWS_AS(parse_algebra_arg("jet(2)"), ConfigError);
  CHECK_THROWS_AS(parse_algebra_arg("jet(a,b)"), ConfigError);
  CHECK_THROWS_AS(parse_algebra_arg("frobnicate"), ConfigError);
  CHECK_THROWS_AS(parse_algebra_arg("jet(1,2"), ConfigError);
}

TEST_CASE("malformed algebra descriptors are rejected") {
  CHECK_THROWS_AS(make_algebra(json{{"kind", "nope"}}), ConfigError);
  CHECK_THROWS_AS(make_algebra(json{{"kind", "dual"}, {"extra", 1}}),
                  ConfigError);
  CHECK_THROWS_AS(make_algebra(json{{"kind", "jet"}, {"vars", 2}}),
                  ConfigError);
  CHECK_THROWS_AS(
      make_algebra(json{{"kind", "jet"}, {"vars", -1}, {"order", 2}}),
      ConfigError);
  CHECK_THROWS_AS(make_algebra(json{{"kind", "tensor"},
                                    {"factors", json::array()}}),
                  ConfigError);
  CHECK_THROWS_AS(make_algebra(json::array()), ConfigError);
}

TEST_CASE("geometry presets carry charts, boxes, and guards") {
  GeometrySetup euclid = make_geometry(json{{"preset", "euclid"}});
  CHECK(euclid.name == "euclid");
  CHECK(euclid.chart.dim == 2);
  CHECK(euclid.connection_is_levi_civita);
  CHECK(euclid.box.size() == 2);
  CHECK(euclid.chart.in_domain(std::vector<double>{-1.9, 1.9}));
  CHECK(eval(euclid.metric.at(0, 0), {0.0, 0.0}) == 1.0);
  CHECK(eval(euclid.metric.at(0, 1), {0.0, 0.0}) == 0.0);

  GeometrySetup mink = make_geometry(json{{"preset", "minkowski"}, {"dim", 3}});
  CHECK(mink.chart.dim == 3);
  CHECK(eval(mink.metric.at(0, 0), {0.0, 0.0, 0.0}) == -1.0);
  CHECK(eval(mink.metric.at(1, 1), {0.0, 0.0, 0.0}) == 1.0);
  CHECK(eval(mink.metric.at(2, 2), {0.0, 0.0, 0.0}) == 1.0);

  GeometrySetup poincare = make_geometry(json{{"preset", "poincare"}});
  CHECK(poincare.chart.coord_names == std::vector<std::string>{"x", "y"});
  CHECK(poincare.chart.in_domain(std::vector<double>{0.0, 0.7}));
  CHECK_FALSE(poincare.chart.in_domain(std::vector<double>{0.0, -0.7}));
  CHECK(poincare.box[1][0] > 0.0); // sampling box stays in the half-plane
  CHECK(eval(poincare.metric.at(0, 0), {0.0, 2.0}) == 0.25);

  GeometrySetup sphere = make_geometry(json{{"preset", "sphere"}});
  CHECK(sphere.chart.coord_names ==
        std::vector<std::string>{"theta", "phi"});
  CHECK(sphere.chart.in_domain(std::vector<double>{1.0, 0.0}));
  CHECK_FALSE(sphere.chart.in_domain(std::vector<double>{0.0, 0.0}));
  CHECK(eval(sphere.metric.at(1, 1), {1.1, 0.0}) ==
        doctest::Approx(std::sin(1.1) * std::sin(1.1)));
}

TEST_CASE("preset dimensions are validated") {
  CHECK_THROWS_AS(make_geometry(json{{"preset", "poincare"}, {"dim", 3}}),
                  ConfigError);
  CHECK_THROWS_AS(make_geometry(json{{"preset", "euclid"}, {"dim", 0}}),
                  ConfigError);
  CHECK_THROWS_AS(make_geometry(json{{"preset", "nowhere"}}), ConfigError);
  CHECK_THROWS_AS(make_geometry(json{{"preset", "euclid"}, {"oops", 1}}),
                  ConfigError);
}

TEST_CASE("custom geometries parse metric, domain, and box") {
  json descriptor = json{
      {"custom",
       json{{"dim", 2},
            {"metric", json::array({json::array({"1", "0"}),
                                    json::array({"0", "x1^2"})})},
            {"domain", "x1 > 0"},
            {"box", json::array({json::array({0.5, 2.0}),
                                 json::array({-1.0, 1.0})})}}}};
  GeometrySetup setup = make_geometry(descriptor);
  CHECK(setup.name == "custom");
  CHECK(setup.chart.in_domain(std::vector<double>{1.0, 0.0}));
  CHECK_FALSE(setup.chart.in_domain(std::vector<double>{-1.0, 0.0}));
  CHECK(setup.connection_is_levi_civita);
  // Levi-Civita of diag(1, x1^2).
  CHECK(eval(setup.connection.gamma(1, 0, 1), {1.7, 0.0}) ==
        doctest::Approx(1.0 / 1.7).epsilon(1e-13));
  CHECK(eval(setup.connection.gamma(0, 1, 1), {1.7, 0.0}) ==
        doctest::Approx(-1.7).epsilon(1e-13));
}

TEST_CASE("christoffel overrides replace the metric connection") {
  json descriptor = json{
      {"preset", "euclid"},
      {"christoffel",
       json::array(
           {json::array({json::array({"0", "1"}), json::array({"0", "0"})}),
            json::array({json::array({"0", "0"}), json::array({"0", "0"})})})}};
  GeometrySetup setup = make_geometry(descriptor);
  CHECK_FALSE(setup.connection_is_levi_civita);
  CHECK(setup.connection.gamma(0, 0, 1) == constant(1.0));
  CHECK(setup.connection.gamma(0, 1, 0) == constant(0.0));
}

TEST_CASE("malformed geometry descriptors are rejected") {
  CHECK_THROWS_AS(make_geometry(json{{"custom", json{{"dim", 2}}}}),
                  ConfigError);
  // Asymmetric metric strings.
  CHECK_THROWS_AS(
      make_geometry(json{
          {"custom",
           json{{"dim", 2},
                {"metric", json::array({json::array({"1", "x1"}),
                                        json::array({"x2", "1"})})},
                {"box", json::array({json::array({-1.0, 1.0}),
                                     json::array({-1.0, 1.0})})}}}}),
      ConfigError);
  // Box bounds out of order.
  CHECK_THROWS_AS(
      make_geometry(json{
          {"custom",
           json{{"dim", 1},
                {"metric", json::array({json::array({"1"})})},
                {"box", json::array({json::array({2.0, -2.0})})}}}}),
      ConfigError);
  // Metric mentions a variable beyond the chart dimension.
  CHECK_THROWS_AS(
      make_geometry(json{
          {"custom",
           json{{"dim", 1},
                {"metric", json::array({json::array({"x2"})})},
                {"box", json::array({json::array({-1.0, 1.0})})}}}}),
      ConfigError);
}

TEST_CASE("geometry shorthand accepts presets and inline JSON") {
  CHECK(parse_geometry_arg("poincare") == json{{"preset", "poincare"}});
  CHECK(parse_geometry_arg(R"({"preset":"sphere"})") ==
        json{{"preset", "sphere"}});
}

TEST_CASE("domain guards compare two expressions") {
  Expr above = parse_domain_guard("x2 > 0");
  CHECK(eval(above, {0.0, 1.5}) > 0.0);
  CHECK(eval(above, {0.0, -1.5}) < 0.0);

  Expr below = parse_domain_guard("x1 < 2");
  CHECK(eval(below, {1.0}) > 0.0);
  CHECK(eval(below, {3.0}) < 0.0);

  CHECK_THROWS_AS(parse_domain_guard("x1"), ConfigError);
  CHECK_THROWS_AS(parse_domain_guard("x1 >= 0"), ConfigError);
  CHECK_THROWS_AS(parse_domain_guard("x1 > 0 > 1"), ConfigError);
}
