#pragma once

#include <array>
#include <string>
#include <vector>

#include <json.hpp>

#include "weil/algebra.hpp"
#include "weil/geometry.hpp"

namespace weil {

/// Builds an algebra from a JSON descriptor.  Supported kinds:
///
///   {"kind":"dual"}                                  R[e]/(e^2)
///   {"kind":"jet","vars":r,"order":k}                R[e1..er]/(deg > k)
///   {"kind":"hyperdual","vars":r}                    all e_i^2 = 0
///   {"kind":"tensor","factors":[desc, ...]}          iterated tensor product
///   {"kind":"custom","vars":r,"order":k,
///    "zero_monomials":[[..], ...]}                   explicit quotient
///
/// Unknown kinds, unknown keys, and malformed fields raise ConfigError.
AlgebraPtr make_algebra(const nlohmann::json& descriptor);

/// Canonical echo of a descriptor: normalized fields plus "dim".
nlohmann::json algebra_echo(const nlohmann::json& descriptor);

/// Accepts either inline JSON (leading '{') or the shorthand forms
/// dual, jet(r,k), hyperdual(r), tensor(s1,s2,...).
nlohmann::json parse_algebra_arg(const std::string& text);

/// A chart with metric, connection, and a box to sample base points in.
struct GeometrySetup {
  std::string name;
  Chart chart;
  Metric metric;
  Connection connection;
  bool connection_is_levi_civita = true;
  std::vector<std::array<double, 2>> box;
};

/// Builds a geometry from a JSON descriptor.  Presets:
///
///   {"preset":"euclid","dim":n}       identity metric, default dim 2
///   {"preset":"minkowski","dim":n}    diag(-1, 1, ..), default dim 2
///   {"preset":"poincare"}             upper half-plane, y > 0
///   {"preset":"sphere"}               polar chart, sin(x1) > 0
///
/// or a custom chart:
///
///   {"custom":{"dim":n,"metric":[["expr",..],..],"domain":"x2 > 0",
///              "box":[[lo,hi],..]}}
///
/// Either form accepts "christoffel": n^3 nested expression strings
/// indexed [k][i][j] to override the Levi-Civita connection.
GeometrySetup make_geometry(const nlohmann::json& descriptor);

/// Accepts inline JSON or a preset name.
nlohmann::json parse_geometry_arg(const std::string& text);

/// Parses a domain guard of the form "expr > expr" or "expr < expr" into
/// an expression that is positive exactly on the admitted set.
Expr parse_domain_guard(const std::string& text);

} // namespace weil
