#include "weil/descriptors.hpp"

#include <algorithm>
#include <sstream>

namespace weil {

using nlohmann::json;

namespace {

void require_keys(const json& obj, std::initializer_list<const char*> allowed,
                  const char* where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (std::find_if(allowed.begin(), allowed.end(), [&](const char* k) {
          return it.key() == k;
        }) == allowed.end())
      throw ConfigError(std::string(where) + ": unknown key \"" + it.key() +
                        "\"");
  }
}

int get_int(const json& obj, const char* key, const char* where) {
  if (!obj.contains(key))
    throw ConfigError(std::string(where) + ": missing \"" + key + "\"");
  const auto& v = obj.at(key);
  if (!v.is_number_integer())
    throw ConfigError(std::string(where) + ": \"" + key +
                      "\" must be an integer");
  return v.get<int>();
}

} // namespace

AlgebraPtr make_algebra(const json& descriptor) {
  if (!descriptor.is_object())
    throw ConfigError("algebra: descriptor must be an object");
  if (!descriptor.contains("kind"))
    throw ConfigError("algebra: missing \"kind\"");
  const std::string kind = descriptor.at("kind").get<std::string>();

  if (kind == "dual") {
    require_keys(descriptor, {"kind"}, "algebra(dual)");
    return WeilAlgebra::create(AlgebraSpec{1, 1, {}});
  }
  if (kind == "jet") {
    require_keys(descriptor, {"kind", "vars", "order"}, "algebra(jet)");
    return WeilAlgebra::create(AlgebraSpec{
        get_int(descriptor, "vars", "algebra(jet)"),
        get_int(descriptor, "order", "algebra(jet)"),
        {}});
  }
  if (kind == "hyperdual") {
    require_keys(descriptor, {"kind", "vars"}, "algebra(hyperdual)");
    const int vars = get_int(descriptor, "vars", "algebra(hyperdual)");
    if (vars < 1)
      throw ConfigError("algebra(hyperdual): vars must be positive");
    AlgebraSpec spec;
    spec.vars = vars;
    spec.order = vars;
    for (int i = 0; i < vars; ++i) {
      std::vector<int> rel(static_cast<std::size_t>(vars), 0);
      rel[static_cast<std::size_t>(i)] = 2;
      spec.zero_monomials.push_back(std::move(rel));
    }
    return WeilAlgebra::create(spec);
  }
  if (kind == "tensor") {
    require_keys(descriptor, {"kind", "factors"}, "algebra(tensor)");
    if (!descriptor.contains("factors") || !descriptor.at("factors").is_array() ||
        descriptor.at("factors").empty())
      throw ConfigError("algebra(tensor): \"factors\" must be a non-empty array");
    AlgebraPtr acc;
    for (const auto& factor : descriptor.at("factors")) {
      AlgebraPtr next = make_algebra(factor);
      acc = acc ? tensor_product(acc, next) : next;
    }
    return acc;
  }
  if (kind == "custom") {
    require_keys(descriptor, {"kind", "vars", "order", "zero_monomials"},
                 "algebra(custom)");
    AlgebraSpec spec;
    spec.vars = get_int(descriptor, "vars", "algebra(custom)");
    spec.order = descriptor.contains("order")
                     ? get_int(descriptor, "order", "algebra(custom)")
                     : 0;
    if (descriptor.contains("zero_monomials")) {
      const auto& rels = descriptor.at("zero_monomials");
      if (!rels.is_array())
        throw ConfigError("algebra(custom): \"zero_monomials\" must be an array");
      for (const auto& rel : rels) {
        if (!rel.is_array())
          throw ConfigError(
              "algebra(custom): each zero_monomial must be an exponent array");
        std::vector<int> exponents;
        for (const auto& e : rel) {
          if (!e.is_number_integer())
            throw ConfigError("algebra(custom): exponents must be integers");
          exponents.push_back(e.get<int>());
        }
        spec.zero_monomials.push_back(std::move(exponents));
      }
    }
    return WeilAlgebra::create(spec);
  }
  throw ConfigError("algebra: unknown kind \"" + kind + "\"");
}

json algebra_echo(const json& descriptor) {
  AlgebraPtr a = make_algebra(descriptor);
  json echo = descriptor;
  echo["dim"] = a->dim();
  return echo;
}

namespace {

json parse_shorthand_call(const std::string& text, const std::string& name) {
  // name(arg1,arg2,...) with integer or nested-shorthand arguments.
  const std::size_t open = text.find('(');
  if (open == std::string::npos || text.back() != ')')
    throw ConfigError("algebra: malformed shorthand \"" + text + "\"");
  const std::string inner = text.substr(open + 1, text.size() - open - 2);
  std::vector<std::string> args;
  int depth = 0;
  std::string cur;
  for (char c : inner) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == ',' && depth == 0) {
      args.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) args.push_back(cur);

  auto to_int = [&](const std::string& s) {
    try {
      std::size_t pos = 0;
      const int v = std::stoi(s, &pos);
      if (pos != s.size()) throw std::invalid_argument(s);
      return v;
    } catch (const std::exception&) {
      throw ConfigError("algebra: expected an integer in \"" + text + "\"");
    }
  };

  if (name == "jet") {
    if (args.size() != 2)
      throw ConfigError("algebra: jet(vars,order) takes two arguments");
    return json{{"kind", "jet"}, {"vars", to_int(args[0])},
                {"order", to_int(args[1])}};
  }
  if (name == "hyperdual") {
    if (args.size() != 1)
      throw ConfigError("algebra: hyperdual(vars) takes one argument");
    return json{{"kind", "hyperdual"}, {"vars", to_int(args[0])}};
  }
  if (name == "tensor") {
    if (args.size() < 2)
      throw ConfigError("algebra: tensor(...) takes at least two factors");
    json factors = json::array();
    for (const auto& a : args) factors.push_back(parse_algebra_arg(a));
    return json{{"kind", "tensor"}, {"factors", factors}};
  }
  throw ConfigError("algebra: unknown shorthand \"" + name + "\"");
}

} // namespace

json parse_algebra_arg(const std::string& text) {
  std::string trimmed = text;
  trimmed.erase(0, trimmed.find_first_not_of(" \t"));
  trimmed.erase(trimmed.find_last_not_of(" \t") + 1);
  if (trimmed.empty()) throw ConfigError("algebra: empty descriptor");
  if (trimmed.front() == '{') {
    json parsed = json::parse(trimmed, nullptr, false);
    if (parsed.is_discarded())
      throw ConfigError("algebra: malformed JSON descriptor");
    return parsed;
  }
  if (trimmed == "dual") return json{{"kind", "dual"}};
  const std::size_t open = trimmed.find('(');
  if (open == std::string::npos)
    throw ConfigError("algebra: unknown shorthand \"" + trimmed + "\"");
  return parse_shorthand_call(trimmed, trimmed.substr(0, open));
}

Expr parse_domain_guard(const std::string& text) {
  const std::size_t gt = text.find('>');
  const std::size_t lt = text.find('<');
  if (gt == std::string::npos && lt == std::string::npos)
    throw ConfigError("domain: expected \"expr > expr\" or \"expr < expr\"");
  if (gt != std::string::npos && lt != std::string::npos)
    throw ConfigError("domain: one comparison only");
  const std::size_t pos = gt != std::string::npos ? gt : lt;
  const Expr lhs = parse_expr(text.substr(0, pos));
  const Expr rhs = parse_expr(text.substr(pos + 1));
  return gt != std::string::npos ? lhs - rhs : rhs - lhs;
}

namespace {

Metric identity_metric(int dim, double first_entry) {
  std::vector<std::vector<Expr>> g(
      static_cast<std::size_t>(dim),
      std::vector<Expr>(static_cast<std::size_t>(dim), constant(0.0)));
  for (int i = 0; i < dim; ++i)
    g[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] =
        constant(i == 0 ? first_entry : 1.0);
  return Metric(std::move(g));
}

std::vector<std::array<double, 2>> default_box(int dim) {
  return std::vector<std::array<double, 2>>(static_cast<std::size_t>(dim),
                                            {-2.0, 2.0});
}

Connection parse_christoffel(const json& spec, int dim) {
  if (!spec.is_array() || static_cast<int>(spec.size()) != dim)
    throw ConfigError("christoffel: expected dim^3 nested expression strings");
  std::vector<std::vector<std::vector<Expr>>> gamma;
  for (const auto& plane : spec) {
    if (!plane.is_array() || static_cast<int>(plane.size()) != dim)
      throw ConfigError("christoffel: expected dim^3 nested expression strings");
    std::vector<std::vector<Expr>> rows;
    for (const auto& row : plane) {
      if (!row.is_array() || static_cast<int>(row.size()) != dim)
        throw ConfigError(
            "christoffel: expected dim^3 nested expression strings");
      std::vector<Expr> entries;
      for (const auto& cell : row) {
        if (!cell.is_string())
          throw ConfigError("christoffel: entries must be expression strings");
        Expr e = parse_expr(cell.get<std::string>());
        if (e.num_variables() > dim)
          throw ConfigError("christoffel: expression mentions x" +
                            std::to_string(e.num_variables()) +
                            " beyond the chart dimension");
        entries.push_back(std::move(e));
      }
      rows.push_back(std::move(entries));
    }
    gamma.push_back(std::move(rows));
  }
  return Connection(std::move(gamma));
}

GeometrySetup finish_setup(std::string name, Chart chart, Metric metric,
                           std::vector<std::array<double, 2>> box,
                           const json& descriptor) {
  GeometrySetup setup{std::move(name),
                      std::move(chart),
                      std::move(metric),
                      Connection::flat(1),
                      true,
                      std::move(box)};
  if (descriptor.contains("christoffel")) {
    setup.connection =
        parse_christoffel(descriptor.at("christoffel"), setup.chart.dim);
    setup.connection_is_levi_civita = false;
  } else {
    setup.connection = levi_civita(setup.metric);
  }
  return setup;
}

} // namespace

GeometrySetup make_geometry(const json& descriptor) {
  if (!descriptor.is_object())
    throw ConfigError("geometry: descriptor must be an object");

  if (descriptor.contains("preset")) {
    require_keys(descriptor, {"preset", "dim", "christoffel"}, "geometry");
    const std::string preset = descriptor.at("preset").get<std::string>();
    int dim = 2;
    if (descriptor.contains("dim"))
      dim = get_int(descriptor, "dim", "geometry");
    if (dim < 1) throw ConfigError("geometry: dim must be positive");

    if (preset == "euclid") {
      return finish_setup("euclid", Chart::cartesian(dim),
                          identity_metric(dim, 1.0), default_box(dim),
                          descriptor);
    }
    if (preset == "minkowski") {
      return finish_setup("minkowski", Chart::cartesian(dim),
                          identity_metric(dim, -1.0), default_box(dim),
                          descriptor);
    }
    if (preset == "poincare") {
      if (descriptor.contains("dim") && dim != 2)
        throw ConfigError("geometry: the poincare preset is two-dimensional");
      Chart chart = Chart::cartesian(2);
      chart.coord_names = {"x", "y"};
      chart.guard = parse_domain_guard("x2 > 0");
      const Expr conformal = parse_expr("1/x2^2");
      Metric metric(std::vector<std::vector<Expr>>{
          {conformal, constant(0.0)}, {constant(0.0), conformal}});
      std::vector<std::array<double, 2>> box = {{-2.0, 2.0}, {0.5, 2.0}};
      return finish_setup("poincare", std::move(chart), std::move(metric),
                          std::move(box), descriptor);
    }
    if (preset == "sphere") {
      if (descriptor.contains("dim") && dim != 2)
        throw ConfigError("geometry: the sphere preset is two-dimensional");
      Chart chart = Chart::cartesian(2);
      chart.coord_names = {"theta", "phi"};
      chart.guard = parse_domain_guard("sin(x1) > 0");
      Metric metric(std::vector<std::vector<Expr>>{
          {constant(1.0), constant(0.0)},
          {constant(0.0), parse_expr("sin(x1)^2")}});
      // Stay inside the polar chart, clear of both poles.
      std::vector<std::array<double, 2>> box = {{0.5, 2.6}, {-2.0, 2.0}};
      return finish_setup("sphere", std::move(chart), std::move(metric),
                          std::move(box), descriptor);
    }
    throw ConfigError("geometry: unknown preset \"" + preset + "\"");
  }

  if (descriptor.contains("custom")) {
    require_keys(descriptor, {"custom", "christoffel"}, "geometry");
    const json& custom = descriptor.at("custom");
    require_keys(custom, {"dim", "metric", "domain", "box"}, "geometry(custom)");
    const int dim = get_int(custom, "dim", "geometry(custom)");
    if (dim < 1) throw ConfigError("geometry(custom): dim must be positive");

    if (!custom.contains("metric") || !custom.at("metric").is_array())
      throw ConfigError("geometry(custom): missing \"metric\" matrix");
    std::vector<std::vector<Expr>> entries;
    for (const auto& row : custom.at("metric")) {
      if (!row.is_array() || static_cast<int>(row.size()) != dim)
        throw ConfigError("geometry(custom): metric must be dim x dim");
      std::vector<Expr> parsed;
      for (const auto& cell : row) {
        if (!cell.is_string())
          throw ConfigError("geometry(custom): metric entries are strings");
        Expr e = parse_expr(cell.get<std::string>());
        if (e.num_variables() > dim)
          throw ConfigError("geometry(custom): metric mentions x" +
                            std::to_string(e.num_variables()) +
                            " beyond the chart dimension");
        parsed.push_back(std::move(e));
      }
      entries.push_back(std::move(parsed));
    }
    if (static_cast<int>(entries.size()) != dim)
      throw ConfigError("geometry(custom): metric must be dim x dim");

    Chart chart = Chart::cartesian(dim);
    if (custom.contains("domain"))
      chart.guard = parse_domain_guard(custom.at("domain").get<std::string>());

    std::vector<std::array<double, 2>> box = default_box(dim);
    if (custom.contains("box")) {
      const auto& b = custom.at("box");
      if (!b.is_array() || static_cast<int>(b.size()) != dim)
        throw ConfigError("geometry(custom): box needs one [lo,hi] per axis");
      box.clear();
      for (const auto& axis : b) {
        if (!axis.is_array() || axis.size() != 2)
          throw ConfigError("geometry(custom): box needs one [lo,hi] per axis");
        const double lo = axis[0].get<double>();
        const double hi = axis[1].get<double>();
        if (!(lo < hi))
          throw ConfigError("geometry(custom): box intervals must be ordered");
        box.push_back({lo, hi});
      }
    }
    return finish_setup("custom", std::move(chart), Metric(std::move(entries)),
                        std::move(box), descriptor);
  }

  throw ConfigError("geometry: expected \"preset\" or \"custom\"");
}

json parse_geometry_arg(const std::string& text) {
  std::string trimmed = text;
  trimmed.erase(0, trimmed.find_first_not_of(" \t"));
  trimmed.erase(trimmed.find_last_not_of(" \t") + 1);
  if (trimmed.empty()) throw ConfigError("geometry: empty descriptor");
  if (trimmed.front() == '{') {
    json parsed = json::parse(trimmed, nullptr, false);
    if (parsed.is_discarded())
      throw ConfigError("geometry: malformed JSON descriptor");
    return parsed;
  }
  return json{{"preset", trimmed}};
}

} // namespace weil
