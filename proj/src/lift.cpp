#include "weil/lift.hpp"

#include <cmath>
#include <functional>
#include <map>

namespace weil {

std::vector<double> APoint::base_point() const {
  std::vector<double> out(coords.size());
  for (std::size_t i = 0; i < coords.size(); ++i) out[i] = coords[i].augment();
  return out;
}

APoint APoint::embed(AlgebraPtr algebra, std::span<const double> point) {
  APoint xi;
  xi.algebra = algebra;
  xi.coords.reserve(point.size());
  for (double c : point) xi.coords.push_back(algebra->from_real(c));
  return xi;
}

EvalCache::EvalCache(const APoint& point, double zero_tol)
    : point_(point), zero_tol_(zero_tol) {
  if (!point_.algebra) throw Error("EvalCache: point has no algebra");
}

AElement EvalCache::eval(const Expr& f) {
  auto it = memo_.find(f.node());
  if (it != memo_.end()) return it->second;
  AElement value = eval_node(f);
  if (memo_.emplace(f.node(), value).second) pinned_.push_back(f);
  return value;
}

AElement EvalCache::eval_node(const Expr& f) {
  const AlgebraPtr& a = point_.algebra;
  switch (f.kind()) {
    case ExprKind::Constant:
      return a->from_real(f.constant_value());
    case ExprKind::Variable: {
      const int i = f.var_index();
      if (i >= point_.dim())
        throw Error("lift_eval: variable index beyond point dimension");
      return point_.coords[static_cast<std::size_t>(i)];
    }
    case ExprKind::Add:
      return eval(f.child_a()) + eval(f.child_b());
    case ExprKind::Sub:
      return eval(f.child_a()) - eval(f.child_b());
    case ExprKind::Mul:
      return eval(f.child_a()) * eval(f.child_b());
    case ExprKind::Div:
      return eval(f.child_a()) * invert(eval(f.child_b()), zero_tol_);
    case ExprKind::Neg:
      return -eval(f.child_a());
    case ExprKind::Pow: {
      const AElement base = eval(f.child_a());
      const int m = f.exponent();
      if (m >= 0) return powi(base, m);
      return invert(powi(base, -m), zero_tol_);
    }
    default:
      return primitive(f.kind(), eval(f.child_a()));
  }
}

namespace {

// j-th derivative of the primitive at the scalar point c.
double primitive_derivative(ExprKind kind, int j, double c) {
  switch (kind) {
    case ExprKind::Sin:
      switch (j % 4) {
        case 0: return std::sin(c);
        case 1: return std::cos(c);
        case 2: return -std::sin(c);
        default: return -std::cos(c);
      }
    case ExprKind::Cos:
      switch (j % 4) {
        case 0: return std::cos(c);
        case 1: return -std::sin(c);
        case 2: return -std::cos(c);
        default: return std::sin(c);
      }
    case ExprKind::Exp:
      return std::exp(c);
    case ExprKind::Log: {
      if (j == 0) return std::log(c);
      // d^j/dc^j log c = (-1)^(j-1) (j-1)! c^-j
      double acc = (j % 2 == 1) ? 1.0 : -1.0;
      for (int t = 1; t < j; ++t) acc *= t;
      return acc / std::pow(c, j);
    }
    case ExprKind::Sqrt: {
      // d^j/dc^j c^(1/2) = (1/2)(1/2 - 1)...(1/2 - j + 1) c^(1/2 - j)
      double factor = 1.0;
      for (int t = 0; t < j; ++t) factor *= 0.5 - t;
      return factor * std::pow(c, 0.5 - j);
    }
    default:
      throw Error("primitive_derivative: not a primitive");
  }
}

} // namespace

AElement EvalCache::primitive(ExprKind kind, const AElement& u) {
  const AlgebraPtr& a = point_.algebra;
  const double c = u.augment();
  if (kind == ExprKind::Log && c <= 0.0)
    throw DomainError("lift_eval: log of a non-positive scalar part");
  if (kind == ExprKind::Sqrt && c <= 0.0)
    throw DomainError("lift_eval: sqrt needs a positive scalar part");

  const int k = a->truncation_order();
  const AElement n = nilpotent_part(u);
  AElement result = a->from_real(primitive_derivative(kind, 0, c));
  AElement npow = a->unit();
  double factorial = 1.0;
  for (int j = 1; j <= k; ++j) {
    npow = npow * n;
    if (npow.is_zero()) break;
    factorial *= j;
    result += npow * (primitive_derivative(kind, j, c) / factorial);
  }
  return result;
}

AElement lift_eval(const Expr& f, const APoint& xi, double zero_tol) {
  EvalCache cache(xi, zero_tol);
  return cache.eval(f);
}

namespace {

void enumerate_multi_indices(int vars, int degree_left, std::vector<int>& cur,
                             int from, std::vector<std::vector<int>>& out) {
  if (from == vars) {
    out.push_back(cur);
    return;
  }
  for (int e = 0; e <= degree_left; ++e) {
    cur[static_cast<std::size_t>(from)] = e;
    enumerate_multi_indices(vars, degree_left - e, cur, from + 1, out);
  }
  cur[static_cast<std::size_t>(from)] = 0;
}

} // namespace

AElement taylor_oracle(const Expr& f, const APoint& xi) {
  const AlgebraPtr& a = xi.algebra;
  const int n = xi.dim();
  const int k = a->truncation_order();
  const std::vector<double> x = xi.base_point();

  std::vector<AElement> h;
  h.reserve(static_cast<std::size_t>(n));
  for (const auto& coord : xi.coords) h.push_back(nilpotent_part(coord));

  std::vector<std::vector<int>> alphas;
  std::vector<int> cur(static_cast<std::size_t>(n), 0);
  enumerate_multi_indices(n, k, cur, 0, alphas);

  // Mixed partials D^alpha f, built once per alpha by peeling one
  // variable at a time off the cached lower-order derivative.
  std::map<std::vector<int>, Expr> partials;
  partials[std::vector<int>(static_cast<std::size_t>(n), 0)] = f;
  std::function<const Expr&(const std::vector<int>&)> partial =
      [&](const std::vector<int>& alpha) -> const Expr& {
    auto it = partials.find(alpha);
    if (it != partials.end()) return it->second;
    std::vector<int> lower = alpha;
    int var = 0;
    for (int v = 0; v < n; ++v) {
      if (lower[static_cast<std::size_t>(v)] > 0) {
        --lower[static_cast<std::size_t>(v)];
        var = v;
        break;
      }
    }
    Expr d = diff(partial(lower), var);
    return partials.emplace(alpha, std::move(d)).first->second;
  };

  AElement result = a->zero();
  for (const auto& alpha : alphas) {
    AElement monomial = a->unit();
    double alpha_factorial = 1.0;
    for (int v = 0; v < n; ++v) {
      const int e = alpha[static_cast<std::size_t>(v)];
      monomial = monomial * powi(h[static_cast<std::size_t>(v)], e);
      for (int t = 2; t <= e; ++t) alpha_factorial *= t;
    }
    if (monomial.is_zero()) continue;
    const double coefficient = eval(partial(alpha), x) / alpha_factorial;
    result += monomial * coefficient;
  }
  return result;
}

} // namespace weil
