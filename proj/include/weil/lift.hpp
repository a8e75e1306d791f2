#pragma once

#include <span>
#include <unordered_map>
#include <vector>

#include "weil/algebra.hpp"
#include "weil/expr.hpp"

namespace weil {

/// A point of M^A in a chart: one algebra element per coordinate.
struct APoint {
  AlgebraPtr algebra;
  std::vector<AElement> coords;

  int dim() const { return static_cast<int>(coords.size()); }

  /// Scalar parts of the coordinates: the underlying point of M.
  std::vector<double> base_point() const;

  /// Embeds a real point with zero nilpotent part.
  static APoint embed(AlgebraPtr algebra, std::span<const double> point);
};

/// Memoizing evaluator for algebra-valued evaluation at one fixed point.
/// Expression trees share subtrees aggressively, so keying results on
/// node identity makes repeated evaluation of assembled expressions
/// (products, derivatives, connection coefficients) cheap.  The cache
/// keeps every memoized subtree alive: otherwise a node address could be
/// freed, reused by a new expression, and hit a stale entry.
class EvalCache {
public:
  explicit EvalCache(const APoint& point, double zero_tol = 1e-12);

  const APoint& point() const { return point_; }
  double zero_tol() const { return zero_tol_; }

  AElement eval(const Expr& f);

private:
  AElement eval_node(const Expr& f);
  AElement primitive(ExprKind kind, const AElement& u);

  const APoint& point_;
  double zero_tol_;
  std::unordered_map<const ExprNode*, AElement> memo_;
  std::vector<Expr> pinned_;
};

/// Evaluates the canonical lift of f at xi by interpreting the expression
/// tree over the algebra: coordinates map to xi, arithmetic to algebra
/// arithmetic, and each primitive g applied to u = c + n (c scalar, n
/// nilpotent) expands as
///
///   g(u) = sum_{j=0..k} g^(j)(c) n^j / j!
///
/// Throws NonInvertibleError from division and DomainError when a
/// primitive's scalar argument leaves its domain.
AElement lift_eval(const Expr& f, const APoint& xi, double zero_tol = 1e-12);

/// Independent evaluation of the same lift through the multivariate
/// Taylor expansion about the base point x:
///
///   f^A(x + h) = sum_{|alpha| <= k} D^alpha f(x) h^alpha / alpha!
///
/// with symbolic mixed partials and real evaluation of each coefficient.
/// Shares no arithmetic path with lift_eval beyond the algebra product,
/// which makes it a useful cross-check oracle.
AElement taylor_oracle(const Expr& f, const APoint& xi);

} // namespace weil
