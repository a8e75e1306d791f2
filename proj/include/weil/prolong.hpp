#pragma once

#include <vector>

#include "weil/geometry.hpp"
#include "weil/lift.hpp"

namespace weil {

/// One summand of a lifted function: an algebra coefficient times the
/// canonical lift of a scalar expression.
struct ALiftTerm {
  AElement coeff;
  Expr fun;
};

/// Function M^A -> A of the form sum_t c_t * (h_t)^A.  The span of such
/// sums is closed under addition, multiplication, and derivation along
/// coordinate directions, which is exactly what the lifted geometric
/// operators need.  Zero-coefficient and zero-expression terms are
/// dropped on construction to keep term lists small.
class ALiftFunction {
public:
  explicit ALiftFunction(AlgebraPtr algebra);
  ALiftFunction(AlgebraPtr algebra, std::vector<ALiftTerm> terms);

  const AlgebraPtr& algebra() const { return algebra_; }
  const std::vector<ALiftTerm>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  AElement evaluate(const APoint& xi) const;
  AElement evaluate(EvalCache& cache) const;

  /// Term-wise derivative along the coordinate direction: the algebra
  /// coefficients ride along and each lift differentiates underneath.
  ALiftFunction partial(int var) const;

  ALiftFunction operator-() const;
  ALiftFunction& operator+=(const ALiftFunction& rhs);
  ALiftFunction& operator-=(const ALiftFunction& rhs);

  friend ALiftFunction operator+(ALiftFunction lhs, const ALiftFunction& rhs) {
    lhs += rhs;
    return lhs;
  }
  friend ALiftFunction operator-(ALiftFunction lhs, const ALiftFunction& rhs) {
    lhs -= rhs;
    return lhs;
  }
  friend ALiftFunction operator*(const ALiftFunction& lhs,
                                 const ALiftFunction& rhs);

  /// Scaling by an algebra constant.
  friend ALiftFunction operator*(const AElement& a, const ALiftFunction& f);
  /// Scaling by the lift of a scalar expression.
  friend ALiftFunction operator*(const Expr& g, const ALiftFunction& f);

private:
  AlgebraPtr algebra_;
  std::vector<ALiftTerm> terms_;
};

/// The canonical lift f^A as a one-term combination.
ALiftFunction lift_function(const AlgebraPtr& algebra, const Expr& f);

/// Vector field on M^A written in the lifted coordinate frame: one
/// ALiftFunction coefficient per direction d/dx_i^A.
class AVectorField {
public:
  AVectorField(AlgebraPtr algebra, std::vector<ALiftFunction> coeffs);

  const AlgebraPtr& algebra() const { return algebra_; }
  int dim() const { return static_cast<int>(coeffs_.size()); }
  const ALiftFunction& coeff(int i) const;

  AVectorField operator-() const;
  friend AVectorField operator+(const AVectorField& a, const AVectorField& b);
  friend AVectorField operator-(const AVectorField& a, const AVectorField& b);
  friend AVectorField operator*(const AElement& a, const AVectorField& x);
  friend AVectorField operator*(const ALiftFunction& f, const AVectorField& x);

private:
  AlgebraPtr algebra_;
  std::vector<ALiftFunction> coeffs_;
};

/// theta^A: components lift term-by-term into the lifted frame.
AVectorField lift_vector_field(const AlgebraPtr& algebra,
                               const VectorField& theta);

/// The frame field d/dx_i^A on an n-dimensional chart.
AVectorField frame_field(const AlgebraPtr& algebra, int dim, int i);

/// X acting on phi as a derivation:
///
///   X(sum_t c_t h_t^A) = sum_i X^i * sum_t c_t (d_i h_t)^A.
ALiftFunction apply_vector_field(const AVectorField& x,
                                 const ALiftFunction& phi);

/// [X, Y]^k = X(Y^k) - Y(X^k).
AVectorField bracket(const AVectorField& x, const AVectorField& y);

/// Prolonged covariant derivative in the lifted frame:
///
///   (nabla_X Y)^k = X(Y^k) + sum_ij X^i Y^j (Gamma^k_ij)^A.
AVectorField covariant_derivative(const Connection& conn, const AVectorField& x,
                                  const AVectorField& y);

/// T(X, Y) = nabla_X Y - nabla_Y X - [X, Y] over the lifted frame.
AVectorField torsion(const Connection& conn, const AVectorField& x,
                     const AVectorField& y);

/// g^A(X, Y) = sum_ij X^i Y^j (g_ij)^A.
ALiftFunction metric_apply(const Metric& g, const AVectorField& x,
                           const AVectorField& y);

/// (nabla_X g^A)(Y, Z) = X[g^A(Y,Z)] - g^A(nabla_X Y, Z) - g^A(Y, nabla_X Z).
ALiftFunction nabla_g(const Connection& conn, const Metric& g,
                      const AVectorField& x, const AVectorField& y,
                      const AVectorField& z);

/// Inverse of the algebra-valued Gram matrix G_ij = (g_ij)^A(xi).
/// Splits G = G0 + N with G0 the scalar part, inverts G0 over the reals,
/// and sums the terminating series (G0 + N)^-1 = sum_j (-G0^-1 N)^j G0^-1.
/// Throws NonInvertibleError when G0 is singular to zero_tol.
std::vector<std::vector<AElement>> gram_inverse(const Metric& g,
                                                const APoint& xi,
                                                double zero_tol = 1e-12);

/// One coordinate of a lifted function value over the monomial basis.
struct DecomposedTerm {
  std::size_t basis_index;
  double value;
};

/// Coordinates of phi(xi) over the algebra basis; summing
/// value * basis_element(basis_index) reconstructs phi(xi) exactly.
std::vector<DecomposedTerm> decompose(const ALiftFunction& phi,
                                      const APoint& xi);

} // namespace weil
