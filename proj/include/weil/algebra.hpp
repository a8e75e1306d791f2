#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "weil/errors.hpp"

namespace weil {

class WeilAlgebra;
class AElement;

using AlgebraPtr = std::shared_ptr<const WeilAlgebra>;

/// Descriptor of a truncated polynomial algebra
///
///   R[e1, ..., e_vars] / (monomials of degree > order, zero_monomials)
///
/// Each entry of zero_monomials is an exponent vector of length `vars`;
/// the monomial it names, and every multiple of it, is annihilated.
/// vars == 0 (with order == 0 and no relations) denotes the scalars R.
struct AlgebraSpec {
  int vars = 1;
  int order = 1;
  std::vector<std::vector<int>> zero_monomials;
};

/// Finite-dimensional quotient R[e1..er]/I for a monomial ideal I.
///
/// The basis is the set of surviving monomials in degree-lexicographic
/// order (lower total degree first, e1 before e2 within a degree), so
/// basis(0) is always the unit monomial.  Multiplication of two basis
/// monomials is either a basis monomial or zero, which the structure
/// table records as an index or kAnnihilated.
class WeilAlgebra : public std::enable_shared_from_this<WeilAlgebra> {
public:
  static constexpr int kAnnihilated = -1;

  /// Builds the basis and structure table; verifies the table is unital,
  /// commutative, and associative over all basis triples before returning.
  /// Throws ConfigError for malformed specs (vars < 0, order < 1 with
  /// vars >= 1, order != 0 with vars == 0, bad exponent vectors).
  static AlgebraPtr create(const AlgebraSpec& spec);

  int num_generators() const { return spec_.vars; }
  int truncation_order() const { return spec_.order; }
  std::size_t dim() const { return basis_.size(); }
  const AlgebraSpec& spec() const { return spec_; }

  /// Exponent vectors of the surviving monomials, degree-lex ordered.
  const std::vector<std::vector<int>>& basis() const { return basis_; }

  /// Index of the product basis(i)*basis(j), or kAnnihilated.
  int product_index(std::size_t i, std::size_t j) const {
    return table_[i * dim() + j];
  }

  /// Index of the monomial with the given exponents, or kAnnihilated if
  /// that monomial is not in the basis.
  int monomial_index(std::span<const int> exponents) const;

  /// Human-readable monomial, e.g. "1", "e1", "e1^2*e2".
  std::string monomial_name(std::size_t alpha) const;

  /// Re-derives every table entry from exponent arithmetic and checks
  /// unitality, commutativity, and associativity over all basis triples.
  /// Throws Error on any mismatch.  Runs at construction; exposed so the
  /// harness can re-certify an algebra on demand.
  void verify_structure_table() const;

  AElement zero() const;
  AElement unit() const;
  AElement from_real(double c) const;
  AElement generator(int i) const;
  AElement basis_element(std::size_t alpha) const;
  AElement element(std::vector<double> coeffs) const;

private:
  explicit WeilAlgebra(AlgebraSpec spec);

  AlgebraSpec spec_;
  std::vector<std::vector<int>> basis_;
  std::vector<int> table_; // dim*dim, row-major
};

/// Element of a WeilAlgebra, stored as coefficients over the monomial
/// basis.  Arithmetic between elements of different algebra instances
/// throws Error; algebra identity is by instance, not by shape.
class AElement {
public:
  AElement() = default;
  AElement(AlgebraPtr algebra, std::vector<double> coeffs);

  const AlgebraPtr& algebra() const { return algebra_; }
  std::size_t dim() const { return coeffs_.size(); }
  std::span<const double> coeffs() const { return coeffs_; }

  /// Coefficient of the unit monomial: the image of the element under
  /// the algebra map onto the scalars.
  double augment() const { return coeffs_[0]; }

  /// Coefficient of basis monomial alpha.
  double component(std::size_t alpha) const;

  /// True when every coefficient is exactly 0.0.
  bool is_zero() const;
  double max_abs() const;

  AElement operator-() const;
  AElement& operator+=(const AElement& rhs);
  AElement& operator-=(const AElement& rhs);
  AElement& operator*=(double s);

  friend AElement operator+(AElement lhs, const AElement& rhs) {
    lhs += rhs;
    return lhs;
  }
  friend AElement operator-(AElement lhs, const AElement& rhs) {
    lhs -= rhs;
    return lhs;
  }
  friend AElement operator*(AElement lhs, double s) {
    lhs *= s;
    return lhs;
  }
  friend AElement operator*(double s, AElement rhs) {
    rhs *= s;
    return rhs;
  }
  friend AElement operator*(const AElement& lhs, const AElement& rhs);

private:
  AlgebraPtr algebra_;
  std::vector<double> coeffs_;
};

/// u - augment(u), the nilpotent part.
AElement nilpotent_part(const AElement& u);

/// u^m for m >= 0 by repeated squaring.
AElement powi(const AElement& u, int m);

/// Inverse of u = c + n with c = augment(u) and n nilpotent:
///
///   u^-1 = (1/c) * sum_{j=0..k} (-n/c)^j
///
/// where k is the truncation order.  Throws NonInvertibleError when
/// |c| <= zero_tol.
AElement invert(const AElement& u, double zero_tol = 1e-12);

/// max_i |u_i - v_i|; elements must share an algebra.
double max_abs_diff(const AElement& u, const AElement& v);

/// Tensor product A (x) B: generators of A followed by generators of B,
/// truncation order k_A + k_B, annihilator relations inherited from both
/// factors together with each factor's own degree cutoff.
AlgebraPtr tensor_product(const AlgebraPtr& a, const AlgebraPtr& b);

} // namespace weil
