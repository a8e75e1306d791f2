#pragma once

#include <initializer_list>
#include <memory>
#include <span>
#include <string>
#include <string_view>

#include "weil/errors.hpp"

namespace weil {

enum class ExprKind {
  Constant,
  Variable,
  Add,
  Sub,
  Mul,
  Div,
  Neg,
  Pow, // integer exponent
  Sin,
  Cos,
  Exp,
  Log,
  Sqrt,
};

struct ExprNode;

/// Immutable scalar expression over variables x1..xn.  Copies share the
/// underlying tree; node pointers are stable and usable as cache keys.
///
/// Construction folds constant subtrees (including the 0/1 identity and
/// annihilation cases) and nothing else, so what you build is what you
/// keep.  A default-constructed Expr is the constant 0.
class Expr {
public:
  Expr();
  explicit Expr(std::shared_ptr<const ExprNode> node);

  ExprKind kind() const;
  double constant_value() const; // Constant only
  int var_index() const;         // Variable only, 0-based
  int exponent() const;          // Pow only
  const Expr& child_a() const;   // first operand
  const Expr& child_b() const;   // second operand (binary nodes)

  /// Node identity, stable across copies.  Only meaningful as a cache key
  /// while some Expr keeps the node alive; freed addresses get reused.
  const ExprNode* node() const { return node_.get(); }

  /// 1 + the largest variable index mentioned, 0 for closed expressions.
  int num_variables() const;

  /// Structural equality (same shape, same constants).
  friend bool operator==(const Expr& a, const Expr& b);
  friend bool operator!=(const Expr& a, const Expr& b) { return !(a == b); }

private:
  std::shared_ptr<const ExprNode> node_;
};

Expr constant(double c);
Expr variable(int index); // 0-based; prints as x<index+1>

Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);

Expr pow(const Expr& base, int exponent);
Expr sin(const Expr& a);
Expr cos(const Expr& a);
Expr exp(const Expr& a);
Expr log(const Expr& a);
Expr sqrt(const Expr& a);

/// Evaluates at a real point (point[i] substitutes x<i+1>).  Throws
/// DomainError for log/sqrt/division outside their domains and Error for
/// a variable index beyond the point's dimension.
double eval(const Expr& f, std::span<const double> point);

/// Brace-list convenience: eval(f, {1.0, 2.0}).
inline double eval(const Expr& f, std::initializer_list<double> point) {
  return eval(f, std::span<const double>(point.begin(), point.size()));
}

/// Partial derivative with respect to variable `var` (0-based).
Expr diff(const Expr& f, int var);

/// Infix form; parse_expr(to_string(f)) reconstructs f exactly.
std::string to_string(const Expr& f);

/// Parses the infix grammar
///
///   expr  := term (('+'|'-') term)*
///   term  := unary (('*'|'/') unary)*
///   unary := '-' unary | power
///   power := atom ('^' ['-'] integer)*
///   atom  := number | x<k> | sin|cos|exp|log|sqrt '(' expr ')' | '(' expr ')'
///
/// Throws ConfigError with an offset on malformed input.
Expr parse_expr(std::string_view src);

} // namespace weil
