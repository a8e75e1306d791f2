#pragma once

#include <span>
#include <string>
#include <vector>

#include "weil/expr.hpp"

namespace weil {

/// Coordinate chart: a dimension, coordinate names for display, and an
/// optional domain guard.  A point is in the domain when the guard
/// expression evaluates to a positive value; the default guard admits
/// everything.
struct Chart {
  int dim = 0;
  std::vector<std::string> coord_names; // defaults to x1..xn
  Expr guard = constant(1.0);

  static Chart cartesian(int dim);
  bool in_domain(std::span<const double> point) const;
};

/// Symmetric matrix of metric coefficient expressions g_ij.
/// Construction requires entrywise structural symmetry.
class Metric {
public:
  explicit Metric(std::vector<std::vector<Expr>> entries);

  int dim() const { return static_cast<int>(entries_.size()); }
  const Expr& at(int i, int j) const;

private:
  std::vector<std::vector<Expr>> entries_;
};

/// Vector field with one component expression per coordinate.
struct VectorField {
  std::vector<Expr> components;

  int dim() const { return static_cast<int>(components.size()); }
};

VectorField operator+(const VectorField& a, const VectorField& b);
VectorField operator-(const VectorField& a, const VectorField& b);
VectorField operator*(const Expr& f, const VectorField& v);

/// Connection coefficients Gamma[k][i][j] = Gamma^k_ij.
class Connection {
public:
  explicit Connection(std::vector<std::vector<std::vector<Expr>>> gamma);
  static Connection flat(int dim);

  int dim() const { return static_cast<int>(gamma_.size()); }
  const Expr& gamma(int k, int i, int j) const;

  /// Replaces one coefficient; used to build perturbed control
  /// connections in tests.
  void set_gamma(int k, int i, int j, Expr value);

private:
  std::vector<std::vector<std::vector<Expr>>> gamma_;
};

/// Determinant of the coefficient matrix by Laplace expansion.
Expr metric_det(const Metric& g);

/// Symbolic inverse through the adjugate; entries are quotients by the
/// determinant.
std::vector<std::vector<Expr>> metric_inverse(const Metric& g);

/// Levi-Civita coefficients of g:
///
///   Gamma^k_ij = 1/2 g^kl (d_i g_jl + d_j g_il - d_l g_ij)
///
/// Built symmetrically in (i, j) so the symmetry is structural.
Connection levi_civita(const Metric& g);

/// Same, but first certifies that |det g| exceeds zero_tol at every probe
/// point; throws SingularMetricError otherwise.
Connection levi_civita(const Metric& g,
                       std::span<const std::vector<double>> probes,
                       double zero_tol = 1e-12);

/// Derivative of f along theta: sum_i theta^i d_i f.
Expr directional_derivative(const VectorField& theta, const Expr& f);

/// (nabla_theta eta)^k = theta(eta^k) + sum_ij theta^i eta^j Gamma^k_ij.
VectorField covariant_derivative(const Connection& conn,
                                 const VectorField& theta,
                                 const VectorField& eta);

/// [theta, eta]^k = theta(eta^k) - eta(theta^k).
VectorField bracket(const VectorField& theta, const VectorField& eta);

/// T(theta, eta) = nabla_theta eta - nabla_eta theta - [theta, eta].
VectorField torsion(const Connection& conn, const VectorField& theta,
                    const VectorField& eta);

/// g(theta, eta) = sum_ij g_ij theta^i eta^j.
Expr metric_apply(const Metric& g, const VectorField& theta,
                  const VectorField& eta);

/// Compatibility defect of the connection with the metric:
///
///   (nabla_theta g)(mu1, mu2)
///     = theta[g(mu1, mu2)] - g(nabla_theta mu1, mu2) - g(mu1, nabla_theta mu2)
///
/// Identically zero exactly when the connection is metric.
Expr nabla_g(const Connection& conn, const Metric& g, const VectorField& theta,
             const VectorField& mu1, const VectorField& mu2);

} // namespace weil
