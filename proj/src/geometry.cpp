#include "weil/geometry.hpp"

#include <cmath>
#include <sstream>

namespace weil {

Chart Chart::cartesian(int dim) {
  Chart chart;
  chart.dim = dim;
  for (int i = 0; i < dim; ++i) {
    std::ostringstream os;
    os << "x" << (i + 1);
    chart.coord_names.push_back(os.str());
  }
  return chart;
}

bool Chart::in_domain(std::span<const double> point) const {
  try {
    return eval(guard, point) > 0.0;
  } catch (const DomainError&) {
    return false;
  }
}

Metric::Metric(std::vector<std::vector<Expr>> entries)
    : entries_(std::move(entries)) {
  const std::size_t n = entries_.size();
  if (n == 0) throw ConfigError("metric: empty coefficient matrix");
  for (const auto& row : entries_)
    if (row.size() != n) throw ConfigError("metric: ragged coefficient matrix");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (!(entries_[i][j] == entries_[j][i]))
        throw ConfigError("metric: coefficients are not symmetric");
}

const Expr& Metric::at(int i, int j) const {
  if (i < 0 || j < 0 || i >= dim() || j >= dim())
    throw Error("metric: index out of range");
  return entries_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
}

static void require_dim(int a, int b, const char* what) {
  if (a != b) throw Error(std::string(what) + ": dimension mismatch");
}

VectorField operator+(const VectorField& a, const VectorField& b) {
  require_dim(a.dim(), b.dim(), "vector field sum");
  VectorField out;
  for (int i = 0; i < a.dim(); ++i)
    out.components.push_back(a.components[static_cast<std::size_t>(i)] +
                             b.components[static_cast<std::size_t>(i)]);
  return out;
}

VectorField operator-(const VectorField& a, const VectorField& b) {
  require_dim(a.dim(), b.dim(), "vector field difference");
  VectorField out;
  for (int i = 0; i < a.dim(); ++i)
    out.components.push_back(a.components[static_cast<std::size_t>(i)] -
                             b.components[static_cast<std::size_t>(i)]);
  return out;
}

VectorField operator*(const Expr& f, const VectorField& v) {
  VectorField out;
  for (const auto& c : v.components) out.components.push_back(f * c);
  return out;
}

Connection::Connection(std::vector<std::vector<std::vector<Expr>>> gamma)
    : gamma_(std::move(gamma)) {
  const std::size_t n = gamma_.size();
  if (n == 0) throw ConfigError("connection: empty coefficient array");
  for (const auto& plane : gamma_) {
    if (plane.size() != n)
      throw ConfigError("connection: ragged coefficient array");
    for (const auto& row : plane)
      if (row.size() != n)
        throw ConfigError("connection: ragged coefficient array");
  }
}

Connection Connection::flat(int dim) {
  std::vector<std::vector<std::vector<Expr>>> gamma(
      static_cast<std::size_t>(dim),
      std::vector<std::vector<Expr>>(
          static_cast<std::size_t>(dim),
          std::vector<Expr>(static_cast<std::size_t>(dim), constant(0.0))));
  return Connection(std::move(gamma));
}

const Expr& Connection::gamma(int k, int i, int j) const {
  if (k < 0 || i < 0 || j < 0 || k >= dim() || i >= dim() || j >= dim())
    throw Error("connection: index out of range");
  return gamma_[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)]
               [static_cast<std::size_t>(j)];
}

void Connection::set_gamma(int k, int i, int j, Expr value) {
  gamma_[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)]
        [static_cast<std::size_t>(j)] = std::move(value);
}

namespace {

Expr det_of(const std::vector<std::vector<Expr>>& m) {
  const std::size_t n = m.size();
  if (n == 1) return m[0][0];
  Expr acc = constant(0.0);
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<std::vector<Expr>> minor;
    for (std::size_t r = 1; r < n; ++r) {
      std::vector<Expr> row;
      for (std::size_t c = 0; c < n; ++c)
        if (c != j) row.push_back(m[r][c]);
      minor.push_back(std::move(row));
    }
    const Expr term = m[0][j] * det_of(minor);
    acc = (j % 2 == 0) ? acc + term : acc - term;
  }
  return acc;
}

std::vector<std::vector<Expr>> grid(const Metric& g) {
  std::vector<std::vector<Expr>> m(static_cast<std::size_t>(g.dim()));
  for (int i = 0; i < g.dim(); ++i)
    for (int j = 0; j < g.dim(); ++j)
      m[static_cast<std::size_t>(i)].push_back(g.at(i, j));
  return m;
}

} // namespace

Expr metric_det(const Metric& g) { return det_of(grid(g)); }

std::vector<std::vector<Expr>> metric_inverse(const Metric& g) {
  const int n = g.dim();
  const auto m = grid(g);
  const Expr det = det_of(m);
  std::vector<std::vector<Expr>> inv(
      static_cast<std::size_t>(n),
      std::vector<Expr>(static_cast<std::size_t>(n), constant(0.0)));
  if (n == 1) {
    inv[0][0] = constant(1.0) / det;
    return inv;
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      std::vector<std::vector<Expr>> minor;
      for (int r = 0; r < n; ++r) {
        if (r == i) continue;
        std::vector<Expr> row;
        for (int c = 0; c < n; ++c)
          if (c != j) row.push_back(m[static_cast<std::size_t>(r)]
                                     [static_cast<std::size_t>(c)]);
        minor.push_back(std::move(row));
      }
      Expr cof = det_of(minor);
      if ((i + j) % 2 == 1) cof = -cof;
      // adj(g)^T / det; the metric is symmetric so the transpose is free.
      inv[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = cof / det;
    }
  }
  return inv;
}

Connection levi_civita(const Metric& g) {
  const int n = g.dim();
  const auto inv = metric_inverse(g);
  std::vector<std::vector<std::vector<Expr>>> gamma(
      static_cast<std::size_t>(n),
      std::vector<std::vector<Expr>>(
          static_cast<std::size_t>(n),
          std::vector<Expr>(static_cast<std::size_t>(n), constant(0.0))));
  // Gamma^k_ij = 1/2 g^kl (d_i g_jl + d_j g_il - d_l g_ij); filled for
  // i <= j and mirrored so the index symmetry holds structurally.
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      for (int j = i; j < n; ++j) {
        Expr acc = constant(0.0);
        for (int l = 0; l < n; ++l) {
          const Expr sum = diff(g.at(j, l), i) + diff(g.at(i, l), j) -
                           diff(g.at(i, j), l);
          acc = acc + inv[static_cast<std::size_t>(k)]
                         [static_cast<std::size_t>(l)] *
                          sum;
        }
        Expr value = constant(0.5) * acc;
        gamma[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)]
             [static_cast<std::size_t>(j)] = value;
        gamma[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)]
             [static_cast<std::size_t>(i)] = value;
      }
    }
  }
  return Connection(std::move(gamma));
}

Connection levi_civita(const Metric& g,
                       std::span<const std::vector<double>> probes,
                       double zero_tol) {
  const Expr det = metric_det(g);
  for (const auto& p : probes) {
    double value = 0.0;
    try {
      value = eval(det, p);
    } catch (const DomainError&) {
      throw SingularMetricError(
          "levi_civita: metric determinant undefined at a probe point");
    }
    if (std::abs(value) <= zero_tol)
      throw SingularMetricError(
          "levi_civita: metric determinant vanishes at a probe point");
  }
  return levi_civita(g);
}

Expr directional_derivative(const VectorField& theta, const Expr& f) {
  Expr acc = constant(0.0);
  for (int i = 0; i < theta.dim(); ++i)
    acc = acc + theta.components[static_cast<std::size_t>(i)] * diff(f, i);
  return acc;
}

VectorField covariant_derivative(const Connection& conn,
                                 const VectorField& theta,
                                 const VectorField& eta) {
  require_dim(conn.dim(), theta.dim(), "covariant derivative");
  require_dim(theta.dim(), eta.dim(), "covariant derivative");
  const int n = theta.dim();
  VectorField out;
  for (int k = 0; k < n; ++k) {
    Expr acc = directional_derivative(
        theta, eta.components[static_cast<std::size_t>(k)]);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        acc = acc + theta.components[static_cast<std::size_t>(i)] *
                        eta.components[static_cast<std::size_t>(j)] *
                        conn.gamma(k, i, j);
    out.components.push_back(acc);
  }
  return out;
}

VectorField bracket(const VectorField& theta, const VectorField& eta) {
  require_dim(theta.dim(), eta.dim(), "bracket");
  VectorField out;
  for (int k = 0; k < theta.dim(); ++k) {
    out.components.push_back(
        directional_derivative(theta,
                               eta.components[static_cast<std::size_t>(k)]) -
        directional_derivative(eta,
                               theta.components[static_cast<std::size_t>(k)]));
  }
  return out;
}

VectorField torsion(const Connection& conn, const VectorField& theta,
                    const VectorField& eta) {
  return covariant_derivative(conn, theta, eta) -
         covariant_derivative(conn, eta, theta) - bracket(theta, eta);
}

Expr metric_apply(const Metric& g, const VectorField& theta,
                  const VectorField& eta) {
  require_dim(g.dim(), theta.dim(), "metric apply");
  require_dim(theta.dim(), eta.dim(), "metric apply");
  Expr acc = constant(0.0);
  for (int i = 0; i < g.dim(); ++i)
    for (int j = 0; j < g.dim(); ++j)
      acc = acc + g.at(i, j) * theta.components[static_cast<std::size_t>(i)] *
                      eta.components[static_cast<std::size_t>(j)];
  return acc;
}

Expr nabla_g(const Connection& conn, const Metric& g, const VectorField& theta,
             const VectorField& mu1, const VectorField& mu2) {
  return directional_derivative(theta, metric_apply(g, mu1, mu2)) -
         metric_apply(g, covariant_derivative(conn, theta, mu1), mu2) -
         metric_apply(g, mu1, covariant_derivative(conn, theta, mu2));
}

} // namespace weil
