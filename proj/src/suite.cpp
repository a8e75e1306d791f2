#include "weil/suite.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>

#include "weil/errors.hpp"

namespace weil {

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t hash = 14695981039346656037ULL;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 1099511628211ULL;
  }
  return hash;
}

std::string suite_name(SuiteId id) {
  switch (id) {
  case SuiteId::Algebra: return "algebra";
  case SuiteId::Lift: return "lift";
  case SuiteId::Bracket: return "bracket";
  case SuiteId::Connection: return "connection";
  case SuiteId::Torsion: return "torsion";
  case SuiteId::Metric: return "metric";
  }
  throw Error("unreachable suite id");
}

// ---------------------------------------------------------------------------
// Samplers

std::vector<double> sample_base_point(const GeometrySetup& geo, Rng& rng) {
  const int dim = geo.chart.dim;
  for (int attempt = 0; attempt < 1000; ++attempt) {
    std::vector<double> p(dim);
    for (int i = 0; i < dim; ++i) {
      p[i] = rng.uniform(geo.box[i][0], geo.box[i][1]);
    }
    if (geo.chart.in_domain(p)) {
      return p;
    }
  }
  throw DomainExhaustedError("no in-domain point found in 1000 draws for '" +
                             geo.name + "'");
}

APoint sample_near_point(const AlgebraPtr& algebra, const GeometrySetup& geo,
                         Rng& rng) {
  const std::vector<double> base = sample_base_point(geo, rng);
  APoint xi;
  xi.algebra = algebra;
  xi.coords.reserve(base.size());
  for (double b : base) {
    std::vector<double> coeffs(algebra->dim(), 0.0);
    coeffs[0] = b;
    for (std::size_t alpha = 1; alpha < algebra->dim(); ++alpha) {
      coeffs[alpha] = rng.uniform(-1.0, 1.0);
    }
    xi.coords.push_back(algebra->element(std::move(coeffs)));
  }
  return xi;
}

namespace {

Expr random_leaf(Rng& rng, int dim) {
  if (rng.unit() < 0.3) {
    return constant(rng.uniform(-1.5, 1.5));
  }
  return variable(rng.uniform_int(0, dim - 1));
}

} // namespace

Expr random_smooth_expr(Rng& rng, int dim, int depth) {
  if (depth <= 0) {
    return random_leaf(rng, dim);
  }
  // Subtrees are drawn into locals first: the draw order must not depend
  // on the compiler's argument evaluation order.
  switch (rng.uniform_int(0, 6)) {
  case 0: {
    Expr a = random_smooth_expr(rng, dim, depth - 1);
    Expr b = random_smooth_expr(rng, dim, depth - 1);
    return a + b;
  }
  case 1: {
    Expr a = random_smooth_expr(rng, dim, depth - 1);
    Expr b = random_smooth_expr(rng, dim, depth - 1);
    return a - b;
  }
  case 2: {
    Expr a = random_smooth_expr(rng, dim, depth - 1);
    Expr b = random_smooth_expr(rng, dim, depth - 1);
    return a * b;
  }
  case 3: return sin(random_smooth_expr(rng, dim, depth - 1));
  case 4: return cos(random_smooth_expr(rng, dim, depth - 1));
  case 5: return pow(random_smooth_expr(rng, dim, depth - 1), 2);
  default: return random_leaf(rng, dim);
  }
}

VectorField random_vector_field(Rng& rng, int dim, int depth) {
  VectorField theta;
  theta.components.reserve(dim);
  for (int i = 0; i < dim; ++i) {
    theta.components.push_back(random_smooth_expr(rng, dim, depth));
  }
  return theta;
}

AElement random_a_element(const AlgebraPtr& algebra, Rng& rng) {
  std::vector<double> coeffs(algebra->dim());
  for (double& c : coeffs) {
    c = rng.uniform(-1.0, 1.0);
  }
  return algebra->element(std::move(coeffs));
}

ALiftFunction random_lift_function(const AlgebraPtr& algebra, Rng& rng,
                                   int dim) {
  std::vector<ALiftTerm> terms;
  for (int t = 0; t < 2; ++t) {
    AElement coeff = random_a_element(algebra, rng);
    Expr fun = random_smooth_expr(rng, dim, 2);
    terms.push_back(ALiftTerm{std::move(coeff), std::move(fun)});
  }
  return ALiftFunction(algebra, std::move(terms));
}

AVectorField random_a_vector_field(const AlgebraPtr& algebra, Rng& rng,
                                   int dim) {
  std::vector<ALiftFunction> coeffs;
  coeffs.reserve(dim);
  for (int i = 0; i < dim; ++i) {
    coeffs.push_back(random_lift_function(algebra, rng, dim));
  }
  return AVectorField(algebra, std::move(coeffs));
}

// ---------------------------------------------------------------------------
// Deviation helpers

namespace {

double dev_alf(const ALiftFunction& a, const ALiftFunction& b,
               EvalCache& cache) {
  return max_abs_diff(a.evaluate(cache), b.evaluate(cache));
}

double norm_alf(const ALiftFunction& f, EvalCache& cache) {
  return f.evaluate(cache).max_abs();
}

double dev_field(const AVectorField& x, const AVectorField& y,
                 EvalCache& cache) {
  double dev = 0.0;
  for (int i = 0; i < x.dim(); ++i) {
    dev = std::max(dev, dev_alf(x.coeff(i), y.coeff(i), cache));
  }
  return dev;
}

double norm_field(const AVectorField& x, EvalCache& cache) {
  double dev = 0.0;
  for (int i = 0; i < x.dim(); ++i) {
    dev = std::max(dev, norm_alf(x.coeff(i), cache));
  }
  return dev;
}

// --------------------------------------------------------------------------
// Algebra checks

double chk_structure(const CheckEnv& env, Rng&) {
  env.algebra->verify_structure_table();
  return 0.0;
}

double chk_ring_axioms(const CheckEnv& env, Rng& rng) {
  double dev = 0.0;
  const AElement unit = env.algebra->unit();
  for (int s = 0; s < env.samples; ++s) {
    AElement u = random_a_element(env.algebra, rng);
    AElement v = random_a_element(env.algebra, rng);
    AElement w = random_a_element(env.algebra, rng);
    dev = std::max(dev, max_abs_diff(u * v, v * u));
    dev = std::max(dev, max_abs_diff((u * v) * w, u * (v * w)));
    dev = std::max(dev, max_abs_diff(u * (v + w), u * v + u * w));
    dev = std::max(dev, max_abs_diff(unit * u, u));
  }
  return dev;
}

double chk_augment_hom(const CheckEnv& env, Rng& rng) {
  double dev = 0.0;
  for (int s = 0; s < env.samples; ++s) {
    AElement u = random_a_element(env.algebra, rng);
    AElement v = random_a_element(env.algebra, rng);
    double scale = rng.uniform(-2.0, 2.0);
    dev = std::max(dev,
                   std::abs((u * v).augment() - u.augment() * v.augment()));
    dev = std::max(dev, std::abs((u + v * scale).augment() -
                                 (u.augment() + v.augment() * scale)));
  }
  return dev;
}

double chk_nilpotent_power(const CheckEnv& env, Rng& rng) {
  double dev = 0.0;
  const int order = env.algebra->truncation_order();
  for (int s = 0; s < env.samples; ++s) {
    AElement u = random_a_element(env.algebra, rng);
    u = nilpotent_part(u);
    AElement p = env.algebra->unit();
    for (int t = 0; t <= order; ++t) {
      p = p * u;
    }
    dev = std::max(dev, p.max_abs());
  }
  return dev;
}

double chk_invert_neumann(const CheckEnv& env, Rng& rng) {
  double dev = 0.0;
  const AElement unit = env.algebra->unit();
  for (int s = 0; s < env.samples; ++s) {
    AElement u = random_a_element(env.algebra, rng);
    double c = u.augment();
    while (std::abs(c) < 0.1) {
      c = rng.uniform(-2.0, 2.0);
    }
    u += env.algebra->from_real(c - u.augment());
    dev = std::max(dev, max_abs_diff(u * invert(u, env.zero_tol), unit));
  }
  return dev;
}

double chk_component_reconstruct(const CheckEnv& env, Rng& rng) {
  double dev = 0.0;
  for (int s = 0; s < env.samples; ++s) {
    AElement u = random_a_element(env.algebra, rng);
    AElement rebuilt = env.algebra->zero();
    for (std::size_t alpha = 0; alpha < env.algebra->dim(); ++alpha) {
      rebuilt += env.algebra->basis_element(alpha) * u.component(alpha);
    }
    dev = std::max(dev, max_abs_diff(rebuilt, u));
  }
  return dev;
}

// --------------------------------------------------------------------------
// Lift checks

double chk_lift_coordinate(const CheckEnv& env, Rng& rng) {
  double dev = 0.0;
  const int dim = env.geometry->chart.dim;
  for (int s = 0; s < env.samples; ++s) {
    APoint xi = sample_near_point(env.algebra, *env.geometry, rng);
    for (int j = 0; j < dim; ++j) {
      dev = std::max(
          dev, max_abs_diff(lift_eval(variable(j), xi, env.zero_tol),
                            xi.coords[static_cast<std::size_t>(j)]));
    }
  }
  return dev;
}

double chk_hom_add(const CheckEnv& env, Rng& rng) {
  double dev = 0.0;
  const int dim = env.geometry->chart.dim;
  for (int s = 0; s < env.samples; ++s) {
    Expr f = random_smooth_expr(rng, dim, 3);
    Expr g = random_smooth_expr(rng, dim, 3);
    APoint xi = sample_near_point(env.algebra, *env.geometry, rng);
    dev = std::max(dev, max_abs_diff(lift_eval(f + g, xi, env.zero_tol),
                                     taylor_oracle(f, xi) +
                                         taylor_oracle(g, xi)));
  }
  return dev;
}

double chk_hom_mul(const CheckEnv& env, Rng& rng) {
  double dev = 0.0;
  const int dim = env.geometry->chart.dim;
  for (int s = 0; s < env.samples; ++s) {
    Expr f = random_smooth_expr(rng, dim, 3);
    Expr g = random_smooth_expr(rng, dim, 3);
    APoint xi = sample_near_point(env.algebra, *env.geometry, rng);
    dev = std::max(dev, max_abs_diff(lift_eval(f * g, xi, env.zero_tol),
                                     taylor_oracle(f, xi) *
                                         taylor_oracle(g, xi)));
  }
  return dev;
}

double chk_hom_scale(const CheckEnv& env, Rng& rng) {
  double dev = 0.0;
  const int dim = env.geometry->chart.dim;
  for (int s = 0; s < env.samples; ++s) {
    Expr f = random_smooth_expr(rng, dim, 3);
    double scale = rng.uniform(-2.0, 2.0);
    APoint xi = sample_near_point(env.algebra, *env.geometry, rng);
    EvalCache cache(xi, env.zero_tol);
    dev = std::max(dev, max_abs_diff(cache.eval(constant(scale) * f),
                                     cache.eval(f) * scale));
  }
  return dev;
}

double chk_taylor_agreement(const CheckEnv& env, Rng& rng) {
  double dev = 0.0;
  const int dim = env.geometry->chart.dim;
  for (int s = 0; s < env.samples; ++s) {
    Expr f = random_smooth_expr(rng, dim, 3);
    APoint xi = sample_near_point(env.algebra, *env.geometry, rng);
    dev = std::max(dev, max_abs_diff(lift_eval(f, xi, env.zero_tol),
                                     taylor_oracle(f, xi)));
  }
  return dev;
}

double chk_partial_naturality(const CheckEnv& env, Rng& rng) {
  double dev = 0.0;
  const int dim = env.geometry->chart.dim;
  for (int s = 0; s < env.samples; ++s) {
    Expr f = random_smooth_expr(rng, dim, 3);
    int i = rng.uniform_int(0, dim - 1);
    APoint xi = sample_near_point(env.algebra, *env.geometry, rng);
    EvalCache cache(xi, env.zero_tol);
    AElement lhs = apply_vector_field(frame_field(env.algebra, dim, i),
                                      lift_function(env.algebra, f))
                       .evaluate(cache);
    AElement rhs = cache.eval(diff(f, i));
    dev = std::max(dev, max_abs_diff(lhs, rhs));
  }
  return dev;
}

double chk_diff_fd(const CheckEnv& env, Rng& rng) {
  double dev = 0.0;
  const int dim = env.geometry->chart.dim;
  const double step = 1e-5;
  for (int s = 0; s < env.samples; ++s) {
    Expr f = random_smooth_expr(rng, dim, 3);
    std::vector<double> p = sample_base_point(*env.geometry, rng);
    for (int i = 0; i < dim; ++i) {
      double analytic = eval(diff(f, i), p);
      std::vector<double> hi = p;
      std::vector<double> lo = p;
      hi[static_cast<std::size_t>(i)] += step;
      lo[static_cast<std::size_t>(i)] -= step;
      double fd = (eval(f, hi) - eval(f, lo)) / (2.0 * step);
      dev = std::max(dev,
                     std::abs(analytic - fd) / std::max(1.0, std::abs(analytic)));
    }
  }
  return dev;
}

double chk_decompose_reconstruct(const CheckEnv& env, Rng& rng) {
  double dev = 0.0;
  const int dim = env.geometry->chart.dim;
  for (int s = 0; s < env.samples; ++s) {
    ALiftFunction phi = random_lift_function(env.algebra, rng, dim);
    APoint xi = sample_near_point(env.algebra, *env.geometry, rng);
    AElement rebuilt = env.algebra->zero();
    for (const DecomposedTerm& term : decompose(phi, xi)) {
      rebuilt += env.algebra->basis_element(term.basis_index) * term.value;
    }
    dev = std::max(dev, max_abs_diff(rebuilt, phi.evaluate(xi)));
  }
  return dev;
}

// --------------------------------------------------------------------------
// Bracket checks

double chk_base_bracket_jacobi(const CheckEnv& env, Rng& rng) {
  double dev = 0.0;
  const int dim = env.geometry->chart.dim;
  for (int s = 0; s < env.samples; ++s) {
    VectorField theta = random_vector_field(rng, dim);
    VectorField eta = random_vector_field(rng, dim);
    VectorField zeta = random_vector_field(rng, dim);
    VectorField cyc = bracket(theta, bracket(eta, zeta)) +
                      bracket(eta, bracket(zeta, theta)) +
                      bracket(zeta, bracket(theta, eta));
    std::vector<double> p = sample_base_point(*env.geometry, rng);
    for (const Expr& component : cyc.components) {
      dev = std::max(dev, std::abs(eval(component, p)));
    }
  }
  return dev;
}

double chk_derivation_identity(const CheckEnv& env, Rng& rng) {
  double dev = 0.0;
  const int dim = env.geometry->chart.dim;
  for (int s = 0; s < env.samples; ++s) {
    VectorField theta = random_vector_field(rng, dim);
    Expr f = random_smooth_expr(rng, dim, 2);
    APoint xi = sample_near_point(env.algebra, *env.geometry, rng);
    EvalCache cache(xi, env.zero_tol);
    ALiftFunction lhs = apply_vector_field(
        lift_vector_field(env.algebra, theta), lift_function(env.algebra, f));
    ALiftFunction rhs =
        lift_function(env.algebra, directional_derivative(theta, f));
    dev = std::max(dev, dev_alf(lhs, rhs, cache));
  }
  return dev;
}

double chk_frame_delta(const CheckEnv& env, Rng& rng) {
  double dev = 0.0;
  const int dim = env.geometry->chart.dim;
  const AElement unit = env.algebra->unit();
  const AElement zero = env.algebra->zero();
  for (int s = 0; s < env.samples; ++s) {
    APoint xi = sample_near_point(env.algebra, *env.geometry, rng);
    EvalCache cache(xi, env.zero_tol);
    for (int i = 0; i < dim; ++i) {
      for (int j = 0; j < dim; ++j) {
        AElement got = apply_vector_field(frame_field(env.algebra, dim, i),
                                          lift_function(env.algebra, variable(j)))
                           .evaluate(cache);
        dev = std::max(dev, max_abs_diff(got, i == j ? unit : zero));
      }
    }
  }
  return dev;
}

double chk_prolong_leibniz(const CheckEnv& env, Rng& rng) {
  double dev = 0.0;
  const int dim = env.geometry->chart.dim;
  for (int s = 0; s < env.samples; ++s) {
    AVectorField x = random_a_vector_field(env.algebra, rng, dim);
    ALiftFunction phi = random_lift_function(env.algebra, rng, dim);
    ALiftFunction psi = random_lift_function(env.algebra, rng, dim);
    APoint xi = sample_near_point(env.algebra, *env.geometry, rng);
    EvalCache cache(xi, env.zero_tol);
    ALiftFunction lhs = apply_vector_field(x, phi * psi);
    ALiftFunction rhs = apply_vector_field(x, phi) * psi +
                        phi * apply_vector_field(x, psi);
    dev = std::max(dev, dev_alf(lhs, rhs, cache));
  }
  return dev;
}

double chk_lift_additive(const CheckEnv& env, Rng& rng) {
  double dev = 0.0;
  const int dim = env.geometry->chart.dim;
  for (int s = 0; s < env.samples; ++s) {
    VectorField theta1 = random_vector_field(rng, dim);
    VectorField theta2 = random_vector_field(rng, dim);
    ALiftFunction phi = random_lift_function(env.algebra, rng, dim);
    APoint xi = sample_near_point(env.algebra, *env.geometry, rng);
    EvalCache cache(xi, env.zero_tol);
    ALiftFunction lhs = apply_vector_field(
        lift_vector_field(env.algebra, theta1 + theta2), phi);
    ALiftFunction rhs =
        apply_vector_field(lift_vector_field(env.algebra, theta1), phi) +
        apply_vector_field(lift_vector_field(env.algebra, theta2), phi);
    dev = std::max(dev, dev_alf(lhs, rhs, cache));
  }
  return dev;
}

double chk_lift_module(const CheckEnv& env, Rng& rng) {
  double dev = 0.0;
  const int dim = env.geometry->chart.dim;
  for (int s = 0; s < env.samples; ++s) {
    Expr f = random_smooth_expr(rng, dim, 2);
    VectorField theta = random_vector_field(rng, dim);
    ALiftFunction phi = random_lift_function(env.algebra, rng, dim);
    APoint xi = sample_near_point(env.algebra, *env.geometry, rng);
    EvalCache cache(xi, env.zero_tol);
    ALiftFunction lhs =
        apply_vector_field(lift_vector_field(env.algebra, f * theta), phi);
    ALiftFunction rhs =
        lift_function(env.algebra, f) *
        apply_vector_field(lift_vector_field(env.algebra, theta), phi);
    dev = std::max(dev, dev_alf(lhs, rhs, cache));
  }
  return dev;
}

double chk_bracket_lift(const CheckEnv& env, Rng& rng) {
  double dev = 0.0;
  const int dim = env.geometry->chart.dim;
  for (int s = 0; s < env.samples; ++s) {
    VectorField theta = random_vector_field(rng, dim);
    VectorField eta = random_vector_field(rng, dim);
    APoint xi = sample_near_point(env.algebra, *env.geometry, rng);
    EvalCache cache(xi, env.zero_tol);
    AVectorField lhs = bracket(lift_vector_field(env.algebra, theta),
                               lift_vector_field(env.algebra, eta));
    AVectorField rhs = lift_vector_field(env.algebra, bracket(theta, eta));
    dev = std::max(dev, dev_field(lhs, rhs, cache));
  }
  return dev;
}

double chk_bracket_skew(const CheckEnv& env, Rng& rng) {
  double dev = 0.0;
  const int dim = env.geometry->chart.dim;
  for (int s = 0; s < env.samples; ++s) {
    AVectorField x = random_a_vector_field(env.algebra, rng, dim);
    AVectorField y = random_a_vector_field(env.algebra, rng, dim);
    APoint xi = sample_near_point(env.algebra, *env.geometry, rng);
    EvalCache cache(xi, env.zero_tol);
    dev = std::max(dev, norm_field(bracket(x, x), cache));
    dev = std::max(dev, dev_field(bracket(x, y), -bracket(y, x), cache));
  }
  return dev;
}

double chk_bracket_a_bilinear(const CheckEnv& env, Rng& rng) {
  double dev = 0.0;
  const int dim = env.geometry->chart.dim;
  for (int s = 0; s < env.samples; ++s) {
    AElement a = random_a_element(env.algebra, rng);
    AVectorField x = random_a_vector_field(env.algebra, rng, dim);
    AVectorField y = random_a_vector_field(env.algebra, rng, dim);
    APoint xi = sample_near_point(env.algebra, *env.geometry, rng);
    EvalCache cache(xi, env.zero_tol);
    AVectorField scaled = a * bracket(x, y);
    dev = std::max(dev, dev_field(bracket(a * x, y), scaled, cache));
    dev = std::max(dev, dev_field(bracket(x, a * y), scaled, cache));
  }
  return dev;
}

double chk_prolong_bracket_jacobi(const CheckEnv& env, Rng& rng) {
  double dev = 0.0;
  const int dim = env.geometry->chart.dim;
  for (int s = 0; s < env.samples; ++s) {
    AVectorField x = random_a_vector_field(env.algebra, rng, dim);
    AVectorField y = random_a_vector_field(env.algebra, rng, dim);
    AVectorField z = random_a_vector_field(env.algebra, rng, dim);
    APoint xi = sample_near_point(env.algebra, *env.geometry, rng);
    EvalCache cache(xi, env.zero_tol);
    AVectorField cyc = bracket(x, bracket(y, z)) + bracket(y, bracket(z, x)) +
                       bracket(z, bracket(x, y));
    dev = std::max(dev, norm_field(cyc, cache));
  }
  return dev;
}

// --------------------------------------------------------------------------
// Connection checks

double chk_lc_symmetric(const CheckEnv& env, Rng& rng) {
  const Connection& conn = env.geometry->connection;
  const int dim = conn.dim();
  bool structural = true;
  for (int k = 0; k < dim && structural; ++k) {
    for (int i = 0; i < dim && structural; ++i) {
      for (int j = i + 1; j < dim && structural; ++j) {
        structural = conn.gamma(k, i, j) == conn.gamma(k, j, i);
      }
    }
  }
  if (structural) {
    return 0.0;
  }
  double dev = 0.0;
  for (int s = 0; s < env.samples; ++s) {
    std::vector<double> p = sample_base_point(*env.geometry, rng);
    for (int k = 0; k < dim; ++k) {
      for (int i = 0; i < dim; ++i) {
        for (int j = i + 1; j < dim; ++j) {
          dev = std::max(dev, std::abs(eval(conn.gamma(k, i, j), p) -
                                       eval(conn.gamma(k, j, i), p)));
        }
      }
    }
  }
  return dev;
}

double chk_base_covariant_leibniz(const CheckEnv& env, Rng& rng) {
  double dev = 0.0;
  const int dim = env.geometry->chart.dim;
  const Connection& conn = env.geometry->connection;
  for (int s = 0; s < env.samples; ++s) {
    VectorField theta = random_vector_field(rng, dim);
    VectorField eta = random_vector_field(rng, dim);
    Expr f = random_smooth_expr(rng, dim, 2);
    VectorField lhs = covariant_derivative(conn, theta, f * eta);
    VectorField rhs = directional_derivative(theta, f) * eta +
                      f * covariant_derivative(conn, theta, eta);
    std::vector<double> p = sample_base_point(*env.geometry, rng);
    for (int k = 0; k < dim; ++k) {
      dev = std::max(dev, std::abs(eval(lhs.components[k], p) -
                                   eval(rhs.components[k], p)));
    }
  }
  return dev;
}

double chk_base_metric_compat(const CheckEnv& env, Rng& rng) {
  double dev = 0.0;
  const int dim = env.geometry->chart.dim;
  for (int s = 0; s < env.samples; ++s) {
    VectorField theta = random_vector_field(rng, dim);
    VectorField mu1 = random_vector_field(rng, dim);
    VectorField mu2 = random_vector_field(rng, dim);
    Expr defect = nabla_g(env.geometry->connection, env.geometry->metric,
                          theta, mu1, mu2);
    std::vector<double> p = sample_base_point(*env.geometry, rng);
    dev = std::max(dev, std::abs(eval(defect, p)));
  }
  return dev;
}

double chk_nabla_lift(const CheckEnv& env, Rng& rng) {
  double dev = 0.0;
  const int dim = env.geometry->chart.dim;
  const Connection& conn = env.geometry->connection;
  for (int s = 0; s < env.samples; ++s) {
    VectorField theta = random_vector_field(rng, dim);
    VectorField eta = random_vector_field(rng, dim);
    APoint xi = sample_near_point(env.algebra, *env.geometry, rng);
    EvalCache cache(xi, env.zero_tol);
    AVectorField lhs =
        covariant_derivative(conn, lift_vector_field(env.algebra, theta),
                             lift_vector_field(env.algebra, eta));
    AVectorField rhs = lift_vector_field(
        env.algebra, covariant_derivative(conn, theta, eta));
    dev = std::max(dev, dev_field(lhs, rhs, cache));
  }
  return dev;
}

double chk_nabla_fun_linear(const CheckEnv& env, Rng& rng) {
  double dev = 0.0;
  const int dim = env.geometry->chart.dim;
  const Connection& conn = env.geometry->connection;
  for (int s = 0; s < env.samples; ++s) {
    ALiftFunction phi = random_lift_function(env.algebra, rng, dim);
    AVectorField x = random_a_vector_field(env.algebra, rng, dim);
    AVectorField y = random_a_vector_field(env.algebra, rng, dim);
    APoint xi = sample_near_point(env.algebra, *env.geometry, rng);
    EvalCache cache(xi, env.zero_tol);
    AVectorField lhs = covariant_derivative(conn, phi * x, y);
    AVectorField rhs = phi * covariant_derivative(conn, x, y);
    dev = std::max(dev, dev_field(lhs, rhs, cache));
  }
  return dev;
}

double chk_nabla_leibniz(const CheckEnv& env, Rng& rng) {
  double dev = 0.0;
  const int dim = env.geometry->chart.dim;
  const Connection& conn = env.geometry->connection;
  for (int s = 0; s < env.samples; ++s) {
    ALiftFunction phi = random_lift_function(env.algebra, rng, dim);
    AVectorField x = random_a_vector_field(env.algebra, rng, dim);
    AVectorField y = random_a_vector_field(env.algebra, rng, dim);
    APoint xi = sample_near_point(env.algebra, *env.geometry, rng);
    EvalCache cache(xi, env.zero_tol);
    AVectorField lhs = covariant_derivative(conn, x, phi * y);
    AVectorField rhs = apply_vector_field(x, phi) * y +
                       phi * covariant_derivative(conn, x, y);
    dev = std::max(dev, dev_field(lhs, rhs, cache));
  }
  return dev;
}

// --------------------------------------------------------------------------
// Torsion checks

double chk_base_torsion_zero(const CheckEnv& env, Rng& rng) {
  double dev = 0.0;
  const int dim = env.geometry->chart.dim;
  for (int s = 0; s < env.samples; ++s) {
    VectorField theta = random_vector_field(rng, dim);
    VectorField eta = random_vector_field(rng, dim);
    VectorField t = torsion(env.geometry->connection, theta, eta);
    std::vector<double> p = sample_base_point(*env.geometry, rng);
    for (const Expr& component : t.components) {
      dev = std::max(dev, std::abs(eval(component, p)));
    }
  }
  return dev;
}

double chk_base_torsion_tensorial(const CheckEnv& env, Rng& rng) {
  double dev = 0.0;
  const int dim = env.geometry->chart.dim;
  const Connection& conn = env.geometry->connection;
  for (int s = 0; s < env.samples; ++s) {
    Expr f = random_smooth_expr(rng, dim, 2);
    VectorField theta = random_vector_field(rng, dim);
    VectorField eta = random_vector_field(rng, dim);
    VectorField scaled = torsion(conn, f * theta, eta);
    VectorField expected = f * torsion(conn, theta, eta);
    VectorField skew = torsion(conn, theta, eta) + torsion(conn, eta, theta);
    std::vector<double> p = sample_base_point(*env.geometry, rng);
    for (int k = 0; k < dim; ++k) {
      dev = std::max(dev, std::abs(eval(scaled.components[k], p) -
                                   eval(expected.components[k], p)));
      dev = std::max(dev, std::abs(eval(skew.components[k], p)));
    }
  }
  return dev;
}

double chk_torsion_lift(const CheckEnv& env, Rng& rng) {
  double dev = 0.0;
  const int dim = env.geometry->chart.dim;
  const Connection& conn = env.geometry->connection;
  for (int s = 0; s < env.samples; ++s) {
    VectorField theta = random_vector_field(rng, dim);
    VectorField eta = random_vector_field(rng, dim);
    APoint xi = sample_near_point(env.algebra, *env.geometry, rng);
    EvalCache cache(xi, env.zero_tol);
    AVectorField lhs = torsion(conn, lift_vector_field(env.algebra, theta),
                               lift_vector_field(env.algebra, eta));
    AVectorField rhs =
        lift_vector_field(env.algebra, torsion(conn, theta, eta));
    dev = std::max(dev, dev_field(lhs, rhs, cache));
  }
  return dev;
}

double chk_torsion_free_prolonged(const CheckEnv& env, Rng& rng) {
  double dev = 0.0;
  const int dim = env.geometry->chart.dim;
  for (int s = 0; s < env.samples; ++s) {
    AVectorField x = random_a_vector_field(env.algebra, rng, dim);
    AVectorField y = random_a_vector_field(env.algebra, rng, dim);
    APoint xi = sample_near_point(env.algebra, *env.geometry, rng);
    EvalCache cache(xi, env.zero_tol);
    dev = std::max(
        dev, norm_field(torsion(env.geometry->connection, x, y), cache));
  }
  return dev;
}

double chk_torsion_skew(const CheckEnv& env, Rng& rng) {
  double dev = 0.0;
  const int dim = env.geometry->chart.dim;
  const Connection& conn = env.geometry->connection;
  for (int s = 0; s < env.samples; ++s) {
    AVectorField x = random_a_vector_field(env.algebra, rng, dim);
    AVectorField y = random_a_vector_field(env.algebra, rng, dim);
    APoint xi = sample_near_point(env.algebra, *env.geometry, rng);
    EvalCache cache(xi, env.zero_tol);
    dev = std::max(dev, norm_field(torsion(conn, x, x), cache));
    dev = std::max(dev,
                   dev_field(torsion(conn, x, y), -torsion(conn, y, x), cache));
  }
  return dev;
}

double chk_torsion_tensorial(const CheckEnv& env, Rng& rng) {
  double dev = 0.0;
  const int dim = env.geometry->chart.dim;
  const Connection& conn = env.geometry->connection;
  for (int s = 0; s < env.samples; ++s) {
    ALiftFunction phi = random_lift_function(env.algebra, rng, dim);
    AVectorField x = random_a_vector_field(env.algebra, rng, dim);
    AVectorField y = random_a_vector_field(env.algebra, rng, dim);
    APoint xi = sample_near_point(env.algebra, *env.geometry, rng);
    EvalCache cache(xi, env.zero_tol);
    dev = std::max(dev, dev_field(torsion(conn, x, phi * y),
                                  phi * torsion(conn, x, y), cache));
  }
  return dev;
}

// --------------------------------------------------------------------------
// Metric checks

double chk_metric_lift(const CheckEnv& env, Rng& rng) {
  double dev = 0.0;
  const int dim = env.geometry->chart.dim;
  const Metric& g = env.geometry->metric;
  for (int s = 0; s < env.samples; ++s) {
    VectorField theta = random_vector_field(rng, dim);
    VectorField eta = random_vector_field(rng, dim);
    APoint xi = sample_near_point(env.algebra, *env.geometry, rng);
    EvalCache cache(xi, env.zero_tol);
    ALiftFunction lhs = metric_apply(g, lift_vector_field(env.algebra, theta),
                                     lift_vector_field(env.algebra, eta));
    ALiftFunction rhs =
        lift_function(env.algebra, metric_apply(g, theta, eta));
    dev = std::max(dev, dev_alf(lhs, rhs, cache));
  }
  return dev;
}

double chk_metric_a_bilinear(const CheckEnv& env, Rng& rng) {
  double dev = 0.0;
  const int dim = env.geometry->chart.dim;
  const Metric& g = env.geometry->metric;
  for (int s = 0; s < env.samples; ++s) {
    AElement a = random_a_element(env.algebra, rng);
    AElement b = random_a_element(env.algebra, rng);
    VectorField theta = random_vector_field(rng, dim);
    VectorField eta = random_vector_field(rng, dim);
    APoint xi = sample_near_point(env.algebra, *env.geometry, rng);
    EvalCache cache(xi, env.zero_tol);
    ALiftFunction lhs =
        metric_apply(g, a * lift_vector_field(env.algebra, theta),
                     b * lift_vector_field(env.algebra, eta));
    ALiftFunction rhs =
        (a * b) * lift_function(env.algebra, metric_apply(g, theta, eta));
    dev = std::max(dev, dev_alf(lhs, rhs, cache));
  }
  return dev;
}

double chk_metric_symmetric(const CheckEnv& env, Rng& rng) {
  double dev = 0.0;
  const int dim = env.geometry->chart.dim;
  const Metric& g = env.geometry->metric;
  for (int s = 0; s < env.samples; ++s) {
    AVectorField x = random_a_vector_field(env.algebra, rng, dim);
    AVectorField y = random_a_vector_field(env.algebra, rng, dim);
    APoint xi = sample_near_point(env.algebra, *env.geometry, rng);
    EvalCache cache(xi, env.zero_tol);
    dev = std::max(dev,
                   dev_alf(metric_apply(g, x, y), metric_apply(g, y, x), cache));
  }
  return dev;
}

double chk_metric_fun_bilinear(const CheckEnv& env, Rng& rng) {
  double dev = 0.0;
  const int dim = env.geometry->chart.dim;
  const Metric& g = env.geometry->metric;
  for (int s = 0; s < env.samples; ++s) {
    ALiftFunction phi = random_lift_function(env.algebra, rng, dim);
    AVectorField x = random_a_vector_field(env.algebra, rng, dim);
    AVectorField y = random_a_vector_field(env.algebra, rng, dim);
    APoint xi = sample_near_point(env.algebra, *env.geometry, rng);
    EvalCache cache(xi, env.zero_tol);
    dev = std::max(dev, dev_alf(metric_apply(g, phi * x, y),
                                phi * metric_apply(g, x, y), cache));
  }
  return dev;
}

double chk_gram_invertible(const CheckEnv& env, Rng& rng) {
  double dev = 0.0;
  const int dim = env.geometry->chart.dim;
  const Metric& g = env.geometry->metric;
  const AElement unit = env.algebra->unit();
  const AElement zero = env.algebra->zero();
  for (int s = 0; s < env.samples; ++s) {
    APoint xi = sample_near_point(env.algebra, *env.geometry, rng);
    std::vector<std::vector<AElement>> ginv;
    try {
      ginv = gram_inverse(g, xi, env.zero_tol);
    } catch (const NonInvertibleError&) {
      // Sentinel deviation: the Gram matrix should be invertible at every
      // in-domain point of a pseudo-Riemannian chart.
      dev = std::max(dev, 1.0);
      continue;
    }
    EvalCache cache(xi, env.zero_tol);
    for (int i = 0; i < dim; ++i) {
      for (int j = 0; j < dim; ++j) {
        AElement entry = env.algebra->zero();
        for (int l = 0; l < dim; ++l) {
          entry += cache.eval(g.at(i, l)) * ginv[l][j];
        }
        dev = std::max(dev, max_abs_diff(entry, i == j ? unit : zero));
      }
    }
  }
  return dev;
}

double chk_nabla_g_zero(const CheckEnv& env, Rng& rng) {
  double dev = 0.0;
  const int dim = env.geometry->chart.dim;
  for (int s = 0; s < env.samples; ++s) {
    AVectorField x = random_a_vector_field(env.algebra, rng, dim);
    AVectorField y = random_a_vector_field(env.algebra, rng, dim);
    AVectorField z = random_a_vector_field(env.algebra, rng, dim);
    APoint xi = sample_near_point(env.algebra, *env.geometry, rng);
    EvalCache cache(xi, env.zero_tol);
    dev = std::max(dev,
                   norm_alf(nabla_g(env.geometry->connection,
                                    env.geometry->metric, x, y, z),
                            cache));
  }
  return dev;
}

double chk_nabla_g_lift(const CheckEnv& env, Rng& rng) {
  double dev = 0.0;
  const int dim = env.geometry->chart.dim;
  const Connection& conn = env.geometry->connection;
  const Metric& g = env.geometry->metric;
  for (int s = 0; s < env.samples; ++s) {
    VectorField theta = random_vector_field(rng, dim);
    VectorField mu1 = random_vector_field(rng, dim);
    VectorField mu2 = random_vector_field(rng, dim);
    APoint xi = sample_near_point(env.algebra, *env.geometry, rng);
    EvalCache cache(xi, env.zero_tol);
    ALiftFunction lhs =
        nabla_g(conn, g, lift_vector_field(env.algebra, theta),
                lift_vector_field(env.algebra, mu1),
                lift_vector_field(env.algebra, mu2));
    ALiftFunction rhs =
        lift_function(env.algebra, nabla_g(conn, g, theta, mu1, mu2));
    dev = std::max(dev, dev_alf(lhs, rhs, cache));
  }
  return dev;
}

double chk_nabla_g_tensorial(const CheckEnv& env, Rng& rng) {
  double dev = 0.0;
  const int dim = env.geometry->chart.dim;
  const Connection& conn = env.geometry->connection;
  const Metric& g = env.geometry->metric;
  for (int s = 0; s < env.samples; ++s) {
    ALiftFunction phi = random_lift_function(env.algebra, rng, dim);
    AVectorField x = random_a_vector_field(env.algebra, rng, dim);
    AVectorField y = random_a_vector_field(env.algebra, rng, dim);
    AVectorField z = random_a_vector_field(env.algebra, rng, dim);
    APoint xi = sample_near_point(env.algebra, *env.geometry, rng);
    EvalCache cache(xi, env.zero_tol);
    dev = std::max(dev, dev_alf(nabla_g(conn, g, x, phi * y, z),
                                phi * nabla_g(conn, g, x, y, z), cache));
  }
  return dev;
}

// --------------------------------------------------------------------------
// Catalog

enum class TolKind { Exact, Pinned12, Config, PinnedFd };

struct CheckDef {
  const char* name;
  const char* anchor;
  SuiteId suite;
  TolKind tol;
  double (*fn)(const CheckEnv&, Rng&);
};

const std::vector<CheckDef>& catalog() {
  static const std::vector<CheckDef> defs = {
      {"algebra.structure_exhaustive",
       "basis products re-derived; unit, commutativity, associativity over all triples",
       SuiteId::Algebra, TolKind::Exact, chk_structure},
      {"algebra.ring_axioms",
       "u*v = v*u, (u*v)*w = u*(v*w), u*(v+w) = u*v + u*w",
       SuiteId::Algebra, TolKind::Pinned12, chk_ring_axioms},
      {"algebra.augment_hom",
       "aug(u*v) = aug(u)*aug(v), aug(u + s*v) = aug(u) + s*aug(v)",
       SuiteId::Algebra, TolKind::Exact, chk_augment_hom},
      {"algebra.nilpotent_power", "aug(u) = 0 implies u^(k+1) = 0",
       SuiteId::Algebra, TolKind::Exact, chk_nilpotent_power},
      {"algebra.invert_neumann",
       "u * u^-1 = 1 via the truncated series (1/c) sum_j (-n/c)^j",
       SuiteId::Algebra, TolKind::Pinned12, chk_invert_neumann},
      {"algebra.component_reconstruct",
       "u = sum_alpha u_alpha a_alpha over the monomial basis",
       SuiteId::Algebra, TolKind::Exact, chk_component_reconstruct},

      {"lift.coordinate", "x_j^A(xi) = xi_j", SuiteId::Lift, TolKind::Exact,
       chk_lift_coordinate},
      {"lift.hom_add", "(f+g)^A = f^A + g^A", SuiteId::Lift, TolKind::Config,
       chk_hom_add},
      {"lift.hom_mul", "(f*g)^A = f^A * g^A", SuiteId::Lift, TolKind::Config,
       chk_hom_mul},
      {"lift.hom_scale", "(s*f)^A = s * f^A", SuiteId::Lift, TolKind::Exact,
       chk_hom_scale},
      {"lift.taylor_agreement",
       "tree interpretation over A = truncated Taylor expansion at the base point",
       SuiteId::Lift, TolKind::Config, chk_taylor_agreement},
      {"lift.partial_naturality", "(d_i f)^A = d/dx_i^A f^A", SuiteId::Lift,
       TolKind::Exact, chk_partial_naturality},
      {"lift.diff_finite_difference",
       "symbolic d_i f matches central differences", SuiteId::Lift,
       TolKind::PinnedFd, chk_diff_fd},
      {"lift.decompose_reconstruct",
       "phi(xi) = sum_alpha a_alpha * <a*_alpha, phi(xi)>", SuiteId::Lift,
       TolKind::Exact, chk_decompose_reconstruct},

      {"base.bracket_jacobi",
       "[theta,[eta,zeta]] + [eta,[zeta,theta]] + [zeta,[theta,eta]] = 0",
       SuiteId::Bracket, TolKind::Config, chk_base_bracket_jacobi},
      {"prolong.derivation_identity", "theta^A(f^A) = [theta(f)]^A",
       SuiteId::Bracket, TolKind::Config, chk_derivation_identity},
      {"prolong.frame_delta", "d/dx_i^A (x_j^A) = delta_ij", SuiteId::Bracket,
       TolKind::Exact, chk_frame_delta},
      {"prolong.leibniz", "X(phi*psi) = X(phi)*psi + phi*X(psi)",
       SuiteId::Bracket, TolKind::Config, chk_prolong_leibniz},
      {"prolong.lift_additive", "(theta1+theta2)^A = theta1^A + theta2^A",
       SuiteId::Bracket, TolKind::Config, chk_lift_additive},
      {"prolong.lift_module", "(f*theta)^A = f^A * theta^A", SuiteId::Bracket,
       TolKind::Config, chk_lift_module},
      {"prolong.bracket_lift", "[theta1^A, theta2^A] = [theta1, theta2]^A",
       SuiteId::Bracket, TolKind::Config, chk_bracket_lift},
      {"prolong.bracket_skew", "[X,X] = 0, [X,Y] = -[Y,X]", SuiteId::Bracket,
       TolKind::Config, chk_bracket_skew},
      {"prolong.bracket_a_bilinear", "[a*X,Y] = a*[X,Y] = [X,a*Y]",
       SuiteId::Bracket, TolKind::Config, chk_bracket_a_bilinear},
      {"prolong.bracket_jacobi",
       "[X,[Y,Z]] + [Y,[Z,X]] + [Z,[X,Y]] = 0", SuiteId::Bracket,
       TolKind::Config, chk_prolong_bracket_jacobi},

      {"base.levi_civita_symmetric", "Gamma^k_ij = Gamma^k_ji",
       SuiteId::Connection, TolKind::Config, chk_lc_symmetric},
      {"base.covariant_leibniz",
       "nabla_theta(f*eta) = theta(f)*eta + f*nabla_theta eta",
       SuiteId::Connection, TolKind::Config, chk_base_covariant_leibniz},
      {"base.metric_compat",
       "theta[g(mu1,mu2)] = g(nabla_theta mu1, mu2) + g(mu1, nabla_theta mu2)",
       SuiteId::Connection, TolKind::Config, chk_base_metric_compat},
      {"prolong.nabla_lift", "nabla_{theta^A} eta^A = (nabla_theta eta)^A",
       SuiteId::Connection, TolKind::Config, chk_nabla_lift},
      {"prolong.nabla_fun_linear", "nabla_{phi*X} Y = phi * nabla_X Y",
       SuiteId::Connection, TolKind::Config, chk_nabla_fun_linear},
      {"prolong.nabla_leibniz",
       "nabla_X(phi*Y) = X(phi)*Y + phi*nabla_X Y", SuiteId::Connection,
       TolKind::Config, chk_nabla_leibniz},

      {"base.torsion_zero", "T(theta,eta) = 0 for the metric connection",
       SuiteId::Torsion, TolKind::Config, chk_base_torsion_zero},
      {"base.torsion_tensorial",
       "T(f*theta,eta) = f*T(theta,eta), T(theta,eta) = -T(eta,theta)",
       SuiteId::Torsion, TolKind::Config, chk_base_torsion_tensorial},
      {"prolong.torsion_lift", "T(theta^A, eta^A) = [T(theta,eta)]^A",
       SuiteId::Torsion, TolKind::Config, chk_torsion_lift},
      {"prolong.torsion_free",
       "T = 0 downstairs implies T(X,Y) = 0 for all prolonged fields",
       SuiteId::Torsion, TolKind::Config, chk_torsion_free_prolonged},
      {"prolong.torsion_skew", "T(X,X) = 0, T(X,Y) = -T(Y,X)",
       SuiteId::Torsion, TolKind::Config, chk_torsion_skew},
      {"prolong.torsion_tensorial", "T(X, phi*Y) = phi*T(X,Y)",
       SuiteId::Torsion, TolKind::Config, chk_torsion_tensorial},

      {"prolong.metric_lift", "g^A(theta^A, eta^A) = [g(theta,eta)]^A",
       SuiteId::Metric, TolKind::Config, chk_metric_lift},
      {"prolong.metric_a_bilinear",
       "g^A(a*theta^A, b*eta^A) = (a*b)*[g(theta,eta)]^A", SuiteId::Metric,
       TolKind::Config, chk_metric_a_bilinear},
      {"prolong.metric_symmetric", "g^A(X,Y) = g^A(Y,X)", SuiteId::Metric,
       TolKind::Config, chk_metric_symmetric},
      {"prolong.metric_fun_bilinear", "g^A(phi*X, Y) = phi*g^A(X,Y)",
       SuiteId::Metric, TolKind::Config, chk_metric_fun_bilinear},
      {"prolong.gram_invertible", "G * G^-1 = I over A at in-domain points",
       SuiteId::Metric, TolKind::Config, chk_gram_invertible},
      {"prolong.nabla_g_zero", "nabla_X g^A = 0 for the metric connection",
       SuiteId::Metric, TolKind::Config, chk_nabla_g_zero},
      {"prolong.nabla_g_lift",
       "(nabla_{theta^A} g^A)(mu1^A, mu2^A) = [(nabla_theta g)(mu1,mu2)]^A",
       SuiteId::Metric, TolKind::Config, chk_nabla_g_lift},
      {"prolong.nabla_g_tensorial",
       "(nabla_X g^A)(phi*Y, Z) = phi*(nabla_X g^A)(Y,Z)", SuiteId::Metric,
       TolKind::Config, chk_nabla_g_tensorial},
  };
  return defs;
}

double resolve_tol(TolKind kind, double config_tol) {
  switch (kind) {
  case TolKind::Exact: return 0.0;
  case TolKind::Pinned12: return 1e-12;
  case TolKind::Config: return config_tol;
  case TolKind::PinnedFd: return 1e-6;
  }
  throw Error("unreachable tolerance kind");
}

CheckResult run_def(const CheckDef& def, const CheckEnv& env,
                    bool expected_fail) {
  Rng rng(env.seed ^ fnv1a(def.name));
  CheckResult result;
  result.name = def.name;
  result.anchor = def.anchor;
  result.samples = env.samples;
  result.max_dev = def.fn(env, rng);
  result.tol = resolve_tol(def.tol, env.tol);
  result.pass = result.max_dev <= result.tol;
  result.expected_fail = expected_fail;
  return result;
}

const std::map<std::string, SuiteId>& suite_names() {
  static const std::map<std::string, SuiteId> names = {
      {"algebra", SuiteId::Algebra},       {"lift", SuiteId::Lift},
      {"bracket", SuiteId::Bracket},       {"connection", SuiteId::Connection},
      {"torsion", SuiteId::Torsion},       {"metric", SuiteId::Metric},
  };
  return names;
}

constexpr SuiteId kAllSuites[] = {SuiteId::Algebra,    SuiteId::Lift,
                                  SuiteId::Bracket,    SuiteId::Connection,
                                  SuiteId::Torsion,    SuiteId::Metric};

bool check_exists(const std::string& name) {
  for (const CheckDef& def : catalog()) {
    if (name == def.name) {
      return true;
    }
  }
  return false;
}

std::string format_sci(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.3e", value);
  return buffer;
}

} // namespace

// ---------------------------------------------------------------------------
// Config

SuiteConfig parse_config(const nlohmann::json& config,
                         std::uint64_t default_seed) {
  if (!config.is_object()) {
    throw ConfigError("config must be a JSON object");
  }
  static const std::set<std::string> known = {
      "algebra", "geometry", "suites",       "samples", "tol",
      "zero_tol", "seed",    "expected_fail", "report"};
  for (const auto& item : config.items()) {
    if (!known.count(item.key())) {
      throw ConfigError("unknown config key '" + item.key() + "'");
    }
  }

  SuiteConfig cfg;
  cfg.seed = default_seed;
  if (config.contains("algebra")) {
    cfg.algebra = config.at("algebra");
  }
  if (config.contains("geometry")) {
    cfg.geometry = config.at("geometry");
  }
  if (config.contains("suites")) {
    const nlohmann::json& suites = config.at("suites");
    if (!suites.is_array() || suites.empty()) {
      throw ConfigError("'suites' must be a non-empty array of suite names");
    }
    std::set<SuiteId> selected;
    for (const nlohmann::json& entry : suites) {
      if (!entry.is_string()) {
        throw ConfigError("suite names must be strings");
      }
      const std::string name = entry.get<std::string>();
      if (name == "all") {
        selected.insert(std::begin(kAllSuites), std::end(kAllSuites));
      } else {
        auto it = suite_names().find(name);
        if (it == suite_names().end()) {
          throw ConfigError("unknown suite '" + name + "'");
        }
        selected.insert(it->second);
      }
    }
    cfg.suites.clear();
    for (SuiteId id : kAllSuites) {
      if (selected.count(id)) {
        cfg.suites.push_back(id);
      }
    }
  }
  if (config.contains("samples")) {
    const nlohmann::json& samples = config.at("samples");
    if (!samples.is_number_integer() || samples.get<int>() < 1) {
      throw ConfigError("'samples' must be a positive integer");
    }
    cfg.samples = samples.get<int>();
  }
  if (config.contains("tol")) {
    if (!config.at("tol").is_number() || config.at("tol").get<double>() <= 0) {
      throw ConfigError("'tol' must be a positive number");
    }
    cfg.tol = config.at("tol").get<double>();
  }
  if (config.contains("zero_tol")) {
    if (!config.at("zero_tol").is_number() ||
        config.at("zero_tol").get<double>() <= 0) {
      throw ConfigError("'zero_tol' must be a positive number");
    }
    cfg.zero_tol = config.at("zero_tol").get<double>();
  }
  if (config.contains("seed")) {
    if (!config.at("seed").is_number_unsigned() &&
        !config.at("seed").is_number_integer()) {
      throw ConfigError("'seed' must be a non-negative integer");
    }
    if (config.at("seed").is_number_integer() &&
        config.at("seed").get<std::int64_t>() < 0) {
      throw ConfigError("'seed' must be a non-negative integer");
    }
    cfg.seed = config.at("seed").get<std::uint64_t>();
  }
  if (config.contains("report")) {
    if (!config.at("report").is_string()) {
      throw ConfigError("'report' must be \"text\" or \"json\"");
    }
    cfg.report = config.at("report").get<std::string>();
    if (cfg.report != "text" && cfg.report != "json") {
      throw ConfigError("'report' must be \"text\" or \"json\"");
    }
  }
  if (config.contains("expected_fail")) {
    const nlohmann::json& expected = config.at("expected_fail");
    if (!expected.is_array()) {
      throw ConfigError("'expected_fail' must be an array of check names");
    }
    std::set<std::string> names;
    for (const nlohmann::json& entry : expected) {
      if (!entry.is_string()) {
        throw ConfigError("expected_fail entries must be strings");
      }
      const std::string name = entry.get<std::string>();
      if (!check_exists(name)) {
        throw ConfigError("expected_fail names unknown check '" + name + "'");
      }
      names.insert(name);
    }
    cfg.expected_fail.assign(names.begin(), names.end());
  }

  // Descriptor problems should surface at parse time, not mid-run.
  make_algebra(cfg.algebra);
  make_geometry(cfg.geometry);
  return cfg;
}

SuiteConfig parse_config_text(const std::string& text,
                              std::uint64_t default_seed) {
  nlohmann::json parsed;
  try {
    parsed = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& err) {
    throw ConfigError(std::string("config is not valid JSON: ") + err.what());
  }
  return parse_config(parsed, default_seed);
}

nlohmann::json resolved_config_json(const SuiteConfig& config) {
  nlohmann::json suites = nlohmann::json::array();
  for (SuiteId id : config.suites) {
    suites.push_back(suite_name(id));
  }
  return nlohmann::json{
      {"algebra", config.algebra},
      {"geometry", config.geometry},
      {"suites", suites},
      {"samples", config.samples},
      {"tol", config.tol},
      {"zero_tol", config.zero_tol},
      {"seed", config.seed},
      {"report", config.report},
      {"expected_fail", config.expected_fail},
  };
}

// ---------------------------------------------------------------------------
// Running

bool SuiteReport::all_ok() const {
  for (const CheckResult& check : checks) {
    if (check.pass == check.expected_fail) {
      return false;
    }
  }
  return true;
}

SuiteReport run_suites(const SuiteConfig& config) {
  AlgebraPtr algebra = make_algebra(config.algebra);
  GeometrySetup geo = make_geometry(config.geometry);
  CheckEnv env;
  env.algebra = algebra;
  env.geometry = &geo;
  env.samples = config.samples;
  env.tol = config.tol;
  env.zero_tol = config.zero_tol;
  env.seed = config.seed;

  const std::set<SuiteId> selected(config.suites.begin(), config.suites.end());
  const std::set<std::string> xfail(config.expected_fail.begin(),
                                    config.expected_fail.end());

  SuiteReport report;
  for (const CheckDef& def : catalog()) {
    if (selected.count(def.suite)) {
      report.checks.push_back(run_def(def, env, xfail.count(def.name) > 0));
    }
  }
  std::sort(report.checks.begin(), report.checks.end(),
            [](const CheckResult& a, const CheckResult& b) {
              return a.name < b.name;
            });

  nlohmann::json suites = nlohmann::json::array();
  for (SuiteId id : config.suites) {
    suites.push_back(suite_name(id));
  }
  report.env = nlohmann::json{
      {"algebra", algebra_echo(config.algebra)},
      {"geometry",
       {{"name", geo.name},
        {"dim", geo.chart.dim},
        {"levi_civita", geo.connection_is_levi_civita}}},
      {"suites", suites},
      {"samples", config.samples},
      {"tol", config.tol},
      {"zero_tol", config.zero_tol},
      {"seed", config.seed},
      {"expected_fail", config.expected_fail},
  };
  return report;
}

std::vector<CheckInfo> list_checks() {
  std::vector<CheckInfo> infos;
  for (const CheckDef& def : catalog()) {
    infos.push_back(CheckInfo{def.name, def.anchor, def.suite});
  }
  return infos;
}

CheckResult run_single_check(const std::string& name, const CheckEnv& env) {
  if (env.geometry == nullptr) {
    throw ConfigError("run_single_check requires a geometry");
  }
  for (const CheckDef& def : catalog()) {
    if (name == def.name) {
      return run_def(def, env, false);
    }
  }
  throw ConfigError("unknown check '" + name + "'");
}

// ---------------------------------------------------------------------------
// Reports

std::string report_text(const SuiteReport& report) {
  std::string out;
  out += "weilgeom check report\n";
  out += "algebra:  " + report.env.at("algebra").dump() + "\n";
  out += "geometry: " + report.env.at("geometry").dump() + "\n";
  out += "samples:  " + std::to_string(report.env.at("samples").get<int>()) +
         "   seed: " +
         std::to_string(report.env.at("seed").get<std::uint64_t>()) +
         "   tol: " + format_sci(report.env.at("tol").get<double>()) +
         "   zero_tol: " +
         format_sci(report.env.at("zero_tol").get<double>()) + "\n\n";

  std::size_t name_width = 0;
  for (const CheckResult& check : report.checks) {
    name_width = std::max(name_width, check.name.size());
  }
  int passed = 0;
  int failed = 0;
  int expected_failed = 0;
  for (const CheckResult& check : report.checks) {
    const char* status = nullptr;
    if (check.pass && !check.expected_fail) {
      status = " PASS ";
      ++passed;
    } else if (!check.pass && check.expected_fail) {
      status = "XFAIL ";
      ++expected_failed;
    } else if (check.pass) {
      status = "XPASS ";
      ++failed;
    } else {
      status = " FAIL ";
      ++failed;
    }
    out += status;
    out += " " + check.name + std::string(name_width - check.name.size(), ' ');
    out += "  max_dev " + format_sci(check.max_dev);
    out += "  tol " + format_sci(check.tol);
    out += "  " + check.anchor + "\n";
  }
  out += "\n" + std::to_string(report.checks.size()) + " checks: " +
         std::to_string(passed) + " passed, " + std::to_string(failed) +
         " failed";
  if (expected_failed > 0) {
    out += ", " + std::to_string(expected_failed) + " expected failures";
  }
  out += "\noverall: ";
  out += report.all_ok() ? "PASS" : "FAIL";
  out += "\n";
  return out;
}

nlohmann::json report_json(const SuiteReport& report) {
  nlohmann::json checks = nlohmann::json::array();
  for (const CheckResult& check : report.checks) {
    checks.push_back(nlohmann::json{
        {"name", check.name},
        {"anchor", check.anchor},
        {"samples", check.samples},
        {"max_dev", check.max_dev},
        {"tol", check.tol},
        {"pass", check.pass},
        {"expected_fail", check.expected_fail},
    });
  }
  return nlohmann::json{
      {"env", report.env},
      {"checks", checks},
      {"pass", report.all_ok()},
  };
}

} // namespace weil
