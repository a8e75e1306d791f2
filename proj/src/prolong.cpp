#include "weil/prolong.hpp"

#include <cmath>

namespace weil {

namespace {

void require_same_algebra(const AlgebraPtr& a, const AlgebraPtr& b,
                          const char* what) {
  if (a.get() != b.get())
    throw Error(std::string(what) + ": operands over different algebras");
}

bool is_zero_expr(const Expr& e) {
  return e.kind() == ExprKind::Constant && e.constant_value() == 0.0;
}

} // namespace

ALiftFunction::ALiftFunction(AlgebraPtr algebra)
    : algebra_(std::move(algebra)) {
  if (!algebra_) throw Error("ALiftFunction: null algebra");
}

ALiftFunction::ALiftFunction(AlgebraPtr algebra, std::vector<ALiftTerm> terms)
    : algebra_(std::move(algebra)) {
  if (!algebra_) throw Error("ALiftFunction: null algebra");
  terms_.reserve(terms.size());
  for (auto& t : terms) {
    require_same_algebra(algebra_, t.coeff.algebra(), "ALiftFunction");
    if (t.coeff.is_zero() || is_zero_expr(t.fun)) continue;
    terms_.push_back(std::move(t));
  }
}

AElement ALiftFunction::evaluate(const APoint& xi) const {
  EvalCache cache(xi);
  return evaluate(cache);
}

AElement ALiftFunction::evaluate(EvalCache& cache) const {
  require_same_algebra(algebra_, cache.point().algebra, "evaluate");
  AElement acc = algebra_->zero();
  for (const auto& t : terms_) acc += t.coeff * cache.eval(t.fun);
  return acc;
}

ALiftFunction ALiftFunction::partial(int var) const {
  std::vector<ALiftTerm> out;
  out.reserve(terms_.size());
  for (const auto& t : terms_) out.push_back({t.coeff, diff(t.fun, var)});
  return ALiftFunction(algebra_, std::move(out));
}

ALiftFunction ALiftFunction::operator-() const {
  std::vector<ALiftTerm> out;
  out.reserve(terms_.size());
  for (const auto& t : terms_) out.push_back({-t.coeff, t.fun});
  return ALiftFunction(algebra_, std::move(out));
}

ALiftFunction& ALiftFunction::operator+=(const ALiftFunction& rhs) {
  require_same_algebra(algebra_, rhs.algebra_, "sum");
  terms_.insert(terms_.end(), rhs.terms_.begin(), rhs.terms_.end());
  return *this;
}

ALiftFunction& ALiftFunction::operator-=(const ALiftFunction& rhs) {
  require_same_algebra(algebra_, rhs.algebra_, "difference");
  for (const auto& t : rhs.terms_) terms_.push_back({-t.coeff, t.fun});
  return *this;
}

ALiftFunction operator*(const ALiftFunction& lhs, const ALiftFunction& rhs) {
  require_same_algebra(lhs.algebra_, rhs.algebra_, "product");
  std::vector<ALiftTerm> out;
  out.reserve(lhs.terms_.size() * rhs.terms_.size());
  // (c h^A)(c' h'^A) = (c c') (h h')^A: lifting is multiplicative.
  for (const auto& s : lhs.terms_)
    for (const auto& t : rhs.terms_)
      out.push_back({s.coeff * t.coeff, s.fun * t.fun});
  return ALiftFunction(lhs.algebra_, std::move(out));
}

ALiftFunction operator*(const AElement& a, const ALiftFunction& f) {
  require_same_algebra(a.algebra(), f.algebra_, "scale");
  std::vector<ALiftTerm> out;
  out.reserve(f.terms_.size());
  for (const auto& t : f.terms_) out.push_back({a * t.coeff, t.fun});
  return ALiftFunction(f.algebra_, std::move(out));
}

ALiftFunction operator*(const Expr& g, const ALiftFunction& f) {
  std::vector<ALiftTerm> out;
  out.reserve(f.terms_.size());
  for (const auto& t : f.terms_) out.push_back({t.coeff, g * t.fun});
  return ALiftFunction(f.algebra_, std::move(out));
}

ALiftFunction lift_function(const AlgebraPtr& algebra, const Expr& f) {
  std::vector<ALiftTerm> terms;
  terms.push_back({algebra->unit(), f});
  return ALiftFunction(algebra, std::move(terms));
}

AVectorField::AVectorField(AlgebraPtr algebra, std::vector<ALiftFunction> coeffs)
    : algebra_(std::move(algebra)), coeffs_(std::move(coeffs)) {
  if (!algebra_) throw Error("AVectorField: null algebra");
  if (coeffs_.empty()) throw Error("AVectorField: no coefficients");
  for (const auto& c : coeffs_)
    require_same_algebra(algebra_, c.algebra(), "AVectorField");
}

const ALiftFunction& AVectorField::coeff(int i) const {
  if (i < 0 || i >= dim()) throw Error("AVectorField: index out of range");
  return coeffs_[static_cast<std::size_t>(i)];
}

AVectorField AVectorField::operator-() const {
  std::vector<ALiftFunction> out;
  out.reserve(coeffs_.size());
  for (const auto& c : coeffs_) out.push_back(-c);
  return AVectorField(algebra_, std::move(out));
}

AVectorField operator+(const AVectorField& a, const AVectorField& b) {
  require_same_algebra(a.algebra_, b.algebra_, "sum");
  if (a.dim() != b.dim()) throw Error("sum: dimension mismatch");
  std::vector<ALiftFunction> out;
  for (int i = 0; i < a.dim(); ++i) out.push_back(a.coeff(i) + b.coeff(i));
  return AVectorField(a.algebra_, std::move(out));
}

AVectorField operator-(const AVectorField& a, const AVectorField& b) {
  require_same_algebra(a.algebra_, b.algebra_, "difference");
  if (a.dim() != b.dim()) throw Error("difference: dimension mismatch");
  std::vector<ALiftFunction> out;
  for (int i = 0; i < a.dim(); ++i) out.push_back(a.coeff(i) - b.coeff(i));
  return AVectorField(a.algebra_, std::move(out));
}

AVectorField operator*(const AElement& a, const AVectorField& x) {
  std::vector<ALiftFunction> out;
  for (int i = 0; i < x.dim(); ++i) out.push_back(a * x.coeff(i));
  return AVectorField(x.algebra_, std::move(out));
}

AVectorField operator*(const ALiftFunction& f, const AVectorField& x) {
  std::vector<ALiftFunction> out;
  for (int i = 0; i < x.dim(); ++i) out.push_back(f * x.coeff(i));
  return AVectorField(x.algebra_, std::move(out));
}

AVectorField lift_vector_field(const AlgebraPtr& algebra,
                               const VectorField& theta) {
  std::vector<ALiftFunction> coeffs;
  coeffs.reserve(theta.components.size());
  for (const auto& c : theta.components)
    coeffs.push_back(lift_function(algebra, c));
  return AVectorField(algebra, std::move(coeffs));
}

AVectorField frame_field(const AlgebraPtr& algebra, int dim, int i) {
  if (i < 0 || i >= dim) throw Error("frame_field: index out of range");
  std::vector<ALiftFunction> coeffs;
  for (int j = 0; j < dim; ++j)
    coeffs.push_back(j == i ? lift_function(algebra, constant(1.0))
                            : ALiftFunction(algebra));
  return AVectorField(algebra, std::move(coeffs));
}

ALiftFunction apply_vector_field(const AVectorField& x,
                                 const ALiftFunction& phi) {
  require_same_algebra(x.algebra(), phi.algebra(), "apply");
  ALiftFunction acc(x.algebra());
  for (int i = 0; i < x.dim(); ++i) acc += x.coeff(i) * phi.partial(i);
  return acc;
}

AVectorField bracket(const AVectorField& x, const AVectorField& y) {
  require_same_algebra(x.algebra(), y.algebra(), "bracket");
  if (x.dim() != y.dim()) throw Error("bracket: dimension mismatch");
  std::vector<ALiftFunction> out;
  for (int k = 0; k < x.dim(); ++k)
    out.push_back(apply_vector_field(x, y.coeff(k)) -
                  apply_vector_field(y, x.coeff(k)));
  return AVectorField(x.algebra(), std::move(out));
}

AVectorField covariant_derivative(const Connection& conn, const AVectorField& x,
                                  const AVectorField& y) {
  require_same_algebra(x.algebra(), y.algebra(), "covariant derivative");
  const int n = x.dim();
  if (conn.dim() != n || y.dim() != n)
    throw Error("covariant derivative: dimension mismatch");
  std::vector<ALiftFunction> out;
  for (int k = 0; k < n; ++k) {
    ALiftFunction acc = apply_vector_field(x, y.coeff(k));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const Expr& gamma = conn.gamma(k, i, j);
        if (is_zero_expr(gamma)) continue;
        acc += gamma * (x.coeff(i) * y.coeff(j));
      }
    out.push_back(std::move(acc));
  }
  return AVectorField(x.algebra(), std::move(out));
}

AVectorField torsion(const Connection& conn, const AVectorField& x,
                     const AVectorField& y) {
  return covariant_derivative(conn, x, y) - covariant_derivative(conn, y, x) -
         bracket(x, y);
}

ALiftFunction metric_apply(const Metric& g, const AVectorField& x,
                           const AVectorField& y) {
  require_same_algebra(x.algebra(), y.algebra(), "metric apply");
  if (g.dim() != x.dim() || x.dim() != y.dim())
    throw Error("metric apply: dimension mismatch");
  ALiftFunction acc(x.algebra());
  for (int i = 0; i < g.dim(); ++i)
    for (int j = 0; j < g.dim(); ++j)
      acc += g.at(i, j) * (x.coeff(i) * y.coeff(j));
  return acc;
}

ALiftFunction nabla_g(const Connection& conn, const Metric& g,
                      const AVectorField& x, const AVectorField& y,
                      const AVectorField& z) {
  return apply_vector_field(x, metric_apply(g, y, z)) -
         metric_apply(g, covariant_derivative(conn, x, y), z) -
         metric_apply(g, y, covariant_derivative(conn, x, z));
}

namespace {

// Real Gauss-Jordan inverse with partial pivoting; n is small.
std::vector<std::vector<double>> real_inverse(std::vector<std::vector<double>> m,
                                              double zero_tol) {
  const std::size_t n = m.size();
  std::vector<std::vector<double>> inv(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1.0;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(m[r][col]) > std::abs(m[pivot][col])) pivot = r;
    if (std::abs(m[pivot][col]) <= zero_tol)
      throw NonInvertibleError("gram matrix is singular at the base point");
    std::swap(m[pivot], m[col]);
    std::swap(inv[pivot], inv[col]);
    const double d = m[col][col];
    for (std::size_t c = 0; c < n; ++c) {
      m[col][c] /= d;
      inv[col][c] /= d;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const double f = m[r][col];
      if (f == 0.0) continue;
      for (std::size_t c = 0; c < n; ++c) {
        m[r][c] -= f * m[col][c];
        inv[r][c] -= f * inv[col][c];
      }
    }
  }
  return inv;
}

using AMatrix = std::vector<std::vector<AElement>>;

AMatrix amatrix_mul(const AMatrix& a, const AMatrix& b, const AlgebraPtr& alg) {
  const std::size_t n = a.size();
  AMatrix out(n, std::vector<AElement>(n, alg->zero()));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      AElement acc = alg->zero();
      for (std::size_t l = 0; l < n; ++l) acc += a[i][l] * b[l][j];
      out[i][j] = std::move(acc);
    }
  return out;
}

} // namespace

std::vector<std::vector<AElement>> gram_inverse(const Metric& g,
                                                const APoint& xi,
                                                double zero_tol) {
  const AlgebraPtr& alg = xi.algebra;
  const std::size_t n = static_cast<std::size_t>(g.dim());
  if (g.dim() != xi.dim()) throw Error("gram_inverse: dimension mismatch");

  EvalCache cache(xi, zero_tol);
  AMatrix gram(n, std::vector<AElement>(n, alg->zero()));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      gram[i][j] = cache.eval(g.at(static_cast<int>(i), static_cast<int>(j)));

  std::vector<std::vector<double>> g0(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) g0[i][j] = gram[i][j].augment();
  const auto g0inv = real_inverse(std::move(g0), zero_tol);

  AMatrix b(n, std::vector<AElement>(n, alg->zero()));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) b[i][j] = alg->from_real(g0inv[i][j]);

  // q = -G0^-1 N with N = G - G0; every entry of q is nilpotent, so the
  // series sum_j q^j stops at the truncation order.
  AMatrix q(n, std::vector<AElement>(n, alg->zero()));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      AElement acc = alg->zero();
      for (std::size_t l = 0; l < n; ++l)
        acc += b[i][l] * nilpotent_part(gram[l][j]);
      q[i][j] = -acc;
    }

  AMatrix series(n, std::vector<AElement>(n, alg->zero()));
  for (std::size_t i = 0; i < n; ++i) series[i][i] = alg->unit();
  AMatrix power = series;
  for (int j = 1; j <= alg->truncation_order(); ++j) {
    power = amatrix_mul(power, q, alg);
    bool all_zero = true;
    for (const auto& row : power)
      for (const auto& entry : row)
        if (!entry.is_zero()) all_zero = false;
    if (all_zero) break;
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c) series[r][c] += power[r][c];
  }
  return amatrix_mul(series, b, alg);
}

std::vector<DecomposedTerm> decompose(const ALiftFunction& phi,
                                      const APoint& xi) {
  const AElement value = phi.evaluate(xi);
  std::vector<DecomposedTerm> out;
  out.reserve(value.dim());
  for (std::size_t alpha = 0; alpha < value.dim(); ++alpha)
    out.push_back({alpha, value.component(alpha)});
  return out;
}

} // namespace weil
