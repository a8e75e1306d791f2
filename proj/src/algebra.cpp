#include "weil/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace weil {
namespace {

int total_degree(const std::vector<int>& m) {
  int d = 0;
  for (int e : m) d += e;
  return d;
}

// Degree-lex: lower total degree first; within a degree, e1-heavy
// monomials first ((2,0) before (1,1) before (0,2)).
bool deg_lex_less(const std::vector<int>& a, const std::vector<int>& b) {
  const int da = total_degree(a);
  const int db = total_degree(b);
  if (da != db) return da < db;
  return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
}

bool divisible_by(const std::vector<int>& m, const std::vector<int>& rel) {
  for (std::size_t i = 0; i < m.size(); ++i)
    if (m[i] < rel[i]) return false;
  return true;
}

void enumerate_monomials(int vars, std::vector<int>& current, int from,
                         int degree_left, std::vector<std::vector<int>>& out) {
  if (from == vars) {
    out.push_back(current);
    return;
  }
  for (int e = 0; e <= degree_left; ++e) {
    current[static_cast<std::size_t>(from)] = e;
    enumerate_monomials(vars, current, from + 1, degree_left - e, out);
  }
  current[static_cast<std::size_t>(from)] = 0;
}

void enumerate_monomials_exact(int vars, std::vector<int>& current, int from,
                               int degree_left,
                               std::vector<std::vector<int>>& out) {
  if (from == vars) {
    if (degree_left == 0) out.push_back(current);
    return;
  }
  for (int e = 0; e <= degree_left; ++e) {
    current[static_cast<std::size_t>(from)] = e;
    enumerate_monomials_exact(vars, current, from + 1, degree_left - e, out);
  }
  current[static_cast<std::size_t>(from)] = 0;
}

} // namespace

WeilAlgebra::WeilAlgebra(AlgebraSpec spec) : spec_(std::move(spec)) {}

AlgebraPtr WeilAlgebra::create(const AlgebraSpec& spec) {
  if (spec.vars < 0)
    throw ConfigError("algebra: vars must be non-negative");
  if (spec.vars == 0) {
    if (spec.order != 0)
      throw ConfigError("algebra: vars = 0 requires order = 0 (the scalars)");
    if (!spec.zero_monomials.empty())
      throw ConfigError("algebra: vars = 0 admits no zero_monomials");
  } else if (spec.order < 1) {
    throw ConfigError("algebra: order must be >= 1");
  }
  for (const auto& rel : spec.zero_monomials) {
    if (static_cast<int>(rel.size()) != spec.vars)
      throw ConfigError("algebra: zero_monomial arity differs from vars");
    bool all_zero = true;
    for (int e : rel) {
      if (e < 0) throw ConfigError("algebra: negative exponent in zero_monomial");
      if (e > 0) all_zero = false;
    }
    if (all_zero)
      throw ConfigError("algebra: the unit monomial cannot be annihilated");
  }

  auto algebra = AlgebraPtr(new WeilAlgebra(spec));
  auto* mut = const_cast<WeilAlgebra*>(algebra.get());

  std::vector<std::vector<int>> all;
  std::vector<int> current(static_cast<std::size_t>(spec.vars), 0);
  enumerate_monomials(spec.vars, current, 0, spec.order, all);

  for (auto& m : all) {
    bool dead = false;
    for (const auto& rel : spec.zero_monomials) {
      if (divisible_by(m, rel)) {
        dead = true;
        break;
      }
    }
    if (!dead) mut->basis_.push_back(std::move(m));
  }
  std::sort(mut->basis_.begin(), mut->basis_.end(), deg_lex_less);

  std::map<std::vector<int>, int> index;
  for (std::size_t i = 0; i < mut->basis_.size(); ++i)
    index[mut->basis_[i]] = static_cast<int>(i);

  const std::size_t n = mut->basis_.size();
  mut->table_.assign(n * n, kAnnihilated);
  std::vector<int> prod(static_cast<std::size_t>(spec.vars));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (int v = 0; v < spec.vars; ++v)
        prod[static_cast<std::size_t>(v)] =
            mut->basis_[i][static_cast<std::size_t>(v)] +
            mut->basis_[j][static_cast<std::size_t>(v)];
      auto it = index.find(prod);
      if (it != index.end()) mut->table_[i * n + j] = it->second;
    }
  }

  algebra->verify_structure_table();
  return algebra;
}

int WeilAlgebra::monomial_index(std::span<const int> exponents) const {
  if (exponents.size() != static_cast<std::size_t>(spec_.vars))
    throw Error("monomial_index: exponent arity differs from vars");
  for (std::size_t i = 0; i < basis_.size(); ++i) {
    if (std::equal(exponents.begin(), exponents.end(), basis_[i].begin(),
                   basis_[i].end()))
      return static_cast<int>(i);
  }
  return kAnnihilated;
}

std::string WeilAlgebra::monomial_name(std::size_t alpha) const {
  if (alpha >= dim()) throw Error("monomial_name: index out of range");
  const auto& m = basis_[alpha];
  std::ostringstream os;
  bool first = true;
  for (std::size_t v = 0; v < m.size(); ++v) {
    if (m[v] == 0) continue;
    if (!first) os << "*";
    os << "e" << (v + 1);
    if (m[v] > 1) os << "^" << m[v];
    first = false;
  }
  if (first) os << "1";
  return os.str();
}

void WeilAlgebra::verify_structure_table() const {
  const std::size_t n = dim();
  if (n == 0 || total_degree(basis_[0]) != 0)
    throw Error("structure table: missing unit monomial");

  // Re-derive each entry from exponent sums.
  std::map<std::vector<int>, int> index;
  for (std::size_t i = 0; i < n; ++i) index[basis_[i]] = static_cast<int>(i);
  std::vector<int> prod(basis_[0].size());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t v = 0; v < prod.size(); ++v)
        prod[v] = basis_[i][v] + basis_[j][v];
      auto it = index.find(prod);
      const int expected = (it == index.end()) ? kAnnihilated : it->second;
      if (table_[i * n + j] != expected)
        throw Error("structure table: entry disagrees with exponent arithmetic");
    }
  }

  // times(x, l) extends the table to the annihilated element.
  auto times = [&](int x, int l) {
    if (x == kAnnihilated || l == kAnnihilated) return kAnnihilated;
    return table_[static_cast<std::size_t>(x) * n + static_cast<std::size_t>(l)];
  };
  for (std::size_t j = 0; j < n; ++j) {
    if (table_[0 * n + j] != static_cast<int>(j) ||
        table_[j * n + 0] != static_cast<int>(j))
      throw Error("structure table: unit monomial fails to act as identity");
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (table_[i * n + j] != table_[j * n + i])
        throw Error("structure table: commutativity violated");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t l = 0; l < n; ++l) {
        const int ij = table_[i * n + j];
        const int jl = table_[j * n + l];
        if (times(ij, static_cast<int>(l)) != times(static_cast<int>(i), jl))
          throw Error("structure table: associativity violated");
      }
}

AElement WeilAlgebra::zero() const {
  return AElement(shared_from_this(), std::vector<double>(dim(), 0.0));
}

AElement WeilAlgebra::unit() const { return from_real(1.0); }

AElement WeilAlgebra::from_real(double c) const {
  std::vector<double> coeffs(dim(), 0.0);
  coeffs[0] = c;
  return AElement(shared_from_this(), std::move(coeffs));
}

AElement WeilAlgebra::generator(int i) const {
  if (i < 0 || i >= spec_.vars) throw Error("generator: index out of range");
  std::vector<int> exponents(static_cast<std::size_t>(spec_.vars), 0);
  exponents[static_cast<std::size_t>(i)] = 1;
  const int idx = monomial_index(exponents);
  if (idx == kAnnihilated)
    throw Error("generator: annihilated by the ideal");
  return basis_element(static_cast<std::size_t>(idx));
}

AElement WeilAlgebra::basis_element(std::size_t alpha) const {
  if (alpha >= dim()) throw Error("basis_element: index out of range");
  std::vector<double> coeffs(dim(), 0.0);
  coeffs[alpha] = 1.0;
  return AElement(shared_from_this(), std::move(coeffs));
}

AElement WeilAlgebra::element(std::vector<double> coeffs) const {
  if (coeffs.size() != dim())
    throw Error("element: coefficient count differs from dim");
  return AElement(shared_from_this(), std::move(coeffs));
}

AElement::AElement(AlgebraPtr algebra, std::vector<double> coeffs)
    : algebra_(std::move(algebra)), coeffs_(std::move(coeffs)) {
  if (!algebra_) throw Error("AElement: null algebra");
  if (coeffs_.size() != algebra_->dim())
    throw Error("AElement: coefficient count differs from dim");
}

double AElement::component(std::size_t alpha) const {
  if (alpha >= coeffs_.size())
    throw Error("component: index out of range");
  return coeffs_[alpha];
}

bool AElement::is_zero() const {
  for (double c : coeffs_)
    if (c != 0.0) return false;
  return true;
}

double AElement::max_abs() const {
  double m = 0.0;
  for (double c : coeffs_) m = std::max(m, std::abs(c));
  return m;
}

namespace {

void require_same_algebra(const AElement& u, const AElement& v) {
  if (u.algebra().get() != v.algebra().get())
    throw Error("elements belong to different algebras");
}

} // namespace

AElement AElement::operator-() const {
  AElement out = *this;
  for (auto& c : out.coeffs_) c = -c;
  return out;
}

AElement& AElement::operator+=(const AElement& rhs) {
  require_same_algebra(*this, rhs);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += rhs.coeffs_[i];
  return *this;
}

AElement& AElement::operator-=(const AElement& rhs) {
  require_same_algebra(*this, rhs);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= rhs.coeffs_[i];
  return *this;
}

AElement& AElement::operator*=(double s) {
  for (auto& c : coeffs_) c *= s;
  return *this;
}

AElement operator*(const AElement& lhs, const AElement& rhs) {
  require_same_algebra(lhs, rhs);
  const WeilAlgebra& a = *lhs.algebra();
  const std::size_t n = a.dim();
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double ci = lhs.coeffs_[i];
    if (ci == 0.0) continue;
    for (std::size_t j = 0; j < n; ++j) {
      const double cj = rhs.coeffs_[j];
      if (cj == 0.0) continue;
      const int idx = a.product_index(i, j);
      if (idx != WeilAlgebra::kAnnihilated)
        out[static_cast<std::size_t>(idx)] += ci * cj;
    }
  }
  return AElement(lhs.algebra(), std::move(out));
}

AElement nilpotent_part(const AElement& u) {
  AElement out = u;
  return out - u.algebra()->from_real(u.augment());
}

AElement powi(const AElement& u, int m) {
  if (m < 0) throw Error("powi: negative exponent");
  AElement acc = u.algebra()->unit();
  AElement base = u;
  int e = m;
  while (e > 0) {
    if (e & 1) acc = acc * base;
    e >>= 1;
    if (e > 0) base = base * base;
  }
  return acc;
}

AElement invert(const AElement& u, double zero_tol) {
  const double c = u.augment();
  if (std::abs(c) <= zero_tol)
    throw NonInvertibleError("invert: scalar part is zero to tolerance");
  // u = c + n  =>  u^-1 = (1/c) sum_{j=0..k} (-n/c)^j, n^{k+1} = 0.
  const AElement q = u.algebra()->unit() - u * (1.0 / c);
  AElement sum = u.algebra()->unit();
  AElement power = u.algebra()->unit();
  const int k = u.algebra()->truncation_order();
  for (int j = 1; j <= k; ++j) {
    power = power * q;
    if (power.is_zero()) break;
    sum += power;
  }
  return sum * (1.0 / c);
}

double max_abs_diff(const AElement& u, const AElement& v) {
  require_same_algebra(u, v);
  double m = 0.0;
  for (std::size_t i = 0; i < u.dim(); ++i)
    m = std::max(m, std::abs(u.coeffs()[i] - v.coeffs()[i]));
  return m;
}

AlgebraPtr tensor_product(const AlgebraPtr& a, const AlgebraPtr& b) {
  if (!a || !b) throw Error("tensor_product: null algebra");
  const int ra = a->num_generators();
  const int rb = b->num_generators();
  AlgebraSpec spec;
  spec.vars = ra + rb;
  spec.order = a->truncation_order() + b->truncation_order();
  if (spec.vars == 0) spec.order = 0;

  auto pad = [&](const std::vector<int>& rel, bool left) {
    std::vector<int> out(static_cast<std::size_t>(ra + rb), 0);
    for (std::size_t i = 0; i < rel.size(); ++i)
      out[left ? i : i + static_cast<std::size_t>(ra)] = rel[i];
    return out;
  };
  for (const auto& rel : a->spec().zero_monomials)
    spec.zero_monomials.push_back(pad(rel, true));
  for (const auto& rel : b->spec().zero_monomials)
    spec.zero_monomials.push_back(pad(rel, false));

  // Each factor's degree cutoff becomes an explicit annihilator family:
  // all monomials of degree k+1 in that factor's generators.
  auto add_cutoff = [&](int vars, int order, bool left) {
    if (vars == 0) return;
    std::vector<std::vector<int>> cut;
    std::vector<int> current(static_cast<std::size_t>(vars), 0);
    enumerate_monomials_exact(vars, current, 0, order + 1, cut);
    for (const auto& rel : cut) spec.zero_monomials.push_back(pad(rel, left));
  };
  add_cutoff(ra, a->truncation_order(), true);
  add_cutoff(rb, b->truncation_order(), false);

  return WeilAlgebra::create(spec);
}

} // namespace weil
