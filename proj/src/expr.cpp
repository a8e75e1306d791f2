#include "weil/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <utility>

namespace weil {

struct ExprNode {
  ExprKind kind;
  double value = 0.0; // Constant
  int index = 0;      // Variable
  int exponent = 0;   // Pow
  Expr a;
  Expr b;
};

namespace {

const std::shared_ptr<const ExprNode>& zero_node() {
  static const auto node = std::make_shared<const ExprNode>(
      ExprNode{ExprKind::Constant, 0.0, 0, 0, Expr(nullptr), Expr(nullptr)});
  return node;
}

Expr make(ExprNode node) {
  return Expr(std::make_shared<const ExprNode>(std::move(node)));
}

bool is_const(const Expr& e, double v) {
  return e.kind() == ExprKind::Constant && e.constant_value() == v;
}

} // namespace

Expr::Expr() : node_(zero_node()) {}
Expr::Expr(std::shared_ptr<const ExprNode> node) : node_(std::move(node)) {}

ExprKind Expr::kind() const { return node_->kind; }
double Expr::constant_value() const { return node_->value; }
int Expr::var_index() const { return node_->index; }
int Expr::exponent() const { return node_->exponent; }
const Expr& Expr::child_a() const { return node_->a; }
const Expr& Expr::child_b() const { return node_->b; }

int Expr::num_variables() const {
  switch (kind()) {
    case ExprKind::Constant:
      return 0;
    case ExprKind::Variable:
      return var_index() + 1;
    case ExprKind::Neg:
    case ExprKind::Pow:
    case ExprKind::Sin:
    case ExprKind::Cos:
    case ExprKind::Exp:
    case ExprKind::Log:
    case ExprKind::Sqrt:
      return child_a().num_variables();
    default:
      return std::max(child_a().num_variables(), child_b().num_variables());
  }
}

bool operator==(const Expr& a, const Expr& b) {
  if (a.node() == b.node()) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case ExprKind::Constant:
      return a.constant_value() == b.constant_value();
    case ExprKind::Variable:
      return a.var_index() == b.var_index();
    case ExprKind::Neg:
    case ExprKind::Sin:
    case ExprKind::Cos:
    case ExprKind::Exp:
    case ExprKind::Log:
    case ExprKind::Sqrt:
      return a.child_a() == b.child_a();
    case ExprKind::Pow:
      return a.exponent() == b.exponent() && a.child_a() == b.child_a();
    default:
      return a.child_a() == b.child_a() && a.child_b() == b.child_b();
  }
}

Expr constant(double c) {
  if (c == 0.0) return Expr(zero_node());
  return make({ExprKind::Constant, c, 0, 0, Expr(nullptr), Expr(nullptr)});
}

Expr variable(int index) {
  if (index < 0) throw Error("variable: negative index");
  return make({ExprKind::Variable, 0.0, index, 0, Expr(nullptr), Expr(nullptr)});
}

Expr operator+(const Expr& a, const Expr& b) {
  if (a.kind() == ExprKind::Constant && b.kind() == ExprKind::Constant)
    return constant(a.constant_value() + b.constant_value());
  if (is_const(a, 0.0)) return b;
  if (is_const(b, 0.0)) return a;
  return make({ExprKind::Add, 0.0, 0, 0, a, b});
}

Expr operator-(const Expr& a, const Expr& b) {
  if (a.kind() == ExprKind::Constant && b.kind() == ExprKind::Constant)
    return constant(a.constant_value() - b.constant_value());
  if (is_const(b, 0.0)) return a;
  if (is_const(a, 0.0)) return -b;
  return make({ExprKind::Sub, 0.0, 0, 0, a, b});
}

Expr operator*(const Expr& a, const Expr& b) {
  if (a.kind() == ExprKind::Constant && b.kind() == ExprKind::Constant)
    return constant(a.constant_value() * b.constant_value());
  if (is_const(a, 0.0) || is_const(b, 0.0)) return constant(0.0);
  if (is_const(a, 1.0)) return b;
  if (is_const(b, 1.0)) return a;
  return make({ExprKind::Mul, 0.0, 0, 0, a, b});
}

Expr operator/(const Expr& a, const Expr& b) {
  // Constant quotients fold only when the divisor is nonzero; a zero
  // divisor must keep surfacing as a DomainError at evaluation time.
  if (a.kind() == ExprKind::Constant && b.kind() == ExprKind::Constant &&
      b.constant_value() != 0.0)
    return constant(a.constant_value() / b.constant_value());
  if (is_const(b, 1.0)) return a;
  return make({ExprKind::Div, 0.0, 0, 0, a, b});
}

Expr operator-(const Expr& a) {
  if (a.kind() == ExprKind::Constant) return constant(-a.constant_value());
  if (a.kind() == ExprKind::Neg) return a.child_a();
  return make({ExprKind::Neg, 0.0, 0, 0, a, Expr(nullptr)});
}

Expr pow(const Expr& base, int exponent) {
  if (exponent == 0) return constant(1.0);
  if (exponent == 1) return base;
  if (base.kind() == ExprKind::Constant) {
    const double c = base.constant_value();
    if (c != 0.0 || exponent > 0) {
      double acc = 1.0;
      const double b = exponent > 0 ? c : 1.0 / c;
      for (int i = 0; i < std::abs(exponent); ++i) acc *= b;
      return constant(acc);
    }
  }
  return make({ExprKind::Pow, 0.0, 0, exponent, base, Expr(nullptr)});
}

namespace {

Expr fold_unary(ExprKind kind, const Expr& a) {
  if (a.kind() == ExprKind::Constant) {
    const double c = a.constant_value();
    switch (kind) {
      case ExprKind::Sin:
        return constant(std::sin(c));
      case ExprKind::Cos:
        return constant(std::cos(c));
      case ExprKind::Exp:
        return constant(std::exp(c));
      case ExprKind::Log:
        if (c > 0.0) return constant(std::log(c));
        break; // out of domain: keep the node, fail at eval
      case ExprKind::Sqrt:
        if (c >= 0.0) return constant(std::sqrt(c));
        break;
      default:
        break;
    }
  }
  return make({kind, 0.0, 0, 0, a, Expr(nullptr)});
}

} // namespace

Expr sin(const Expr& a) { return fold_unary(ExprKind::Sin, a); }
Expr cos(const Expr& a) { return fold_unary(ExprKind::Cos, a); }
Expr exp(const Expr& a) { return fold_unary(ExprKind::Exp, a); }
Expr log(const Expr& a) { return fold_unary(ExprKind::Log, a); }
Expr sqrt(const Expr& a) { return fold_unary(ExprKind::Sqrt, a); }

double eval(const Expr& f, std::span<const double> point) {
  switch (f.kind()) {
    case ExprKind::Constant:
      return f.constant_value();
    case ExprKind::Variable: {
      const int i = f.var_index();
      if (i >= static_cast<int>(point.size()))
        throw Error("eval: variable index beyond point dimension");
      return point[static_cast<std::size_t>(i)];
    }
    case ExprKind::Add:
      return eval(f.child_a(), point) + eval(f.child_b(), point);
    case ExprKind::Sub:
      return eval(f.child_a(), point) - eval(f.child_b(), point);
    case ExprKind::Mul:
      return eval(f.child_a(), point) * eval(f.child_b(), point);
    case ExprKind::Div: {
      const double num = eval(f.child_a(), point);
      const double den = eval(f.child_b(), point);
      if (den == 0.0) throw DomainError("eval: division by zero");
      return num / den;
    }
    case ExprKind::Neg:
      return -eval(f.child_a(), point);
    case ExprKind::Pow: {
      const double base = eval(f.child_a(), point);
      int m = f.exponent();
      if (m < 0) {
        if (base == 0.0) throw DomainError("eval: zero base, negative power");
        m = -m;
        double acc = 1.0;
        const double inv = 1.0 / base;
        for (int i = 0; i < m; ++i) acc *= inv;
        return acc;
      }
      double acc = 1.0;
      for (int i = 0; i < m; ++i) acc *= base;
      return acc;
    }
    case ExprKind::Sin:
      return std::sin(eval(f.child_a(), point));
    case ExprKind::Cos:
      return std::cos(eval(f.child_a(), point));
    case ExprKind::Exp:
      return std::exp(eval(f.child_a(), point));
    case ExprKind::Log: {
      const double a = eval(f.child_a(), point);
      if (a <= 0.0) throw DomainError("eval: log of a non-positive value");
      return std::log(a);
    }
    case ExprKind::Sqrt: {
      const double a = eval(f.child_a(), point);
      if (a < 0.0) throw DomainError("eval: sqrt of a negative value");
      return std::sqrt(a);
    }
  }
  throw Error("eval: unreachable");
}

Expr diff(const Expr& f, int var) {
  switch (f.kind()) {
    case ExprKind::Constant:
      return constant(0.0);
    case ExprKind::Variable:
      return constant(f.var_index() == var ? 1.0 : 0.0);
    case ExprKind::Add:
      return diff(f.child_a(), var) + diff(f.child_b(), var);
    case ExprKind::Sub:
      return diff(f.child_a(), var) - diff(f.child_b(), var);
    case ExprKind::Mul:
      return diff(f.child_a(), var) * f.child_b() +
             f.child_a() * diff(f.child_b(), var);
    case ExprKind::Div:
      // (u/v)' = (u'v - uv') / v^2
      return (diff(f.child_a(), var) * f.child_b() -
              f.child_a() * diff(f.child_b(), var)) /
             (f.child_b() * f.child_b());
    case ExprKind::Neg:
      return -diff(f.child_a(), var);
    case ExprKind::Pow:
      // (u^m)' = m u^(m-1) u'
      return constant(static_cast<double>(f.exponent())) *
             pow(f.child_a(), f.exponent() - 1) * diff(f.child_a(), var);
    case ExprKind::Sin:
      return cos(f.child_a()) * diff(f.child_a(), var);
    case ExprKind::Cos:
      return -(sin(f.child_a()) * diff(f.child_a(), var));
    case ExprKind::Exp:
      return exp(f.child_a()) * diff(f.child_a(), var);
    case ExprKind::Log:
      return diff(f.child_a(), var) / f.child_a();
    case ExprKind::Sqrt:
      return diff(f.child_a(), var) / (constant(2.0) * sqrt(f.child_a()));
  }
  throw Error("diff: unreachable");
}

namespace {

// Binding strengths used for printing; must mirror the parse grammar.
// A right operand with equal strength is parenthesized so that strictly
// left-nested trees print flat and everything else round-trips exactly.
constexpr int kPrecAdd = 10;
constexpr int kPrecMul = 20;
constexpr int kPrecNeg = 25;
constexpr int kPrecPow = 30;
constexpr int kPrecAtom = 100;

int precedence(const Expr& e) {
  switch (e.kind()) {
    case ExprKind::Add:
    case ExprKind::Sub:
      return kPrecAdd;
    case ExprKind::Mul:
    case ExprKind::Div:
      return kPrecMul;
    case ExprKind::Neg:
      return kPrecNeg;
    case ExprKind::Pow:
      return kPrecPow;
    default:
      return kPrecAtom;
  }
}

void format_double(std::ostringstream& os, double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw Error("to_string: number formatting failed");
  os.write(buf, end - buf);
}

void print(std::ostringstream& os, const Expr& e);

void print_operand(std::ostringstream& os, const Expr& child, int parent_prec,
                   bool right_side) {
  const int child_prec = precedence(child);
  const bool parens =
      right_side ? child_prec <= parent_prec : child_prec < parent_prec;
  if (parens) os << "(";
  print(os, child);
  if (parens) os << ")";
}

void print(std::ostringstream& os, const Expr& e) {
  switch (e.kind()) {
    case ExprKind::Constant: {
      const double v = e.constant_value();
      if (v < 0.0) {
        os << "-";
        format_double(os, -v);
      } else {
        format_double(os, v);
      }
      return;
    }
    case ExprKind::Variable:
      os << "x" << (e.var_index() + 1);
      return;
    case ExprKind::Add:
      print_operand(os, e.child_a(), kPrecAdd, false);
      os << " + ";
      print_operand(os, e.child_b(), kPrecAdd, true);
      return;
    case ExprKind::Sub:
      print_operand(os, e.child_a(), kPrecAdd, false);
      os << " - ";
      print_operand(os, e.child_b(), kPrecAdd, true);
      return;
    case ExprKind::Mul:
      print_operand(os, e.child_a(), kPrecMul, false);
      os << "*";
      print_operand(os, e.child_b(), kPrecMul, true);
      return;
    case ExprKind::Div:
      print_operand(os, e.child_a(), kPrecMul, false);
      os << "/";
      print_operand(os, e.child_b(), kPrecMul, true);
      return;
    case ExprKind::Neg:
      os << "-";
      print_operand(os, e.child_a(), kPrecNeg, false);
      return;
    case ExprKind::Pow:
      print_operand(os, e.child_a(), kPrecPow, false);
      os << "^" << e.exponent();
      return;
    case ExprKind::Sin:
      os << "sin(";
      print(os, e.child_a());
      os << ")";
      return;
    case ExprKind::Cos:
      os << "cos(";
      print(os, e.child_a());
      os << ")";
      return;
    case ExprKind::Exp:
      os << "exp(";
      print(os, e.child_a());
      os << ")";
      return;
    case ExprKind::Log:
      os << "log(";
      print(os, e.child_a());
      os << ")";
      return;
    case ExprKind::Sqrt:
      os << "sqrt(";
      print(os, e.child_a());
      os << ")";
      return;
  }
}

} // namespace

std::string to_string(const Expr& f) {
  std::ostringstream os;
  print(os, f);
  return os.str();
}

namespace {

class Parser {
public:
  explicit Parser(std::string_view src) : src_(src) {}

  Expr parse() {
    Expr e = parse_expr();
    skip_spaces();
    if (pos_ != src_.size()) fail("trailing input");
    return e;
  }

private:
  [[noreturn]] void fail(const std::string& what) const {
    std::ostringstream os;
    os << "expression parse error at offset " << pos_ << ": " << what;
    throw ConfigError(os.str());
  }

  void skip_spaces() {
    while (pos_ < src_.size() && (src_[pos_] == ' ' || src_[pos_] == '\t'))
      ++pos_;
  }

  bool eat(char c) {
    skip_spaces();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  char peek() {
    skip_spaces();
    return pos_ < src_.size() ? src_[pos_] : '\0';
  }

  Expr parse_expr() {
    Expr e = parse_term();
    while (true) {
      if (eat('+'))
        e = e + parse_term();
      else if (eat('-'))
        e = e - parse_term();
      else
        return e;
    }
  }

  Expr parse_term() {
    Expr e = parse_unary();
    while (true) {
      if (eat('*'))
        e = e * parse_unary();
      else if (eat('/'))
        e = e / parse_unary();
      else
        return e;
    }
  }

  Expr parse_unary() {
    if (eat('-')) return -parse_unary();
    return parse_power();
  }

  Expr parse_power() {
    Expr e = parse_atom();
    while (eat('^')) e = pow(e, parse_exponent());
    return e;
  }

  int parse_exponent() {
    skip_spaces();
    bool negative = false;
    bool parens = false;
    if (eat('(')) {
      parens = true;
      skip_spaces();
    }
    if (pos_ < src_.size() && src_[pos_] == '-') {
      negative = true;
      ++pos_;
    }
    if (pos_ >= src_.size() || !std::isdigit(static_cast<unsigned char>(src_[pos_])))
      fail("expected an integer exponent");
    int value = 0;
    while (pos_ < src_.size() &&
           std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
      value = value * 10 + (src_[pos_] - '0');
      if (value > 1'000'000) fail("exponent out of range");
      ++pos_;
    }
    if (parens && !eat(')')) fail("expected ')' after exponent");
    return negative ? -value : value;
  }

  Expr parse_atom() {
    skip_spaces();
    if (pos_ >= src_.size()) fail("unexpected end of input");
    const char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      Expr e = parse_expr();
      if (!eat(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.')
      return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_')
      return parse_ident();
    fail(std::string("unexpected character '") + c + "'");
  }

  Expr parse_number() {
    const char* begin = src_.data() + pos_;
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin) fail("malformed number");
    pos_ += static_cast<std::size_t>(end - begin);
    return constant(v);
  }

  Expr parse_ident() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
            src_[pos_] == '_'))
      ++pos_;
    const std::string_view name = src_.substr(start, pos_ - start);
    if (name.size() >= 2 && name[0] == 'x') {
      int index = 0;
      auto [p, ec] = std::from_chars(name.data() + 1, name.data() + name.size(),
                                     index);
      if (ec == std::errc() && p == name.data() + name.size()) {
        if (index < 1) fail("variable names start at x1");
        return variable(index - 1);
      }
    }
    auto func = [&](const Expr& arg) -> Expr {
      if (name == "sin") return sin(arg);
      if (name == "cos") return cos(arg);
      if (name == "exp") return exp(arg);
      if (name == "log") return log(arg);
      if (name == "sqrt") return sqrt(arg);
      fail("unknown identifier '" + std::string(name) + "'");
    };
    if (name == "sin" || name == "cos" || name == "exp" || name == "log" ||
        name == "sqrt") {
      if (!eat('(')) fail("expected '(' after function name");
      Expr arg = parse_expr();
      if (!eat(')')) fail("expected ')'");
      return func(arg);
    }
    fail("unknown identifier '" + std::string(name) + "'");
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

} // namespace

Expr parse_expr(std::string_view src) { return Parser(src).parse(); }

} // namespace weil
