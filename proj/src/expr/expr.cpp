#include "kosmann/expr.hpp"

#include <cmath>
#include <unordered_set>

#include "expr_internal.hpp"

namespace kosmann {

const CoordinateNames& default_coordinate_names() {
  static const CoordinateNames names{"x0", "x1", "x2", "x3"};
  return names;
}

bool is_unary(Op op) {
  switch (op) {
    case Op::Neg:
    case Op::Conj:
    case Op::Sin:
    case Op::Cos:
    case Op::Tan:
    case Op::Exp:
    case Op::Log:
    case Op::Sqrt:
    case Op::Sinh:
    case Op::Cosh:
      return true;
    default:
      return false;
  }
}

bool is_binary(Op op) {
  switch (op) {
    case Op::Add:
    case Op::Sub:
    case Op::Mul:
    case Op::Div:
    case Op::Pow:
      return true;
    default:
      return false;
  }
}

std::string_view op_name(Op op) {
  switch (op) {
    case Op::Constant: return "constant";
    case Op::Coordinate: return "coordinate";
    case Op::Neg: return "neg";
    case Op::Conj: return "conj";
    case Op::Sin: return "sin";
    case Op::Cos: return "cos";
    case Op::Tan: return "tan";
    case Op::Exp: return "exp";
    case Op::Log: return "log";
    case Op::Sqrt: return "sqrt";
    case Op::Sinh: return "sinh";
    case Op::Cosh: return "cosh";
    case Op::Add: return "add";
    case Op::Sub: return "sub";
    case Op::Mul: return "mul";
    case Op::Div: return "div";
    case Op::Pow: return "pow";
  }
  return "?";
}

namespace {

std::shared_ptr<const Expr::Node> constant_node(Complex v) {
  auto n = std::make_shared<Expr::Node>();
  n->op = Op::Constant;
  n->value = v;
  return n;
}

const std::shared_ptr<const Expr::Node>& zero_node() {
  static const std::shared_ptr<const Expr::Node> zero = constant_node(0.0);
  return zero;
}

const std::shared_ptr<const Expr::Node>& one_node() {
  static const std::shared_ptr<const Expr::Node> one = constant_node(1.0);
  return one;
}

}  // namespace

Expr::Expr() : node_(zero_node()) {}

Expr::Expr(double value) : Expr(Complex(value, 0.0)) {}

Expr::Expr(Complex value) {
  if (value == Complex(0.0, 0.0)) {
    node_ = zero_node();
  } else if (value == Complex(1.0, 0.0)) {
    node_ = one_node();
  } else {
    node_ = constant_node(value);
  }
}

Expr::Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

Expr Expr::constant(Complex value) { return Expr(value); }

Expr Expr::coordinate(int index) {
  if (index < 0 || index >= kDim) {
    throw std::invalid_argument("coordinate index out of range: " + std::to_string(index));
  }
  static const std::array<std::shared_ptr<const Node>, kDim> coords = [] {
    std::array<std::shared_ptr<const Node>, kDim> out;
    for (int k = 0; k < kDim; ++k) {
      auto n = std::make_shared<Node>();
      n->op = Op::Coordinate;
      n->index = k;
      n->mask = static_cast<std::uint8_t>(1U << k);
      out[k] = n;
    }
    return out;
  }();
  return Expr(coords[index]);
}

Expr Expr::make(Op op, Expr arg) {
  if (!is_unary(op)) throw std::invalid_argument("not a unary operator");
  auto n = std::make_shared<Node>();
  n->op = op;
  n->mask = arg.coordinate_mask();
  n->args.push_back(std::move(arg));
  return Expr(std::move(n));
}

Expr Expr::make(Op op, Expr lhs, Expr rhs) {
  if (!is_binary(op)) throw std::invalid_argument("not a binary operator");
  if (op == Op::Pow && rhs.coordinate_mask() != 0) {
    throw std::invalid_argument("pow exponent must be a constant expression");
  }
  auto n = std::make_shared<Node>();
  n->op = op;
  n->mask = static_cast<std::uint8_t>(lhs.coordinate_mask() | rhs.coordinate_mask());
  n->args.push_back(std::move(lhs));
  n->args.push_back(std::move(rhs));
  return Expr(std::move(n));
}

Op Expr::op() const { return node_->op; }
Complex Expr::value() const { return node_->value; }
int Expr::index() const { return node_->index; }
std::span<const Expr> Expr::args() const { return node_->args; }
std::uint8_t Expr::coordinate_mask() const { return node_->mask; }

bool Expr::is_zero() const {
  return node_->op == Op::Constant && node_->value == Complex(0.0, 0.0);
}

bool Expr::is_one() const {
  return node_->op == Op::Constant && node_->value == Complex(1.0, 0.0);
}

namespace {

bool finite(Complex v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); }

// Folds an operator applied to constant leaves; returns false when the
// result would not be finite so evaluation can report the failure later.
bool fold(Op op, std::span<const Complex> v, Complex& out) {
  try {
    out = detail::apply(op, v);
  } catch (const EvaluationError&) {
    return false;
  }
  return finite(out);
}

Expr fold_or_make(Op op, const Expr& a) {
  if (a.is_constant()) {
    const Complex v[] = {a.value()};
    Complex out;
    if (fold(op, v, out)) return Expr(out);
  }
  return Expr::make(op, a);
}

Expr fold_or_make(Op op, const Expr& a, const Expr& b) {
  if (a.is_constant() && b.is_constant()) {
    const Complex v[] = {a.value(), b.value()};
    Complex out;
    if (fold(op, v, out)) return Expr(out);
  }
  return Expr::make(op, a, b);
}

bool is_minus_one(const Expr& e) {
  return e.is_constant() && e.value() == Complex(-1.0, 0.0);
}

}  // namespace

Expr operator+(const Expr& a, const Expr& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  return fold_or_make(Op::Add, a, b);
}

Expr operator-(const Expr& a, const Expr& b) {
  if (b.is_zero()) return a;
  if (a.is_zero()) return -b;
  return fold_or_make(Op::Sub, a, b);
}

Expr operator*(const Expr& a, const Expr& b) {
  if (a.is_zero() || b.is_zero()) return Expr();
  if (a.is_one()) return b;
  if (b.is_one()) return a;
  if (is_minus_one(a)) return -b;
  if (is_minus_one(b)) return -a;
  return fold_or_make(Op::Mul, a, b);
}

Expr operator/(const Expr& a, const Expr& b) {
  if (b.is_one()) return a;
  if (a.is_zero() && !b.is_zero()) return Expr();
  return fold_or_make(Op::Div, a, b);
}

Expr operator-(const Expr& a) {
  if (a.op() == Op::Neg) return a.args()[0];
  return fold_or_make(Op::Neg, a);
}

Expr& operator+=(Expr& a, const Expr& b) { return a = a + b; }
Expr& operator-=(Expr& a, const Expr& b) { return a = a - b; }
Expr& operator*=(Expr& a, const Expr& b) { return a = a * b; }

Expr pow(const Expr& base, const Expr& exponent) {
  if (exponent.coordinate_mask() != 0) {
    throw std::invalid_argument("pow exponent must be a constant expression");
  }
  if (exponent.is_one()) return base;
  if (exponent.is_zero()) return Expr(1.0);
  return fold_or_make(Op::Pow, base, exponent);
}

// Kept as a formal node unless the argument is a real constant.
Expr conj(const Expr& e) {
  if (e.is_constant() && e.value().imag() == 0.0) return e;
  return Expr::make(Op::Conj, e);
}

Expr sin(const Expr& e) { return fold_or_make(Op::Sin, e); }
Expr cos(const Expr& e) { return fold_or_make(Op::Cos, e); }
Expr tan(const Expr& e) { return fold_or_make(Op::Tan, e); }
Expr exp(const Expr& e) { return fold_or_make(Op::Exp, e); }
Expr log(const Expr& e) { return fold_or_make(Op::Log, e); }
Expr sqrt(const Expr& e) { return fold_or_make(Op::Sqrt, e); }
Expr sinh(const Expr& e) { return fold_or_make(Op::Sinh, e); }
Expr cosh(const Expr& e) { return fold_or_make(Op::Cosh, e); }

Expr sum(std::span<const Expr> terms) {
  Expr out;
  for (const auto& t : terms) out += t;
  return out;
}

bool structurally_equal(const Expr& a, const Expr& b) {
  if (a.node() == b.node()) return true;
  if (a.op() != b.op()) return false;
  switch (a.op()) {
    case Op::Constant:
      return a.value() == b.value();
    case Op::Coordinate:
      return a.index() == b.index();
    default:
      break;
  }
  auto aa = a.args();
  auto bb = b.args();
  if (aa.size() != bb.size()) return false;
  for (std::size_t k = 0; k < aa.size(); ++k) {
    if (!structurally_equal(aa[k], bb[k])) return false;
  }
  return true;
}

std::size_t node_count(const Expr& e) {
  std::unordered_set<const Expr::Node*> seen;
  std::vector<const Expr*> stack{&e};
  while (!stack.empty()) {
    const Expr* cur = stack.back();
    stack.pop_back();
    if (!seen.insert(cur->node()).second) continue;
    for (const auto& a : cur->args()) stack.push_back(&a);
  }
  return seen.size();
}

}  // namespace kosmann
