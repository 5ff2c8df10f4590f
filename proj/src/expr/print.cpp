#include <charconv>
#include <cmath>

#include "kosmann/expr.hpp"

namespace kosmann {

namespace {

std::string shortest(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string constant_text(Complex v) {
  const double re = v.real();
  const double im = v.imag();
  if (im == 0.0) {
    if (re < 0.0 || std::signbit(re)) return "(" + shortest(re) + ")";
    return shortest(re);
  }
  if (re == 0.0 && im == 1.0) return "i";
  std::string out = "(";
  if (re != 0.0) out += shortest(re);
  if (im < 0.0) {
    out += "-" + shortest(-im);
  } else {
    if (re != 0.0) out += "+";
    out += shortest(im);
  }
  return out + "*i)";
}

int precedence(Op op) {
  switch (op) {
    case Op::Add:
    case Op::Sub: return 1;
    case Op::Mul:
    case Op::Div: return 2;
    case Op::Neg: return 3;
    case Op::Pow: return 4;
    default: return 5;
  }
}

class Printer {
 public:
  explicit Printer(const CoordinateNames& names) : names_(names) {}

  void print(const Expr& e, std::string& out) {
    switch (e.op()) {
      case Op::Constant:
        out += constant_text(e.value());
        return;
      case Op::Coordinate:
        out += names_[e.index()];
        return;
      case Op::Neg:
        out += '-';
        child(e.args()[0], precedence(e.args()[0].op()) < 3, out);
        return;
      case Op::Add:
      case Op::Sub:
      case Op::Mul:
      case Op::Div: {
        const int p = precedence(e.op());
        const auto a = e.args();
        child(a[0], precedence(a[0].op()) < p, out);
        out += e.op() == Op::Add ? '+' : e.op() == Op::Sub ? '-' : e.op() == Op::Mul ? '*' : '/';
        child(a[1], precedence(a[1].op()) <= p, out);
        return;
      }
      case Op::Pow: {
        const auto a = e.args();
        child(a[0], precedence(a[0].op()) <= 4, out);
        out += '^';
        child(a[1], precedence(a[1].op()) < 3, out);
        return;
      }
      default:
        out += op_name(e.op());
        out += '(';
        print(e.args()[0], out);
        out += ')';
        return;
    }
  }

 private:
  void child(const Expr& e, bool parens, std::string& out) {
    if (parens) out += '(';
    print(e, out);
    if (parens) out += ')';
  }

  const CoordinateNames& names_;
};

}  // namespace

std::string to_string(const Expr& e, const CoordinateNames& names) {
  std::string out;
  Printer(names).print(e, out);
  return out;
}

}  // namespace kosmann
