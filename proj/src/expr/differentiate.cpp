#include "kosmann/expr.hpp"

namespace kosmann {

Expr DerivativeCache::operator()(const Expr& e, int k) {
  if (k < 0 || k >= kDim) throw std::invalid_argument("coordinate index out of range: " + std::to_string(k));
  if (!e.depends_on(k)) return Expr();
  if (e.op() == Op::Coordinate) return Expr(1.0);
  auto& memo = memo_[k];
  if (auto it = memo.find(e.node()); it != memo.end()) return it->second.result;
  Expr r = rule(e, k);
  memo.emplace(e.node(), Entry{e, r});
  return r;
}

Expr DerivativeCache::rule(const Expr& e, int k) {
  const auto a = e.args();
  const Expr& u = a[0];
  auto d = [&](const Expr& x) { return (*this)(x, k); };
  switch (e.op()) {
    case Op::Neg: return -d(u);
    case Op::Conj: return conj(d(u));
    case Op::Sin: return cos(u) * d(u);
    case Op::Cos: return -(sin(u) * d(u));
    case Op::Tan: return d(u) / pow(cos(u), 2.0);
    case Op::Exp: return e * d(u);
    case Op::Log: return d(u) / u;
    case Op::Sqrt: return d(u) / (2.0 * e);
    case Op::Sinh: return cosh(u) * d(u);
    case Op::Cosh: return sinh(u) * d(u);
    case Op::Add: return d(a[0]) + d(a[1]);
    case Op::Sub: return d(a[0]) - d(a[1]);
    case Op::Mul: return d(a[0]) * a[1] + a[0] * d(a[1]);
    case Op::Div: return (d(a[0]) - e * d(a[1])) / a[1];
    case Op::Pow: {
      const Expr& c = a[1];
      return c * pow(u, c - 1.0) * d(u);
    }
    case Op::Constant:
    case Op::Coordinate:
      break;
  }
  return Expr();
}

Expr differentiate(const Expr& e, int k) { return DerivativeCache{}(e, k); }

}  // namespace kosmann
