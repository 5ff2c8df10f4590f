#include <cmath>

#include "expr_internal.hpp"
#include "kosmann/expr.hpp"

namespace kosmann {
namespace detail {

namespace {

bool is_real(Complex v) { return v.imag() == 0.0; }

Complex integer_power(Complex base, long long n) {
  if (n < 0) {
    if (base == Complex(0.0, 0.0)) throw EvaluationError("division by zero");
    return 1.0 / integer_power(base, -n);
  }
  Complex result = 1.0;
  while (n > 0) {
    if (n & 1) result *= base;
    base *= base;
    n >>= 1;
  }
  return result;
}

Complex power(Complex base, Complex exponent) {
  if (is_real(exponent)) {
    const double e = exponent.real();
    if (std::nearbyint(e) == e && std::abs(e) <= 64.0) {
      return integer_power(base, static_cast<long long>(e));
    }
    if (is_real(base) && base.real() > 0.0) return std::pow(base.real(), e);
  }
  if (base == Complex(0.0, 0.0)) {
    if (exponent.real() > 0.0) return 0.0;
    throw EvaluationError("zero raised to a non-positive power");
  }
  return std::pow(base, exponent);
}

Complex apply_raw(Op op, std::span<const Complex> a) {
  switch (op) {
    case Op::Neg: return -a[0];
    case Op::Conj: return std::conj(a[0]);
    // Real arguments stay on the real branch so results carry no spurious
    // imaginary rounding.
    case Op::Sin: return is_real(a[0]) ? Complex(std::sin(a[0].real())) : std::sin(a[0]);
    case Op::Cos: return is_real(a[0]) ? Complex(std::cos(a[0].real())) : std::cos(a[0]);
    case Op::Tan: return is_real(a[0]) ? Complex(std::tan(a[0].real())) : std::tan(a[0]);
    case Op::Exp: return is_real(a[0]) ? Complex(std::exp(a[0].real())) : std::exp(a[0]);
    case Op::Sinh: return is_real(a[0]) ? Complex(std::sinh(a[0].real())) : std::sinh(a[0]);
    case Op::Cosh: return is_real(a[0]) ? Complex(std::cosh(a[0].real())) : std::cosh(a[0]);
    case Op::Log:
      if (a[0] == Complex(0.0, 0.0)) throw EvaluationError("logarithm of zero");
      if (is_real(a[0]) && a[0].real() > 0.0) return std::log(a[0].real());
      return std::log(a[0]);
    case Op::Sqrt:
      if (is_real(a[0]) && a[0].real() >= 0.0) return std::sqrt(a[0].real());
      return std::sqrt(a[0]);
    case Op::Add: return a[0] + a[1];
    case Op::Sub: return a[0] - a[1];
    case Op::Mul:
      if (is_real(a[0]) && is_real(a[1])) return a[0].real() * a[1].real();
      return a[0] * a[1];
    case Op::Div:
      if (a[1] == Complex(0.0, 0.0)) throw EvaluationError("division by zero");
      if (is_real(a[0]) && is_real(a[1])) return a[0].real() / a[1].real();
      return a[0] / a[1];
    case Op::Pow: return power(a[0], a[1]);
    case Op::Constant:
    case Op::Coordinate:
      break;
  }
  throw EvaluationError("operator cannot be applied to arguments");
}

}  // namespace

// A zero imaginary part is normalized to +0 so that later branch cuts
// (sqrt, log) see real arguments the same way regardless of history.
Complex apply(Op op, std::span<const Complex> a) {
  Complex v = apply_raw(op, a);
  if (v.imag() == 0.0) v = Complex(v.real(), 0.0);
  return v;
}

}  // namespace detail

namespace {

std::string describe(const Expr& e) {
  std::string text = to_string(e);
  constexpr std::size_t kLimit = 160;
  if (text.size() > kLimit) text = text.substr(0, kLimit) + "...";
  return text;
}

std::string describe(const Point& p) {
  std::string out = "(";
  for (int k = 0; k < kDim; ++k) {
    if (k) out += ",";
    out += std::to_string(p[k]);
  }
  return out + ")";
}

}  // namespace

Complex Evaluator::operator()(const Expr& e) { return eval(e); }

Complex Evaluator::eval(const Expr& e) {
  switch (e.op()) {
    case Op::Constant: return e.value();
    case Op::Coordinate: return point_[e.index()];
    default: break;
  }
  if (auto it = cache_.find(e.node()); it != cache_.end()) return it->second.value;

  const auto args = e.args();
  Complex values[2];
  for (std::size_t k = 0; k < args.size(); ++k) values[k] = eval(args[k]);

  Complex result;
  try {
    result = detail::apply(e.op(), std::span<const Complex>(values, args.size()));
  } catch (const EvaluationError& err) {
    throw EvaluationError(std::string(err.what()) + " in '" + describe(e) + "' at " + describe(point_));
  }
  if (!std::isfinite(result.real()) || !std::isfinite(result.imag())) {
    throw EvaluationError("domain error (non-finite value) in '" + describe(e) + "' at " + describe(point_));
  }
  cache_.emplace(e.node(), Entry{e.node_, result});
  return result;
}

Complex evaluate(const Expr& e, const Point& p) {
  Evaluator ev(p);
  return ev(e);
}

}  // namespace kosmann
