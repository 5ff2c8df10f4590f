#include <cmath>
#include <random>

#include "doctest.h"
#include "kosmann/expr.hpp"

using namespace kosmann;

namespace {

const CoordinateNames kSpherical{"t", "r", "theta", "phi"};

Complex at(const std::string& text, Point p, const CoordinateNames& names = kSpherical) {
  return evaluate(parse(text, names), p);
}

// Random polynomial in the four coordinates, small integer coefficients.
Expr random_polynomial(std::mt19937_64& rng, int depth) {
  std::uniform_int_distribution<int> pick(0, 5);
  std::uniform_int_distribution<int> coord(0, 3);
  std::uniform_int_distribution<int> coef(-3, 3);
  if (depth == 0) {
    if (pick(rng) < 3) return Expr::coordinate(coord(rng));
    const int c = coef(rng);
    if (c < 0) return Expr::make(Op::Neg, Expr::constant(-c));
    return Expr::constant(static_cast<double>(c));
  }
  switch (pick(rng)) {
    case 0:
    case 1: return Expr::make(Op::Add, random_polynomial(rng, depth - 1), random_polynomial(rng, depth - 1));
    case 2: return Expr::make(Op::Sub, random_polynomial(rng, depth - 1), random_polynomial(rng, depth - 1));
    case 3:
    case 4: return Expr::make(Op::Mul, random_polynomial(rng, depth - 1), random_polynomial(rng, depth - 1));
    default: return Expr::make(Op::Pow, random_polynomial(rng, depth - 1), Expr::constant(2.0));
  }
}

Point random_point(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  return {u(rng), u(rng), u(rng), u(rng)};
}

Complex central_difference(const Expr& e, Point p, int k, double h) {
  Point a = p, b = p;
  a[k] += h;
  b[k] -= h;
  return (evaluate(e, a) - evaluate(e, b)) / (2.0 * h);
}

}  // namespace

TEST_CASE("parse builds the expected trees") {
  Expr zero = parse("0", kSpherical);
  CHECK(zero.is_constant());
  CHECK(zero.value() == Complex(0.0));

  Expr e = parse("t^2 + r", kSpherical);
  REQUIRE(e.op() == Op::Add);
  CHECK(e.args()[0].op() == Op::Pow);
  CHECK(e.args()[0].args()[0].op() == Op::Coordinate);
  CHECK(e.args()[0].args()[0].index() == 0);
  CHECK(e.args()[0].args()[1].value() == Complex(2.0));
  CHECK(e.args()[1].index() == 1);

  Expr c = parse("conj(i*t)", kSpherical);
  REQUIRE(c.op() == Op::Conj);
  REQUIRE(c.args()[0].op() == Op::Mul);
  CHECK(c.args()[0].args()[0].value() == Complex(0.0, 1.0));
  CHECK(c.args()[0].args()[1].index() == 0);
}

TEST_CASE("parse precedence and associativity") {
  const Point p{2.0, 3.0, 0.5, 0.25};
  CHECK(at("1 - 2 - 3", p).real() == doctest::Approx(-4.0));
  CHECK(at("8 / 4 / 2", p).real() == doctest::Approx(1.0));
  CHECK(at("2^3^2", p).real() == doctest::Approx(512.0));
  CHECK(at("-t^2", p).real() == doctest::Approx(-4.0));
  CHECK(at("t^-1", p).real() == doctest::Approx(0.5));
  CHECK(at("2*-t", p).real() == doctest::Approx(-4.0));
  CHECK(at("1.5e1 + .5", p).real() == doctest::Approx(15.5));
  CHECK(at("  (t + r) * theta ", p).real() == doctest::Approx(2.5));
}

TEST_CASE("parse errors carry positions") {
  auto position_of = [](const std::string& text) -> std::size_t {
    try {
      parse(text, kSpherical);
    } catch (const ParseError& e) {
      return e.position();
    }
    return std::string::npos;
  };
  CHECK(position_of("t + ") == 4);
  CHECK(position_of("t + q") == 4);
  CHECK(position_of("(t + r") == 6);
  CHECK(position_of("t ^ r") == 2);
  CHECK(position_of("foo(t)") == 0);
  CHECK(position_of("t $ r") == 2);
  CHECK(position_of("t r") == 2);
  CHECK_THROWS_WITH_AS(parse("x", kSpherical), doctest::Contains("unknown identifier 'x'"), ParseError);
  CHECK_THROWS_WITH_AS(parse("t^r", kSpherical), doctest::Contains("constant"), ParseError);
}

TEST_CASE("print then parse is structurally identical") {
  const char* inputs[] = {
      "t^2 + r",
      "conj(i*t)",
      "-(t - r) * (theta + phi) / (r - -t)",
      "sqrt(1 - 2/r) - sin(theta)^2 * r^-2",
      "2^3^2 - (2^3)^2",
      "(-t)^2 + -t^2 + t - (r - theta)",
      "exp(log(r)) * cosh(sinh(tan(t))) / cos(phi)",
      "1e-05 * 123456.789 + 0.1",
      "t / (r / theta) / phi",
      "t - (r + theta)",
  };
  for (const char* text : inputs) {
    CAPTURE(text);
    Expr a = parse(text, kSpherical);
    std::string printed = to_string(a, kSpherical);
    CAPTURE(printed);
    Expr b = parse(printed, kSpherical);
    CHECK(structurally_equal(a, b));
    CHECK(to_string(b, kSpherical) == printed);
  }

  std::mt19937_64 rng(11);
  for (int n = 0; n < 200; ++n) {
    Expr a = random_polynomial(rng, 4);
    Expr b = parse(to_string(a));
    CHECK(structurally_equal(a, b));
  }
}

TEST_CASE("printer handles folded constants") {
  CHECK(to_string(Expr(-2.0)) == "(-2)");
  CHECK(to_string(Expr(Complex(0.0, 1.0))) == "i");
  CHECK(to_string(Expr(Complex(1.0, -2.5))) == "(1-2.5*i)");
  CHECK(to_string(Expr(0.1)) == "0.1");
  const Point p{};
  for (Complex v : {Complex(-2.0, 0.0), Complex(1.0, -2.5), Complex(0.0, -3.0), Complex(0.25, 4.0)}) {
    CHECK(std::abs(evaluate(parse(to_string(Expr(v))), p) - v) == 0.0);
  }
}

TEST_CASE("differentiate examples") {
  Expr t2 = parse("t^2", kSpherical);
  Expr d = differentiate(t2, 0);
  CHECK(evaluate(d, {1.5, 0, 0, 0}).real() == doctest::Approx(3.0));
  CHECK(to_string(d, kSpherical) == "2*t");

  CHECK(differentiate(parse("t", kSpherical), 1).is_zero());

  Expr c = parse("conj(i*t)", kSpherical);
  Expr dc = differentiate(c, 0);
  CHECK(to_string(dc, kSpherical) == "conj(i)");
  const Complex exact = evaluate(dc, {0.7, 0, 0, 0});
  CHECK(exact == Complex(0.0, -1.0));
  const Complex fd = central_difference(c, {0.7, 0, 0, 0}, 0, 1e-6);
  CHECK(std::abs(fd.real() - exact.real()) < 1e-8);
  CHECK(std::abs(fd.imag() - exact.imag()) < 1e-8);
}

TEST_CASE("differentiate elementary functions against central differences") {
  const char* inputs[] = {
      "sin(t*r)", "cos(theta)^3", "tan(t/3)", "exp(-r*t)", "log(r^2 + 1)", "sqrt(1 - 2/r)",
      "sinh(t) * cosh(phi)", "r^0.5 / (t + 3)", "conj(exp(i*phi)) * r", "r^(1/3)",
  };
  const Point p{0.4, 2.5, 0.9, 0.3};
  for (const char* text : inputs) {
    Expr e = parse(text, kSpherical);
    for (int k = 0; k < kDim; ++k) {
      CAPTURE(text);
      CAPTURE(k);
      const Complex exact = evaluate(differentiate(e, k), p);
      const Complex fd = central_difference(e, p, k, 1e-6);
      CHECK(std::abs(exact - fd) < 1e-7 * (1.0 + std::abs(exact)));
    }
  }
}

TEST_CASE("evaluate examples") {
  CHECK(at("t^2+r", {2, 3, 0, 0}) == Complex(7.0));
  CHECK(at("i*i", {0.3, 0.1, 0.2, 0.5}) == Complex(-1.0));
  CHECK(at("sqrt(1 - 2/r)", {0, 4, 0, 0}).real() == 0.7071067811865476);
  CHECK(at("sqrt(1 - 2/r)", {0, 4, 0, 0}).imag() == 0.0);
  CHECK(at("sqrt(-4)", {}) == Complex(0.0, 2.0));
}

TEST_CASE("evaluation errors name the node") {
  CHECK_THROWS_WITH_AS(at("1/(r-2)", {0, 2, 0, 0}), doctest::Contains("1/(x1-2)"), EvaluationError);
  CHECK_THROWS_WITH_AS(at("log(r)", {0, 0, 0, 0}), doctest::Contains("log(x1)"), EvaluationError);
  CHECK_THROWS_WITH_AS(at("exp(r)", {0, 1000, 0, 0}), doctest::Contains("domain error"), EvaluationError);
}

TEST_CASE("simplifying constructors fold and drop identities") {
  Expr t = Expr::coordinate(0);
  CHECK((t * 1.0).node() == t.node());
  CHECK((t + 0.0).node() == t.node());
  CHECK((t * 0.0).is_zero());
  CHECK((Expr(2.0) * 3.0).value() == Complex(6.0));
  CHECK((-(-t)).node() == t.node());
  CHECK(pow(t, 1.0).node() == t.node());
  CHECK(pow(t, 0.0).is_one());
  CHECK((Expr(1.0) / 0.0).op() == Op::Div);  // left for evaluation to report
  CHECK_THROWS_AS(pow(t, t), std::invalid_argument);
  CHECK_THROWS_AS(Expr::coordinate(4), std::invalid_argument);
}

TEST_CASE("property: derivative of random polynomials matches central differences") {
  std::mt19937_64 rng(2024);
  for (int n = 0; n < 60; ++n) {
    Expr e = random_polynomial(rng, 4);
    Point p = random_point(rng);
    for (int k = 0; k < kDim; ++k) {
      const Complex exact = evaluate(differentiate(e, k), p);
      const Complex fd = central_difference(e, p, k, 1e-6);
      CHECK(std::abs(exact - fd) < 1e-5 * (1.0 + std::abs(exact)));
    }
  }
}

TEST_CASE("property: conj is an involution and differentiation is linear") {
  std::mt19937_64 rng(7);
  for (int n = 0; n < 40; ++n) {
    Expr a = random_polynomial(rng, 3) * Expr(Complex(0.5, -1.5));
    Expr b = random_polynomial(rng, 3);
    Point p = random_point(rng);
    CHECK(evaluate(conj(conj(a)), p) == evaluate(a, p));
    for (int k = 0; k < kDim; ++k) {
      const Complex lhs = evaluate(differentiate(a + b, k), p);
      const Complex rhs = evaluate(differentiate(a, k) + differentiate(b, k), p);
      CHECK(std::abs(lhs - rhs) <= 1e-12 * (1.0 + std::abs(lhs)));
    }
  }
}

TEST_CASE("derivative cache shares work across calls") {
  Expr r = Expr::coordinate(1);
  Expr shared = sqrt(1.0 - 2.0 / r);
  DerivativeCache cache;
  Expr a = cache(shared * r, 1);
  Expr b = cache(shared + r, 1);
  const Point p{0, 4, 0, 0};
  const double ds = 1.0 / (16.0 * 0.7071067811865476);  // d/dr sqrt(1-2/r) at r=4
  CHECK(evaluate(b, p).real() == doctest::Approx(ds + 1.0));
  CHECK(evaluate(a, p).real() == doctest::Approx(ds * 4.0 + 0.7071067811865476));
}
