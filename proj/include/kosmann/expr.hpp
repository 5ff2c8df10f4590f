#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace kosmann {

using Complex = std::complex<double>;

/// Number of space-time dimensions; chart coordinates are indexed 0..3.
inline constexpr int kDim = 4;

/// A chart point (x^0, x^1, x^2, x^3).
using Point = std::array<double, kDim>;

using CoordinateNames = std::array<std::string, kDim>;

/// Placeholder names used when no chart naming is supplied.
const CoordinateNames& default_coordinate_names();

enum class Op : std::uint8_t {
  Constant,
  Coordinate,
  Neg,
  Conj,
  Sin,
  Cos,
  Tan,
  Exp,
  Log,
  Sqrt,
  Sinh,
  Cosh,
  Add,
  Sub,
  Mul,
  Div,
  Pow,
};

bool is_unary(Op op);
bool is_binary(Op op);
std::string_view op_name(Op op);

/// Immutable expression tree over the chart coordinates.
///
/// Nodes are shared, so copying an Expr is cheap and common subexpressions
/// stay shared after differentiation. The free arithmetic functions below
/// fold constants and drop 0/1 identities; `Expr::make` builds raw nodes and
/// is what the parser uses.
class Expr {
 public:
  struct Node;

  Expr();  // constant 0
  Expr(double value);   // NOLINT(google-explicit-constructor)
  Expr(Complex value);  // NOLINT(google-explicit-constructor)

  static Expr constant(Complex value);
  static Expr coordinate(int index);

  /// Raw unary node, no simplification.
  static Expr make(Op op, Expr arg);
  /// Raw binary node, no simplification. Throws std::invalid_argument for a
  /// `pow` whose exponent depends on the coordinates.
  static Expr make(Op op, Expr lhs, Expr rhs);

  Op op() const;
  /// Value of a constant leaf.
  Complex value() const;
  /// Index of a coordinate leaf.
  int index() const;
  std::span<const Expr> args() const;

  bool is_constant() const { return op() == Op::Constant; }
  bool is_zero() const;
  bool is_one() const;
  /// Bit k is set iff coordinate k occurs in the tree.
  std::uint8_t coordinate_mask() const;
  bool depends_on(int k) const { return (coordinate_mask() >> k) & 1U; }

  /// Stable identity of the underlying node (for caches).
  const Node* node() const { return node_.get(); }

 private:
  explicit Expr(std::shared_ptr<const Node> node);
  std::shared_ptr<const Node> node_;

  friend class Evaluator;
};

struct Expr::Node {
  Op op = Op::Constant;
  Complex value{};
  int index = -1;
  std::uint8_t mask = 0;
  std::vector<Expr> args;
};

// Simplifying constructors.
Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);
Expr& operator+=(Expr& a, const Expr& b);
Expr& operator-=(Expr& a, const Expr& b);
Expr& operator*=(Expr& a, const Expr& b);

Expr pow(const Expr& base, const Expr& exponent);
Expr conj(const Expr& e);
Expr sin(const Expr& e);
Expr cos(const Expr& e);
Expr tan(const Expr& e);
Expr exp(const Expr& e);
Expr log(const Expr& e);
Expr sqrt(const Expr& e);
Expr sinh(const Expr& e);
Expr cosh(const Expr& e);

/// Sum of terms, skipping zeros.
Expr sum(std::span<const Expr> terms);

/// Same node kinds, constants, coordinate indices and shape.
bool structurally_equal(const Expr& a, const Expr& b);

/// Number of distinct nodes reachable from `e`.
std::size_t node_count(const Expr& e);

// ---------------------------------------------------------------------------
// Parsing and printing

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::size_t position);
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

/// Parses the textual grammar documented in README.md.
///
///   expr    := term (('+' | '-') term)*
///   term    := unary (('*' | '/') unary)*
///   unary   := '-' unary | power
///   power   := primary ('^' unary)?
///   primary := number | name | func '(' expr ')' | '(' expr ')'
///
/// Names are the four coordinate names or the imaginary unit `i`.
Expr parse(std::string_view text, const CoordinateNames& names = default_coordinate_names());

/// Canonical text accepted by `parse`; for parsed trees, parse(print(e)) is
/// structurally identical to e.
std::string to_string(const Expr& e, const CoordinateNames& names = default_coordinate_names());

// ---------------------------------------------------------------------------
// Differentiation and evaluation

/// Exact derivative with respect to coordinate k (0..3).
Expr differentiate(const Expr& e, int k);

/// Derivative memo that persists across calls, so subtrees shared between
/// many components are differentiated once.
class DerivativeCache {
 public:
  Expr operator()(const Expr& e, int k);

 private:
  struct Entry {
    Expr keep;
    Expr result;
  };
  Expr rule(const Expr& e, int k);
  std::array<std::unordered_map<const Expr::Node*, Entry>, kDim> memo_;
};

class EvaluationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Evaluates expressions at one point, memoizing shared subtrees.
///
/// The cache keeps every visited node alive, so node addresses cannot be
/// recycled while the evaluator exists.
class Evaluator {
 public:
  explicit Evaluator(const Point& p) : point_(p) {}

  Complex operator()(const Expr& e);
  const Point& point() const { return point_; }

 private:
  struct Entry {
    std::shared_ptr<const Expr::Node> keep;
    Complex value;
  };
  Complex eval(const Expr& e);

  Point point_;
  std::unordered_map<const Expr::Node*, Entry> cache_;
};

Complex evaluate(const Expr& e, const Point& p);

}  // namespace kosmann
