#include <cctype>
#include <charconv>
#include <optional>

#include "kosmann/expr.hpp"

namespace kosmann {

ParseError::ParseError(const std::string& message, std::size_t position)
    : std::runtime_error(message + " at position " + std::to_string(position)), position_(position) {}

namespace {

std::optional<Op> function_op(std::string_view name) {
  static constexpr std::pair<std::string_view, Op> table[] = {
      {"sin", Op::Sin},   {"cos", Op::Cos},   {"tan", Op::Tan},   {"exp", Op::Exp},   {"log", Op::Log},
      {"sqrt", Op::Sqrt}, {"sinh", Op::Sinh}, {"cosh", Op::Cosh}, {"conj", Op::Conj},
  };
  for (const auto& [n, op] : table) {
    if (n == name) return op;
  }
  return std::nullopt;
}

class Parser {
 public:
  Parser(std::string_view text, const CoordinateNames& names) : text_(text), names_(names) {}

  Expr run() {
    Expr e = expr();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_); }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) {
      if (pos_ >= text_.size()) fail(std::string("expected '") + c + "' but input ended");
      fail(std::string("expected '") + c + "'");
    }
  }

  Expr expr() {
    Expr lhs = term();
    for (;;) {
      if (accept('+')) {
        lhs = Expr::make(Op::Add, lhs, term());
      } else if (accept('-')) {
        lhs = Expr::make(Op::Sub, lhs, term());
      } else {
        return lhs;
      }
    }
  }

  Expr term() {
    Expr lhs = unary();
    for (;;) {
      if (accept('*')) {
        lhs = Expr::make(Op::Mul, lhs, unary());
      } else if (accept('/')) {
        lhs = Expr::make(Op::Div, lhs, unary());
      } else {
        return lhs;
      }
    }
  }

  Expr unary() {
    if (accept('-')) return Expr::make(Op::Neg, unary());
    return power();
  }

  Expr power() {
    Expr base = primary();
    skip_space();
    const std::size_t at = pos_;
    if (accept('^')) {
      Expr exponent = unary();
      if (exponent.coordinate_mask() != 0) {
        throw ParseError("pow exponent must be a constant expression", at);
      }
      return Expr::make(Op::Pow, base, exponent);
    }
    return base;
  }

  Expr primary() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (accept('(')) {
      Expr e = expr();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return name();
    fail("unexpected '" + std::string(1, c) + "'");
  }

  Expr number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      std::size_t n = 0;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_, ++n;
      return n;
    };
    std::size_t n = digits();
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      n += digits();
    }
    if (n == 0) throw ParseError("malformed number", start);
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t save = pos_++;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      if (digits() == 0) pos_ = save;  // 'e' belongs to an identifier, not an exponent
    }
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, value);
    if (ec != std::errc() || ptr != text_.data() + pos_) throw ParseError("malformed number", start);
    return Expr::constant(value);
  }

  Expr name() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
    }
    const std::string_view id = text_.substr(start, pos_ - start);
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == '(') {
      auto op = function_op(id);
      if (!op) throw ParseError("unknown function '" + std::string(id) + "'", start);
      ++pos_;
      Expr arg = expr();
      expect(')');
      return Expr::make(*op, arg);
    }
    for (int k = 0; k < kDim; ++k) {
      if (names_[k] == id) return Expr::coordinate(k);
    }
    if (id == "i") return Expr::constant(Complex(0.0, 1.0));
    throw ParseError("unknown identifier '" + std::string(id) + "'", start);
  }

  std::string_view text_;
  const CoordinateNames& names_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr parse(std::string_view text, const CoordinateNames& names) { return Parser(text, names).run(); }

}  // namespace kosmann
