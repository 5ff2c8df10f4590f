#pragma once

#include <string>
#include <vector>

#include "kosmann/geometry.hpp"
#include "kosmann/lie.hpp"

namespace fixtures {

using namespace kosmann;

using Strings = std::array<std::array<std::string, 4>, 4>;

inline ExprMatrix parse_matrix(const Strings& s, const CoordinateNames& names) {
  ExprMatrix m;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) m[i][j] = parse(s[i][j], names);
  return m;
}

// `vectors[m]` lists the coordinate components of frame vector m.
inline Spacetime build(const CoordinateNames& names, const Strings& metric, const Strings& vectors, FrameKind kind,
                       const std::string& frame = "tetrad") {
  ExprMatrix v = transpose(parse_matrix(vectors, names));
  Frame f = kind == FrameKind::Holonomic ? Frame::holonomic() : Frame(frame, kind, v);
  return make_spacetime(names, Metric{parse_matrix(metric, names)}, std::move(f));
}

inline const Strings& identity_vectors() {
  static const Strings s{{{"1", "0", "0", "0"}, {"0", "1", "0", "0"}, {"0", "0", "1", "0"}, {"0", "0", "0", "1"}}};
  return s;
}

inline Spacetime minkowski() {
  return build({"t", "x", "y", "z"},
               {{{"1", "0", "0", "0"}, {"0", "-1", "0", "0"}, {"0", "0", "-1", "0"}, {"0", "0", "0", "-1"}}},
               identity_vectors(), FrameKind::Holonomic);
}

inline Strings spherical_metric() {
  return {{{"1", "0", "0", "0"}, {"0", "-1", "0", "0"}, {"0", "0", "-r^2", "0"}, {"0", "0", "0", "-r^2*sin(theta)^2"}}};
}

inline Spacetime spherical(FrameKind kind = FrameKind::Orthonormal) {
  return build({"t", "r", "theta", "phi"}, spherical_metric(),
               {{{"1", "0", "0", "0"}, {"0", "1", "0", "0"}, {"0", "0", "1/r", "0"}, {"0", "0", "0", "1/(r*sin(theta))"}}},
               kind);
}

inline Spacetime schwarzschild(FrameKind kind = FrameKind::Orthonormal) {
  return build({"t", "r", "theta", "phi"},
               {{{"1-2/r", "0", "0", "0"},
                 {"0", "-1/(1-2/r)", "0", "0"},
                 {"0", "0", "-r^2", "0"},
                 {"0", "0", "0", "-r^2*sin(theta)^2"}}},
               {{{"1/sqrt(1-2/r)", "0", "0", "0"},
                 {"0", "sqrt(1-2/r)", "0", "0"},
                 {"0", "0", "1/r", "0"},
                 {"0", "0", "0", "1/(r*sin(theta))"}}},
               kind);
}

inline Spacetime conformal(FrameKind kind = FrameKind::Orthonormal) {
  const std::string w = "exp(0.6*sin(t))";
  return build({"t", "x", "y", "z"},
               {{{w, "0", "0", "0"}, {"0", "-" + w, "0", "0"}, {"0", "0", "-" + w, "0"}, {"0", "0", "0", "-" + w}}},
               {{{"exp(-0.3*sin(t))", "0", "0", "0"},
                 {"0", "exp(-0.3*sin(t))", "0", "0"},
                 {"0", "0", "exp(-0.3*sin(t))", "0"},
                 {"0", "0", "0", "exp(-0.3*sin(t))"}}},
               kind);
}

// A frame that is neither holonomic nor orthonormal: rescaled and sheared.
inline Spacetime sheared_schwarzschild() {
  return build({"t", "r", "theta", "phi"},
               {{{"1-2/r", "0", "0", "0"},
                 {"0", "-1/(1-2/r)", "0", "0"},
                 {"0", "0", "-r^2", "0"},
                 {"0", "0", "0", "-r^2*sin(theta)^2"}}},
               {{{"2", "0", "0", "0"}, {"0.1*r", "1", "0", "0"}, {"0", "0", "1/r", "sin(theta)"}, {"0", "0", "0", "r"}}},
               FrameKind::General, "sheared");
}

inline Field vec(const std::array<std::string, 4>& c, const CoordinateNames& names,
                 const std::string& frame = "holonomic") {
  std::array<Expr, 4> e;
  for (int k = 0; k < 4; ++k) e[k] = parse(c[k], names);
  return vector_field(e, frame);
}

// Holonomic field with every component set from a generator.
template <class F>
Field field(FieldType type, const CoordinateNames& names, F&& gen, const std::string& frame = "holonomic") {
  Field out(type, frame);
  for (std::size_t n = 0; n < out.size(); ++n) out[n] = parse(gen(n), names);
  return out;
}

// Generic smooth polynomial-trig components, distinct per slot.
inline std::string generic_component(std::size_t n, const CoordinateNames& c) {
  const std::string k = std::to_string(n % 7 + 1);
  const std::string a = c[n % 4], b = c[(n + 1) % 4], d = c[(n + 2) % 4];
  return "0.1*" + k + "*" + a + "*" + b + "+sin(0.3*" + d + ")-0.2*" + b + "^2+" + std::to_string(n % 3);
}

inline Field generic(FieldType type, const CoordinateNames& names, const std::string& frame = "holonomic") {
  return field(type, names, [&](std::size_t n) { return generic_component(n, names); }, frame);
}

inline double max_abs_at(const Field& f, const Point& p) {
  Evaluator ev(p);
  return max_abs(f, ev);
}

inline double max_abs_at(const ExprMatrix& m, const Point& p) {
  Evaluator ev(p);
  double out = 0.0;
  for (const auto& row : m)
    for (const auto& e : row) out = std::max(out, std::abs(ev(e)));
  return out;
}

inline ExprMatrix minus(const ExprMatrix& a, const ExprMatrix& b) {
  ExprMatrix out;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) out[i][j] = a[i][j] - b[i][j];
  return out;
}

inline const std::vector<Point>& schwarzschild_points() {
  static const std::vector<Point> p{{0.3, 3.5, 1.1, 0.4}, {-0.5, 4.7, 0.8, 2.0}, {1.2, 5.5, 2.1, -1.0}};
  return p;
}

}  // namespace fixtures
