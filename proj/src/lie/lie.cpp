#include "kosmann/lie.hpp"

namespace kosmann {

std::string_view variant_name(Variant v) { return v == Variant::Kosmann ? "kosmann" : "natural"; }

Field vector_field(const std::array<Expr, kDim>& c, const std::string& frame) {
  return Field(FieldType::tensor(1, 0), frame, std::vector<Expr>(c.begin(), c.end()));
}

std::array<Expr, kDim> components(const Field& x) {
  if (!(x.type() == FieldType::tensor(1, 0))) throw std::invalid_argument("expected a vector field (type (1,0))");
  std::array<Expr, kDim> out;
  for (int k = 0; k < kDim; ++k) out[k] = x[k];
  return out;
}

Field transport(const Field& x, const Field& y, const Frame& f) {
  require_same_frame(x, f.name(), "transport");
  require_same_frame(y, f.name(), "transport");
  const auto xc = components(x);
  Field out = y;
  for (auto& c : out.components()) c = f.transport(xc, c);
  return out;
}

namespace {

Field transport_minus(const Field& x, const ExprMatrix& v, const Field& y, const Frame& f) {
  Derivation d;
  d.spatial = v;
  return transport(x, y, f) - apply_derivation(y, d);
}

void require_tensorial(const Field& y, const char* what) {
  if (!y.type().is_tensorial()) throw std::invalid_argument(std::string(what) + ": spatial fields only");
}

}  // namespace

Field lie_derivative_holonomic(const Field& x, const Field& y, const Frame& holonomic) {
  require_tensorial(y, "lie_derivative_holonomic");
  require_same_frame(x, holonomic.name(), "lie_derivative_holonomic");
  require_same_frame(y, holonomic.name(), "lie_derivative_holonomic");
  const auto xc = components(x);
  ExprMatrix dx;  // dx[i][j] = dX^i/dx^j
  for (int i = 0; i < kDim; ++i)
    for (int j = 0; j < kDim; ++j) dx[i][j] = holonomic.partial(xc[i], j);
  Field out = y;
  for (auto& c : out.components()) {
    Expr acc;
    for (int k = 0; k < kDim; ++k) {
      if (!xc[k].is_zero()) acc += xc[k] * holonomic.partial(c, k);
    }
    c = acc;
  }
  Derivation d;
  d.spatial = dx;
  return out - apply_derivation(y, d);
}

LiftCoefficients natural_lift(const Field& x, const Frame& f) {
  require_same_frame(x, f.name(), "natural_lift");
  const auto xc = components(x);
  const ExprArray3& c = f.commutation();
  LiftCoefficients out{{}, Variant::Natural, f.name()};
  for (int i = 0; i < kDim; ++i) {
    for (int j = 0; j < kDim; ++j) {
      Expr acc = f.derivative(j, xc[i]);
      for (int m = 0; m < kDim; ++m) acc -= xc[m] * c[i][m][j];
      out.v[i][j] = acc;
    }
  }
  return out;
}

Field lie_derivative_frame(const Field& x, const Field& y, const Frame& f) {
  require_tensorial(y, "lie_derivative_frame");
  require_same_frame(y, f.name(), "lie_derivative_frame");
  return transport_minus(x, natural_lift(x, f).v, y, f);
}

namespace {

// nabla_s X^r as a matrix n[r][s].
ExprMatrix nabla_vector(const Field& x, const Connection& gamma, const Frame& f) {
  return field_as_matrix(covariant_derivative(x, gamma, f));
}

}  // namespace

LiftCoefficients natural_lift_covariant(const Field& x, const Connection& gamma, const Frame& f) {
  const ExprMatrix n = nabla_vector(x, gamma, f);
  const auto xc = components(x);
  LiftCoefficients out{{}, Variant::Natural, f.name()};
  for (int i = 0; i < kDim; ++i) {
    for (int j = 0; j < kDim; ++j) {
      Expr acc = n[i][j];
      for (int m = 0; m < kDim; ++m) acc -= xc[m] * gamma.gamma[i][m][j];
      out.v[i][j] = acc;
    }
  }
  return out;
}

LiftCoefficients kosmann_lift(const Field& x, const Frame& f, const ExprMatrix& g, const ExprMatrix& g_inv) {
  require_same_frame(x, f.name(), "kosmann_lift");
  const auto xc = components(x);
  const ExprArray3& c = f.commutation();
  ExprMatrix lx;  // lx[r][s] = L_{Upsilon_s}(X^r)
  for (int r = 0; r < kDim; ++r)
    for (int s = 0; s < kDim; ++s) lx[r][s] = f.derivative(s, xc[r]);
  ExprMatrix xlg;  // xlg[r][j] = sum_m X^m L_{Upsilon_m}(g_rj)
  for (int r = 0; r < kDim; ++r)
    for (int j = 0; j < kDim; ++j) xlg[r][j] = f.transport(xc, g[r][j]);
  ExprMatrix xc_mat;  // xc_mat[r][s] = sum_m X^m c^r_ms
  for (int r = 0; r < kDim; ++r)
    for (int s = 0; s < kDim; ++s) {
      Expr acc;
      for (int m = 0; m < kDim; ++m) acc += xc[m] * c[r][m][s];
      xc_mat[r][s] = acc;
    }
  // b[s][j] = sum_r (X^m c^r_ms - L_s(X^r)) g_rj
  ExprMatrix b;
  for (int s = 0; s < kDim; ++s)
    for (int j = 0; j < kDim; ++j) {
      Expr acc;
      for (int r = 0; r < kDim; ++r) {
        if (g[r][j].is_zero()) continue;
        acc += (xc_mat[r][s] - lx[r][s]) * g[r][j];
      }
      b[s][j] = acc;
    }
  LiftCoefficients out{{}, Variant::Kosmann, f.name()};
  for (int i = 0; i < kDim; ++i) {
    for (int j = 0; j < kDim; ++j) {
      Expr acc = lx[i][j] - xc_mat[i][j];
      for (int r = 0; r < kDim; ++r) {
        if (g_inv[i][r].is_zero()) continue;
        acc += g_inv[i][r] * (b[r][j] - xlg[r][j]);
      }
      out.v[i][j] = acc / 2.0;
    }
  }
  return out;
}

LiftCoefficients kosmann_lift_orthonormal(const Field& x, const Connection& gamma, const Frame& f,
                                          const ExprMatrix& g, const ExprMatrix& g_inv) {
  const ExprMatrix n = nabla_vector(x, gamma, f);
  const auto xc = components(x);
  LiftCoefficients out{{}, Variant::Kosmann, f.name()};
  for (int i = 0; i < kDim; ++i) {
    for (int j = 0; j < kDim; ++j) {
      Expr raised;
      for (int s = 0; s < kDim; ++s) {
        if (g_inv[i][s].is_zero()) continue;
        for (int r = 0; r < kDim; ++r) {
          if (!g[r][j].is_zero()) raised += g_inv[i][s] * n[r][s] * g[r][j];
        }
      }
      Expr acc = (n[i][j] - raised) / 2.0;
      for (int m = 0; m < kDim; ++m) acc -= xc[m] * gamma.gamma[i][m][j];
      out.v[i][j] = acc;
    }
  }
  return out;
}

ExprMatrix lower_lift(const ExprMatrix& v, const ExprMatrix& g) {
  ExprMatrix out;
  for (int i = 0; i < kDim; ++i)
    for (int j = 0; j < kDim; ++j) {
      Expr acc;
      for (int r = 0; r < kDim; ++r) acc += v[r][i] * g[r][j];
      out[i][j] = acc;
    }
  return out;
}

KosmannParts kosmann_parts(const Field& x, const Frame& f, const ExprMatrix& g) {
  const auto xc = components(x);
  const ExprArray3& c = f.commutation();
  KosmannParts out;
  for (int i = 0; i < kDim; ++i) {
    for (int j = 0; j < kDim; ++j) {
      out.sym[i][j] = -f.transport(xc, g[i][j]) / 2.0;
      Expr acc;
      for (int r = 0; r < kDim; ++r) {
        acc += f.derivative(i, xc[r]) * g[r][j] - f.derivative(j, xc[r]) * g[r][i];
        for (int m = 0; m < kDim; ++m) acc += xc[m] * (c[r][m][j] * g[r][i] - c[r][m][i] * g[r][j]);
      }
      out.skew[i][j] = acc / 2.0;
    }
  }
  return out;
}

ExprMatrix s_tensor(const Field& x, const Connection& gamma, const Frame& f, const ExprMatrix& g,
                    const ExprMatrix& g_inv) {
  const ExprMatrix n = nabla_vector(x, gamma, f);
  ExprMatrix out;
  for (int i = 0; i < kDim; ++i) {
    for (int j = 0; j < kDim; ++j) {
      Expr acc = n[i][j];
      for (int s = 0; s < kDim; ++s) {
        if (g_inv[i][s].is_zero()) continue;
        for (int r = 0; r < kDim; ++r) {
          if (!g[r][j].is_zero()) acc += g_inv[i][s] * n[r][s] * g[r][j];
        }
      }
      out[i][j] = acc / 2.0;
    }
  }
  return out;
}

Field generalized_lie_derivative(const Field& x, const LiftCoefficients& v, const Field& y, const Frame& f) {
  require_tensorial(y, "generalized_lie_derivative");
  require_same_frame(y, v.frame, "generalized_lie_derivative");
  return transport_minus(x, v.v, y, f);
}

Field bracket(const Field& x, const Field& y, const Frame& f) {
  require_same_frame(x, f.name(), "bracket");
  require_same_frame(y, f.name(), "bracket");
  const auto xc = components(x);
  const auto yc = components(y);
  const ExprArray3& c = f.commutation();
  std::array<Expr, kDim> out;
  for (int k = 0; k < kDim; ++k) {
    Expr acc = f.transport(xc, yc[k]) - f.transport(yc, xc[k]);
    for (int i = 0; i < kDim; ++i)
      for (int j = 0; j < kDim; ++j) {
        if (!c[k][i][j].is_zero()) acc += xc[i] * yc[j] * c[k][i][j];
      }
    out[k] = acc;
  }
  return vector_field(out, f.name());
}

Field matrix_as_field(const ExprMatrix& m, const std::string& frame) {
  Field out(FieldType::tensor(1, 1), frame);
  for (int i = 0; i < kDim; ++i)
    for (int j = 0; j < kDim; ++j) out.at({i, j}) = m[i][j];
  return out;
}

ExprMatrix field_as_matrix(const Field& f) {
  if (!(f.type() == FieldType::tensor(1, 1))) throw std::invalid_argument("expected a (1,1) field");
  ExprMatrix out;
  for (int i = 0; i < kDim; ++i)
    for (int j = 0; j < kDim; ++j) out[i][j] = f.at({i, j});
  return out;
}

ExprMatrix commutator(const ExprMatrix& a, const ExprMatrix& b) {
  ExprMatrix ab = multiply(a, b);
  ExprMatrix ba = multiply(b, a);
  ExprMatrix out;
  for (int i = 0; i < kDim; ++i)
    for (int j = 0; j < kDim; ++j) out[i][j] = ab[i][j] - ba[i][j];
  return out;
}

CommutatorDefect commutator_defect(const Field& x, const Field& y, const std::vector<Field>& tests, const Spacetime& s) {
  const Frame& f = s.frame;
  const Field xy = bracket(x, y, f);
  const LiftCoefficients vx = kosmann_lift(x, f, s.g_frame, s.g_frame_inv);
  const LiftCoefficients vy = kosmann_lift(y, f, s.g_frame, s.g_frame_inv);
  const LiftCoefficients vxy = kosmann_lift(xy, f, s.g_frame, s.g_frame_inv);
  const ExprMatrix sx = s_tensor(x, s.frame_gamma, f, s.g_frame, s.g_frame_inv);
  const ExprMatrix sy = s_tensor(y, s.frame_gamma, f, s.g_frame, s.g_frame_inv);
  const ExprMatrix sxy_bracket = s_tensor(xy, s.frame_gamma, f, s.g_frame, s.g_frame_inv);
  const ExprMatrix comm = commutator(sx, sy);

  CommutatorDefect out;
  Derivation dc;
  dc.spatial = comm;
  for (const Field& z : tests) {
    const Field lxz = generalized_lie_derivative(x, vx, z, f);
    const Field lyz = generalized_lie_derivative(y, vy, z, f);
    const Field lhs = generalized_lie_derivative(x, vx, lyz, f) - generalized_lie_derivative(y, vy, lxz, f);
    out.relation.push_back(lhs - generalized_lie_derivative(xy, vxy, z, f) + apply_derivation(z, dc));
  }
  const ExprMatrix lx_sy = field_as_matrix(lie_derivative_frame(x, matrix_as_field(sy, f.name()), f));
  const ExprMatrix ly_sx = field_as_matrix(lie_derivative_frame(y, matrix_as_field(sx, f.name()), f));
  for (int i = 0; i < kDim; ++i)
    for (int j = 0; j < kDim; ++j) {
      out.s_xy[i][j] = lx_sy[i][j] - ly_sx[i][j] - sxy_bracket[i][j] + comm[i][j];
      out.minus_commutator[i][j] = -comm[i][j];
    }
  return out;
}

}  // namespace kosmann
