#include "kosmann/spin.hpp"

#include <cmath>

namespace kosmann {

namespace {

SpinMatrix conj_matrix(const SpinMatrix& m) {
  SpinMatrix out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out[i][j] = conj(m[i][j]);
  return out;
}

const Complex kI(0.0, 1.0);

void require_spin_types(const SpinStructure& spin) {
  if (!(spin.g_field.type() == FieldType{1, 0, 1, 0, 0, 1}) ||
      !(spin.g_inverse.type() == FieldType{0, 1, 0, 1, 1, 0})) {
    throw std::invalid_argument("spin structure: G must be (1,0|1,0|0,1) and its inverse (0,1|0,1|1,0)");
  }
}

// sum_{k,m,sbar} G^{i sbar}_k M^k_m G^m_{j sbar}
SpinMatrix contract_G(const ExprMatrix& m, const SpinStructure& spin) {
  SpinMatrix out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      Expr acc;
      for (int sb = 0; sb < 2; ++sb)
        for (int k = 0; k < kDim; ++k) {
          const Expr& gk = spin.g_field.at({i, sb, k});
          if (gk.is_zero()) continue;
          for (int n = 0; n < kDim; ++n) {
            const Expr& gi = spin.g_inverse.at({j, sb, n});
            if (!gi.is_zero() && !m[k][n].is_zero()) acc += gk * m[k][n] * gi;
          }
        }
      out[i][j] = acc;
    }
  return out;
}

// nabla_s X^r as n[r][s].
ExprMatrix nabla_vector(const Field& x, const Spacetime& s) {
  return field_as_matrix(covariant_derivative(x, s.frame_gamma, s.frame));
}

// sum_s g^is n[r][s] g_rj, i.e. nabla^i X_j.
ExprMatrix raised_nabla(const ExprMatrix& n, const ExprMatrix& g, const ExprMatrix& g_inv) {
  ExprMatrix out;
  for (int i = 0; i < kDim; ++i)
    for (int j = 0; j < kDim; ++j) {
      Expr acc;
      for (int s = 0; s < kDim; ++s) {
        if (g_inv[i][s].is_zero()) continue;
        for (int r = 0; r < kDim; ++r)
          if (!g[r][j].is_zero()) acc += g_inv[i][s] * n[r][s] * g[r][j];
      }
      out[i][j] = acc;
    }
  return out;
}

SpinMatrix x_dot_a(const Field& x, const SpinConnection& a) {
  const auto xc = components(x);
  SpinMatrix out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      Expr acc;
      for (int m = 0; m < kDim; ++m)
        if (!xc[m].is_zero()) acc += xc[m] * a.a[m][i][j];
      out[i][j] = acc;
    }
  return out;
}

}  // namespace

SpinMatrix SpinMetric::d_bar() const { return conj_matrix(d); }
SpinMatrix SpinMetric::d_bar_inv() const { return conj_matrix(d_inv); }

Field SpinMetric::as_field(const std::string& frame) const {
  Field out(FieldType{0, 2, 0, 0, 0, 0}, frame);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.at({i, j}) = d[i][j];
  return out;
}

SpinConstants canonical_constants(const std::string& frame) {
  SpinConstants out;
  out.d.d = {{{Expr(0.0), Expr(1.0)}, {Expr(-1.0), Expr(0.0)}}};
  out.d.d_inv = {{{Expr(0.0), Expr(-1.0)}, {Expr(1.0), Expr(0.0)}}};
  const std::array<std::array<std::array<Complex, 2>, 2>, kDim> pauli = {{
      {{{1.0, 0.0}, {0.0, 1.0}}},
      {{{0.0, 1.0}, {1.0, 0.0}}},
      {{{0.0, -kI}, {kI, 0.0}}},
      {{{1.0, 0.0}, {0.0, -1.0}}},
  }};
  out.g_field = Field(FieldType{1, 0, 1, 0, 0, 1}, frame);
  for (int a = 0; a < 2; ++a)
    for (int ab = 0; ab < 2; ++ab)
      for (int m = 0; m < kDim; ++m) out.g_field.at({a, ab, m}) = Expr(pauli[m][a][ab]);
  return out;
}

Field inverse_ivw(const Field& g_field, const SpinMetric& d, const ExprMatrix& g_frame_inv) {
  const SpinMatrix db = d.d_bar();
  Field out(FieldType{0, 1, 0, 1, 1, 0}, g_field.frame());
  for (int u = 0; u < 2; ++u)
    for (int ub = 0; ub < 2; ++ub)
      for (int m = 0; m < kDim; ++m) {
        Expr acc;
        for (int a = 0; a < 2; ++a)
          for (int ab = 0; ab < 2; ++ab) {
            if (d.d[a][u].is_zero() || db[ab][ub].is_zero()) continue;
            for (int n = 0; n < kDim; ++n) {
              if (g_frame_inv[n][m].is_zero()) continue;
              acc += g_field.at({a, ab, n}) * d.d[a][u] * db[ab][ub] * g_frame_inv[n][m];
            }
          }
        out.at({u, ub, m}) = acc;
      }
  return out;
}

IvwIdentityReport check_ivw_identities(const Field& g_field, const Field& g_inverse, Evaluator& ev) {
  IvwIdentityReport r;
  for (int a = 0; a < 2; ++a)
    for (int ab = 0; ab < 2; ++ab)
      for (int u = 0; u < 2; ++u)
        for (int ub = 0; ub < 2; ++ub) {
          Complex acc = 0.0;
          for (int m = 0; m < kDim; ++m) acc += ev(g_field.at({a, ab, m})) * ev(g_inverse.at({u, ub, m}));
          const double expect = (a == u && ab == ub) ? 2.0 : 0.0;
          r.first = std::max(r.first, std::abs(acc - expect));
        }
  for (int m = 0; m < kDim; ++m)
    for (int n = 0; n < kDim; ++n) {
      Complex acc = 0.0;
      for (int u = 0; u < 2; ++u)
        for (int ub = 0; ub < 2; ++ub) acc += ev(g_field.at({u, ub, m})) * ev(g_inverse.at({u, ub, n}));
      r.second = std::max(r.second, std::abs(acc - (m == n ? 2.0 : 0.0)));
    }
  return r;
}

SpinStructure canonical_spin_structure(const Spacetime& s) {
  if (s.frame.kind() != FrameKind::Orthonormal) {
    throw std::invalid_argument("canonical spin structure needs an orthonormal frame");
  }
  SpinConstants c = canonical_constants(s.frame.name());
  SpinStructure out;
  out.d = c.d;
  out.g_field = c.g_field;
  out.g_inverse = inverse_ivw(out.g_field, out.d, s.g_frame_inv);
  out.a = spin_connection(s.frame_gamma, s.frame, out.g_field, out.g_inverse, out.d.d_bar(), out.d.d_bar_inv());
  out.canonical = true;
  return out;
}

SpinStructure general_spin_structure(const Spacetime& s, Field g_field, SpinMetric d) {
  require_same_frame(g_field, s.frame.name(), "general_spin_structure");
  SpinStructure out;
  out.d = std::move(d);
  out.g_field = std::move(g_field);
  out.g_inverse = inverse_ivw(out.g_field, out.d, s.g_frame_inv);
  require_spin_types(out);
  out.a = spin_connection(s.frame_gamma, s.frame, out.g_field, out.g_inverse, out.d.d_bar(), out.d.d_bar_inv());
  out.canonical = false;
  return out;
}

SpinMatrix SpinLift::conjugate() const { return conj_matrix(w); }

SpinMatrix SpinLift::lowered(const SpinMatrix& d) const {
  SpinMatrix out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out[i][j] = w[0][i] * d[0][j] + w[1][i] * d[1][j];
  return out;
}

ExprMatrix lorentz_projection(const ExprMatrix& v, const ExprMatrix& g, const ExprMatrix& g_inv) {
  const ExprMatrix low = lower_lift(v, g);  // V_ij = sum_r V^r_i g_rj
  ExprMatrix skew;
  for (int i = 0; i < kDim; ++i)
    for (int j = 0; j < kDim; ++j) skew[i][j] = (low[i][j] - low[j][i]) / 2.0;
  // Raise back: V^r_i = sum_j g^rj V_ij.
  ExprMatrix out;
  for (int r = 0; r < kDim; ++r)
    for (int i = 0; i < kDim; ++i) {
      Expr acc;
      for (int j = 0; j < kDim; ++j)
        if (!g_inv[r][j].is_zero()) acc += g_inv[r][j] * skew[i][j];
      out[r][i] = acc;
    }
  return out;
}

SpinLift spin_lift_W_literal(const LiftCoefficients& v, const SpinStructure& spin) {
  require_spin_types(spin);
  SpinLift out;
  out.w = contract_G(v.v, spin);
  for (auto& row : out.w)
    for (auto& e : row) e = e / 4.0;
  out.variant = v.variant;
  out.frame = v.frame;
  return out;
}

SpinLift spin_lift_W(const LiftCoefficients& v, const SpinStructure& spin, const ExprMatrix& g,
                     const ExprMatrix& g_inv) {
  if (!spin.canonical) {
    throw std::invalid_argument("spin_lift_W needs a canonical frame pair; use the covariant form for general pairs");
  }
  if (v.frame != spin.g_field.frame()) throw std::invalid_argument("spin_lift_W: frame mismatch");
  LiftCoefficients projected = v;
  projected.v = lorentz_projection(v.v, g, g_inv);
  return spin_lift_W_literal(projected, spin);
}

SpinDegenerateDiff spin_degenerate_diff(const Field& x, const Spacetime& s, const SpinStructure& spin) {
  require_spin_types(spin);
  const ExprMatrix n = nabla_vector(x, s);
  const ExprMatrix up = raised_nabla(n, s.g_frame, s.g_frame_inv);
  ExprMatrix diff;  // nabla^k X_m - nabla_m X^k
  for (int k = 0; k < kDim; ++k)
    for (int m = 0; m < kDim; ++m) diff[k][m] = up[k][m] - n[k][m];
  SpinDegenerateDiff out;
  out.spinor = contract_G(diff, spin);
  for (auto& row : out.spinor)
    for (auto& e : row) e = e / 8.0;
  out.conj = conj_matrix(out.spinor);
  for (int i = 0; i < kDim; ++i)
    for (int j = 0; j < kDim; ++j) out.spatial[i][j] = diff[i][j] / 2.0;
  return out;
}

Derivation SpinDegenerateDiff::derivation() const { return Derivation{spinor, conj, spatial}; }

SpinLift spin_lift_W_covariant(const Field& x, const Spacetime& s, const SpinStructure& spin) {
  const SpinDegenerateDiff sd = spin_degenerate_diff(x, s, spin);
  const SpinMatrix xa = x_dot_a(x, spin.a);
  SpinLift out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.w[i][j] = -sd.spinor[i][j] - xa[i][j];
  out.variant = Variant::Kosmann;
  out.frame = s.frame.name();
  return out;
}

Field equivariance_residual(const LiftCoefficients& v, const SpinLift& w, const SpinStructure& spin) {
  const SpinMatrix wb = w.conjugate();
  const Field& G = spin.g_field;
  Field out(FieldType{1, 0, 1, 0, 0, 1}, G.frame());
  for (int a = 0; a < 2; ++a)
    for (int ab = 0; ab < 2; ++ab)
      for (int m = 0; m < kDim; ++m) {
        Expr acc;
        for (int i = 0; i < 2; ++i) acc += w.w[a][i] * G.at({i, ab, m}) + G.at({a, i, m}) * wb[ab][i];
        for (int k = 0; k < kDim; ++k)
          if (!v.v[k][m].is_zero()) acc -= v.v[k][m] * G.at({a, ab, k});
        out.at({a, ab, m}) = acc;
      }
  return out;
}

Expr trace_identity(const SpinLift& w, const SpinMetric& d) {
  const SpinMatrix low = w.lowered(d.d);
  const SpinMatrix dbi = d.d_bar_inv();
  Expr acc;
  for (int ub = 0; ub < 2; ++ub)
    for (int ab = 0; ab < 2; ++ab) acc += conj(low[ub][ab]) * dbi[ab][ub];
  return acc;
}

Field covariant_derivative_spin(const Field& y, const Spacetime& s, const SpinStructure& spin) {
  return covariant_derivative(y, s.frame_gamma, s.frame, &spin.a);
}

Field kosmann_lie_spin(const Field& x, const Field& y, const LiftCoefficients& v, const SpinLift& w, const Frame& f) {
  if (v.variant != w.variant) {
    throw std::invalid_argument(std::string("kosmann_lie_spin: V is ") + std::string(variant_name(v.variant)) +
                                " but W is " + std::string(variant_name(w.variant)));
  }
  require_same_frame(y, f.name(), "kosmann_lie_spin");
  if (v.frame != f.name() || w.frame != f.name()) throw std::invalid_argument("kosmann_lie_spin: frame mismatch");
  const auto xc = components(x);
  Field moved = y;
  for (auto& c : moved.components()) c = f.transport(xc, c);
  return moved - apply_derivation(y, Derivation{w.w, w.conjugate(), v.v});
}

Field kosmann_lie_spin_split(const Field& x, const Field& y, const Spacetime& s, const SpinStructure& spin) {
  const auto xc = components(x);
  const Field nabla = covariant_derivative_spin(y, s, spin);
  Field out = y;
  for (std::size_t n = 0; n < y.size(); ++n) {
    Expr acc;
    for (int m = 0; m < kDim; ++m)
      if (!xc[m].is_zero()) acc += xc[m] * nabla[n * kDim + static_cast<std::size_t>(m)];
    out[n] = acc;
  }
  return out + apply_derivation(y, spin_degenerate_diff(x, s, spin).derivation());
}

namespace {

std::pair<LiftCoefficients, SpinLift> lifts(const Field& x, const Spacetime& s, const SpinStructure& spin,
                                            Variant variant) {
  if (variant == Variant::Natural) {
    if (!spin.canonical) throw std::invalid_argument("natural variant needs a canonical frame pair");
    LiftCoefficients v = natural_lift(x, s.frame);
    SpinLift w = spin_lift_W(v, spin, s.g_frame, s.g_frame_inv);
    return {v, w};
  }
  LiftCoefficients v = kosmann_lift(x, s.frame, s.g_frame, s.g_frame_inv);
  SpinLift w = spin.canonical ? spin_lift_W(v, spin, s.g_frame, s.g_frame_inv) : spin_lift_W_covariant(x, s, spin);
  return {v, w};
}

}  // namespace

BasicFieldDerivatives theorem81_fields(const Field& x, const Spacetime& s, const SpinStructure& spin,
                                       Variant variant) {
  const auto [v, w] = lifts(x, s, spin, variant);
  return {kosmann_lie_spin(x, metric_field(s), v, w, s.frame),
          kosmann_lie_spin(x, spin.d.as_field(s.frame.name()), v, w, s.frame),
          kosmann_lie_spin(x, spin.g_field, v, w, s.frame)};
}

Field natural_G_expectation(const Field& x, const Spacetime& s, const SpinStructure& spin) {
  const ExprMatrix st = s_tensor(x, s.frame_gamma, s.frame, s.g_frame, s.g_frame_inv);
  const Field& G = spin.g_field;
  Field out(G.type(), G.frame());
  for (int a = 0; a < 2; ++a)
    for (int ab = 0; ab < 2; ++ab)
      for (int m = 0; m < kDim; ++m) {
        Expr acc;
        for (int k = 0; k < kDim; ++k)
          if (!st[k][m].is_zero()) acc += st[k][m] * G.at({a, ab, k});
        out.at({a, ab, m}) = acc;
      }
  return out;
}

CMatrix<4> minkowski_numeric() {
  CMatrix<4> m{};
  m[0][0] = 1.0;
  for (int k = 1; k < 4; ++k) m[k][k] = -1.0;
  return m;
}

CMatrix<4> spin_to_lorentz(const CMatrix<2>& m) {
  const Complex det = determinant<2>(m);
  if (std::abs(det - 1.0) > 1e-12) throw LorentzMapError("spin_to_lorentz: determinant is not 1");
  static const auto constants = [] {
    SpinConstants c = canonical_constants("canonical");
    Field inv = inverse_ivw(c.g_field, c.d, inverse(minkowski_matrix()));
    std::array<CMatrix<2>, kDim> sigma{}, sigma_inv{};
    Evaluator ev(Point{});
    for (int k = 0; k < kDim; ++k)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
          sigma[k][a][b] = ev(c.g_field.at({a, b, k}));
          sigma_inv[k][a][b] = ev(inv.at({a, b, k}));
        }
    return std::pair{sigma, sigma_inv};
  }();
  const auto& [sigma, sigma_inv] = constants;
  const CMatrix<2> md = adjoint<2>(m);
  CMatrix<4> out{};
  double scale = 1.0;
  for (int mm = 0; mm < kDim; ++mm) {
    const CMatrix<2> img = m * sigma[mm] * md;
    for (int k = 0; k < kDim; ++k) {
      Complex acc = 0.0;
      for (int u = 0; u < 2; ++u)
        for (int ub = 0; ub < 2; ++ub) acc += img[u][ub] * sigma_inv[k][u][ub];
      out[k][mm] = acc / 2.0;
      scale = std::max(scale, std::abs(out[k][mm]));
    }
  }
  for (const auto& row : out)
    for (const auto& v : row)
      if (std::abs(v.imag()) > 1e-12 * scale) throw LorentzMapError("spin_to_lorentz: non-real output");
  return out;
}

ExponentialReport exponential_consistency(const CMatrix<4>& v, const CMatrix<2>& w, const std::vector<double>& eps) {
  ExponentialReport r;
  r.eps = eps;
  for (double e : eps) {
    const CMatrix<4> image = spin_to_lorentz(expm<2>(Complex(e) * w));
    r.exact_gap.push_back(max_abs<4>(image - expm<4>(Complex(e) * v)));
    r.first_order.push_back(max_abs<4>(image - (cidentity<4>() + Complex(e) * v)));
  }
  if (eps.size() >= 2) r.slope = fit_loglog_slope(r.eps, r.first_order);
  return r;
}

}  // namespace kosmann
