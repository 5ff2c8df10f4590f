#include "kosmann/geometry.hpp"

#include "kosmann/linalg.hpp"

namespace kosmann {

namespace {

bool is_diagonal(const ExprMatrix& m) {
  for (int i = 0; i < kDim; ++i)
    for (int j = 0; j < kDim; ++j)
      if (i != j && !m[i][j].is_zero()) return false;
  return true;
}

Expr minor3(const ExprMatrix& m, int skip_row, int skip_col) {
  int rows[3], cols[3];
  for (int k = 0, r = 0, c = 0; k < kDim; ++k) {
    if (k != skip_row) rows[r++] = k;
    if (k != skip_col) cols[c++] = k;
  }
  auto e = [&](int a, int b) -> const Expr& { return m[rows[a]][cols[b]]; };
  return e(0, 0) * (e(1, 1) * e(2, 2) - e(1, 2) * e(2, 1)) - e(0, 1) * (e(1, 0) * e(2, 2) - e(1, 2) * e(2, 0)) +
         e(0, 2) * (e(1, 0) * e(2, 1) - e(1, 1) * e(2, 0));
}

CMatrix<kDim> numeric(const ExprMatrix& m, Evaluator& ev) {
  CMatrix<kDim> out{};
  for (int i = 0; i < kDim; ++i)
    for (int j = 0; j < kDim; ++j) out[i][j] = ev(m[i][j]);
  return out;
}

}  // namespace

Expr determinant(const ExprMatrix& m) {
  if (is_diagonal(m)) return m[0][0] * m[1][1] * m[2][2] * m[3][3];
  Expr det;
  for (int j = 0; j < kDim; ++j) {
    if (m[0][j].is_zero()) continue;
    Expr term = m[0][j] * minor3(m, 0, j);
    det = (j % 2 == 0) ? det + term : det - term;
  }
  return det;
}

ExprMatrix inverse(const ExprMatrix& m) {
  ExprMatrix out;
  if (is_diagonal(m)) {
    for (int i = 0; i < kDim; ++i) out[i][i] = Expr(1.0) / m[i][i];
    return out;
  }
  const Expr det = determinant(m);
  for (int i = 0; i < kDim; ++i) {
    for (int j = 0; j < kDim; ++j) {
      Expr cof = minor3(m, j, i);
      if (cof.is_zero()) continue;
      out[i][j] = ((i + j) % 2 == 0 ? cof : -cof) / det;
    }
  }
  return out;
}

ExprMatrix transpose(const ExprMatrix& m) {
  ExprMatrix out;
  for (int i = 0; i < kDim; ++i)
    for (int j = 0; j < kDim; ++j) out[i][j] = m[j][i];
  return out;
}

ExprMatrix multiply(const ExprMatrix& a, const ExprMatrix& b) {
  ExprMatrix out;
  for (int i = 0; i < kDim; ++i)
    for (int j = 0; j < kDim; ++j)
      for (int k = 0; k < kDim; ++k) out[i][j] += a[i][k] * b[k][j];
  return out;
}

ExprMatrix minkowski_matrix() {
  ExprMatrix m;
  m[0][0] = Expr(1.0);
  for (int i = 1; i < kDim; ++i) m[i][i] = Expr(-1.0);
  return m;
}

ExprMatrix inverse_metric(const Metric& metric) { return inverse(metric.g); }

std::string_view frame_kind_name(FrameKind kind) {
  switch (kind) {
    case FrameKind::Holonomic: return "holonomic";
    case FrameKind::General: return "general";
    case FrameKind::Orthonormal: return "orthonormal";
  }
  return "?";
}

Frame::Frame(std::string name, FrameKind kind, ExprMatrix vectors, bool future_pointing)
    : name_(std::move(name)),
      kind_(kind),
      future_pointing_(future_pointing),
      vectors_(std::move(vectors)),
      cache_(std::make_shared<DerivativeCache>()) {
  dual_ = inverse(vectors_);
  // Coordinate components of the brackets, then frame components via the dual.
  for (int i = 0; i < kDim; ++i) {
    for (int j = i + 1; j < kDim; ++j) {
      std::array<Expr, kDim> bracket;
      for (int n = 0; n < kDim; ++n) {
        Expr b;
        for (int m = 0; m < kDim; ++m) {
          b += vectors_[m][i] * partial(vectors_[n][j], m) - vectors_[m][j] * partial(vectors_[n][i], m);
        }
        bracket[n] = b;
      }
      for (int k = 0; k < kDim; ++k) {
        Expr c;
        for (int n = 0; n < kDim; ++n) c += dual_[k][n] * bracket[n];
        c_[k][i][j] = c;
        c_[k][j][i] = -c;
      }
    }
  }
}

Frame Frame::holonomic(std::string name) { return Frame(std::move(name), FrameKind::Holonomic, identity_matrix()); }

Expr Frame::partial(const Expr& f, int k) const { return (*cache_)(f, k); }

Expr Frame::derivative(int m, const Expr& f) const {
  Expr out;
  for (int n = 0; n < kDim; ++n) {
    if (vectors_[n][m].is_zero()) continue;
    out += vectors_[n][m] * partial(f, n);
  }
  return out;
}

Expr Frame::transport(const std::array<Expr, kDim>& x, const Expr& f) const {
  Expr out;
  for (int m = 0; m < kDim; ++m) {
    if (x[m].is_zero()) continue;
    out += x[m] * derivative(m, f);
  }
  return out;
}

ExprArray3 commutation_coefficients(const Frame& f) { return f.commutation(); }

ExprMatrix dual_frame(const Frame& f) { return f.dual(); }

ExprMatrix frame_metric(const Metric& metric, const Frame& f) {
  const ExprMatrix& u = f.vectors();
  ExprMatrix out;
  for (int i = 0; i < kDim; ++i) {
    for (int j = i; j < kDim; ++j) {
      Expr acc;
      for (int a = 0; a < kDim; ++a) {
        if (u[a][i].is_zero()) continue;
        for (int b = 0; b < kDim; ++b) acc += u[a][i] * u[b][j] * metric.g[a][b];
      }
      out[i][j] = acc;
      out[j][i] = acc;
    }
  }
  return out;
}

Connection christoffel_holonomic(const Metric& metric, const ExprMatrix& g_inv, const Frame& holonomic) {
  const ExprMatrix& g = metric.g;
  ExprArray3 dg;  // dg[k][i][j] = d_k g_ij
  for (int k = 0; k < kDim; ++k)
    for (int i = 0; i < kDim; ++i)
      for (int j = 0; j < kDim; ++j) dg[k][i][j] = holonomic.partial(g[i][j], k);
  Connection out{{}, holonomic.name()};
  for (int k = 0; k < kDim; ++k) {
    for (int i = 0; i < kDim; ++i) {
      for (int j = i; j < kDim; ++j) {
        Expr acc;
        for (int r = 0; r < kDim; ++r) {
          if (g_inv[k][r].is_zero()) continue;
          acc += g_inv[k][r] * (dg[i][r][j] + dg[j][i][r] - dg[r][i][j]);
        }
        acc = acc / 2.0;
        out.gamma[k][i][j] = acc;
        out.gamma[k][j][i] = acc;
      }
    }
  }
  return out;
}

Connection christoffel_frame(const ExprMatrix& g, const ExprMatrix& g_inv, const Frame& f) {
  const ExprArray3& c = f.commutation();
  ExprArray3 lg;  // lg[k][i][j] = L_{Upsilon_k}(g_ij)
  for (int k = 0; k < kDim; ++k)
    for (int i = 0; i < kDim; ++i)
      for (int j = 0; j < kDim; ++j) lg[k][i][j] = f.derivative(k, g[i][j]);
  // cl[r][i][j] = sum_s c^s_ir g_sj, the commutation coefficients with the upper index lowered.
  ExprArray3 cl;
  for (int i = 0; i < kDim; ++i)
    for (int r = 0; r < kDim; ++r)
      for (int j = 0; j < kDim; ++j) {
        Expr acc;
        for (int s = 0; s < kDim; ++s) acc += c[s][i][r] * g[s][j];
        cl[r][i][j] = acc;
      }
  Connection out{{}, f.name()};
  for (int k = 0; k < kDim; ++k) {
    for (int i = 0; i < kDim; ++i) {
      for (int j = 0; j < kDim; ++j) {
        Expr acc;
        for (int r = 0; r < kDim; ++r) {
          if (g_inv[k][r].is_zero()) continue;
          acc += g_inv[k][r] * (lg[i][r][j] + lg[j][i][r] - lg[r][i][j] - cl[r][i][j] - cl[r][j][i]);
        }
        out.gamma[k][i][j] = (acc + c[k][i][j]) / 2.0;
      }
    }
  }
  return out;
}

SpinMatrix SpinConnection::conjugate(int r) const {
  SpinMatrix out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out[i][j] = kosmann::conj(a[r][i][j]);
  return out;
}

SpinConnection spin_connection(const Connection& gamma, const Frame& f, const Field& g_field, const Field& g_inverse,
                               const SpinMatrix& d_bar, const SpinMatrix& d_bar_inv) {
  require_same_frame(g_field, f.name(), "spin_connection");
  require_same_frame(g_inverse, f.name(), "spin_connection");
  if (!(g_field.type() == FieldType{1, 0, 1, 0, 0, 1}) || !(g_inverse.type() == FieldType{0, 1, 0, 1, 1, 0})) {
    throw std::invalid_argument("spin_connection: G must be (1,0|1,0|0,1) and its inverse (0,1|0,1|1,0)");
  }
  SpinConnection out;
  out.frame = f.name();
  for (int r = 0; r < kDim; ++r) {
    Expr trace_term;
    for (int ib = 0; ib < 2; ++ib)
      for (int jb = 0; jb < 2; ++jb) trace_term += f.derivative(r, d_bar[jb][ib]) * d_bar_inv[ib][jb];
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        Expr acc;
        for (int sb = 0; sb < 2; ++sb) {
          for (int k = 0; k < kDim; ++k) {
            const Expr& gk = g_field.at({i, sb, k});
            if (gk.is_zero()) continue;
            for (int m = 0; m < kDim; ++m) acc += gk * gamma.gamma[k][r][m] * g_inverse.at({j, sb, m});
          }
          for (int q = 0; q < kDim; ++q) acc -= f.derivative(r, g_field.at({i, sb, q})) * g_inverse.at({j, sb, q});
        }
        if (i == j) acc -= trace_term;
        out.a[r][i][j] = acc / 4.0;
      }
    }
  }
  return out;
}

Field covariant_derivative(const Field& y, const Connection& gamma, const Frame& f, const SpinConnection* spin) {
  require_same_frame(y, f.name(), "covariant_derivative");
  if (gamma.frame != f.name()) throw std::invalid_argument("covariant_derivative: connection frame mismatch");
  const FieldType& t = y.type();
  const bool needs_spin = !t.is_tensorial();
  if (needs_spin && !spin) throw std::invalid_argument("covariant_derivative: spinor indices need a spin connection");
  FieldType out_type = t;
  out_type.spatial_down += 1;
  Field out(out_type, y.frame());
  for (int m = 0; m < kDim; ++m) {
    Derivation d;
    ExprMatrix gm;
    for (int k = 0; k < kDim; ++k)
      for (int j = 0; j < kDim; ++j) gm[k][j] = gamma.gamma[k][m][j];
    d.spatial = gm;
    if (needs_spin) {
      d.spinor = spin->a[m];
      d.conj = spin->conjugate(m);
    }
    Field algebraic = apply_derivation(y, d);
    for (std::size_t n = 0; n < y.size(); ++n) {
      out[n * kDim + static_cast<std::size_t>(m)] = f.derivative(m, y[n]) + algebraic[n];
    }
  }
  return out;
}

Spacetime make_spacetime(CoordinateNames names, Metric metric, Frame frame) {
  ExprMatrix g_inv = inverse_metric(metric);
  Frame holonomic = Frame::holonomic();
  Connection holonomic_gamma = christoffel_holonomic(metric, g_inv, holonomic);
  ExprMatrix computed = frame_metric(metric, frame);
  ExprMatrix g_frame = frame.kind() == FrameKind::Orthonormal ? minkowski_matrix() : computed;
  if (frame.kind() == FrameKind::Holonomic) g_frame = metric.g;
  ExprMatrix g_frame_inv = frame.kind() == FrameKind::Holonomic ? g_inv : inverse(g_frame);
  Connection frame_gamma = frame.kind() == FrameKind::Holonomic && frame.name() == holonomic.name()
                               ? holonomic_gamma
                               : christoffel_frame(g_frame, g_frame_inv, frame);
  frame_gamma.frame = frame.name();
  return Spacetime{std::move(names), std::move(metric), std::move(g_inv), std::move(holonomic),
                   std::move(holonomic_gamma), std::move(frame), std::move(computed), std::move(g_frame),
                   std::move(g_frame_inv), std::move(frame_gamma)};
}

namespace validation {

double metric_symmetry(const Spacetime& s, Evaluator& ev) {
  double m = 0.0;
  for (int i = 0; i < kDim; ++i)
    for (int j = i + 1; j < kDim; ++j) m = std::max(m, std::abs(ev(s.metric.g[i][j]) - ev(s.metric.g[j][i])));
  return m;
}

double metric_determinant(const Spacetime& s, Evaluator& ev) {
  return std::abs(kosmann::determinant<kDim>(numeric(s.metric.g, ev)));
}

double inverse_metric(const Spacetime& s, Evaluator& ev) {
  const auto prod = numeric(s.metric.g, ev) * numeric(s.metric_inv, ev);
  return max_abs<kDim>(prod - cidentity<kDim>());
}

double frame_determinant(const Spacetime& s, Evaluator& ev) {
  return kosmann::determinant<kDim>(numeric(s.frame.vectors(), ev)).real();
}

double duality(const Spacetime& s, Evaluator& ev) {
  const auto prod = numeric(s.frame.dual(), ev) * numeric(s.frame.vectors(), ev);
  return max_abs<kDim>(prod - cidentity<kDim>());
}

double orthonormality(const Spacetime& s, Evaluator& ev) {
  const auto diff = numeric(s.g_frame_computed, ev) - numeric(minkowski_matrix(), ev);
  return max_abs<kDim>(diff);
}

double time_norm(const Spacetime& s, Evaluator& ev) { return ev(s.g_frame_computed[0][0]).real(); }

double holonomic_symmetry(const Spacetime& s, Evaluator& ev) {
  double m = 0.0;
  for (int k = 0; k < kDim; ++k)
    for (int i = 0; i < kDim; ++i)
      for (int j = i + 1; j < kDim; ++j)
        m = std::max(m, std::abs(ev(s.holonomic_gamma.gamma[k][i][j]) - ev(s.holonomic_gamma.gamma[k][j][i])));
  return m;
}

double torsion(const Spacetime& s, Evaluator& ev) {
  const ExprArray3& c = s.frame.commutation();
  const ExprArray3& g = s.frame_gamma.gamma;
  double m = 0.0;
  for (int k = 0; k < kDim; ++k)
    for (int i = 0; i < kDim; ++i)
      for (int j = 0; j < kDim; ++j) m = std::max(m, std::abs(ev(g[k][i][j]) - ev(g[k][j][i]) - ev(c[k][i][j])));
  return m;
}

double metricity_holonomic(const Spacetime& s, Evaluator& ev) {
  return max_abs(covariant_derivative(holonomic_metric_field(s), s.holonomic_gamma, s.holonomic), ev);
}

double metricity_frame(const Spacetime& s, Evaluator& ev) {
  return max_abs(covariant_derivative(metric_field(s), s.frame_gamma, s.frame), ev);
}

}  // namespace validation

namespace {

Field matrix_field(const ExprMatrix& m, const std::string& frame) {
  Field out(FieldType::tensor(0, 2), frame);
  for (int i = 0; i < kDim; ++i)
    for (int j = 0; j < kDim; ++j) out.at({i, j}) = m[i][j];
  return out;
}

}  // namespace

Field metric_field(const Spacetime& s) { return matrix_field(s.g_frame, s.frame.name()); }

Field holonomic_metric_field(const Spacetime& s) { return matrix_field(s.metric.g, s.holonomic.name()); }

Field to_frame(const Field& y, const Frame& f) {
  if (!y.type().is_tensorial()) throw std::invalid_argument("to_frame: spatial fields only");
  const ExprMatrix lower = transpose(f.vectors());
  Field out = y;
  for (int s = 0; s < static_cast<int>(out.slots().size()); ++s) {
    out = transform_slot(out, s, out.slots()[s] == Slot::SpatialUp ? f.dual() : lower);
  }
  return Field(out.type(), f.name(), out.components());
}

Field to_holonomic(const Field& y, const Frame& f, const std::string& holonomic_name) {
  require_same_frame(y, f.name(), "to_holonomic");
  if (!y.type().is_tensorial()) throw std::invalid_argument("to_holonomic: spatial fields only");
  const ExprMatrix lower = transpose(f.dual());
  Field out = y;
  for (int s = 0; s < static_cast<int>(out.slots().size()); ++s) {
    out = transform_slot(out, s, out.slots()[s] == Slot::SpatialUp ? f.vectors() : lower);
  }
  return Field(out.type(), holonomic_name, out.components());
}

}  // namespace kosmann
