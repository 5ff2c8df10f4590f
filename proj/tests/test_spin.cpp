#include <cmath>
#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "kosmann/spin.hpp"

using namespace kosmann;
using namespace fixtures;

namespace {

const std::vector<Point> kSphericalPoints = {
    {0.2, 1.6, 1.0, 0.3}, {-0.7, 2.4, 0.6, 2.2}, {1.1, 1.2, 2.3, -1.4}, {0.5, 2.9, 1.7, 0.9}};

Field spinor_field(FieldType type, const std::string& frame) {
  const CoordinateNames& c = default_coordinate_names();
  return field(type, c,
               [&](std::size_t n) {
                 return generic_component(n, c) + "+i*(0.2*" + c[(n + 3) % 4] + "-cos(" + c[n % 4] + "))";
               },
               frame);
}

Field coord_vec(const Spacetime& s, const std::array<std::string, 4>& c) {
  return to_frame(vec(c, default_coordinate_names()), s.frame);
}

double worst(const Field& f, const std::vector<Point>& pts) {
  double m = 0.0;
  for (const Point& p : pts) m = std::max(m, max_abs_at(f, p));
  return m;
}

double worst(const SpinMatrix& w, const Point& p) {
  Evaluator ev(p);
  double m = 0.0;
  for (const auto& row : w)
    for (const auto& e : row) m = std::max(m, std::abs(ev(e)));
  return m;
}

SpinMatrix sub(const SpinMatrix& a, const SpinMatrix& b) {
  SpinMatrix out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out[i][j] = a[i][j] - b[i][j];
  return out;
}

Spacetime minkowski_tetrad() {
  return build({"t", "x", "y", "z"},
               {{{"1", "0", "0", "0"}, {"0", "-1", "0", "0"}, {"0", "0", "-1", "0"}, {"0", "0", "0", "-1"}}},
               identity_vectors(), FrameKind::Orthonormal, "cartesian");
}

// Spherical coordinates with every tetrad vector rescaled and the spinor frame
// multiplied by a complex function f.
struct GeneralPair {
  Spacetime s;
  SpinStructure spin;
};

GeneralPair general_pair() {
  const std::array<std::string, 4> lambda{"(1+0.1*r)", "exp(0.2*t)", "1", "(2+sin(theta))"};
  Strings vectors{{{"1", "0", "0", "0"}, {"0", "1", "0", "0"}, {"0", "0", "1/r", "0"}, {"0", "0", "0", "1/(r*sin(theta))"}}};
  for (int m = 0; m < 4; ++m)
    for (int i = 0; i < 4; ++i)
      if (vectors[m][i] != "0") vectors[m][i] = lambda[m] + "*(" + vectors[m][i] + ")";
  Spacetime s = build({"t", "r", "theta", "phi"}, spherical_metric(), vectors, FrameKind::General, "scaled");
  const CoordinateNames& names = s.names;
  const Expr f = parse("exp(0.1*r+0.3*i*t-0.2*i*theta)", names);
  const Expr ff = f * conj(f);
  SpinConstants c = canonical_constants("scaled");
  Field g = c.g_field;
  for (int a = 0; a < 2; ++a)
    for (int ab = 0; ab < 2; ++ab)
      for (int m = 0; m < 4; ++m) g.at({a, ab, m}) = parse(lambda[m], names) * g.at({a, ab, m}) / ff;
  SpinMetric d = c.d;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      d.d[i][j] = f * f * d.d[i][j];
      d.d_inv[i][j] = d.d_inv[i][j] / (f * f);
    }
  SpinStructure spin = general_spin_structure(s, g, d);
  return {std::move(s), std::move(spin)};
}

}  // namespace

TEST_CASE("canonical constants") {
  const SpinConstants c = canonical_constants("f");
  CHECK(evaluate(c.g_field.at({0, 1, 2}), {}) == Complex(0, -1));
  CHECK(evaluate(c.g_field.at({1, 0, 2}), {}) == Complex(0, 1));
  CHECK(evaluate(c.g_field.at({1, 1, 3}), {}) == Complex(-1));
  CHECK(evaluate(c.d.d[0][1], {}) == Complex(1));
  CHECK(evaluate(c.d.d[1][0], {}) == Complex(-1));
  CHECK(c.d.d[0][0].is_zero());
  CHECK(c.d.d[1][1].is_zero());
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      const Expr e = c.d.d[i][0] * c.d.d_inv[0][j] + c.d.d[i][1] * c.d.d_inv[1][j];
      CHECK(evaluate(e, {}) == Complex(i == j ? 1.0 : 0.0));
    }
}

TEST_CASE("infeld-van der waerden identities and inverse") {
  const Spacetime s = minkowski_tetrad();
  const SpinStructure spin = canonical_spin_structure(s);
  Evaluator ev(Point{});
  const IvwIdentityReport r = check_ivw_identities(spin.g_field, spin.g_inverse, ev);
  CHECK(r.first == 0.0);
  CHECK(r.second == 0.0);
  Complex first1111 = 0.0, first1122 = 0.0, second33 = 0.0;
  for (int m = 0; m < 4; ++m) {
    first1111 += ev(spin.g_field.at({0, 0, m})) * ev(spin.g_inverse.at({0, 0, m}));
    first1122 += ev(spin.g_field.at({0, 0, m})) * ev(spin.g_inverse.at({1, 1, m}));
  }
  for (int u = 0; u < 2; ++u)
    for (int ub = 0; ub < 2; ++ub) second33 += ev(spin.g_field.at({u, ub, 3})) * ev(spin.g_inverse.at({u, ub, 3}));
  CHECK(first1111 == Complex(2));
  CHECK(first1122 == Complex(0));
  CHECK(second33 == Complex(2));
  for (int u = 0; u < 2; ++u)
    for (int ub = 0; ub < 2; ++ub) {
      const Complex v = ev(spin.g_inverse.at({u, ub, 0}));
      CHECK(v.imag() == 0.0);
      CHECK((v.real() == 0.0 || std::abs(v.real()) == 1.0));
    }
  // Raising back with d^-1 and g returns G.
  for (int b = 0; b < 2; ++b)
    for (int bb = 0; bb < 2; ++bb)
      for (int k = 0; k < 4; ++k) {
        Expr acc;
        for (int u = 0; u < 2; ++u)
          for (int ub = 0; ub < 2; ++ub)
            for (int m = 0; m < 4; ++m)
              acc += spin.g_inverse.at({u, ub, m}) * spin.d.d_inv[u][b] * spin.d.d_bar_inv()[ub][bb] * s.g_frame[m][k];
        CHECK(std::abs(ev(acc) - ev(spin.g_field.at({b, bb, k}))) == 0.0);
      }
}

TEST_CASE("rotation lift is an imaginary multiple of sigma 3") {
  const Spacetime s = minkowski_tetrad();
  const SpinStructure spin = canonical_spin_structure(s);
  const Field rot = coord_vec(s, {"0", "-x2", "x1", "0"});
  const auto v = kosmann_lift(rot, s.frame, s.g_frame, s.g_frame_inv);
  const SpinLift w = spin_lift_W(v, spin, s.g_frame, s.g_frame_inv);
  const Point p{0.3, 0.5, -0.2, 0.8};
  Evaluator ev(p);
  const Complex w00 = ev(w.w[0][0]);
  CHECK(std::abs(w00.real()) < 1e-15);
  CHECK(std::abs(w00.imag()) > 0.1);
  CHECK(std::abs(ev(w.w[0][1])) < 1e-15);
  CHECK(std::abs(ev(w.w[1][0])) < 1e-15);
  CHECK(std::abs(ev(w.w[1][1]) + w00) < 1e-15);

  const SpinLift zero = spin_lift_W(kosmann_lift(coord_vec(s, {"0", "0", "0", "0"}), s.frame, s.g_frame, s.g_frame_inv),
                                    spin, s.g_frame, s.g_frame_inv);
  CHECK(worst(zero.w, p) == 0.0);
}

TEST_CASE("lift identities on the spherical tetrad") {
  const Spacetime s = spherical();
  const SpinStructure spin = canonical_spin_structure(s);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> t(-1, 1), r(1, 3), th(0.5, 2.5), ph(-3, 3);
  std::vector<Point> pts;
  for (int k = 0; k < 32; ++k) pts.push_back({t(rng), r(rng), th(rng), ph(rng)});

  for (const auto& c : std::vector<std::array<std::string, 4>>{
           {"x0^2", "x1", "0", "0"}, {"x0^2", "x1", "sin(x2)", "0"}, {"x1*x0", "cos(x2)", "x0", "x1^2"}}) {
    const Field x = coord_vec(s, c);
    const auto vk = kosmann_lift(x, s.frame, s.g_frame, s.g_frame_inv);
    const SpinLift wk = spin_lift_W(vk, spin, s.g_frame, s.g_frame_inv);
    const SpinLift wn = spin_lift_W(natural_lift(x, s.frame), spin, s.g_frame, s.g_frame_inv);
    CHECK(worst(equivariance_residual(vk, wk, spin), pts) < 1e-9);
    const SpinLift wc = spin_lift_W_covariant(x, s, spin);
    for (const Point& p : pts) {
      CHECK(worst(sub(wk.w, wc.w), p) < 1e-12);
      for (const SpinLift* w : {&wk, &wn}) {
        const SpinMatrix low = w->lowered(spin.d.d);
        CHECK(std::abs(evaluate(low[0][1] - low[1][0], p)) < 1e-10);
        CHECK(std::abs(evaluate(trace_identity(*w, spin.d), p)) < 1e-12);
      }
      CHECK(worst(sub(wn.w, wk.w), p) < 1e-12);
    }
  }
}

TEST_CASE("degenerate differentiation blocks") {
  const Spacetime s = minkowski_tetrad();
  const SpinStructure spin = canonical_spin_structure(s);
  const Point p{0.3, 0.5, -0.2, 0.8};
  const SpinDegenerateDiff zero = spin_degenerate_diff(coord_vec(s, {"1", "2", "0", "-1"}), s, spin);
  CHECK(worst(zero.spinor, p) == 0.0);
  CHECK(max_abs_at(zero.spatial, p) == 0.0);

  const Spacetime sph = spherical();
  const SpinStructure ss = canonical_spin_structure(sph);
  // Rotation about the polar axis is d/dphi.
  const Field rot = coord_vec(sph, {"0", "0", "0", "1"});
  const SpinDegenerateDiff d = spin_degenerate_diff(rot, sph, ss);
  const ExprMatrix n = field_as_matrix(covariant_derivative(rot, sph.frame_gamma, sph.frame));
  const Point q{0.1, 1.7, 1.2, 0.4};
  // Killing: nabla^i X_j = -nabla_j X^i, so the block is -nabla_j X^i.
  ExprMatrix neg;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) neg[i][j] = -n[i][j];
  CHECK(max_abs_at(minus(d.spatial, neg), q) < 1e-12);
  CHECK(max_abs_at(n, q) > 0.1);
  const SpinLift w = spin_lift_W(kosmann_lift(rot, sph.frame, sph.g_frame, sph.g_frame_inv), ss, sph.g_frame,
                                 sph.g_frame_inv);
  SpinMatrix xa;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      Expr acc;
      for (int m = 0; m < 4; ++m) acc += rot[m] * ss.a.a[m][i][j];
      xa[i][j] = -w.w[i][j] - acc;
    }
  CHECK(worst(sub(d.spinor, xa), q) < 1e-12);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) CHECK(std::abs(evaluate(d.conj[i][j] - conj(d.spinor[i][j]), q)) == 0.0);
}

TEST_CASE("covariant derivatives of the basic fields vanish") {
  for (const Spacetime& s : {minkowski_tetrad(), spherical(), schwarzschild(), conformal()}) {
    CAPTURE(s.frame.name());
    const SpinStructure spin = canonical_spin_structure(s);
    const std::vector<Point> pts = {{0.3, 3.5, 1.1, 0.4}, {-0.5, 4.7, 0.8, 2.0}};
    CHECK(worst(covariant_derivative_spin(spin.d.as_field(s.frame.name()), s, spin), pts) < 1e-9);
    CHECK(worst(covariant_derivative_spin(spin.g_field, s, spin), pts) < 1e-9);
    CHECK(worst(covariant_derivative_spin(metric_field(s), s, spin), pts) < 1e-9);
  }
  const Spacetime flat = minkowski_tetrad();
  const SpinStructure fs = canonical_spin_structure(flat);
  Field psi(FieldType{1, 0, 0, 0, 0, 0}, flat.frame.name(), {Expr(Complex(1, 2)), Expr(3.0)});
  CHECK(worst(covariant_derivative_spin(psi, flat, fs), {{0.1, 0.2, 0.3, 0.4}}) == 0.0);
}

TEST_CASE("basic fields are kosmann constant") {
  for (const Spacetime& s : {minkowski_tetrad(), spherical(), schwarzschild(), conformal()}) {
    CAPTURE(s.frame.name());
    const SpinStructure spin = canonical_spin_structure(s);
    const std::vector<Point> pts = {{0.3, 3.5, 1.1, 0.4}, {-0.5, 4.7, 0.8, 2.0}};
    for (const auto& c : std::vector<std::array<std::string, 4>>{{"x0^2", "x1", "sin(x2)", "0"},
                                                                 {"x1*x0", "cos(x2)", "x0", "x1^2"}}) {
      const BasicFieldDerivatives r = theorem81_fields(coord_vec(s, c), s, spin, Variant::Kosmann);
      CHECK(worst(r.g, pts) < 1e-9);
      CHECK(worst(r.d, pts) < 1e-9);
      CHECK(worst(r.G, pts) < 1e-9);
    }
  }
}

TEST_CASE("natural variant follows the metric lie derivative") {
  const Spacetime s = spherical();
  const SpinStructure spin = canonical_spin_structure(s);
  const Field x = coord_vec(s, {"x0^2", "x1", "sin(x2)", "0"});
  const BasicFieldDerivatives r = theorem81_fields(x, s, spin, Variant::Natural);
  CHECK(worst(r.d, kSphericalPoints) < 1e-9);
  CHECK(worst(r.g - lie_derivative_frame(x, metric_field(s), s.frame), kSphericalPoints) < 1e-9);
  CHECK(worst(r.g, kSphericalPoints) > 1e-3);
  CHECK(worst(r.G - natural_G_expectation(x, s, spin), kSphericalPoints) < 1e-9);
  CHECK(worst(r.G, kSphericalPoints) > 1e-3);
}

TEST_CASE("seven-term and split forms agree on every small type") {
  const Spacetime s = spherical();
  const SpinStructure spin = canonical_spin_structure(s);
  const Field x = coord_vec(s, {"x0^2", "x1", "sin(x2)", "0.3*x1*x0"});
  const auto v = kosmann_lift(x, s.frame, s.g_frame, s.g_frame_inv);
  const SpinLift w = spin_lift_W(v, spin, s.g_frame, s.g_frame_inv);
  const std::vector<Point> pts(kSphericalPoints.begin(), kSphericalPoints.begin() + 2);
  int types = 0;
  for (int a = 0; a <= 3; ++a)
    for (int b = 0; a + b <= 3; ++b)
      for (int c = 0; a + b + c <= 3; ++c)
        for (int d = 0; a + b + c + d <= 3; ++d)
          for (int e = 0; a + b + c + d + e <= 3; ++e)
            for (int f = 0; a + b + c + d + e + f <= 3; ++f) {
              const FieldType t{a, b, c, d, e, f};
              CAPTURE(t.to_string());
              const Field y = spinor_field(t, s.frame.name());
              const Field seven = kosmann_lie_spin(x, y, v, w, s.frame);
              CHECK(worst(seven - kosmann_lie_spin_split(x, y, s, spin), pts) < 1e-9);
              if (t.is_tensorial()) CHECK(worst(seven - generalized_lie_derivative(x, v, y, s.frame), pts) < 1e-12);
              if (t.rank() <= 2) CHECK(worst(kosmann_lie_spin(x, conj(y), v, w, s.frame) - conj(seven), pts) < 1e-12);
              ++types;
            }
  CHECK(types == 84);
}

TEST_CASE("variant mismatch and non-canonical misuse are rejected") {
  const Spacetime s = spherical();
  const SpinStructure spin = canonical_spin_structure(s);
  const Field x = coord_vec(s, {"x0^2", "x1", "0", "0"});
  const auto vk = kosmann_lift(x, s.frame, s.g_frame, s.g_frame_inv);
  const SpinLift wn = spin_lift_W(natural_lift(x, s.frame), spin, s.g_frame, s.g_frame_inv);
  CHECK_THROWS_AS(kosmann_lie_spin(x, spin.g_field, vk, wn, s.frame), std::invalid_argument);
  CHECK_THROWS_AS(canonical_spin_structure(sheared_schwarzschild()), std::invalid_argument);
  const GeneralPair gp = general_pair();
  const Field xg = coord_vec(gp.s, {"x0^2", "x1", "0", "0"});
  CHECK_THROWS_AS(spin_lift_W(kosmann_lift(xg, gp.s.frame, gp.s.g_frame, gp.s.g_frame_inv), gp.spin, gp.s.g_frame,
                              gp.s.g_frame_inv),
                  std::invalid_argument);
  CHECK_THROWS_AS(theorem81_fields(xg, gp.s, gp.spin, Variant::Natural), std::invalid_argument);
}

TEST_CASE("general frame pair regression") {
  const GeneralPair gp = general_pair();
  const Spacetime& s = gp.s;
  const SpinStructure& spin = gp.spin;
  const std::vector<Point> pts(kSphericalPoints.begin(), kSphericalPoints.begin() + 3);
  {
    Evaluator ev(pts[0]);
    const IvwIdentityReport r = check_ivw_identities(spin.g_field, spin.g_inverse, ev);
    CHECK(r.first < 1e-12);
    CHECK(r.second < 1e-12);
  }
  CHECK(worst(covariant_derivative_spin(spin.d.as_field(s.frame.name()), s, spin), pts) < 1e-9);
  CHECK(worst(covariant_derivative_spin(spin.g_field, s, spin), pts) < 1e-9);
  const Field x = coord_vec(s, {"x0^2", "x1", "sin(x2)", "0.3*x1*x0"});
  const BasicFieldDerivatives r = theorem81_fields(x, s, spin, Variant::Kosmann);
  CHECK(worst(r.g, pts) < 1e-9);
  CHECK(worst(r.d, pts) < 1e-9);
  CHECK(worst(r.G, pts) < 1e-9);
  const auto v = kosmann_lift(x, s.frame, s.g_frame, s.g_frame_inv);
  const SpinLift w = spin_lift_W_covariant(x, s, spin);
  // G is not constant here, so the relation picks up its transport.
  CHECK(worst(equivariance_residual(v, w, spin) - transport(x, spin.g_field, s.frame), pts) < 1e-9);
  const Field y = spinor_field(FieldType{1, 0, 0, 1, 1, 0}, s.frame.name());
  CHECK(worst(kosmann_lie_spin(x, y, v, w, s.frame) - kosmann_lie_spin_split(x, y, s, spin), pts) < 1e-9);
}

TEST_CASE("spin to lorentz closed forms") {
  const auto id = spin_to_lorentz(cidentity<2>());
  CHECK(max_abs<4>(id - cidentity<4>()) < 1e-15);
  const double lam = 0.7, th = 0.9;
  const auto boost = spin_to_lorentz({{{std::exp(lam / 2), 0.0}, {0.0, std::exp(-lam / 2)}}});
  CHECK(std::abs(boost[0][0] - std::cosh(lam)) < 1e-12);
  CHECK(std::abs(boost[3][3] - std::cosh(lam)) < 1e-12);
  CHECK(std::abs(boost[0][3] - std::sinh(lam)) < 1e-12);
  CHECK(std::abs(boost[3][0] - std::sinh(lam)) < 1e-12);
  CHECK(std::abs(boost[1][1] - 1.0) < 1e-12);
  const Complex e(std::cos(th / 2), std::sin(th / 2));
  const auto rot = spin_to_lorentz({{{e, 0.0}, {0.0, std::conj(e)}}});
  CHECK(std::abs(rot[0][0] - 1.0) < 1e-12);
  CHECK(std::abs(rot[1][1] - std::cos(th)) < 1e-12);
  CHECK(std::abs(rot[2][2] - std::cos(th)) < 1e-12);
  CHECK(std::abs(std::abs(rot[1][2]) - std::sin(th)) < 1e-12);
  CHECK(std::abs(rot[1][2] + rot[2][1]) < 1e-12);
  CHECK_THROWS_AS(spin_to_lorentz({{{2.0, 0.0}, {0.0, 1.0}}}), LorentzMapError);

  // A generic SL(2,C) element preserves the Minkowski form.
  CMatrix<2> m{{{Complex(1.2, 0.3), Complex(0.4, -0.5)}, {Complex(-0.2, 0.1), 0.0}}};
  m[1][1] = (1.0 + m[0][1] * m[1][0]) / m[0][0];
  const auto l = spin_to_lorentz(m);
  const auto eta = minkowski_numeric();
  CHECK(max_abs<4>(transpose<4>(l) * eta * l - eta) < 1e-10);
}

TEST_CASE("exponential consistency for a matched lift") {
  const Spacetime s = spherical();
  const SpinStructure spin = canonical_spin_structure(s);
  const Field x = coord_vec(s, {"x0^2", "x1", "sin(x2)", "0.3*x1*x0"});
  const auto v = kosmann_lift(x, s.frame, s.g_frame, s.g_frame_inv);
  const SpinLift w = spin_lift_W(v, spin, s.g_frame, s.g_frame_inv);
  Evaluator ev(kSphericalPoints[0]);
  CMatrix<4> vn{};
  CMatrix<2> wn{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) vn[i][j] = ev(v.v[i][j]);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) wn[i][j] = ev(w.w[i][j]);
  CHECK(std::abs(wn[0][0] + wn[1][1]) < 1e-14);
  const ExponentialReport r = exponential_consistency(vn, wn, {0.1, 0.05, 0.025, 0.0125});
  CHECK(r.slope == doctest::Approx(2.0).epsilon(0.05));
  for (std::size_t k = 0; k < r.eps.size(); ++k) CHECK(r.exact_gap[k] < 1e-12);
}

TEST_CASE("unprojected natural lift breaks the spin metric") {
  const Spacetime s = minkowski_tetrad();
  const SpinStructure spin = canonical_spin_structure(s);
  const Field x = coord_vec(s, {"x0", "x1", "x2", "x3"});
  const auto v = natural_lift(x, s.frame);
  const SpinLift literal = spin_lift_W_literal(v, spin);
  const Point p{0.3, 0.5, -0.2, 0.8};
  SpinMatrix id{{{Expr(1.0), Expr(0.0)}, {Expr(0.0), Expr(1.0)}}};
  CHECK(worst(sub(literal.w, id), p) < 1e-15);
  const Field d = spin.d.as_field(s.frame.name());
  const Field ld = kosmann_lie_spin(x, d, v, literal, s.frame);
  CHECK(worst(ld - Expr(2.0) * d, {p}) < 1e-15);
  const SpinLift projected = spin_lift_W(v, spin, s.g_frame, s.g_frame_inv);
  CHECK(worst(kosmann_lie_spin(x, d, v, projected, s.frame), {p}) == 0.0);
}
