#pragma once

#include "kosmann/field.hpp"
#include "kosmann/geometry.hpp"
#include "kosmann/lie.hpp"
#include "kosmann/linalg.hpp"

namespace kosmann {

/// Skew spin metric d_ij, its inverse d^ij and their conjugates.
struct SpinMetric {
  SpinMatrix d;
  SpinMatrix d_inv;
  SpinMatrix d_bar() const;
  SpinMatrix d_bar_inv() const;
  /// d as a (0,2|0,0|0,0) field.
  Field as_field(const std::string& frame) const;
};

/// Spin metric plus the Infeld-van der Waerden field G^{a abar}_m, stored as a
/// (1,0|1,0|0,1) field with index order (a, abar, m).
struct SpinConstants {
  SpinMetric d;
  Field g_field;
};

/// Pauli matrices for G and the matrices d = [[0,1],[-1,0]], d^-1 = [[0,-1],[1,0]].
SpinConstants canonical_constants(const std::string& frame);

/// G^m_{u ubar} = sum G^{a abar}_n d_au dbar_{abar ubar} g^nm, a (0,1|0,1|1,0) field.
Field inverse_ivw(const Field& g_field, const SpinMetric& d, const ExprMatrix& g_frame_inv);

/// Worst deviation of the two contraction identities from 2 delta at a point.
struct IvwIdentityReport {
  double first = 0.0;   // sum_m G^{a abar}_m G^m_{u ubar} - 2 delta delta
  double second = 0.0;  // sum_{u ubar} G^{u ubar}_m G^n_{u ubar} - 2 delta
};
IvwIdentityReport check_ivw_identities(const Field& g_field, const Field& g_inverse, Evaluator& ev);

/// Everything the spinor formulas need for one frame pair.
struct SpinStructure {
  SpinMetric d;
  Field g_field;
  Field g_inverse;
  SpinConnection a;
  /// Orthonormal tetrad with constant canonical G and d.
  bool canonical = false;
};

/// Canonical pair over an orthonormal frame of s.
SpinStructure canonical_spin_structure(const Spacetime& s);
/// Arbitrary frame pair with position-dependent G and d.
SpinStructure general_spin_structure(const Spacetime& s, Field g_field, SpinMetric d);

/// W^i_j, stored w[i][j].
struct SpinLift {
  SpinMatrix w;
  Variant variant = Variant::Kosmann;
  std::string frame;
  SpinMatrix conjugate() const;
  /// W_ij = sum_s W^s_i d_sj.
  SpinMatrix lowered(const SpinMatrix& d) const;
};

/// Lorentz part of V: V_ij is antisymmetrized with g and raised back.
ExprMatrix lorentz_projection(const ExprMatrix& v, const ExprMatrix& g, const ExprMatrix& g_inv);

/// W^i_j = 1/4 sum G^{i sbar}_k V^k_m G^m_{j sbar}, applied to the Lorentz part
/// of V. Requires a canonical pair.
SpinLift spin_lift_W(const LiftCoefficients& v, const SpinStructure& spin, const ExprMatrix& g, const ExprMatrix& g_inv);
/// The same contraction applied to V as given, without projection.
SpinLift spin_lift_W_literal(const LiftCoefficients& v, const SpinStructure& spin);
/// Covariant three-term form: the nabla X contractions minus X^m A_m.
/// Valid for general frame pairs; kosmann variant only.
SpinLift spin_lift_W_covariant(const Field& x, const Spacetime& s, const SpinStructure& spin);

/// sum_i W^a_i G^{i abar}_m + sum_ibar G^{a ibar}_m conj(W^abar_ibar) - sum_k V^k_m G^{a abar}_k.
Field equivariance_residual(const LiftCoefficients& v, const SpinLift& w, const SpinStructure& spin);

/// sum conj(W_{ubar abar}) dbar^{abar ubar}, as a single-component field.
Expr trace_identity(const SpinLift& w, const SpinMetric& d);

struct SpinDegenerateDiff {
  SpinMatrix spinor;
  SpinMatrix conj;
  ExprMatrix spatial;
  Derivation derivation() const;
};

/// Blocks of S_X: G-contraction of (nabla^k X_m - nabla_m X^k)/8, its
/// conjugate, and (nabla^i X_j - nabla_j X^i)/2.
SpinDegenerateDiff spin_degenerate_diff(const Field& x, const Spacetime& s, const SpinStructure& spin);

/// Covariant derivative of a spin-tensor field in the frame pair.
Field covariant_derivative_spin(const Field& y, const Spacetime& s, const SpinStructure& spin);

/// Seven-term formula: transport, -W / +W on spinor indices, -conj(W) /
/// +conj(W) on conjugate indices, -V / +V on spatial indices.
Field kosmann_lie_spin(const Field& x, const Field& y, const LiftCoefficients& v, const SpinLift& w, const Frame& f);

/// Split form nabla_X(Y) + S_X(Y).
Field kosmann_lie_spin_split(const Field& x, const Field& y, const Spacetime& s, const SpinStructure& spin);

/// Kosmann-Lie derivatives of g, d and G for one vector field.
struct BasicFieldDerivatives {
  Field g;
  Field d;
  Field G;
};
BasicFieldDerivatives theorem81_fields(const Field& x, const Spacetime& s, const SpinStructure& spin,
                                       Variant variant);

/// Expected natural-variant value of the G derivative: sum_k S^k_m G^{a abar}_k.
Field natural_G_expectation(const Field& x, const Spacetime& s, const SpinStructure& spin);

class LorentzMapError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Lorentz matrix S^k_m = 1/2 sum (M sigma_m M^dagger)^{u ubar} G^k_{u ubar}.
CMatrix<4> spin_to_lorentz(const CMatrix<2>& m);

/// Numeric Minkowski matrix.
CMatrix<4> minkowski_numeric();

/// Compares spin_to_lorentz(exp(eps W)) with exp(eps V) for a matched numeric
/// pair. The map is a group homomorphism, so the exact gap sits at rounding
/// level; the slope is fitted to the gap from the first-order model I + eps V,
/// which is O(eps^2).
struct ExponentialReport {
  std::vector<double> eps;
  std::vector<double> exact_gap;    // max |phi(exp(eps W)) - exp(eps V)|
  std::vector<double> first_order;  // max |phi(exp(eps W)) - (I + eps V)|
  double slope = 0.0;
};
ExponentialReport exponential_consistency(const CMatrix<4>& v, const CMatrix<2>& w, const std::vector<double>& eps);

}  // namespace kosmann
