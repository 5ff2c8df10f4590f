#pragma once

#include <optional>
#include <vector>

#include "kosmann/field.hpp"
#include "kosmann/geometry.hpp"

namespace kosmann {

enum class Variant { Natural, Kosmann };
std::string_view variant_name(Variant v);

/// A vector field X as a (1,0) field; components in its frame.
Field vector_field(const std::array<Expr, kDim>& components, const std::string& frame);
std::array<Expr, kDim> components(const Field& x);

/// First-order lifting coefficients V^i_j, stored v[i][j].
struct LiftCoefficients {
  ExprMatrix v;
  Variant variant = Variant::Natural;
  std::string frame;
};

/// Coordinate-frame Lie derivative: transport term plus dX^k/dx^j on lower
/// indices minus dX^i/dx^k on upper indices.
Field lie_derivative_holonomic(const Field& x, const Field& y, const Frame& holonomic);

/// Lie derivative with frame components, commutation coefficients included.
Field lie_derivative_frame(const Field& x, const Field& y, const Frame& f);

/// V^i_j = L_{Upsilon_j}(X^i) - sum_m X^m c^i_mj.
LiftCoefficients natural_lift(const Field& x, const Frame& f);
/// Same coefficients via the connection: nabla_j X^i - sum_m X^m Gamma^i_mj.
LiftCoefficients natural_lift_covariant(const Field& x, const Connection& gamma, const Frame& f);

/// Kosmann coefficients in an arbitrary frame with metric components g.
LiftCoefficients kosmann_lift(const Field& x, const Frame& f, const ExprMatrix& g, const ExprMatrix& g_inv);
/// Shortcut for orthonormal frames through nabla X and Gamma.
LiftCoefficients kosmann_lift_orthonormal(const Field& x, const Connection& gamma, const Frame& f,
                                          const ExprMatrix& g, const ExprMatrix& g_inv);

/// Lowered V_ij = sum_r V^r_i g_rj.
ExprMatrix lower_lift(const ExprMatrix& v, const ExprMatrix& g);

/// Symmetric and skew parts of the lowered Kosmann coefficients, assembled
/// from frame derivatives of g and X and the commutation coefficients.
struct KosmannParts {
  ExprMatrix sym;
  ExprMatrix skew;
};
KosmannParts kosmann_parts(const Field& x, const Frame& f, const ExprMatrix& g);

/// S^i_j = (nabla_j X^i + nabla^i X_j) / 2.
ExprMatrix s_tensor(const Field& x, const Connection& gamma, const Frame& f, const ExprMatrix& g,
                    const ExprMatrix& g_inv);

/// Transport term minus the V-action: lower indices gain +V^k_j Y_k and upper
/// indices -V^i_k Y^k.
Field generalized_lie_derivative(const Field& x, const LiftCoefficients& v, const Field& y, const Frame& f);

/// sum_m X^m L_{Upsilon_m}(Y) componentwise.
Field transport(const Field& x, const Field& y, const Frame& f);

/// Frame components of [X, Y].
Field bracket(const Field& x, const Field& y, const Frame& f);

/// Matrix as a (1,1) field and back.
Field matrix_as_field(const ExprMatrix& m, const std::string& frame);
ExprMatrix field_as_matrix(const Field& f);
ExprMatrix commutator(const ExprMatrix& a, const ExprMatrix& b);

/// Ingredients the commutator checks evaluate.
struct CommutatorDefect {
  /// [LX, LY](Z) - L[X,Y](Z) + [S_X, S_Y](Z), one entry per test field.
  std::vector<Field> relation;
  /// S_{X,Y} assembled from the Lie derivatives of S_X, S_Y.
  ExprMatrix s_xy;
  /// -[S_X, S_Y].
  ExprMatrix minus_commutator;
};

CommutatorDefect commutator_defect(const Field& x, const Field& y, const std::vector<Field>& tests, const Spacetime& s);

// ---------------------------------------------------------------------------
// Flow oracle

class FlowError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Box = std::array<std::array<double, 2>, kDim>;

struct FlowOptions {
  int substeps = 64;
  double fd_step = 1e-4;
  std::optional<Box> box;
};

/// Point reached from p after flowing for parameter eps (4th-order Runge-Kutta).
Point flow(const std::array<Expr, kDim>& x, const Point& p, double eps, const FlowOptions& opt = {});

/// Components of phi_eps(Y) at p using finite-difference Jacobians of the flow.
std::vector<Complex> pushed_field(const Field& x, const Field& y, const Point& p, double eps,
                                  const FlowOptions& opt = {});

/// -(phi_eps(Y) - phi_{-eps}(Y)) / (2 eps) at p.
std::vector<Complex> flow_oracle_lie(const Field& x, const Field& y, const Point& p, double eps,
                                     const FlowOptions& opt = {});

struct ConvergenceReport {
  std::vector<double> eps;
  std::vector<double> error;  // max over points and components
  Point worst_point{};        // point of the largest error at the last eps
  double slope = 0.0;         // least-squares slope of log error against log eps
};

/// Oracle error against the coordinate Lie derivative over the given points.
ConvergenceReport oracle_convergence(const Field& x, const Field& y, const std::vector<Point>& points,
                                     const std::vector<double>& eps_list, const FlowOptions& opt = {});

double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace kosmann
