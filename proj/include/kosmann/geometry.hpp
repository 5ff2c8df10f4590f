#pragma once

#include <memory>
#include <string>
#include <vector>

#include "kosmann/expr.hpp"
#include "kosmann/field.hpp"

namespace kosmann {

/// Symbolic determinant by cofactor expansion.
Expr determinant(const ExprMatrix& m);
/// Symbolic inverse (adjugate over determinant, or reciprocal diagonal).
ExprMatrix inverse(const ExprMatrix& m);
ExprMatrix transpose(const ExprMatrix& m);
ExprMatrix multiply(const ExprMatrix& a, const ExprMatrix& b);
ExprMatrix minkowski_matrix();

/// Metric components g_ij in the coordinate frame, signature (+,-,-,-).
struct Metric {
  ExprMatrix g;
};

class SingularityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// g^ij. Cheap to call; the numeric check belongs to validation.
ExprMatrix inverse_metric(const Metric& metric);

enum class FrameKind { Holonomic, General, Orthonormal };
std::string_view frame_kind_name(FrameKind kind);

/// Four vector fields Upsilon_m with coordinate components vectors[i][m].
///
/// The dual covectors dual[k][i] = eta^k_i and the commutation coefficients
/// c[k][i][j] with [Upsilon_i, Upsilon_j] = sum_k c^k_ij Upsilon_k are
/// computed symbolically on construction.
class Frame {
 public:
  Frame(std::string name, FrameKind kind, ExprMatrix vectors, bool future_pointing = true);
  static Frame holonomic(std::string name = "holonomic");

  const std::string& name() const { return name_; }
  FrameKind kind() const { return kind_; }
  bool future_pointing() const { return future_pointing_; }
  const ExprMatrix& vectors() const { return vectors_; }
  const ExprMatrix& dual() const { return dual_; }
  const ExprArray3& commutation() const { return c_; }

  /// Partial derivative d/dx^k through the shared derivative cache.
  Expr partial(const Expr& f, int k) const;
  /// L_{Upsilon_m}(f) = sum_n Upsilon^n_m d_n f.
  Expr derivative(int m, const Expr& f) const;
  /// Transport sum_m X^m L_{Upsilon_m}(f) for frame components X^m.
  Expr transport(const std::array<Expr, kDim>& x, const Expr& f) const;

 private:
  std::string name_;
  FrameKind kind_;
  bool future_pointing_;
  ExprMatrix vectors_;
  ExprMatrix dual_;
  ExprArray3 c_;
  std::shared_ptr<DerivativeCache> cache_;
};

/// c^k_ij of a frame (also available as Frame::commutation()).
ExprArray3 commutation_coefficients(const Frame& f);
ExprMatrix dual_frame(const Frame& f);

/// g(Upsilon_i, Upsilon_j).
ExprMatrix frame_metric(const Metric& metric, const Frame& f);

/// Gamma^k_ij with nabla_i Y^k = L_{Upsilon_i} Y^k + sum_j Gamma^k_ij Y^j.
struct Connection {
  ExprArray3 gamma;
  std::string frame;
};

Connection christoffel_holonomic(const Metric& metric, const ExprMatrix& g_inv, const Frame& holonomic);
/// General-frame Levi-Civita connection from frame metric components.
Connection christoffel_frame(const ExprMatrix& g_frame, const ExprMatrix& g_frame_inv, const Frame& f);

/// Spinor block A^i_{rj}, stored a[r][i][j]; the conjugate block is its
/// entrywise conjugate.
struct SpinConnection {
  std::array<SpinMatrix, kDim> a;
  std::string frame;
  SpinMatrix conjugate(int r) const;
};

/// A^i_{rj}: the Gamma term plus the frame derivatives of G and of the
/// conjugate spin metric. `g_field` has type (1,0|1,0|0,1), `g_inverse`
/// (0,1|0,1|1,0), `d_bar` and `d_bar_inv` are the conjugate spin metric and
/// its inverse.
SpinConnection spin_connection(const Connection& gamma, const Frame& f, const Field& g_field, const Field& g_inverse,
                               const SpinMatrix& d_bar, const SpinMatrix& d_bar_inv);

/// Covariant derivative with the derivative index appended as the last lower
/// spatial index. Spinor slots need `spin`; spatial-only fields do not.
Field covariant_derivative(const Field& y, const Connection& gamma, const Frame& f,
                           const SpinConnection* spin = nullptr);

/// Chart with metric, a coordinate frame and one designated frame.
struct Spacetime {
  CoordinateNames names;
  Metric metric;
  ExprMatrix metric_inv;
  Frame holonomic;
  Connection holonomic_gamma;
  Frame frame;
  /// g(Upsilon_i, Upsilon_j) as computed from the coordinate metric.
  ExprMatrix g_frame_computed;
  /// Frame metric used downstream (exact constants for orthonormal frames).
  ExprMatrix g_frame;
  ExprMatrix g_frame_inv;
  Connection frame_gamma;
};

/// Builds all derived geometry. For orthonormal frames the frame metric is
/// replaced by the exact Minkowski constants; callers must validate that the
/// frame really is orthonormal (see geometry validation).
Spacetime make_spacetime(CoordinateNames names, Metric metric, Frame frame);

/// Per-point validation residuals. Each returns a nonnegative number that is
/// compared against the documented gate by the caller.
namespace validation {
double metric_symmetry(const Spacetime& s, Evaluator& ev);
/// |det g| at the point.
double metric_determinant(const Spacetime& s, Evaluator& ev);
double inverse_metric(const Spacetime& s, Evaluator& ev);
double frame_determinant(const Spacetime& s, Evaluator& ev);
double duality(const Spacetime& s, Evaluator& ev);
/// Deviation of g(Upsilon_i, Upsilon_j) from the Minkowski matrix.
double orthonormality(const Spacetime& s, Evaluator& ev);
/// g(Upsilon_0, Upsilon_0) evaluated with the coordinate metric.
double time_norm(const Spacetime& s, Evaluator& ev);
double holonomic_symmetry(const Spacetime& s, Evaluator& ev);
double torsion(const Spacetime& s, Evaluator& ev);
double metricity_holonomic(const Spacetime& s, Evaluator& ev);
double metricity_frame(const Spacetime& s, Evaluator& ev);
}  // namespace validation

/// Metric as a (0,2) field in the frame.
Field metric_field(const Spacetime& s);
/// Coordinate metric as a (0,2) field in the holonomic frame.
Field holonomic_metric_field(const Spacetime& s);

/// Converts a spatial field from coordinate components to frame components.
Field to_frame(const Field& y, const Frame& f);
/// Converts a spatial field from frame components to coordinate components.
Field to_holonomic(const Field& y, const Frame& f, const std::string& holonomic_name = "holonomic");

}  // namespace kosmann
