#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kosmann/expr.hpp"

namespace kosmann {

using ExprMatrix = std::array<std::array<Expr, kDim>, kDim>;
/// Three-index array with the first index upper: a[k][i][j].
using ExprArray3 = std::array<ExprMatrix, kDim>;
using SpinMatrix = std::array<std::array<Expr, 2>, 2>;

ExprMatrix identity_matrix();
ExprMatrix zero_matrix();

/// Index slot kinds, listed in storage order.
enum class Slot : std::uint8_t { SpinorUp, SpinorDown, ConjUp, ConjDown, SpatialUp, SpatialDown };

inline int slot_extent(Slot s) { return s == Slot::SpatialUp || s == Slot::SpatialDown ? kDim : 2; }
inline bool slot_is_upper(Slot s) { return s == Slot::SpinorUp || s == Slot::ConjUp || s == Slot::SpatialUp; }

/// Spin-tensorial type (spinor up, spinor down | conj up, conj down | spatial up, spatial down).
struct FieldType {
  int spinor_up = 0;
  int spinor_down = 0;
  int conj_up = 0;
  int conj_down = 0;
  int spatial_up = 0;
  int spatial_down = 0;

  static FieldType tensor(int up, int down) { return {0, 0, 0, 0, up, down}; }
  bool is_tensorial() const { return spinor_up + spinor_down + conj_up + conj_down == 0; }
  int rank() const { return spinor_up + spinor_down + conj_up + conj_down + spatial_up + spatial_down; }
  /// Type of the conjugate field: spinor and conjugate counts swap.
  FieldType conjugate() const { return {conj_up, conj_down, spinor_up, spinor_down, spatial_up, spatial_down}; }
  std::vector<Slot> slots() const;
  std::string to_string() const;
  bool operator==(const FieldType&) const = default;
};

/// A spin-tensor field: complex Expr components in a named frame (pair).
///
/// Components are stored row-major over the slots of FieldType::slots(), the
/// last slot varying fastest. Spinor indices run over 0..1 and spatial indices
/// over 0..3. Purely spatial fields are ordinary tensor fields.
class Field {
 public:
  Field() = default;
  Field(FieldType type, std::string frame);
  Field(FieldType type, std::string frame, std::vector<Expr> components);

  const FieldType& type() const { return type_; }
  const std::string& frame() const { return frame_; }
  const std::vector<Slot>& slots() const { return slots_; }
  std::size_t size() const { return components_.size(); }

  std::vector<Expr>& components() { return components_; }
  const std::vector<Expr>& components() const { return components_; }
  Expr& operator[](std::size_t flat) { return components_[flat]; }
  const Expr& operator[](std::size_t flat) const { return components_[flat]; }

  std::size_t flat(std::span<const int> index) const;
  void unflatten(std::size_t flat, std::span<int> index) const;
  Expr& at(std::initializer_list<int> index) { return components_[flat(std::span(index.begin(), index.size()))]; }
  const Expr& at(std::initializer_list<int> index) const {
    return components_[flat(std::span(index.begin(), index.size()))];
  }
  std::size_t stride(int slot) const { return strides_[slot]; }

  Field with_components(std::vector<Expr> components) const;

 private:
  FieldType type_;
  std::string frame_;
  std::vector<Slot> slots_;
  std::vector<std::size_t> strides_;
  std::vector<Expr> components_;
};

using TensorField = Field;
using SpinTensorField = Field;

/// Throws std::invalid_argument unless the frame tags and types agree.
void require_same_frame(const Field& a, const std::string& frame, const char* what);
void require_compatible(const Field& a, const Field& b, const char* what);

Field operator+(const Field& a, const Field& b);
Field operator-(const Field& a, const Field& b);
Field operator*(const Expr& s, const Field& a);
Field conj(const Field& a);

/// Endomorphism fields acting on each slot kind; absent blocks act as zero.
struct Derivation {
  std::optional<SpinMatrix> spinor;
  std::optional<SpinMatrix> conj;
  std::optional<ExprMatrix> spatial;
};

/// Degenerate (algebraic) differentiation: each upper index a picks up
/// +sum_v M^a_v Y^{..v..}, each lower index b picks up -sum_w M^w_b Y_{..w..}.
Field apply_derivation(const Field& y, const Derivation& d);

/// Replaces slot `slot` by sum_i m[a][i] Y[..i..].
Field transform_slot(const Field& y, int slot, const ExprMatrix& m);

/// Tensor product of purely spatial fields; upper indices of a then b, then
/// lower indices of a then b.
Field tensor_product(const Field& a, const Field& b);

/// Contracts upper spatial index `upper` (0-based among upper indices) with
/// lower spatial index `lower` of a purely spatial field.
Field contract(const Field& y, int upper, int lower);

/// Numeric components at the evaluator's point.
std::vector<Complex> evaluate(const Field& y, Evaluator& ev);

/// Largest component magnitude at the evaluator's point.
double max_abs(const Field& y, Evaluator& ev);

}  // namespace kosmann
