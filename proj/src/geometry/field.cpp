#include "kosmann/field.hpp"

#include <algorithm>

namespace kosmann {

ExprMatrix identity_matrix() {
  ExprMatrix m;
  for (int i = 0; i < kDim; ++i) m[i][i] = Expr(1.0);
  return m;
}

ExprMatrix zero_matrix() { return ExprMatrix{}; }

std::vector<Slot> FieldType::slots() const {
  std::vector<Slot> out;
  out.insert(out.end(), spinor_up, Slot::SpinorUp);
  out.insert(out.end(), spinor_down, Slot::SpinorDown);
  out.insert(out.end(), conj_up, Slot::ConjUp);
  out.insert(out.end(), conj_down, Slot::ConjDown);
  out.insert(out.end(), spatial_up, Slot::SpatialUp);
  out.insert(out.end(), spatial_down, Slot::SpatialDown);
  return out;
}

std::string FieldType::to_string() const {
  auto n = [](int v) { return std::to_string(v); };
  return "(" + n(spinor_up) + "," + n(spinor_down) + "|" + n(conj_up) + "," + n(conj_down) + "|" +
         n(spatial_up) + "," + n(spatial_down) + ")";
}

Field::Field(FieldType type, std::string frame) : type_(type), frame_(std::move(frame)), slots_(type.slots()) {
  for (int c : {type.spinor_up, type.spinor_down, type.conj_up, type.conj_down, type.spatial_up, type.spatial_down}) {
    if (c < 0) throw std::invalid_argument("negative index count in field type " + type.to_string());
  }
  strides_.assign(slots_.size(), 1);
  std::size_t total = 1;
  for (int s = static_cast<int>(slots_.size()) - 1; s >= 0; --s) {
    strides_[s] = total;
    total *= static_cast<std::size_t>(slot_extent(slots_[s]));
  }
  components_.assign(total, Expr());
}

Field::Field(FieldType type, std::string frame, std::vector<Expr> components) : Field(type, std::move(frame)) {
  if (components.size() != components_.size()) {
    throw std::invalid_argument("field of type " + type.to_string() + " needs " + std::to_string(components_.size()) +
                                " components, got " + std::to_string(components.size()));
  }
  components_ = std::move(components);
}

std::size_t Field::flat(std::span<const int> index) const {
  if (index.size() != slots_.size()) throw std::invalid_argument("wrong number of indices");
  std::size_t f = 0;
  for (std::size_t s = 0; s < index.size(); ++s) {
    if (index[s] < 0 || index[s] >= slot_extent(slots_[s])) throw std::out_of_range("index out of range");
    f += static_cast<std::size_t>(index[s]) * strides_[s];
  }
  return f;
}

void Field::unflatten(std::size_t flat, std::span<int> index) const {
  for (std::size_t s = 0; s < slots_.size(); ++s) {
    index[s] = static_cast<int>(flat / strides_[s]);
    flat %= strides_[s];
  }
}

Field Field::with_components(std::vector<Expr> components) const {
  return Field(type_, frame_, std::move(components));
}

void require_same_frame(const Field& a, const std::string& frame, const char* what) {
  if (a.frame() != frame) {
    throw std::invalid_argument(std::string(what) + ": field is in frame '" + a.frame() + "', expected '" + frame + "'");
  }
}

void require_compatible(const Field& a, const Field& b, const char* what) {
  require_same_frame(b, a.frame(), what);
  if (!(a.type() == b.type())) {
    throw std::invalid_argument(std::string(what) + ": type mismatch " + a.type().to_string() + " vs " +
                                b.type().to_string());
  }
}

Field operator+(const Field& a, const Field& b) {
  require_compatible(a, b, "field addition");
  Field out = a;
  for (std::size_t n = 0; n < a.size(); ++n) out[n] = a[n] + b[n];
  return out;
}

Field operator-(const Field& a, const Field& b) {
  require_compatible(a, b, "field subtraction");
  Field out = a;
  for (std::size_t n = 0; n < a.size(); ++n) out[n] = a[n] - b[n];
  return out;
}

Field operator*(const Expr& s, const Field& a) {
  Field out = a;
  for (auto& c : out.components()) c = s * c;
  return out;
}

Field conj(const Field& a) {
  const FieldType& t = a.type();
  Field out(t.conjugate(), a.frame());
  const std::size_t spin = a.type().spinor_up + a.type().spinor_down;
  const std::size_t bar = a.type().conj_up + a.type().conj_down;
  std::vector<int> idx(a.slots().size());
  std::vector<int> moved(idx.size());
  for (std::size_t n = 0; n < a.size(); ++n) {
    a.unflatten(n, idx);
    std::copy(idx.begin() + spin, idx.begin() + spin + bar, moved.begin());
    std::copy(idx.begin(), idx.begin() + spin, moved.begin() + bar);
    std::copy(idx.begin() + spin + bar, idx.end(), moved.begin() + spin + bar);
    out[out.flat(moved)] = conj(a[n]);
  }
  return out;
}

namespace {

// Reads block entry m[row][col] for the slot kind, or nullptr when absent.
const Expr* block_entry(const Derivation& d, Slot s, int row, int col) {
  switch (s) {
    case Slot::SpinorUp:
    case Slot::SpinorDown:
      return d.spinor ? &(*d.spinor)[row][col] : nullptr;
    case Slot::ConjUp:
    case Slot::ConjDown:
      return d.conj ? &(*d.conj)[row][col] : nullptr;
    case Slot::SpatialUp:
    case Slot::SpatialDown:
      return d.spatial ? &(*d.spatial)[row][col] : nullptr;
  }
  return nullptr;
}

}  // namespace

Field apply_derivation(const Field& y, const Derivation& d) {
  Field out(y.type(), y.frame());
  const auto& slots = y.slots();
  std::vector<int> idx(slots.size());
  for (std::size_t n = 0; n < y.size(); ++n) {
    y.unflatten(n, idx);
    Expr acc;
    for (std::size_t s = 0; s < slots.size(); ++s) {
      const int extent = slot_extent(slots[s]);
      const bool upper = slot_is_upper(slots[s]);
      const std::size_t base = n - static_cast<std::size_t>(idx[s]) * y.stride(s);
      for (int v = 0; v < extent; ++v) {
        const Expr* m = upper ? block_entry(d, slots[s], idx[s], v) : block_entry(d, slots[s], v, idx[s]);
        if (!m || m->is_zero()) continue;
        const Expr& other = y[base + static_cast<std::size_t>(v) * y.stride(s)];
        if (upper) {
          acc += *m * other;
        } else {
          acc -= *m * other;
        }
      }
    }
    out[n] = acc;
  }
  return out;
}

Field transform_slot(const Field& y, int slot, const ExprMatrix& m) {
  Field out(y.type(), y.frame());
  const int extent = slot_extent(y.slots()[slot]);
  std::vector<int> idx(y.slots().size());
  for (std::size_t n = 0; n < y.size(); ++n) {
    y.unflatten(n, idx);
    const std::size_t base = n - static_cast<std::size_t>(idx[slot]) * y.stride(slot);
    Expr acc;
    for (int i = 0; i < extent; ++i) acc += m[idx[slot]][i] * y[base + static_cast<std::size_t>(i) * y.stride(slot)];
    out[n] = acc;
  }
  return out;
}

Field tensor_product(const Field& a, const Field& b) {
  if (!a.type().is_tensorial() || !b.type().is_tensorial()) {
    throw std::invalid_argument("tensor_product: spatial fields only");
  }
  require_same_frame(b, a.frame(), "tensor_product");
  const int ra = a.type().spatial_up, sa = a.type().spatial_down;
  const int rb = b.type().spatial_up, sb = b.type().spatial_down;
  Field out(FieldType::tensor(ra + rb, sa + sb), a.frame());
  std::vector<int> idx(out.slots().size()), ia(ra + sa), ib(rb + sb);
  for (std::size_t n = 0; n < out.size(); ++n) {
    out.unflatten(n, idx);
    std::copy(idx.begin(), idx.begin() + ra, ia.begin());
    std::copy(idx.begin() + ra, idx.begin() + ra + rb, ib.begin());
    std::copy(idx.begin() + ra + rb, idx.begin() + ra + rb + sa, ia.begin() + ra);
    std::copy(idx.begin() + ra + rb + sa, idx.end(), ib.begin() + rb);
    out[n] = a[a.flat(ia)] * b[b.flat(ib)];
  }
  return out;
}

Field contract(const Field& y, int upper, int lower) {
  const int r = y.type().spatial_up, s = y.type().spatial_down;
  if (!y.type().is_tensorial() || upper < 0 || upper >= r || lower < 0 || lower >= s) {
    throw std::invalid_argument("contract: invalid index pair");
  }
  Field out(FieldType::tensor(r - 1, s - 1), y.frame());
  std::vector<int> idx(out.slots().size()), full(y.slots().size());
  for (std::size_t n = 0; n < out.size(); ++n) {
    out.unflatten(n, idx);
    Expr acc;
    for (int k = 0; k < kDim; ++k) {
      int src = 0;
      for (int u = 0; u < r; ++u) full[u] = u == upper ? k : idx[src++];
      for (int l = 0; l < s; ++l) full[r + l] = l == lower ? k : idx[src++];
      acc += y[y.flat(full)];
    }
    out[n] = acc;
  }
  return out;
}

std::vector<Complex> evaluate(const Field& y, Evaluator& ev) {
  std::vector<Complex> out;
  out.reserve(y.size());
  for (const auto& c : y.components()) out.push_back(ev(c));
  return out;
}

double max_abs(const Field& y, Evaluator& ev) {
  double m = 0.0;
  for (const auto& c : y.components()) m = std::max(m, std::abs(ev(c)));
  return m;
}

}  // namespace kosmann
