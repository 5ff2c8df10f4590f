#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "kosmann/cli.hpp"

namespace kosmann {

std::uint64_t SplitMix64::next() {
  std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double SplitMix64::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

std::vector<Point> draw_points(const Box& box, int count, std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::vector<Point> out(static_cast<std::size_t>(count));
  for (Point& p : out)
    for (int k = 0; k < kDim; ++k) p[k] = box[k][0] + rng.uniform() * (box[k][1] - box[k][0]);
  return out;
}

namespace {

using json = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ScenarioError(where.empty() ? what : where + ": " + what);
}

std::string child(const std::string& ptr, const std::string& key) { return ptr + "/" + key; }
std::string child(const std::string& ptr, std::size_t k) { return ptr + "/" + std::to_string(k); }

const json& require(const json& obj, const std::string& ptr, const char* key) {
  if (!obj.is_object()) fail(ptr.empty() ? "/" : ptr, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) fail(child(ptr, key), "missing required field");
  return *it;
}

const json& require_array(const json& v, const std::string& ptr, std::size_t size) {
  if (!v.is_array()) fail(ptr, "expected an array");
  if (size && v.size() != size) fail(ptr, "expected " + std::to_string(size) + " entries, got " + std::to_string(v.size()));
  return v;
}

std::string as_string(const json& v, const std::string& ptr) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number()) return v.dump();
  fail(ptr, "expected an expression string");
}

double as_number(const json& v, const std::string& ptr) {
  if (!v.is_number()) fail(ptr, "expected a number");
  return v.get<double>();
}

Expr as_expr(const json& v, const std::string& ptr, const CoordinateNames& names) {
  const std::string text = as_string(v, ptr);
  try {
    return parse(text, names);
  } catch (const ParseError& e) {
    fail(ptr, e.what());
  }
}

ExprMatrix as_matrix(const json& v, const std::string& ptr, const CoordinateNames& names) {
  require_array(v, ptr, kDim);
  ExprMatrix m;
  for (std::size_t i = 0; i < kDim; ++i) {
    const std::string row = child(ptr, i);
    require_array(v[i], row, kDim);
    for (std::size_t j = 0; j < kDim; ++j) m[i][j] = as_expr(v[i][j], child(row, j), names);
  }
  return m;
}

std::array<Expr, kDim> as_vector(const json& v, const std::string& ptr, const CoordinateNames& names) {
  require_array(v, ptr, kDim);
  std::array<Expr, kDim> out;
  for (std::size_t k = 0; k < kDim; ++k) out[k] = as_expr(v[k], child(ptr, k), names);
  return out;
}

std::string point_text(const Point& p) {
  std::ostringstream os;
  os << "(" << p[0] << "," << p[1] << "," << p[2] << "," << p[3] << ")";
  return os.str();
}

Field parse_field(const json& spec, const std::string& ptr, const CoordinateNames& names, const std::string& frame,
                  bool& is_spin) {
  FieldType type;
  if (spec.contains("spin_type")) {
    const std::string tp = child(ptr, "spin_type");
    const json& t = require_array(spec["spin_type"], tp, 6);
    std::array<int, 6> c{};
    for (std::size_t k = 0; k < 6; ++k) {
      if (!t[k].is_number_integer() || t[k].get<int>() < 0 || t[k].get<int>() > 4) {
        fail(child(tp, k), "expected an index count between 0 and 4");
      }
      c[k] = t[k].get<int>();
    }
    type = FieldType{c[0], c[1], c[2], c[3], c[4], c[5]};
    is_spin = !type.is_tensorial();
  } else {
    const std::string tp = child(ptr, "type");
    const json& t = require_array(require(spec, ptr, "type"), tp, 2);
    for (std::size_t k = 0; k < 2; ++k) {
      if (!t[k].is_number_integer() || t[k].get<int>() < 0 || t[k].get<int>() > 4) {
        fail(child(tp, k), "expected an index count between 0 and 4");
      }
    }
    type = FieldType::tensor(t[0].get<int>(), t[1].get<int>());
    is_spin = false;
  }
  Field out(type, is_spin ? frame : "holonomic");
  const std::string cp = child(ptr, "components");
  const json& comps = require(spec, ptr, "components");
  if (!comps.is_object()) fail(cp, "expected an object mapping index lists to expressions");
  const auto slots = out.slots();
  for (auto it = comps.begin(); it != comps.end(); ++it) {
    const std::string kp = child(cp, it.key());
    std::vector<int> idx;
    std::stringstream ss(it.key());
    std::string part;
    while (std::getline(ss, part, ',')) {
      int v = -1;
      try {
        std::size_t used = 0;
        v = std::stoi(part, &used);
        if (used != part.size()) v = -1;
      } catch (const std::exception&) {
        v = -1;
      }
      idx.push_back(v);
    }
    if (it.key().empty()) idx.clear();
    if (idx.size() != slots.size()) {
      fail(kp, "expected " + std::to_string(slots.size()) + " comma-separated indices");
    }
    for (std::size_t k = 0; k < idx.size(); ++k) {
      if (idx[k] < 0 || idx[k] >= slot_extent(slots[k])) fail(kp, "index out of range");
    }
    out[out.flat(idx)] = as_expr(it.value(), kp, names);
  }
  return out;
}

Frame parse_frame(const json& doc, const CoordinateNames& names) {
  const json& f = require(doc, "", "frame");
  const std::string kind = as_string(require(f, "/frame", "kind"), "/frame/kind");
  FrameKind k;
  if (kind == "holonomic") k = FrameKind::Holonomic;
  else if (kind == "orthonormal") k = FrameKind::Orthonormal;
  else if (kind == "general") k = FrameKind::General;
  else fail("/frame/kind", "unknown frame kind '" + kind + "' (expected holonomic, orthonormal or general)");
  bool future = true;
  if (f.contains("future_pointing")) {
    if (!f["future_pointing"].is_boolean()) fail("/frame/future_pointing", "expected a boolean");
    future = f["future_pointing"].get<bool>();
  }
  if (k == FrameKind::Holonomic) {
    if (f.contains("vectors")) {
      const ExprMatrix v = as_matrix(f["vectors"], "/frame/vectors", names);
      for (int i = 0; i < kDim; ++i)
        for (int j = 0; j < kDim; ++j)
          if (!(v[i][j].is_constant() && v[i][j].value() == Complex(i == j ? 1.0 : 0.0))) {
            fail("/frame/vectors", "a holonomic frame must list the coordinate vectors");
          }
    }
    return Frame::holonomic();
  }
  // vectors[m] lists the coordinate components of frame vector m.
  const ExprMatrix v = as_matrix(require(f, "/frame", "vectors"), "/frame/vectors", names);
  return Frame("tetrad", k, transpose(v), future);
}

SamplePlan parse_samples(const json& doc) {
  const json& s = require(doc, "", "samples");
  SamplePlan plan;
  if (s.contains("points")) {
    const json& pts = require_array(s["points"], "/samples/points", 0);
    if (pts.empty()) fail("/samples/points", "sample plan is empty");
    for (std::size_t k = 0; k < pts.size(); ++k) {
      const std::string pp = child("/samples/points", k);
      require_array(pts[k], pp, kDim);
      Point p;
      for (std::size_t c = 0; c < kDim; ++c) p[c] = as_number(pts[k][c], child(pp, c));
      plan.points.push_back(p);
    }
  }
  if (s.contains("box")) {
    const json& b = require_array(s["box"], "/samples/box", kDim);
    Box box;
    for (std::size_t k = 0; k < kDim; ++k) {
      const std::string bp = child("/samples/box", k);
      require_array(b[k], bp, 2);
      box[k] = {as_number(b[k][0], child(bp, 0)), as_number(b[k][1], child(bp, 1))};
      if (!(box[k][0] <= box[k][1])) fail(bp, "interval lower bound exceeds upper bound");
    }
    plan.box = box;
    const json& count = require(s, "/samples", "count");
    if (!count.is_number_integer() || count.get<long long>() <= 0) fail("/samples/count", "expected a positive integer");
    plan.count = count.get<int>();
    if (s.contains("seed")) {
      const json& seed = s["seed"];
      if (!seed.is_number_unsigned() && !(seed.is_number_integer() && seed.get<long long>() >= 0)) {
        fail("/samples/seed", "expected a nonnegative integer");
      }
      plan.seed = seed.get<std::uint64_t>();
    }
  }
  if (!plan.box && plan.points.empty()) fail("/samples", "sample plan needs points or a box");
  return plan;
}

std::vector<Point> box_corners(const Box& b) {
  std::vector<Point> out;
  for (int mask = 0; mask < (1 << kDim); ++mask) {
    Point p;
    for (int k = 0; k < kDim; ++k) p[k] = b[k][(mask >> k) & 1];
    out.push_back(p);
  }
  return out;
}

void evaluate_all(const ExprMatrix& m, Evaluator& ev) {
  for (const auto& row : m)
    for (const auto& e : row) ev(e);
}

// Every invariant the loader guarantees, at one point.
void validate_at(const Scenario& s, const Point& p) {
  const Spacetime& st = s.spacetime;
  Evaluator ev(p);
  try {
    evaluate_all(st.metric.g, ev);
    if (validation::metric_symmetry(st, ev) > 1e-12) throw ScenarioError("metric not symmetric");
    if (validation::metric_determinant(st, ev) <= 1e-12) throw ScenarioError("metric is singular");
    evaluate_all(st.metric_inv, ev);
    if (validation::inverse_metric(st, ev) > 1e-10) throw ScenarioError("metric inverse check failed");
    evaluate_all(st.frame.vectors(), ev);
    evaluate_all(st.frame.dual(), ev);
    if (validation::duality(st, ev) > 1e-12) throw ScenarioError("frame and dual frame are not dual");
    if (validation::frame_determinant(st, ev) <= 0.0) throw ScenarioError("frame is not positively oriented");
    if (st.frame.kind() == FrameKind::Orthonormal && validation::orthonormality(st, ev) > 1e-9) {
      throw ScenarioError("frame is not orthonormal");
    }
    if (validation::time_norm(st, ev) <= 0.0) throw ScenarioError("first frame vector is not timelike");
    const double time_component = ev(st.frame.vectors()[0][0]).real();
    if ((st.frame.future_pointing() ? time_component : -time_component) <= 0.0) {
      throw ScenarioError("first frame vector does not match the declared time orientation");
    }
    for (int k = 0; k < kDim; ++k) evaluate_all(st.frame_gamma.gamma[k], ev);
    for (const auto* list : {&s.vector_fields, &s.tensor_fields, &s.spin_fields})
      for (const NamedField& f : *list) {
        const auto values = evaluate(f.field, ev);
        for (const Complex& v : values)
          if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw ScenarioError("non-finite field value");
      }
  } catch (const EvaluationError& e) {
    throw ScenarioError("evaluation failed at sample point " + point_text(p) + ": " + e.what());
  } catch (const ScenarioError& e) {
    throw ScenarioError(std::string(e.what()) + " at " + point_text(p));
  }
}

}  // namespace

Scenario parse_scenario(const std::string& text, const std::string& origin) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ScenarioError(origin + ": " + e.what());
  }
  try {
    if (!doc.is_object()) fail("/", "expected an object");
    std::string name = origin;
    if (doc.contains("name")) name = as_string(doc["name"], "/name");

    CoordinateNames names = default_coordinate_names();
    if (doc.contains("coordinates")) {
      const json& c = require_array(doc["coordinates"], "/coordinates", kDim);
      for (std::size_t k = 0; k < kDim; ++k) {
        if (!c[k].is_string()) fail(child("/coordinates", k), "expected a name");
        names[k] = c[k].get<std::string>();
        if (names[k] == "i") fail(child("/coordinates", k), "'i' is reserved for the imaginary unit");
      }
    }
    Metric metric{as_matrix(require(doc, "", "metric"), "/metric", names)};
    for (int i = 0; i < kDim; ++i)
      for (int j = i + 1; j < kDim; ++j)
        if (metric.g[i][j].is_constant() && metric.g[j][i].is_constant() &&
            metric.g[i][j].value() != metric.g[j][i].value()) {
          fail(child(child("/metric", static_cast<std::size_t>(i)), static_cast<std::size_t>(j)), "metric not symmetric");
        }
    Frame frame = parse_frame(doc, names);
    const std::string frame_name = frame.name();

    std::vector<NamedField> vectors;
    if (doc.contains("vector_fields")) {
      const json& vf = doc["vector_fields"];
      if (!vf.is_object()) fail("/vector_fields", "expected an object of named vector fields");
      for (auto it = vf.begin(); it != vf.end(); ++it) {
        vectors.push_back({it.key(), vector_field(as_vector(it.value(), child("/vector_fields", it.key()), names),
                                                  "holonomic")});
      }
    }
    std::vector<NamedField> tensors, spins;
    if (doc.contains("fields")) {
      const json& fs = require_array(doc["fields"], "/fields", 0);
      for (std::size_t k = 0; k < fs.size(); ++k) {
        const std::string fp = child("/fields", k);
        const std::string fname = as_string(require(fs[k], fp, "name"), child(fp, "name"));
        bool is_spin = false;
        Field f = parse_field(fs[k], fp, names, frame_name, is_spin);
        (is_spin ? spins : tensors).push_back({fname, std::move(f)});
      }
    }
    SamplePlan plan = parse_samples(doc);
    Tolerances tol;
    if (doc.contains("tolerances")) {
      const json& t = doc["tolerances"];
      if (t.contains("identity")) tol.identity = as_number(t["identity"], "/tolerances/identity");
      if (t.contains("oracle")) tol.oracle = as_number(t["oracle"], "/tolerances/oracle");
      if (!(tol.identity > 0) || !(tol.oracle > 0)) fail("/tolerances", "tolerances must be positive");
    }

    Scenario s{std::move(name), make_spacetime(names, std::move(metric), std::move(frame)), std::move(vectors),
               std::move(tensors), std::move(spins), std::move(plan), tol};
    std::vector<Point> pts = s.samples.points;
    if (s.samples.box) {
      for (const Point& p : draw_points(*s.samples.box, s.samples.count, s.samples.seed)) pts.push_back(p);
      for (const Point& p : box_corners(*s.samples.box)) pts.push_back(p);
    }
    for (const Point& p : pts) validate_at(s, p);
    return s;
  } catch (const ScenarioError& e) {
    throw ScenarioError(origin + ": " + e.what());
  }
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError(path + ": cannot open scenario file");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str(), path);
}

}  // namespace kosmann
