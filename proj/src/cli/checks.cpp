#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>

#include "json.hpp"
#include "kosmann/cli.hpp"

namespace kosmann {

bool RunReport::all_passed() const {
  for (const CheckResult& c : checks)
    if (!c.pass) return false;
  return true;
}

namespace {

using Clock = std::chrono::steady_clock;

// Fixed geometric gates, independent of the identity tolerance.
constexpr double kSymmetryGate = 1e-12;
constexpr double kInverseGate = 1e-10;
constexpr double kDualityGate = 1e-12;
constexpr double kOrthonormalGate = 1e-9;
constexpr double kHolonomicSymmetryGate = 1e-12;
constexpr double kTorsionGate = 1e-10;
constexpr double kMetricityGate = 1e-9;
constexpr double kSlopeWindow = 0.2;

const std::vector<double> kSlopeEps{1e-2, 5e-3, 2.5e-3};
constexpr double kOracleEps = 1e-3;

struct Context {
  const Scenario& s;
  std::vector<Point> points;
  std::vector<Point> oracle_points;
  double tol_identity;
  double tol_oracle;
  Variant variant;
  std::vector<NamedField> vectors;  // frame components
  std::vector<NamedField> tensors;  // frame components
  RunReport& report;
};

double sanitize(double v) { return std::isnan(v) ? std::numeric_limits<double>::infinity() : v; }

// Runs `residual` at every point and records the worst value.
void check(Context& ctx, const std::string& suite, const std::string& name, double tol,
           const std::function<double(Evaluator&)>& residual, const std::vector<Point>* pts = nullptr) {
  const auto start = Clock::now();
  CheckResult r;
  r.suite = suite;
  r.name = name;
  const std::vector<Point>& where = pts ? *pts : ctx.points;
  r.at = where.empty() ? Point{} : where.front();
  try {
    for (const Point& p : where) {
      Evaluator ev(p);
      const double v = sanitize(residual(ev));
      if (v > r.max_residual) {
        r.max_residual = v;
        r.at = p;
      }
    }
  } catch (const std::exception& e) {
    r.max_residual = std::numeric_limits<double>::infinity();
    r.comment = suite + "." + name + " error: " + e.what();
  }
  r.pass = r.max_residual <= tol;
  r.elapsed_ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  ctx.report.checks.push_back(std::move(r));
}

double worst(const Field& f, Evaluator& ev) { return max_abs(f, ev); }

double worst(const ExprMatrix& m, Evaluator& ev) {
  double out = 0.0;
  for (const auto& row : m)
    for (const auto& e : row) out = std::max(out, std::abs(ev(e)));
  return out;
}

double worst(const SpinMatrix& m, Evaluator& ev) {
  double out = 0.0;
  for (const auto& row : m)
    for (const auto& e : row) out = std::max(out, std::abs(ev(e)));
  return out;
}

ExprMatrix diff(const ExprMatrix& a, const ExprMatrix& b) {
  ExprMatrix out;
  for (int i = 0; i < kDim; ++i)
    for (int j = 0; j < kDim; ++j) out[i][j] = a[i][j] - b[i][j];
  return out;
}

SpinMatrix diff(const SpinMatrix& a, const SpinMatrix& b) {
  SpinMatrix out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out[i][j] = a[i][j] - b[i][j];
  return out;
}

void run_validate(Context& ctx) {
  const Spacetime& st = ctx.s.spacetime;
  const std::string v = "validate";
  check(ctx, v, "metric_symmetry", kSymmetryGate, [&](Evaluator& ev) { return validation::metric_symmetry(st, ev); });
  check(ctx, v, "metric_inverse", kInverseGate, [&](Evaluator& ev) { return validation::inverse_metric(st, ev); });
  check(ctx, v, "frame_duality", kDualityGate, [&](Evaluator& ev) { return validation::duality(st, ev); });
  check(ctx, v, "frame_orientation", 0.0,
        [&](Evaluator& ev) { return std::max(0.0, -validation::frame_determinant(st, ev)); });
  check(ctx, v, "time_orientation", 0.0, [&](Evaluator& ev) {
    const double sign = st.frame.future_pointing() ? 1.0 : -1.0;
    return std::max(0.0, -validation::time_norm(st, ev)) +
           std::max(0.0, -sign * ev(st.frame.vectors()[0][0]).real());
  });
  if (st.frame.kind() == FrameKind::Orthonormal) {
    check(ctx, v, "orthonormality", kOrthonormalGate,
          [&](Evaluator& ev) { return validation::orthonormality(st, ev); });
  }
  check(ctx, v, "christoffel_symmetry", kHolonomicSymmetryGate,
        [&](Evaluator& ev) { return validation::holonomic_symmetry(st, ev); });
  check(ctx, v, "torsion", kTorsionGate, [&](Evaluator& ev) { return validation::torsion(st, ev); });
  check(ctx, v, "metricity_holonomic", kMetricityGate,
        [&](Evaluator& ev) { return validation::metricity_holonomic(st, ev); });
  check(ctx, v, "metricity_frame", kMetricityGate, [&](Evaluator& ev) { return validation::metricity_frame(st, ev); });
}

void run_lie(Context& ctx) {
  const Spacetime& st = ctx.s.spacetime;
  for (std::size_t a = 0; a < ctx.vectors.size(); ++a) {
    const Field& xh = ctx.s.vector_fields[a].field;
    const Field& x = ctx.vectors[a].field;
    const std::string xn = ctx.vectors[a].name;
    const ExprMatrix nat = natural_lift(x, st.frame).v;
    const ExprMatrix cov = natural_lift_covariant(x, st.frame_gamma, st.frame).v;
    check(ctx, "lie", "natural_lift." + xn, ctx.tol_identity, [&](Evaluator& ev) { return worst(diff(nat, cov), ev); });
    for (std::size_t b = 0; b < ctx.tensors.size(); ++b) {
      const Field hol = to_frame(lie_derivative_holonomic(xh, ctx.s.tensor_fields[b].field, st.holonomic), st.frame);
      const Field fr = lie_derivative_frame(x, ctx.tensors[b].field, st.frame);
      const Field r = hol - fr;
      check(ctx, "lie", "frame_equivalence." + xn + "." + ctx.tensors[b].name, ctx.tol_identity,
            [&](Evaluator& ev) { return worst(r, ev); });
    }
  }
}

void run_kosmann(Context& ctx) {
  const Spacetime& st = ctx.s.spacetime;
  const Frame& f = st.frame;
  for (const NamedField& nx : ctx.vectors) {
    const Field& x = nx.field;
    const LiftCoefficients vk = kosmann_lift(x, f, st.g_frame, st.g_frame_inv);
    const ExprMatrix sx = s_tensor(x, st.frame_gamma, f, st.g_frame, st.g_frame_inv);
    const ExprMatrix split = diff(diff(natural_lift(x, f).v, sx), vk.v);
    std::optional<ExprMatrix> shortcut;
    if (f.kind() == FrameKind::Orthonormal) {
      shortcut = diff(kosmann_lift_orthonormal(x, st.frame_gamma, f, st.g_frame, st.g_frame_inv).v, vk.v);
    }
    check(ctx, "kosmann", "lift_formulas." + nx.name, ctx.tol_identity, [&](Evaluator& ev) {
      return std::max(worst(split, ev), shortcut ? worst(*shortcut, ev) : 0.0);
    });
    const ExprMatrix low = lower_lift(vk.v, st.g_frame);
    const KosmannParts parts = kosmann_parts(x, f, st.g_frame);
    ExprMatrix sym_r, skew_r;
    for (int i = 0; i < kDim; ++i)
      for (int j = 0; j < kDim; ++j) {
        sym_r[i][j] = (low[i][j] + low[j][i]) / 2.0 - parts.sym[i][j];
        skew_r[i][j] = (low[i][j] - low[j][i]) / 2.0 - parts.skew[i][j];
      }
    check(ctx, "kosmann", "parts." + nx.name, ctx.tol_identity,
          [&](Evaluator& ev) { return std::max(worst(sym_r, ev), worst(skew_r, ev)); });
    const Field lg = generalized_lie_derivative(x, vk, metric_field(st), f);
    check(ctx, "kosmann", "metric." + nx.name, ctx.tol_identity, [&](Evaluator& ev) { return worst(lg, ev); });
    Derivation ds;
    ds.spatial = sx;
    for (const NamedField& ny : ctx.tensors) {
      const Field r = generalized_lie_derivative(x, vk, ny.field, f) -
                      (lie_derivative_frame(x, ny.field, f) + apply_derivation(ny.field, ds));
      check(ctx, "kosmann", "decomposition." + nx.name + "." + ny.name, ctx.tol_identity,
            [&](Evaluator& ev) { return worst(r, ev); });
    }
  }
}

void require_tetrad(const Context& ctx, const std::string& suite) {
  if (ctx.s.spacetime.frame.kind() != FrameKind::Orthonormal) {
    throw UsageError(suite + " suite needs an orthonormal tetrad (canonical frame pair)");
  }
}

void run_spin(Context& ctx) {
  require_tetrad(ctx, "spin");
  const Spacetime& st = ctx.s.spacetime;
  const Frame& f = st.frame;
  const SpinStructure spin = canonical_spin_structure(st);
  check(ctx, "spin", "ivw_identities", ctx.tol_identity, [&](Evaluator& ev) {
    const IvwIdentityReport r = check_ivw_identities(spin.g_field, spin.g_inverse, ev);
    return std::max(r.first, r.second);
  });
  const Field nd = covariant_derivative_spin(spin.d.as_field(f.name()), st, spin);
  const Field ng = covariant_derivative_spin(spin.g_field, st, spin);
  const Field nm = covariant_derivative_spin(metric_field(st), st, spin);
  check(ctx, "spin", "parallel_d", ctx.tol_identity, [&](Evaluator& ev) { return worst(nd, ev); });
  check(ctx, "spin", "parallel_G", ctx.tol_identity, [&](Evaluator& ev) { return worst(ng, ev); });
  check(ctx, "spin", "parallel_g", ctx.tol_identity, [&](Evaluator& ev) { return worst(nm, ev); });

  std::vector<NamedField> tests = ctx.s.spin_fields;
  for (const NamedField& t : ctx.tensors) tests.push_back(t);
  for (const NamedField& nx : ctx.vectors) {
    const Field& x = nx.field;
    const LiftCoefficients v = kosmann_lift(x, f, st.g_frame, st.g_frame_inv);
    const SpinLift w = spin_lift_W(v, spin, st.g_frame, st.g_frame_inv);
    const SpinMatrix low = w.lowered(spin.d.d);
    const Expr skew = low[0][1] - low[1][0];
    check(ctx, "spin", "symmetry." + nx.name, ctx.tol_identity, [&](Evaluator& ev) { return std::abs(ev(skew)); });
    const Expr trace = trace_identity(w, spin.d);
    check(ctx, "spin", "trace." + nx.name, ctx.tol_identity, [&](Evaluator& ev) { return std::abs(ev(trace)); });
    const Field eq = equivariance_residual(v, w, spin);
    check(ctx, "spin", "equivariance." + nx.name, ctx.tol_identity, [&](Evaluator& ev) { return worst(eq, ev); });
    const SpinMatrix cov = diff(w.w, spin_lift_W_covariant(x, st, spin).w);
    check(ctx, "spin", "covariant_form." + nx.name, ctx.tol_identity, [&](Evaluator& ev) { return worst(cov, ev); });
    for (const NamedField& ny : tests) {
      const Field seven = kosmann_lie_spin(x, ny.field, v, w, f);
      const Field r = seven - kosmann_lie_spin_split(x, ny.field, st, spin);
      check(ctx, "spin", "two_path." + nx.name + "." + ny.name, ctx.tol_identity,
            [&](Evaluator& ev) { return worst(r, ev); });
      const Field c = kosmann_lie_spin(x, conj(ny.field), v, w, f) - conj(seven);
      check(ctx, "spin", "conjugation." + nx.name + "." + ny.name, ctx.tol_identity,
            [&](Evaluator& ev) { return worst(c, ev); });
    }
  }
}

void run_theorem81(Context& ctx) {
  require_tetrad(ctx, "theorem81");
  const Spacetime& st = ctx.s.spacetime;
  const SpinStructure spin = canonical_spin_structure(st);
  for (const NamedField& nx : ctx.vectors) {
    const BasicFieldDerivatives r = theorem81_fields(nx.field, st, spin, ctx.variant);
    if (ctx.variant == Variant::Kosmann) {
      check(ctx, "theorem81", "g." + nx.name, ctx.tol_identity, [&](Evaluator& ev) { return worst(r.g, ev); });
      check(ctx, "theorem81", "d." + nx.name, ctx.tol_identity, [&](Evaluator& ev) { return worst(r.d, ev); });
      check(ctx, "theorem81", "G." + nx.name, ctx.tol_identity, [&](Evaluator& ev) { return worst(r.G, ev); });
    } else {
      const Field g = r.g - lie_derivative_frame(nx.field, metric_field(st), st.frame);
      const Field G = r.G - natural_G_expectation(nx.field, st, spin);
      check(ctx, "theorem81", "natural_d." + nx.name, ctx.tol_identity, [&](Evaluator& ev) { return worst(r.d, ev); });
      check(ctx, "theorem81", "natural_g." + nx.name, ctx.tol_identity, [&](Evaluator& ev) { return worst(g, ev); });
      check(ctx, "theorem81", "natural_G." + nx.name, ctx.tol_identity, [&](Evaluator& ev) { return worst(G, ev); });
    }
  }
}

void run_commutator(Context& ctx) {
  std::vector<Field> tests;
  for (const NamedField& t : ctx.tensors) tests.push_back(t.field);
  for (std::size_t a = 0; a < ctx.vectors.size(); ++a)
    for (std::size_t b = a + 1; b < ctx.vectors.size(); ++b) {
      const std::string pair = ctx.vectors[a].name + "." + ctx.vectors[b].name;
      const CommutatorDefect d = commutator_defect(ctx.vectors[a].field, ctx.vectors[b].field, tests, ctx.s.spacetime);
      check(ctx, "commutator", "relation." + pair, ctx.tol_identity, [&](Evaluator& ev) {
        double m = 0.0;
        for (const Field& r : d.relation) m = std::max(m, worst(r, ev));
        return m;
      });
      const ExprMatrix s = diff(d.s_xy, d.minus_commutator);
      check(ctx, "commutator", "s_bracket." + pair, ctx.tol_identity, [&](Evaluator& ev) { return worst(s, ev); });
    }
}

std::string format_double(const char* fmt, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

void run_oracle(Context& ctx) {
  FlowOptions opt;
  opt.box = ctx.s.samples.box;
  for (const NamedField& nx : ctx.s.vector_fields)
    for (const NamedField& ny : ctx.s.tensor_fields) {
      const std::string id = nx.name + "." + ny.name;
      const auto start = Clock::now();
      CheckResult err, slope;
      err.suite = slope.suite = "oracle";
      err.name = "error." + id;
      slope.name = "slope." + id;
      try {
        const ConvergenceReport at = oracle_convergence(nx.field, ny.field, ctx.oracle_points, {kOracleEps}, opt);
        err.max_residual = sanitize(at.error[0]);
        err.at = at.worst_point;
        const ConvergenceReport fit = oracle_convergence(nx.field, ny.field, ctx.oracle_points, kSlopeEps, opt);
        slope.max_residual = sanitize(std::abs(fit.slope - 2.0));
        slope.at = fit.worst_point;
        std::string errors;
        for (std::size_t k = 0; k < fit.eps.size(); ++k) {
          errors += (k ? "," : "") + format_double("%.3e", fit.error[k]);
        }
        slope.comment = "oracle.slope." + id + " slope=" + format_double("%.4f", fit.slope) + " errors=" + errors;
      } catch (const std::exception& e) {
        err.max_residual = slope.max_residual = std::numeric_limits<double>::infinity();
        err.comment = "oracle." + id + " error: " + e.what();
      }
      err.pass = err.max_residual <= ctx.tol_oracle;
      slope.pass = slope.max_residual <= kSlopeWindow;
      err.elapsed_ms = slope.elapsed_ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count() / 2;
      ctx.report.checks.push_back(std::move(err));
      ctx.report.checks.push_back(std::move(slope));
    }
}

std::vector<Point> contract_to_center(const std::vector<Point>& pts, const std::optional<Box>& box) {
  if (!box) return pts;
  std::vector<Point> out = pts;
  for (Point& p : out)
    for (int k = 0; k < kDim; ++k) {
      const double c = ((*box)[k][0] + (*box)[k][1]) / 2;
      p[k] = c + 0.5 * (p[k] - c);
    }
  return out;
}

}  // namespace

RunReport run_checks(const Scenario& s, const RunOptions& opt) {
  const auto& names = suite_names();
  if (std::find(names.begin(), names.end(), opt.suite) == names.end()) {
    throw UsageError("unknown suite '" + opt.suite + "'");
  }
  if (opt.variant == Variant::Natural &&
      (opt.suite == "kosmann" || opt.suite == "spin" || opt.suite == "commutator" || opt.suite == "all")) {
    throw UsageError("suite '" + opt.suite + "' requires the kosmann variant");
  }
  RunReport report;
  report.suite = opt.suite;
  report.scenario = s.name;
  report.variant = opt.variant;

  std::vector<Point> points;
  if (s.samples.box) {
    const int count = opt.points.value_or(s.samples.count);
    if (count <= 0) throw UsageError("--points must be positive");
    report.seed = opt.seed.value_or(s.samples.seed);
    points = draw_points(*s.samples.box, count, *report.seed);
  } else {
    if (opt.seed) throw UsageError("--seed needs a scenario with a sample box");
    points = s.samples.points;
    if (opt.points) {
      if (*opt.points <= 0 || static_cast<std::size_t>(*opt.points) > points.size()) {
        throw UsageError("--points exceeds the scenario's explicit point list");
      }
      points.resize(static_cast<std::size_t>(*opt.points));
    }
  }
  report.points = points.size();

  Context ctx{s, points, contract_to_center(points, s.samples.box), opt.tol_identity.value_or(s.tolerances.identity),
              opt.tol_oracle.value_or(s.tolerances.oracle), opt.variant, {}, {}, report};
  for (const NamedField& v : s.vector_fields) ctx.vectors.push_back({v.name, to_frame(v.field, s.spacetime.frame)});
  for (const NamedField& t : s.tensor_fields) ctx.tensors.push_back({t.name, to_frame(t.field, s.spacetime.frame)});

  const bool all = opt.suite == "all";
  const bool tetrad = s.spacetime.frame.kind() == FrameKind::Orthonormal;
  if (all || opt.suite == "validate") run_validate(ctx);
  if (all || opt.suite == "lie") run_lie(ctx);
  if (all || opt.suite == "kosmann") run_kosmann(ctx);
  if (all && !tetrad) report.notes.push_back("spin and theorem81 suites skipped: frame is not an orthonormal tetrad");
  if ((all && tetrad) || opt.suite == "spin") run_spin(ctx);
  if ((all && tetrad) || opt.suite == "theorem81") run_theorem81(ctx);
  if (all || opt.suite == "commutator") run_commutator(ctx);
  if (all || opt.suite == "oracle") run_oracle(ctx);
  return report;
}

std::string format_check(const CheckResult& c) {
  char buf[512];
  std::snprintf(buf, sizeof buf, "CHECK %s.%s max_residual=%.3e at=(%.6g,%.6g,%.6g,%.6g) status=%s", c.suite.c_str(),
                c.name.c_str(), c.max_residual, c.at[0], c.at[1], c.at[2], c.at[3], c.pass ? "PASS" : "FAIL");
  return buf;
}

std::string format_text(const RunReport& r) {
  std::string out = "# kosmann suite=" + r.suite + " scenario=" + r.scenario +
                    " variant=" + std::string(variant_name(r.variant)) +
                    " seed=" + (r.seed ? std::to_string(*r.seed) : std::string("none")) +
                    " points=" + std::to_string(r.points) + "\n";
  for (const std::string& n : r.notes) out += "# " + n + "\n";
  std::size_t failed = 0;
  for (const CheckResult& c : r.checks) {
    if (!c.comment.empty()) out += "# " + c.comment + "\n";
    out += format_check(c) + "\n";
    failed += c.pass ? 0 : 1;
  }
  out += "# " + std::to_string(r.checks.size() - failed) + " passed, " + std::to_string(failed) + " failed\n";
  return out;
}

std::string format_json(const RunReport& r) {
  nlohmann::ordered_json doc;
  doc["suite"] = r.suite;
  doc["scenario"] = r.scenario;
  doc["variant"] = std::string(variant_name(r.variant));
  doc["seed"] = r.seed ? nlohmann::ordered_json(*r.seed) : nlohmann::ordered_json(nullptr);
  doc["points"] = r.points;
  doc["notes"] = r.notes;
  auto& checks = doc["checks"] = nlohmann::ordered_json::array();
  std::size_t failed = 0;
  for (const CheckResult& c : r.checks) {
    nlohmann::ordered_json e;
    e["name"] = c.suite + "." + c.name;
    // Infinite residuals have no JSON number; they are reported as null.
    e["max_residual"] = std::isfinite(c.max_residual) ? nlohmann::ordered_json(c.max_residual) : nullptr;
    e["at"] = {c.at[0], c.at[1], c.at[2], c.at[3]};
    e["status"] = c.pass ? "PASS" : "FAIL";
    e["elapsed_ms"] = c.elapsed_ms;
    if (!c.comment.empty()) e["comment"] = c.comment;
    checks.push_back(std::move(e));
    failed += c.pass ? 0 : 1;
  }
  doc["passed"] = r.checks.size() - failed;
  doc["failed"] = failed;
  return doc.dump(2) + "\n";
}

}  // namespace kosmann
