#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kosmann/geometry.hpp"
#include "kosmann/lie.hpp"
#include "kosmann/spin.hpp"

namespace kosmann {

/// splitmix64; uniform doubles use the top 53 bits.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  double uniform();  // [0, 1)

 private:
  std::uint64_t state_;
};

struct SamplePlan {
  std::vector<Point> points;  // explicit list, used when no box is given
  std::optional<Box> box;
  int count = 0;
  std::uint64_t seed = 0;
};

/// Points drawn uniformly from the box, one coordinate at a time in order.
std::vector<Point> draw_points(const Box& box, int count, std::uint64_t seed);

struct Tolerances {
  double identity = 1e-9;
  double oracle = 1e-4;
};

struct NamedField {
  std::string name;
  Field field;
};

/// A validated scenario. Vector fields and tensor fields hold coordinate
/// components (frame "holonomic"); spin fields hold frame-pair components.
struct Scenario {
  std::string name;
  Spacetime spacetime;
  std::vector<NamedField> vector_fields;
  std::vector<NamedField> tensor_fields;
  std::vector<NamedField> spin_fields;
  SamplePlan samples;
  Tolerances tolerances;
};

class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Reads and validates a scenario file. Errors name a JSON pointer into the
/// document or the violated invariant.
Scenario load_scenario(const std::string& path);
Scenario parse_scenario(const std::string& text, const std::string& origin = "<string>");

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"validate", "lie",        "kosmann", "spin",
                                              "theorem81", "commutator", "oracle",  "all"};
  return names;
}

struct RunOptions {
  std::string suite = "all";
  Variant variant = Variant::Kosmann;
  std::optional<int> points;
  std::optional<std::uint64_t> seed;
  std::optional<double> tol_identity;
  std::optional<double> tol_oracle;
};

struct CheckResult {
  std::string suite;
  std::string name;
  double max_residual = 0.0;
  Point at{};
  bool pass = false;
  double elapsed_ms = 0.0;
  /// Printed as a '#' line before the check.
  std::string comment;
};

struct RunReport {
  std::string suite;
  std::string scenario;
  Variant variant = Variant::Kosmann;
  std::optional<std::uint64_t> seed;
  std::size_t points = 0;
  std::vector<std::string> notes;
  std::vector<CheckResult> checks;
  bool all_passed() const;
};

/// Runs a suite. Throws UsageError for unknown suites, variant misuse or
/// suites the scenario's frame cannot support.
RunReport run_checks(const Scenario& s, const RunOptions& opt);

/// `CHECK <suite>.<name> max_residual=<%.3e> at=(x0,x1,x2,x3) status=<PASS|FAIL>`
std::string format_check(const CheckResult& c);
std::string format_text(const RunReport& r);
std::string format_json(const RunReport& r);

}  // namespace kosmann
