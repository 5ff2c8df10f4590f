// Command-line driver: kosmann <suite> --scenario <path> [options]
#include <iostream>

#include "CLI11.hpp"
#include "kosmann/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Residual checks for Kosmann-Lie derivatives of tensors and Weyl spinors"};
  std::string suite;
  std::string scenario_path;
  std::string variant = "kosmann";
  std::optional<int> points;
  std::optional<std::uint64_t> seed;
  std::optional<double> tol_identity;
  std::optional<double> tol_oracle;
  bool json = false;

  app.add_option("suite", suite, "validate, lie, kosmann, spin, theorem81, commutator, oracle or all")
      ->required()
      ->check(CLI::IsMember(kosmann::suite_names()));
  app.add_option("--scenario", scenario_path, "Scenario file")->required();
  app.add_option("--variant", variant, "Lifting variant")->check(CLI::IsMember({"kosmann", "natural"}));
  app.add_option("--points", points, "Number of sample points")->check(CLI::PositiveNumber);
  app.add_option("--seed", seed, "Sampling seed");
  app.add_option("--tol-identity", tol_identity, "Tolerance for identity residuals")->check(CLI::PositiveNumber);
  app.add_option("--tol-oracle", tol_oracle, "Tolerance for the flow oracle")->check(CLI::PositiveNumber);
  app.add_flag("--json", json, "Emit the report as JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    const kosmann::Scenario s = kosmann::load_scenario(scenario_path);
    kosmann::RunOptions opt;
    opt.suite = suite;
    opt.variant = variant == "natural" ? kosmann::Variant::Natural : kosmann::Variant::Kosmann;
    opt.points = points;
    opt.seed = seed;
    opt.tol_identity = tol_identity;
    opt.tol_oracle = tol_oracle;
    const kosmann::RunReport report = kosmann::run_checks(s, opt);
    std::cout << (json ? kosmann::format_json(report) : kosmann::format_text(report));
    return report.all_passed() ? 0 : 1;
  } catch (const kosmann::ScenarioError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const kosmann::UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
