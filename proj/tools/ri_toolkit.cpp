#include <cmath>
#include <cstdio>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "ri/error.hpp"
#include "ri/harness.hpp"
#include "ri/json_io.hpp"
#include "ri/optimal.hpp"

namespace {

int run_cmd(const std::string& config_path, const std::string& out, const std::string& csv,
            const std::optional<std::uint64_t>& seed) {
  ri::CampaignConfig cfg = ri::load_config(config_path);
  if (seed) cfg.seed = *seed;
  const ri::Report r = ri::run_campaign(cfg);
  const std::string json_path = out.empty() ? cfg.output_json : out;
  const std::string csv_path = csv.empty() ? cfg.output_csv : csv;
  if (!json_path.empty()) ri::emit_report(r, ri::ReportFormat::Json, json_path);
  if (!csv_path.empty()) ri::emit_report(r, ri::ReportFormat::Csv, csv_path);
  if (json_path.empty() && csv_path.empty()) std::cout << ri::report_to_json(r).dump(2) << '\n';
  const std::size_t failed = r.failed();
  std::fprintf(stderr, "%s: %zu cases, %zu passed, %zu failed\n", r.campaign.c_str(), r.cases.size(),
               r.cases.size() - failed, failed);
  return failed == 0 ? 0 : 1;
}

int describe_cmd(const std::string& space_path) {
  const ri::LKSpace X = ri::space_from_json(ri::read_json_file(space_path), "space");
  const ri::Admissibility a = ri::is_admissible(X);
  ri::json fundamental = ri::json::array();
  for (int e = -4; e <= 4; e += 2) {
    const double t = std::pow(10.0, e);
    fundamental.push_back({{"t", t}, {"value", ri::number_to_json(ri::fundamental_function(X, t))}});
  }
  const ri::json out = {{"space", ri::space_to_json(X)},
                        {"admissible", a.admissible},
                        {"case", a.case_label},
                        {"heuristic", a.heuristic},
                        {"associate", ri::description_to_json(ri::associate_space(X))},
                        {"fundamental_function", fundamental}};
  std::cout << out.dump(2) << '\n';
  return 0;
}

int optimal_cmd(const std::string& which, const std::string& space_path, const std::string& cone_path, int m,
                int family_size, std::uint64_t seed) {
  const ri::LKSpace X = ri::space_from_json(ri::read_json_file(space_path), "space");
  const ri::MonomialCone cone = ri::cone_from_json(ri::read_json_file(cone_path), "cone");
  if (m < 1 || !(m < cone.D())) throw ri::ConfigError("m", "need 1 <= m < D");
  ri::EquivalenceOptions eo;
  eo.family_size = family_size;
  eo.seed = seed;
  const auto sp = ri::SmoothnessParams::of(cone, m);
  const auto r = which == "target" ? ri::optimal_target(X, sp, eo) : ri::optimal_domain(X, sp, eo);
  std::cout << ri::report_to_json(r).dump(2) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rearrangement-invariant norms, reduction operators and optimal Sobolev spaces on weighted cones"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run a verification campaign");
  std::string config_path, out, csv;
  std::optional<std::uint64_t> seed;
  run->add_option("config", config_path, "Campaign config (JSON)")->required();
  run->add_option("--out", out, "JSON report path");
  run->add_option("--csv", csv, "CSV report path");
  run->add_option("--seed", seed, "Override the config seed");

  auto* describe = app.add_subcommand("describe-space", "Admissibility, associate space and fundamental function");
  std::string space_path;
  describe->add_option("space", space_path, "Space (JSON)")->required();

  auto* optimal = app.add_subcommand("optimal", "Optimal target or domain space");
  std::string which, opt_space, cone_path;
  int m = 1, family_size = 30;
  std::uint64_t opt_seed = 1;
  optimal->add_option("kind", which, "target or domain")->required()->check(CLI::IsMember({"target", "domain"}));
  optimal->add_option("space", opt_space, "Space (JSON)")->required();
  optimal->add_option("--cone", cone_path, "Cone (JSON)")->required();
  optimal->add_option("-m", m, "Order of smoothness")->required();
  optimal->add_option("--family-size", family_size, "Test functions for the equivalence ratios")
      ->check(CLI::PositiveNumber);
  optimal->add_option("--seed", opt_seed, "Seed for the test family");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*run) return run_cmd(config_path, out, csv, seed);
    if (*describe) return describe_cmd(space_path);
    return optimal_cmd(which, opt_space, cone_path, m, family_size, opt_seed);
  } catch (const ri::ConfigError& e) {
    std::fprintf(stderr, "config error at %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
