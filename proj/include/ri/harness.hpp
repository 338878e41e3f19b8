#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ri/json_io.hpp"
#include "ri/operators.hpp"

namespace ri {

const std::vector<std::string>& campaign_names();
/// Operator names accepted in the "operators" config field.
const std::vector<std::string>& operator_names();

struct CampaignConfig {
  std::string campaign;
  MonomialCone cone{2, 2, {1.0, 1.0}};
  int m = 1;
  std::vector<LKSpace> spaces;
  /// operator checks to run where a campaign composes several; empty means all
  std::vector<std::string> operators;
  int family_size = 30;
  std::uint64_t seed = 1;
  GeometricGrid grid{};
  /// isoperimetric constant; default D * B_mu^{1/D}
  std::optional<double> c_iso;
  /// Monte Carlo sample count for bmu_validation
  std::int64_t samples = 1000000;
  std::string output_json;
  std::string output_csv;

  SmoothnessParams sp() const { return SmoothnessParams::of(cone, m); }
  bool uses(const std::string& op) const;
};

/// Parses and validates a campaign config; throws ConfigError naming the field path.
CampaignConfig parse_config(const json& j);
CampaignConfig load_config(const std::string& path);

/// One checked metric of one case.
struct CaseRecord {
  std::string case_id;
  json inputs;
  std::string metric;
  double value = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string note;
};

struct Report {
  std::string campaign;
  std::uint64_t seed = 0;
  json environment;
  std::vector<CaseRecord> cases;
  /// campaign-specific detail (optimality reports, measure estimates)
  json details = json::object();

  std::size_t failed() const;
  bool all_pass() const { return failed() == 0; }
};

/// Seed of case `index`, derived from the config seed.
std::uint64_t case_seed(std::uint64_t seed, std::uint64_t index);

/// Worker count from RI_TOOLKIT_THREADS, else the hardware concurrency.
int worker_count();

/// Runs the named suite. Cases run on a worker pool and are collected in index order.
/// A case that throws is recorded as failed and the run continues.
Report run_campaign(const CampaignConfig& cfg, int threads = 0);

json report_to_json(const Report& r);
std::string report_to_csv(const Report& r);

enum class ReportFormat { Csv, Json };
/// Throws std::runtime_error when the path is not writable.
void emit_report(const Report& r, ReportFormat format, const std::string& path);

}  // namespace ri
