#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ntnsplit/cho_engine.hpp"
#include "ntnsplit/geometry.hpp"
#include "ntnsplit/topology.hpp"

namespace ntnsplit {

/// Everything a command needs. Defaults are the LEO@600 reference
/// configuration (SL 30 deg, FL 10 deg, 20 satellites per plane).
struct RunConfig {
  GeometryConfig geometry;
  TimingConfig timing;
  DelaySource delay_source = DelaySource::automatic;
  CatalogOptions catalog;
  bool relax_ntn = false;
  int antennas = 2;
  int beams = 1;
  std::optional<double> satellite_gops_capacity;
  std::optional<std::string> scenario;  // A, B, B1, B2 or C
  std::optional<SplitOption> split;
  AmfSite amf_site = AmfSite::source_gs;
  std::string format = "json";
  std::optional<std::string> out_path;
};

/// Applies a flat JSON config document on top of `base`. Unknown keys and
/// mistyped values throw std::invalid_argument.
RunConfig apply_config_json(RunConfig base, const nlohmann::json& doc);

/// Deployments selected by `scenario` (all twelve when unset).
std::vector<Deployment> selected_deployments(const RunConfig& cfg);

enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitTrendFailure = 2 };

/// Entry point of the `ntnsplit` tool; args exclude the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ntnsplit
