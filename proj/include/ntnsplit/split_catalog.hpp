#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace ntnsplit {

enum class LatencyClass { non_ideal, sub_ideal, near_ideal, ideal };

const char* to_string(LatencyClass cls);
LatencyClass latency_class_from_string(const std::string& text);

enum class Direction { dl, ul };

const char* to_string(Direction dir);

/// How a tabulated compute figure relates to the true requirement.
enum class BoundQualifier { exact, less_than, greater_than };

struct ComputeBound {
  double gops = 0.0;
  BoundQualifier qualifier = BoundQualifier::exact;

  bool operator==(const ComputeBound&) const = default;
};

struct LatencyBudget {
  LatencyClass cls;
  double budget_ms;
  double max_fh_distance_km;

  bool operator==(const LatencyBudget&) const = default;
};

/// One fronthaul bandwidth cell of the split table.
struct BandwidthEntry {
  int antenna_count;
  Direction direction;
  double mbps;

  bool operator==(const BandwidthEntry&) const = default;
};

struct FunctionSplitSpec {
  int id = 0;
  std::string name;
  std::vector<LatencyBudget> classes;   // one or two, most relaxed first
  std::vector<BandwidthEntry> fh_bw;    // antenna {2, 64} x {DL, UL}
  ComputeBound gops_gs;
  ComputeBound gops_satellite;

  const LatencyBudget* budget_for(LatencyClass cls) const;
  double bandwidth_mbps(int antenna_count, Direction dir) const;

  bool operator==(const FunctionSplitSpec&) const = default;
};

inline constexpr int kMinSplitId = 1;
inline constexpr int kMaxSplitId = 10;
inline constexpr int kSupportedAntennaCounts[] = {2, 64};
inline constexpr const char* kSplitCatalogVersion = "scf-fh-2024.1";

/// The ten Small Cell Forum split options with their fronthaul latency
/// classes, bandwidth and GOPS figures, ordered by id.
std::span<const FunctionSplitSpec> split_table();

/// Throws std::out_of_range for ids outside 1..10.
const FunctionSplitSpec& get_split(int id);

double canonical_budget_ms(LatencyClass cls);

/// Latency budget to free-space distance at `light_speed_km_per_ms`
/// (300 km/ms reproduces the tabulated distances exactly).
double max_fh_distance_km(double latency_ms, double light_speed_km_per_ms = 300.0);

struct FeasibilityRequest {
  int split_id = 1;
  LatencyClass use_case = LatencyClass::non_ideal;
  double total_path_km = 0.0;
  int antenna_count = 2;
  int beams = 1;
  std::optional<double> satellite_gops_capacity;
  // Allows evaluating a split at a latency class it does not publish, using
  // that class's canonical budget.
  bool relax_ntn = false;
  double light_speed_km_per_ms = 300.0;
};

struct FeasibilityVerdict {
  int split_id = 0;
  LatencyClass use_case = LatencyClass::non_ideal;
  double separation_km = 0.0;
  double budget_km = 0.0;
  bool feasible = false;
  double margin_km = 0.0;
  double bw_required_dl_mbps = 0.0;
  double bw_required_ul_mbps = 0.0;
  ComputeBound satellite_gops_required;
  std::optional<bool> compute_feasible;
  std::vector<std::string> notes;
};

/// Throws std::invalid_argument for an unpublished class without relaxation,
/// an unsupported antenna count, or a non-positive beam count.
FeasibilityVerdict check_feasibility(const FeasibilityRequest& req);

/// Latency class a split is judged at when sweeping all splits.
LatencyClass sweep_class(int split_id, bool relax_ntn);

std::vector<int> feasible_set(double separation_km, bool relax_ntn,
                              double light_speed_km_per_ms = 300.0);

double bw_ratio(int from_split, int to_split, int antenna_count, Direction dir);

/// True when a requirement fits under `capacity_gops`. A ">x" requirement
/// needs strictly more than x; "<x" and exact ones need at most x.
bool compute_fits(const ComputeBound& required, double capacity_gops);

nlohmann::json split_catalog_to_json();
std::vector<FunctionSplitSpec> split_catalog_from_json(const nlohmann::json& doc);

nlohmann::json to_json(const FeasibilityVerdict& v);

}  // namespace ntnsplit
