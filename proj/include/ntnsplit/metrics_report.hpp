#pragma once

#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "ntnsplit/cho_engine.hpp"
#include "ntnsplit/geometry.hpp"
#include "ntnsplit/topology.hpp"

namespace ntnsplit {

struct GridConfig {
  GeometryConfig geometry;
  TimingConfig timing;
  DelaySource delay_source = DelaySource::automatic;
  CatalogOptions catalog;
};

struct CellMetrics {
  Deployment deployment;
  ChoVariant procedure = ChoVariant::intra_du;
  PhaseDurations durations;
  MessageCounts counts;
};

struct MetricsReport {
  GeometryConfig geometry;
  TimingConfig timing;
  CatalogOptions catalog;
  DelaySource delay_source = DelaySource::automatic;
  LinkDelays delays;
  std::string catalog_version = kCatalogVersion;
  std::vector<CellMetrics> cells;

  const CellMetrics* find(Scenario scenario, SplitOption split) const;
};

CellMetrics evaluate_cell(const Deployment& dep, const LinkDelays& delays,
                          const TimingConfig& timing, const CatalogOptions& catalog = {});

/// Evaluates every deployment (the twelve-cell default grid when empty) with
/// delays resolved from the geometry.
MetricsReport run_grid(const GridConfig& cfg, std::span<const Deployment> deployments = {});

/// Same, with explicit link delays in place of the geometry-derived ones.
MetricsReport run_grid(const GridConfig& cfg, const LinkDelays& delays,
                       std::span<const Deployment> deployments = {});

enum class CheckOutcome { pass, tie, fail, skipped };

const char* to_string(CheckOutcome o);

struct OrderingCheck {
  std::string id;
  std::string description;
  CheckOutcome outcome = CheckOutcome::fail;
  std::string detail;
};

/// The seven qualitative orderings of the reference results, as strict
/// comparisons over report cells. B checks must hold for B1 and B2 alike.
/// Missing cells throw std::invalid_argument unless `skip_missing`, which
/// reports those checks as skipped instead.
std::vector<OrderingCheck> check_reference_trends(const MetricsReport& report,
                                                  bool skip_missing = false);

bool all_pass(std::span<const OrderingCheck> checks);

enum class ReportFormat { json, csv };

ReportFormat report_format_from_string(const std::string& text);

nlohmann::json to_json(const MetricsReport& report);
MetricsReport report_from_json(const nlohmann::json& doc);

/// Canonical serialization: JSON with sorted keys, or one CSV row per cell.
std::string serialize(const MetricsReport& report, ReportFormat format);

inline constexpr const char* kCsvHeader =
    "scenario,variant,split,procedure,setup_ms,buffer_ms,execution_ms,total_ms,"
    "sl_count,fl_count,isl_count,igsl_count";

/// Long-format rows (figure, panel, bar, series, value) for the duration
/// stacks and per-link message counts of each scenario.
std::string plot_data_csv(const MetricsReport& report);

/// Shortest decimal text that parses back to the same double.
std::string format_number(double value);

}  // namespace ntnsplit
