#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ntnsplit/topology.hpp"

namespace ntnsplit {

enum class Phase { setup, buffer, execution };

const char* to_string(Phase p);

/// Steps that take fixed time at one place instead of crossing links.
enum class LocalStep { none, ssb_acquisition, cn_api };

struct MessageSpec {
  std::string name;
  Phase phase = Phase::setup;
  Function from = Function::ue;
  Function to = Function::ue;
  std::vector<std::string> deps;
  LocalStep local = LocalStep::none;
  // Starts no earlier than the CHO trigger (end of setup plus trigger offset).
  bool after_trigger = false;

  bool is_local() const { return local != LocalStep::none; }
};

struct ProcedureCatalog {
  ChoVariant variant = ChoVariant::intra_du;
  std::vector<MessageSpec> messages;

  const MessageSpec* find(const std::string& name) const;
};

struct CatalogOptions {
  // Targets asked during setup; each adds a request/response pair.
  int candidate_count = 1;
  // Contention resolution answered by the target DU instead of the target CU.
  bool msg4_from_du = false;
};

inline constexpr const char* kCatalogVersion = "cho-catalog-1";

/// Message sequence of one CHO variant. Throws std::invalid_argument for a
/// candidate_count below 1.
ProcedureCatalog procedure_catalog(ChoVariant variant, const CatalogOptions& opts = {});

struct TimingConfig {
  double per_message_processing_ms = 1.0;
  double ssb_acquisition_ms = 20.0;
  double cn_api_total_ms = 50.0;
  double trigger_offset_ms = 0.0;
  bool processing_at_relays = false;

  void validate() const;
};

double local_delay_ms(LocalStep step, const TimingConfig& timing);

struct TraceEvent {
  std::string name;
  Phase phase = Phase::setup;
  Function from = Function::ue;
  Function to = Function::ue;
  double start_ms = 0.0;
  double arrival_ms = 0.0;
  ResolvedPath path;
  std::vector<LinkClass> links;
  bool local = false;
  bool elided = false;  // both endpoints on one node; takes no time, not counted

  bool transmitted() const { return !local && !elided; }
};

struct TimelineTrace {
  ChoVariant variant = ChoVariant::intra_du;
  std::vector<TraceEvent> events;  // catalog order
  double setup_end_ms = 0.0;
  double trigger_ms = 0.0;
  double buffer_end_ms = 0.0;
  double completion_ms = 0.0;
  std::vector<std::string> notes;

  const TraceEvent* find(const std::string& name) const;
};

/// Throws std::invalid_argument for unknown or duplicate names, dependency
/// cycles, or an execution message that a setup message waits on.
void validate_catalog(const ProcedureCatalog& catalog);

/// Dependency order of the catalog (Kahn's algorithm, ties by catalog index),
/// including the implicit edges from every setup message to every
/// after-trigger message.
std::vector<std::size_t> schedule_order(const ProcedureCatalog& catalog);

/// Earliest-start schedule of the catalog over the topology.
TimelineTrace evaluate_timeline(const ProcedureCatalog& catalog, const Topology& topo,
                                const TimingConfig& timing);

struct PhaseDurations {
  double setup_ms = 0.0;
  double buffer_ms = 0.0;
  double execution_ms = 0.0;
  double total_ms = 0.0;
};

PhaseDurations phase_durations(const TimelineTrace& trace);

struct MessageCounts {
  std::map<LinkClass, int> total;
  std::map<Phase, std::map<LinkClass, int>> by_phase;

  int of(LinkClass cls) const;
  int of(Phase phase, LinkClass cls) const;
  int crossings() const;
};

/// Link traversals per class: each transmitted message adds one per link it
/// crosses. Local steps and elided messages add nothing.
MessageCounts message_counts(const TimelineTrace& trace);

nlohmann::json to_json(const TimelineTrace& trace);

}  // namespace ntnsplit
