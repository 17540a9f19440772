#include "ntnsplit/split_catalog.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>

namespace ntnsplit {

namespace {

using LC = LatencyClass;
using BQ = BoundQualifier;

std::vector<BandwidthEntry> bw(double dl2, double ul2, double dl64, double ul64) {
  return {{2, Direction::dl, dl2}, {2, Direction::ul, ul2},
          {64, Direction::dl, dl64}, {64, Direction::ul, ul64}};
}

// SCF fronthaul latency classes and bandwidth; GOPS split between the
// ground station and the satellite for a single user.
const std::vector<FunctionSplitSpec>& table() {
  static const std::vector<FunctionSplitSpec> rows = {
      {1, "RRC - PDCP", {{LC::non_ideal, 30.0, 9000.0}},
       bw(149.9, 48.6, 149.9, 48.6), {8.0, BQ::less_than}, {36.5, BQ::greater_than}},
      {2, "PDCP - RLC", {{LC::non_ideal, 30.0, 9000.0}},
       bw(150.0, 48.7, 150.0, 48.7), {8.0, BQ::less_than}, {36.5, BQ::greater_than}},
      {3, "RLC - MAC", {{LC::non_ideal, 30.0, 9000.0}},
       bw(150.6, 48.9, 150.6, 48.9), {8.0, BQ::less_than}, {36.5, BQ::greater_than}},
      {4, "hMAC - lMAC", {{LC::sub_ideal, 6.0, 1800.0}},
       bw(151.3, 49.4, 151.3, 49.4), {8.0, BQ::less_than}, {36.5, BQ::greater_than}},
      {5, "MAC - PHY", {{LC::sub_ideal, 6.0, 1800.0}},
       bw(152.3, 49.9, 152.3, 49.9), {8.0, BQ::less_than}, {36.5, BQ::greater_than}},
      {6, "PHY Split I", {{LC::near_ideal, 2.0, 600.0}},
       bw(173.1, 451.6, 173.1, 451.6), {8.0, BQ::exact}, {36.5, BQ::exact}},
      {7, "PHY Split II", {{LC::near_ideal, 2.0, 600.0}, {LC::ideal, 0.25, 75.0}},
       bw(932.6, 903.2, 29843.0, 28901.0), {15.9, BQ::exact}, {28.6, BQ::exact}},
      {8, "PHY Split III", {{LC::near_ideal, 2.0, 600.0}, {LC::ideal, 0.25, 75.0}},
       bw(1075.2, 921.6, 34406.0, 29491.0), {18.5, BQ::exact}, {26.0, BQ::exact}},
      {9, "PHY Split IIIb", {{LC::near_ideal, 2.0, 600.0}, {LC::ideal, 0.25, 75.0}},
       bw(1966.1, 1966.1, 62915.0, 62915.0), {19.8, BQ::exact}, {24.7, BQ::exact}},
      {10, "PHY Split IV / PHY - RF", {{LC::ideal, 0.25, 75.0}},
       bw(2457.6, 2457.6, 78643.0, 78643.0), {23.8, BQ::exact}, {20.7, BQ::exact}},
  };
  return rows;
}

const char* to_string(BoundQualifier q) {
  switch (q) {
    case BQ::exact: return "exact";
    case BQ::less_than: return "less-than";
    case BQ::greater_than: return "greater-than";
  }
  return "?";
}

BoundQualifier qualifier_from_string(const std::string& s) {
  if (s == "exact") return BQ::exact;
  if (s == "less-than") return BQ::less_than;
  if (s == "greater-than") return BQ::greater_than;
  throw std::invalid_argument("unknown bound qualifier '" + s + "'");
}

Direction direction_from_string(const std::string& s) {
  if (s == "DL") return Direction::dl;
  if (s == "UL") return Direction::ul;
  throw std::invalid_argument("unknown direction '" + s + "'");
}

void check_antennas(int antenna_count) {
  if (std::ranges::find(kSupportedAntennaCounts, antenna_count) ==
      std::end(kSupportedAntennaCounts)) {
    throw std::invalid_argument("antenna count must be 2 or 64, got " +
                                std::to_string(antenna_count));
  }
}

nlohmann::json bound_json(const ComputeBound& b) {
  return {{"gops", b.gops}, {"qualifier", to_string(b.qualifier)}};
}

ComputeBound bound_from_json(const nlohmann::json& j) {
  return {j.at("gops").get<double>(), qualifier_from_string(j.at("qualifier").get<std::string>())};
}

}  // namespace

const char* to_string(LatencyClass cls) {
  switch (cls) {
    case LC::non_ideal: return "non-ideal";
    case LC::sub_ideal: return "sub-ideal";
    case LC::near_ideal: return "near-ideal";
    case LC::ideal: return "ideal";
  }
  return "?";
}

LatencyClass latency_class_from_string(const std::string& text) {
  for (LC c : {LC::non_ideal, LC::sub_ideal, LC::near_ideal, LC::ideal}) {
    if (text == to_string(c)) return c;
  }
  throw std::invalid_argument("unknown latency class '" + text + "'");
}

const char* to_string(Direction dir) { return dir == Direction::dl ? "DL" : "UL"; }

const LatencyBudget* FunctionSplitSpec::budget_for(LatencyClass cls) const {
  auto it = std::ranges::find(classes, cls, &LatencyBudget::cls);
  return it == classes.end() ? nullptr : &*it;
}

double FunctionSplitSpec::bandwidth_mbps(int antenna_count, Direction dir) const {
  check_antennas(antenna_count);
  for (const auto& e : fh_bw) {
    if (e.antenna_count == antenna_count && e.direction == dir) return e.mbps;
  }
  throw std::logic_error("split " + std::to_string(id) + " lacks a bandwidth entry");
}

std::span<const FunctionSplitSpec> split_table() { return table(); }

const FunctionSplitSpec& get_split(int id) {
  if (id < kMinSplitId || id > kMaxSplitId) {
    throw std::out_of_range("unknown function split id " + std::to_string(id));
  }
  return table()[static_cast<std::size_t>(id - 1)];
}

double canonical_budget_ms(LatencyClass cls) {
  switch (cls) {
    case LC::non_ideal: return 30.0;
    case LC::sub_ideal: return 6.0;
    case LC::near_ideal: return 2.0;
    case LC::ideal: return 0.25;
  }
  return 0.0;
}

double max_fh_distance_km(double latency_ms, double light_speed_km_per_ms) {
  return latency_ms * light_speed_km_per_ms;
}

bool compute_fits(const ComputeBound& required, double capacity_gops) {
  if (required.qualifier == BQ::greater_than) return capacity_gops > required.gops;
  return required.gops <= capacity_gops;
}

FeasibilityVerdict check_feasibility(const FeasibilityRequest& req) {
  const FunctionSplitSpec& split = get_split(req.split_id);
  check_antennas(req.antenna_count);
  if (req.beams < 1) throw std::invalid_argument("beam count must be positive");
  if (!(req.total_path_km >= 0.0)) throw std::invalid_argument("path length must be >= 0");

  FeasibilityVerdict v;
  v.split_id = split.id;
  v.use_case = req.use_case;
  v.separation_km = req.total_path_km;

  double budget_ms = 0.0;
  if (const LatencyBudget* b = split.budget_for(req.use_case)) {
    budget_ms = b->budget_ms;
  } else if (req.relax_ntn) {
    budget_ms = canonical_budget_ms(req.use_case);
    v.notes.push_back(std::string{"relaxed: split "} + std::to_string(split.id) +
                      " judged at the canonical " + to_string(req.use_case) + " budget");
  } else {
    throw std::invalid_argument(std::string{"split "} + std::to_string(split.id) +
                                " does not publish a " + to_string(req.use_case) +
                                " latency class");
  }

  v.budget_km = max_fh_distance_km(budget_ms, req.light_speed_km_per_ms);
  v.feasible = v.separation_km <= v.budget_km;
  v.margin_km = v.budget_km - v.separation_km;
  v.bw_required_dl_mbps = split.bandwidth_mbps(req.antenna_count, Direction::dl) * req.beams;
  v.bw_required_ul_mbps = split.bandwidth_mbps(req.antenna_count, Direction::ul) * req.beams;
  v.satellite_gops_required = split.gops_satellite;
  if (req.satellite_gops_capacity) {
    v.compute_feasible = compute_fits(split.gops_satellite, *req.satellite_gops_capacity);
  }
  if (split.classes.size() > 1 && req.use_case == LC::near_ideal) {
    v.notes.emplace_back("near-ideal class assumes HARQ/CSI timing relaxed for NTN");
  }
  return v;
}

LatencyClass sweep_class(int split_id, bool relax_ntn) {
  const FunctionSplitSpec& split = get_split(split_id);
  if (split.classes.size() == 1) return split.classes.front().cls;
  return relax_ntn ? LC::near_ideal : LC::ideal;
}

std::vector<int> feasible_set(double separation_km, bool relax_ntn,
                              double light_speed_km_per_ms) {
  std::vector<int> ids;
  for (const auto& split : table()) {
    FeasibilityRequest req;
    req.split_id = split.id;
    req.use_case = sweep_class(split.id, relax_ntn);
    req.total_path_km = separation_km;
    req.light_speed_km_per_ms = light_speed_km_per_ms;
    if (check_feasibility(req).feasible) ids.push_back(split.id);
  }
  return ids;
}

double bw_ratio(int from_split, int to_split, int antenna_count, Direction dir) {
  return get_split(to_split).bandwidth_mbps(antenna_count, dir) /
         get_split(from_split).bandwidth_mbps(antenna_count, dir);
}

nlohmann::json split_catalog_to_json() {
  nlohmann::json splits = nlohmann::json::array();
  for (const auto& s : table()) {
    nlohmann::json classes = nlohmann::json::array();
    for (const auto& c : s.classes) {
      classes.push_back({{"latency_class", to_string(c.cls)},
                         {"latency_budget_ms", c.budget_ms},
                         {"max_fh_distance_km", c.max_fh_distance_km}});
    }
    nlohmann::json bwj = nlohmann::json::array();
    for (const auto& e : s.fh_bw) {
      bwj.push_back({{"antenna_count", e.antenna_count},
                     {"direction", to_string(e.direction)},
                     {"mbps", e.mbps}});
    }
    splits.push_back({{"id", s.id},
                      {"name", s.name},
                      {"latency_classes", classes},
                      {"fh_bw_mbps", bwj},
                      {"gops_gs", bound_json(s.gops_gs)},
                      {"gops_satellite", bound_json(s.gops_satellite)}});
  }
  return {{"version", kSplitCatalogVersion},
          {"source", "Small Cell Forum fronthaul figures; single-user GOPS split"},
          {"splits", splits}};
}

std::vector<FunctionSplitSpec> split_catalog_from_json(const nlohmann::json& doc) {
  std::vector<FunctionSplitSpec> out;
  for (const auto& j : doc.at("splits")) {
    FunctionSplitSpec s;
    s.id = j.at("id").get<int>();
    s.name = j.at("name").get<std::string>();
    for (const auto& c : j.at("latency_classes")) {
      s.classes.push_back({latency_class_from_string(c.at("latency_class").get<std::string>()),
                           c.at("latency_budget_ms").get<double>(),
                           c.at("max_fh_distance_km").get<double>()});
    }
    for (const auto& e : j.at("fh_bw_mbps")) {
      s.fh_bw.push_back({e.at("antenna_count").get<int>(),
                         direction_from_string(e.at("direction").get<std::string>()),
                         e.at("mbps").get<double>()});
    }
    s.gops_gs = bound_from_json(j.at("gops_gs"));
    s.gops_satellite = bound_from_json(j.at("gops_satellite"));
    out.push_back(std::move(s));
  }
  return out;
}

nlohmann::json to_json(const FeasibilityVerdict& v) {
  nlohmann::json j = {{"split_id", v.split_id},
                      {"use_case", to_string(v.use_case)},
                      {"separation_km", v.separation_km},
                      {"budget_km", v.budget_km},
                      {"feasible", v.feasible},
                      {"margin_km", v.margin_km},
                      {"bw_required_dl_mbps", v.bw_required_dl_mbps},
                      {"bw_required_ul_mbps", v.bw_required_ul_mbps},
                      {"satellite_gops_required", bound_json(v.satellite_gops_required)},
                      {"notes", v.notes}};
  j["compute_feasible"] = v.compute_feasible ? nlohmann::json(*v.compute_feasible) : nullptr;
  return j;
}

}  // namespace ntnsplit
