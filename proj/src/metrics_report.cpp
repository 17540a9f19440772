#include "ntnsplit/metrics_report.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace ntnsplit {

namespace {

constexpr std::array<SplitOption, 3> kSplits = {SplitOption::lls, SplitOption::cu_du,
                                                 SplitOption::gnb_onboard};
constexpr std::array<Phase, 3> kPhases = {Phase::setup, Phase::buffer, Phase::execution};

CheckOutcome worst(CheckOutcome a, CheckOutcome b) {
  auto rank = [](CheckOutcome o) {
    switch (o) {
      case CheckOutcome::pass: return 0;
      case CheckOutcome::tie: return 1;
      case CheckOutcome::fail: return 2;
      case CheckOutcome::skipped: return 3;
    }
    return 3;
  };
  return rank(a) >= rank(b) ? a : b;
}

// Outcome of values[0] < values[1] < ... (or > when `increasing` is false).
CheckOutcome strict_chain(const std::vector<double>& values, bool increasing) {
  CheckOutcome out = CheckOutcome::pass;
  for (std::size_t i = 0; i + 1 < values.size(); ++i) {
    const double lo = increasing ? values[i] : values[i + 1];
    const double hi = increasing ? values[i + 1] : values[i];
    if (lo > hi) return CheckOutcome::fail;
    if (lo == hi) out = CheckOutcome::tie;
  }
  return out;
}

// Outcome of values[pick] being the strict extreme (max or min) of values.
CheckOutcome strict_extreme(const std::vector<double>& values, std::size_t pick, bool maximum) {
  CheckOutcome out = CheckOutcome::pass;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i == pick) continue;
    const double other = values[i];
    const double mine = values[pick];
    if (maximum ? other > mine : other < mine) return CheckOutcome::fail;
    if (other == mine) out = CheckOutcome::tie;
  }
  return out;
}

struct MissingCell : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct Row {
  const MetricsReport& report;
  Scenario scenario;

  std::vector<double> values(const std::function<double(const CellMetrics&)>& get) const {
    std::vector<double> out;
    for (SplitOption sp : kSplits) {
      const CellMetrics* c = report.find(scenario, sp);
      if (!c) {
        throw MissingCell(std::string{"trend check needs cell "} + to_string(scenario) + "/" +
                          to_string(sp));
      }
      out.push_back(get(*c));
    }
    return out;
  }
};

double fl(const CellMetrics& c) { return c.counts.of(LinkClass::fl); }
double crossings(const CellMetrics& c) { return c.counts.crossings(); }
double total(const CellMetrics& c) { return c.durations.total_ms; }
double buffer(const CellMetrics& c) { return c.durations.buffer_ms; }

std::string describe(const std::string& what, const std::vector<double>& v) {
  std::ostringstream os;
  os << what << " [lls, cu-du, gnb] = [" << format_number(v[0]) << ", " << format_number(v[1])
     << ", " << format_number(v[2]) << "]";
  return os.str();
}

using CheckBody = std::function<CheckOutcome(std::string& detail)>;

OrderingCheck run_check(std::string id, std::string description, bool skip_missing,
                        const CheckBody& body) {
  OrderingCheck c{std::move(id), std::move(description), CheckOutcome::fail, {}};
  try {
    c.outcome = body(c.detail);
  } catch (const MissingCell& e) {
    if (!skip_missing) throw;
    c.outcome = CheckOutcome::skipped;
    c.detail = e.what();
  }
  return c;
}

void append_detail(std::string& detail, const std::string& more) {
  if (!detail.empty()) detail += "; ";
  detail += more;
}

nlohmann::json counts_json(const std::map<LinkClass, int>& counts) {
  nlohmann::json j = nlohmann::json::object();
  for (LinkClass cls : kAllLinkClasses) {
    auto it = counts.find(cls);
    j[to_string(cls)] = it == counts.end() ? 0 : it->second;
  }
  return j;
}

LinkClass link_class_from_string(const std::string& s) {
  for (LinkClass cls : kAllLinkClasses) {
    if (s == to_string(cls)) return cls;
  }
  throw std::invalid_argument("unknown link class '" + s + "'");
}

Phase phase_from_string(const std::string& s) {
  for (Phase p : kPhases) {
    if (s == to_string(p)) return p;
  }
  throw std::invalid_argument("unknown phase '" + s + "'");
}

ChoVariant variant_from_string(const std::string& s) {
  for (ChoVariant v :
       {ChoVariant::intra_du, ChoVariant::inter_du, ChoVariant::inter_gnb_intra_amf}) {
    if (s == to_string(v)) return v;
  }
  throw std::invalid_argument("unknown procedure '" + s + "'");
}

}  // namespace

std::string format_number(double value) {
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc{}) throw std::runtime_error("number formatting failed");
  return std::string(buf.data(), end);
}

const CellMetrics* MetricsReport::find(Scenario scenario, SplitOption split) const {
  for (const auto& c : cells) {
    if (c.deployment.scenario == scenario && c.deployment.split == split) return &c;
  }
  return nullptr;
}

CellMetrics evaluate_cell(const Deployment& dep, const LinkDelays& delays,
                          const TimingConfig& timing, const CatalogOptions& catalog) {
  const Topology topo = build_topology(dep, delays);
  const ChoVariant variant = select_procedure(dep);
  const TimelineTrace trace = evaluate_timeline(procedure_catalog(variant, catalog), topo, timing);
  return {dep, variant, phase_durations(trace), message_counts(trace)};
}

MetricsReport run_grid(const GridConfig& cfg, std::span<const Deployment> deployments) {
  return run_grid(cfg, resolve_link_delays(cfg.geometry, cfg.delay_source), deployments);
}

MetricsReport run_grid(const GridConfig& cfg, const LinkDelays& delays,
                       std::span<const Deployment> deployments) {
  cfg.timing.validate();
  MetricsReport report;
  report.geometry = cfg.geometry;
  report.timing = cfg.timing;
  report.catalog = cfg.catalog;
  report.delay_source = cfg.delay_source;
  report.delays = delays;

  const std::vector<Deployment> all = default_deployments();
  if (deployments.empty()) deployments = all;
  report.cells.reserve(deployments.size());
  for (const Deployment& dep : deployments) {
    report.cells.push_back(evaluate_cell(dep, delays, cfg.timing, cfg.catalog));
  }
  return report;
}

const char* to_string(CheckOutcome o) {
  switch (o) {
    case CheckOutcome::pass: return "pass";
    case CheckOutcome::tie: return "tie";
    case CheckOutcome::fail: return "fail";
    case CheckOutcome::skipped: return "skipped";
  }
  return "?";
}

std::vector<OrderingCheck> check_reference_trends(const MetricsReport& report, bool skip_missing) {
  std::vector<OrderingCheck> checks;
  const Row a{report, Scenario::a};
  const Row c{report, Scenario::c};
  const std::array<Row, 2> b{Row{report, Scenario::b1}, Row{report, Scenario::b2}};

  checks.push_back(run_check(
      "A.fl_count", "A: fewer feeder-link messages as functions move onboard (LLS > CU-DU > gNB)",
      skip_missing, [&](std::string& detail) {
        auto v = a.values(fl);
        detail = describe("FL count", v);
        return strict_chain(v, false);
      }));

  checks.push_back(run_check(
      "A.durations", "A: total and buffer durations decrease LLS > CU-DU > gNB", skip_missing,
      [&](std::string& detail) {
        auto t = a.values(total);
        auto bu = a.values(buffer);
        detail = describe("total", t) + "; " + describe("buffer", bu);
        return worst(strict_chain(t, false), strict_chain(bu, false));
      }));

  checks.push_back(run_check(
      "B.total_increases", "B: total duration increases LLS < CU-DU < gNB", skip_missing,
      [&](std::string& detail) {
        CheckOutcome out = CheckOutcome::pass;
        for (const Row& row : b) {
          auto t = row.values(total);
          append_detail(detail, std::string{to_string(row.scenario)} + " " + describe("total", t));
          out = worst(out, strict_chain(t, true));
        }
        return out;
      }));

  checks.push_back(run_check(
      "B.buffer_min_gnb", "B: buffer duration is shortest with the gNB onboard", skip_missing,
      [&](std::string& detail) {
        CheckOutcome out = CheckOutcome::pass;
        for (const Row& row : b) {
          auto bu = row.values(buffer);
          append_detail(detail, std::string{to_string(row.scenario)} + " " + describe("buffer", bu));
          out = worst(out, strict_extreme(bu, 2, false));
        }
        return out;
      }));

  checks.push_back(run_check(
      "B.cu_du_max_traffic", "B: CU-DU has the most feeder-link and overall link messages",
      skip_missing, [&](std::string& detail) {
        CheckOutcome out = CheckOutcome::pass;
        for (const Row& row : b) {
          auto f = row.values(fl);
          auto x = row.values(crossings);
          append_detail(detail, std::string{to_string(row.scenario)} + " " +
                                    describe("FL count", f) + ", " + describe("crossings", x));
          out = worst(out, worst(strict_extreme(f, 1, true), strict_extreme(x, 1, true)));
        }
        return out;
      }));

  checks.push_back(run_check(
      "C.lls_max_fl", "C: LLS has the most feeder-link messages", skip_missing,
      [&](std::string& detail) {
        auto f = c.values(fl);
        detail = describe("FL count", f);
        return strict_extreme(f, 0, true);
      }));

  checks.push_back(run_check(
      "C.durations", "C: total and buffer durations decrease LLS > CU-DU > gNB", skip_missing,
      [&](std::string& detail) {
        auto t = c.values(total);
        auto bu = c.values(buffer);
        detail = describe("total", t) + "; " + describe("buffer", bu);
        return worst(strict_chain(t, false), strict_chain(bu, false));
      }));

  return checks;
}

bool all_pass(std::span<const OrderingCheck> checks) {
  return std::ranges::all_of(checks,
                             [](const OrderingCheck& c) { return c.outcome == CheckOutcome::pass; });
}

ReportFormat report_format_from_string(const std::string& text) {
  if (text == "json") return ReportFormat::json;
  if (text == "csv") return ReportFormat::csv;
  throw std::invalid_argument("unsupported report format '" + text + "'");
}

nlohmann::json to_json(const MetricsReport& r) {
  nlohmann::json cells = nlohmann::json::array();
  for (const auto& cell : r.cells) {
    nlohmann::json by_phase = nlohmann::json::object();
    for (Phase p : kPhases) {
      auto it = cell.counts.by_phase.find(p);
      by_phase[to_string(p)] = counts_json(it == cell.counts.by_phase.end()
                                               ? std::map<LinkClass, int>{}
                                               : it->second);
    }
    cells.push_back({{"scenario", scenario_family(cell.deployment.scenario)},
                     {"variant", to_string(cell.deployment.scenario)},
                     {"split", to_string(cell.deployment.split)},
                     {"amf_site", to_string(cell.deployment.amf_site)},
                     {"procedure", to_string(cell.procedure)},
                     {"setup_ms", cell.durations.setup_ms},
                     {"buffer_ms", cell.durations.buffer_ms},
                     {"execution_ms", cell.durations.execution_ms},
                     {"total_ms", cell.durations.total_ms},
                     {"counts", counts_json(cell.counts.total)},
                     {"counts_by_phase", by_phase}});
  }
  const auto& g = r.geometry;
  const auto& t = r.timing;
  const auto& d = r.delays;
  return {{"catalog_version", r.catalog_version},
          {"catalog_options",
           {{"candidate_count", r.catalog.candidate_count},
            {"msg4_from_du", r.catalog.msg4_from_du}}},
          {"delay_source", to_string(r.delay_source)},
          {"geometry",
           {{"earth_radius_km", g.earth_radius_km},
            {"altitude_km", g.altitude_km},
            {"sl_elevation_deg", g.sl_elevation_deg},
            {"fl_elevation_deg", g.fl_elevation_deg},
            {"sats_per_plane", g.sats_per_plane},
            {"igsl_inflation", g.igsl_inflation},
            {"light_speed_km_per_ms", g.light_speed_km_per_ms},
            {"max_distance_light_speed_km_per_ms", g.max_distance_light_speed_km_per_ms}}},
          {"timing",
           {{"per_message_processing_ms", t.per_message_processing_ms},
            {"ssb_acquisition_ms", t.ssb_acquisition_ms},
            {"cn_api_total_ms", t.cn_api_total_ms},
            {"trigger_offset_ms", t.trigger_offset_ms},
            {"processing_at_relays", t.processing_at_relays}}},
          {"link_delays",
           {{"sl_ms", d.sl_ms}, {"fl_ms", d.fl_ms}, {"isl_ms", d.isl_ms}, {"igsl_ms", d.igsl_ms},
            {"sl_km", d.sl_km}, {"fl_km", d.fl_km}, {"isl_km", d.isl_km}, {"igsl_km", d.igsl_km}}},
          {"cells", cells}};
}

MetricsReport report_from_json(const nlohmann::json& doc) {
  MetricsReport r;
  r.catalog_version = doc.at("catalog_version").get<std::string>();
  const auto& co = doc.at("catalog_options");
  r.catalog.candidate_count = co.at("candidate_count").get<int>();
  r.catalog.msg4_from_du = co.at("msg4_from_du").get<bool>();
  r.delay_source = delay_source_from_string(doc.at("delay_source").get<std::string>().c_str());

  const auto& g = doc.at("geometry");
  r.geometry.earth_radius_km = g.at("earth_radius_km").get<double>();
  r.geometry.altitude_km = g.at("altitude_km").get<double>();
  r.geometry.sl_elevation_deg = g.at("sl_elevation_deg").get<double>();
  r.geometry.fl_elevation_deg = g.at("fl_elevation_deg").get<double>();
  r.geometry.sats_per_plane = g.at("sats_per_plane").get<int>();
  r.geometry.igsl_inflation = g.at("igsl_inflation").get<double>();
  r.geometry.light_speed_km_per_ms = g.at("light_speed_km_per_ms").get<double>();
  r.geometry.max_distance_light_speed_km_per_ms =
      g.at("max_distance_light_speed_km_per_ms").get<double>();

  const auto& t = doc.at("timing");
  r.timing.per_message_processing_ms = t.at("per_message_processing_ms").get<double>();
  r.timing.ssb_acquisition_ms = t.at("ssb_acquisition_ms").get<double>();
  r.timing.cn_api_total_ms = t.at("cn_api_total_ms").get<double>();
  r.timing.trigger_offset_ms = t.at("trigger_offset_ms").get<double>();
  r.timing.processing_at_relays = t.at("processing_at_relays").get<bool>();

  const auto& d = doc.at("link_delays");
  r.delays.sl_ms = d.at("sl_ms").get<double>();
  r.delays.fl_ms = d.at("fl_ms").get<double>();
  r.delays.isl_ms = d.at("isl_ms").get<double>();
  r.delays.igsl_ms = d.at("igsl_ms").get<double>();
  r.delays.sl_km = d.at("sl_km").get<double>();
  r.delays.fl_km = d.at("fl_km").get<double>();
  r.delays.isl_km = d.at("isl_km").get<double>();
  r.delays.igsl_km = d.at("igsl_km").get<double>();

  for (const auto& j : doc.at("cells")) {
    CellMetrics c;
    c.deployment.scenario = scenario_from_string(j.at("variant").get<std::string>());
    c.deployment.split = split_option_from_string(j.at("split").get<std::string>());
    c.deployment.amf_site = amf_site_from_string(j.at("amf_site").get<std::string>());
    c.procedure = variant_from_string(j.at("procedure").get<std::string>());
    c.durations.setup_ms = j.at("setup_ms").get<double>();
    c.durations.buffer_ms = j.at("buffer_ms").get<double>();
    c.durations.execution_ms = j.at("execution_ms").get<double>();
    c.durations.total_ms = j.at("total_ms").get<double>();
    for (const auto& [k, v] : j.at("counts").items()) {
      c.counts.total[link_class_from_string(k)] = v.get<int>();
    }
    for (const auto& [phase, counts] : j.at("counts_by_phase").items()) {
      for (const auto& [k, v] : counts.items()) {
        c.counts.by_phase[phase_from_string(phase)][link_class_from_string(k)] = v.get<int>();
      }
    }
    r.cells.push_back(std::move(c));
  }
  return r;
}

std::string serialize(const MetricsReport& report, ReportFormat format) {
  switch (format) {
    case ReportFormat::json:
      return to_json(report).dump(2) + "\n";
    case ReportFormat::csv: {
      std::ostringstream os;
      os << kCsvHeader << "\n";
      for (const auto& c : report.cells) {
        os << scenario_family(c.deployment.scenario) << ',' << to_string(c.deployment.scenario)
           << ',' << to_string(c.deployment.split) << ',' << to_string(c.procedure) << ','
           << format_number(c.durations.setup_ms) << ',' << format_number(c.durations.buffer_ms)
           << ',' << format_number(c.durations.execution_ms) << ','
           << format_number(c.durations.total_ms) << ',' << c.counts.of(LinkClass::sl) << ','
           << c.counts.of(LinkClass::fl) << ',' << c.counts.of(LinkClass::isl) << ','
           << c.counts.of(LinkClass::igsl) << "\n";
      }
      return os.str();
    }
  }
  throw std::invalid_argument("unsupported report format");
}

std::string plot_data_csv(const MetricsReport& report) {
  std::ostringstream os;
  os << "figure,panel,bar,series,value\n";
  for (const char* family : {"A", "B", "C"}) {
    for (const auto& c : report.cells) {
      if (std::string_view{scenario_family(c.deployment.scenario)} != family) continue;
      const std::string bar = std::string{to_string(c.deployment.scenario)} + "/" +
                              to_string(c.deployment.split) + "/" + to_string(c.procedure);
      for (LinkClass cls : kAllLinkClasses) {
        os << family << ",link_counts," << bar << "," << to_string(cls) << ","
           << c.counts.of(cls) << "\n";
      }
      os << family << ",durations," << bar << ",setup," << format_number(c.durations.setup_ms)
         << "\n";
      os << family << ",durations," << bar << ",buffer," << format_number(c.durations.buffer_ms)
         << "\n";
      os << family << ",durations," << bar << ",execution,"
         << format_number(c.durations.execution_ms) << "\n";
    }
  }
  return os.str();
}

}  // namespace ntnsplit
