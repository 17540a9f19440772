#include "ntnsplit/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

#include "ntnsplit/metrics_report.hpp"
#include "ntnsplit/split_catalog.hpp"

namespace ntnsplit {

namespace {

template <typename T>
T typed(const nlohmann::json& value, const std::string& key) {
  try {
    return value.get<T>();
  } catch (const nlohmann::json::exception&) {
    throw std::invalid_argument("config key '" + key + "' has the wrong type");
  }
}

// Values given on the command line; unset ones fall back to the config file.
struct Flags {
  std::optional<std::string> config_path;
  std::optional<double> altitude, sl_elevation, fl_elevation, earth_radius, inflation;
  std::optional<int> sats_per_plane;
  std::optional<bool> relax;
  std::optional<int> antennas, beams, candidates;
  std::optional<double> sat_gops, trigger_offset, processing, ssb, cn_api;
  std::optional<std::string> scenario, split, amf_site, format, out, delays;
  bool relay_processing = false;
  bool msg4_from_du = false;
};

void add_options(CLI::App* cmd, Flags& f, bool deployment_options) {
  cmd->add_option("--config", f.config_path, "JSON config file (flags take precedence)");
  cmd->add_option("--altitude", f.altitude, "orbit altitude [km]");
  cmd->add_option("--sl-elevation", f.sl_elevation, "service-link elevation [deg]");
  cmd->add_option("--fl-elevation", f.fl_elevation, "feeder-link elevation [deg]");
  cmd->add_option("--earth-radius", f.earth_radius, "Earth radius [km]");
  cmd->add_option("--sats-per-plane", f.sats_per_plane, "satellites per orbital plane");
  cmd->add_option("--igsl-inflation", f.inflation, "inter-GS path inflation factor");
  cmd->add_flag_function("--relax-ntn", [&f](std::int64_t) { f.relax = true; },
                         "judge PHY splits 7-9 at the near-ideal class");
  cmd->add_flag_function("--no-relax", [&f](std::int64_t) { f.relax = false; },
                         "judge PHY splits 7-9 at the ideal class");
  cmd->add_option("--antennas", f.antennas, "antenna count")->check(CLI::IsMember({2, 64}));
  cmd->add_option("--beams", f.beams, "beams per satellite");
  cmd->add_option("--sat-gops", f.sat_gops, "onboard compute capacity [GOPS]");
  cmd->add_option("--format", f.format, "output format")
      ->check(CLI::IsMember({"json", "csv", "plot"}));
  cmd->add_option("--out", f.out, "write output to PATH instead of stdout");
  if (!deployment_options) return;
  cmd->add_option("--scenario", f.scenario, "A, B, B1, B2 or C")
      ->check(CLI::IsMember({"A", "B", "B1", "B2", "C"}));
  cmd->add_option("--split", f.split, "lls, cu-du or gnb")
      ->check(CLI::IsMember({"lls", "cu-du", "gnb"}));
  cmd->add_option("--amf-site", f.amf_site, "GS hosting the core in scenario C")
      ->check(CLI::IsMember({"source", "target"}));
  cmd->add_option("--trigger-offset", f.trigger_offset, "gap between setup and trigger [ms]");
  cmd->add_option("--processing", f.processing, "per-message processing delay [ms]");
  cmd->add_option("--ssb", f.ssb, "SSB acquisition time [ms]");
  cmd->add_option("--cn-api", f.cn_api, "core-network API time [ms]");
  cmd->add_flag("--relay-processing", f.relay_processing,
                "charge processing at relay nodes as well");
  cmd->add_option("--candidates", f.candidates, "candidate targets asked during setup");
  cmd->add_flag("--msg4-from-du", f.msg4_from_du, "target DU answers MSG4");
  cmd->add_option("--delays", f.delays, "link delay source")
      ->check(CLI::IsMember({"auto", "derived", "published"}));
}

RunConfig resolve(const Flags& f) {
  RunConfig cfg;
  if (f.config_path) {
    std::ifstream in(*f.config_path);
    if (!in) throw std::invalid_argument("cannot read config file " + *f.config_path);
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
      throw std::invalid_argument(std::string{"config file is not valid JSON: "} + e.what());
    }
    cfg = apply_config_json(cfg, doc);
  }
  auto& g = cfg.geometry;
  if (f.altitude) g.altitude_km = *f.altitude;
  if (f.sl_elevation) g.sl_elevation_deg = *f.sl_elevation;
  if (f.fl_elevation) g.fl_elevation_deg = *f.fl_elevation;
  if (f.earth_radius) g.earth_radius_km = *f.earth_radius;
  if (f.sats_per_plane) g.sats_per_plane = *f.sats_per_plane;
  if (f.inflation) g.igsl_inflation = *f.inflation;
  if (f.relax) cfg.relax_ntn = *f.relax;
  if (f.antennas) cfg.antennas = *f.antennas;
  if (f.beams) cfg.beams = *f.beams;
  if (f.sat_gops) cfg.satellite_gops_capacity = *f.sat_gops;
  if (f.trigger_offset) cfg.timing.trigger_offset_ms = *f.trigger_offset;
  if (f.processing) cfg.timing.per_message_processing_ms = *f.processing;
  if (f.ssb) cfg.timing.ssb_acquisition_ms = *f.ssb;
  if (f.cn_api) cfg.timing.cn_api_total_ms = *f.cn_api;
  if (f.relay_processing) cfg.timing.processing_at_relays = true;
  if (f.candidates) cfg.catalog.candidate_count = *f.candidates;
  if (f.msg4_from_du) cfg.catalog.msg4_from_du = true;
  if (f.delays) cfg.delay_source = delay_source_from_string(f.delays->c_str());
  if (f.scenario) cfg.scenario = *f.scenario;
  if (f.split) cfg.split = split_option_from_string(*f.split);
  if (f.amf_site) cfg.amf_site = amf_site_from_string(*f.amf_site);
  if (f.format) cfg.format = *f.format;
  if (f.out) cfg.out_path = *f.out;

  g.validate();
  cfg.timing.validate();
  if (cfg.beams < 1) throw std::invalid_argument("beams must be positive");
  if (cfg.antennas != 2 && cfg.antennas != 64) throw std::invalid_argument("antennas must be 2 or 64");
  return cfg;
}

void emit(const RunConfig& cfg, const std::string& text, std::ostream& out) {
  if (!cfg.out_path) {
    out << text;
    return;
  }
  std::ofstream file(*cfg.out_path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot open output file " + *cfg.out_path);
  file << text;
  if (!file) throw std::runtime_error("failed writing " + *cfg.out_path);
}

void require_format(const RunConfig& cfg, std::initializer_list<std::string_view> allowed) {
  if (std::ranges::find(allowed, cfg.format) == allowed.end()) {
    throw std::invalid_argument("format '" + cfg.format + "' is not available for this command");
  }
}

int cmd_feasibility(const RunConfig& cfg, std::ostream& out) {
  require_format(cfg, {"json", "csv"});
  const double separation = slant_range_km(cfg.geometry, cfg.geometry.fl_elevation_deg);
  std::vector<FeasibilityVerdict> verdicts;
  for (const auto& split : split_table()) {
    FeasibilityRequest req;
    req.split_id = split.id;
    req.use_case = sweep_class(split.id, cfg.relax_ntn);
    req.total_path_km = separation;
    req.antenna_count = cfg.antennas;
    req.beams = cfg.beams;
    req.satellite_gops_capacity = cfg.satellite_gops_capacity;
    req.relax_ntn = cfg.relax_ntn;
    req.light_speed_km_per_ms = cfg.geometry.max_distance_light_speed_km_per_ms;
    verdicts.push_back(check_feasibility(req));
  }
  std::vector<int> feasible;
  for (const auto& v : verdicts) {
    if (v.feasible) feasible.push_back(v.split_id);
  }

  if (cfg.format == "csv") {
    std::ostringstream os;
    os << "split_id,name,use_case,separation_km,budget_km,feasible,margin_km,bw_dl_mbps,"
          "bw_ul_mbps,satellite_gops\n";
    for (const auto& v : verdicts) {
      const auto& sat = v.satellite_gops_required;
      const char* q = sat.qualifier == BoundQualifier::less_than      ? "<"
                      : sat.qualifier == BoundQualifier::greater_than ? ">"
                                                                      : "";
      os << v.split_id << ",\"" << get_split(v.split_id).name << "\"," << to_string(v.use_case)
         << ',' << format_number(v.separation_km) << ',' << format_number(v.budget_km) << ','
         << (v.feasible ? "true" : "false") << ',' << format_number(v.margin_km) << ','
         << format_number(v.bw_required_dl_mbps) << ',' << format_number(v.bw_required_ul_mbps)
         << ',' << q << format_number(sat.gops) << "\n";
    }
    emit(cfg, os.str(), out);
    return kExitOk;
  }

  nlohmann::json vj = nlohmann::json::array();
  for (const auto& v : verdicts) vj.push_back(to_json(v));
  nlohmann::json doc = {{"altitude_km", cfg.geometry.altitude_km},
                        {"fl_elevation_deg", cfg.geometry.fl_elevation_deg},
                        {"separation_km", separation},
                        {"relax_ntn", cfg.relax_ntn},
                        {"antennas", cfg.antennas},
                        {"beams", cfg.beams},
                        {"feasible_set", feasible},
                        {"verdicts", vj}};
  emit(cfg, doc.dump(2) + "\n", out);
  return kExitOk;
}

Deployment single_deployment(const RunConfig& cfg) {
  if (!cfg.scenario || !cfg.split) {
    throw std::invalid_argument("--scenario and --split are required for this command");
  }
  if (*cfg.scenario == "B") {
    throw std::invalid_argument("scenario B is ambiguous here; choose B1 or B2");
  }
  return {scenario_from_string(*cfg.scenario), *cfg.split, cfg.amf_site};
}

int cmd_cho(const RunConfig& cfg, std::ostream& out) {
  require_format(cfg, {"json", "csv"});
  const Deployment dep = single_deployment(cfg);
  const LinkDelays delays = resolve_link_delays(cfg.geometry, cfg.delay_source);

  if (cfg.format == "csv") {
    GridConfig grid{cfg.geometry, cfg.timing, cfg.delay_source, cfg.catalog};
    const std::vector<Deployment> one{dep};
    emit(cfg, serialize(run_grid(grid, delays, one), ReportFormat::csv), out);
    return kExitOk;
  }

  const Topology topo = build_topology(dep, delays);
  const TimelineTrace trace =
      evaluate_timeline(procedure_catalog(select_procedure(dep), cfg.catalog), topo, cfg.timing);
  const PhaseDurations d = phase_durations(trace);
  const MessageCounts counts = message_counts(trace);
  nlohmann::json cj = nlohmann::json::object();
  for (LinkClass cls : kAllLinkClasses) cj[to_string(cls)] = counts.of(cls);

  nlohmann::json doc = {{"deployment", label(dep)},
                        {"procedure", to_string(trace.variant)},
                        {"delay_source", to_string(cfg.delay_source)},
                        {"setup_ms", d.setup_ms},
                        {"buffer_ms", d.buffer_ms},
                        {"execution_ms", d.execution_ms},
                        {"total_ms", d.total_ms},
                        {"counts", cj},
                        {"topology", to_json(topo)},
                        {"trace", to_json(trace)}};
  emit(cfg, doc.dump(2) + "\n", out);
  return kExitOk;
}

int cmd_grid(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const GridConfig grid{cfg.geometry, cfg.timing, cfg.delay_source, cfg.catalog};
  const auto deployments = selected_deployments(cfg);
  const MetricsReport report = run_grid(grid, deployments);
  const auto checks = check_reference_trends(report, /*skip_missing=*/true);

  std::string text;
  if (cfg.format == "plot") {
    text = plot_data_csv(report);
  } else {
    text = serialize(report, report_format_from_string(cfg.format));
  }
  emit(cfg, text, out);

  bool failed = false;
  for (const auto& c : checks) {
    err << '[' << to_string(c.outcome) << "] " << c.id << ": " << c.description;
    if (!c.detail.empty()) err << " (" << c.detail << ')';
    err << '\n';
    failed = failed || c.outcome == CheckOutcome::fail || c.outcome == CheckOutcome::tie;
  }
  return failed ? kExitTrendFailure : kExitOk;
}

int cmd_catalog(const RunConfig& cfg, std::ostream& out) {
  require_format(cfg, {"json"});
  emit(cfg, split_catalog_to_json().dump(2) + "\n", out);
  return kExitOk;
}

int cmd_topology(const RunConfig& cfg, std::ostream& out) {
  require_format(cfg, {"json"});
  const Deployment dep = single_deployment(cfg);
  const Topology topo = build_topology(dep, resolve_link_delays(cfg.geometry, cfg.delay_source));
  emit(cfg, to_json(topo).dump(2) + "\n", out);
  return kExitOk;
}

}  // namespace

RunConfig apply_config_json(RunConfig cfg, const nlohmann::json& doc) {
  if (!doc.is_object()) throw std::invalid_argument("config must be a JSON object");
  auto& g = cfg.geometry;
  auto& t = cfg.timing;
  for (const auto& [key, v] : doc.items()) {
    if (key == "altitude_km") g.altitude_km = typed<double>(v, key);
    else if (key == "earth_radius_km") g.earth_radius_km = typed<double>(v, key);
    else if (key == "sl_elevation_deg") g.sl_elevation_deg = typed<double>(v, key);
    else if (key == "fl_elevation_deg") g.fl_elevation_deg = typed<double>(v, key);
    else if (key == "sats_per_plane") g.sats_per_plane = typed<int>(v, key);
    else if (key == "igsl_inflation") g.igsl_inflation = typed<double>(v, key);
    else if (key == "light_speed_km_per_ms") g.light_speed_km_per_ms = typed<double>(v, key);
    else if (key == "max_distance_light_speed_km_per_ms")
      g.max_distance_light_speed_km_per_ms = typed<double>(v, key);
    else if (key == "per_message_processing_ms") t.per_message_processing_ms = typed<double>(v, key);
    else if (key == "ssb_acquisition_ms") t.ssb_acquisition_ms = typed<double>(v, key);
    else if (key == "cn_api_total_ms") t.cn_api_total_ms = typed<double>(v, key);
    else if (key == "trigger_offset_ms") t.trigger_offset_ms = typed<double>(v, key);
    else if (key == "processing_at_relays") t.processing_at_relays = typed<bool>(v, key);
    else if (key == "delays") cfg.delay_source = delay_source_from_string(typed<std::string>(v, key).c_str());
    else if (key == "candidate_count") cfg.catalog.candidate_count = typed<int>(v, key);
    else if (key == "msg4_from_du") cfg.catalog.msg4_from_du = typed<bool>(v, key);
    else if (key == "relax_ntn") cfg.relax_ntn = typed<bool>(v, key);
    else if (key == "antennas") cfg.antennas = typed<int>(v, key);
    else if (key == "beams") cfg.beams = typed<int>(v, key);
    else if (key == "satellite_gops_capacity") cfg.satellite_gops_capacity = typed<double>(v, key);
    else if (key == "scenario") {
      const auto s = typed<std::string>(v, key);
      if (s != "B") scenario_from_string(s);
      cfg.scenario = s;
    }
    else if (key == "split") cfg.split = split_option_from_string(typed<std::string>(v, key));
    else if (key == "amf_site") cfg.amf_site = amf_site_from_string(typed<std::string>(v, key));
    else if (key == "format") cfg.format = typed<std::string>(v, key);
    else if (key == "out") cfg.out_path = typed<std::string>(v, key);
    else throw std::invalid_argument("unknown config key '" + key + "'");
  }
  return cfg;
}

std::vector<Deployment> selected_deployments(const RunConfig& cfg) {
  std::vector<Deployment> out;
  for (const Deployment& d : default_deployments(cfg.amf_site)) {
    if (cfg.scenario) {
      const std::string& s = *cfg.scenario;
      const bool match = s == to_string(d.scenario) || s == scenario_family(d.scenario);
      if (!match) continue;
    }
    if (cfg.split && d.split != *cfg.split) continue;
    out.push_back(d);
  }
  return out;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"LEO function-split feasibility and conditional handover analyzer", "ntnsplit"};
  app.require_subcommand(1);

  Flags flags;
  auto* feas = app.add_subcommand("feasibility", "fronthaul feasibility of every split");
  auto* cho = app.add_subcommand("cho", "CHO timeline for one scenario/split cell");
  auto* grid = app.add_subcommand("grid", "all cells plus the qualitative trend checks");
  auto* catalog = app.add_subcommand("catalog", "export the split table as JSON");
  auto* topo = app.add_subcommand("topology", "export one deployment's topology as JSON");
  add_options(feas, flags, false);
  add_options(cho, flags, true);
  add_options(grid, flags, true);
  add_options(catalog, flags, false);
  add_options(topo, flags, true);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    const RunConfig cfg = resolve(flags);
    if (feas->parsed()) return cmd_feasibility(cfg, out);
    if (cho->parsed()) return cmd_cho(cfg, out);
    if (grid->parsed()) return cmd_grid(cfg, out, err);
    if (catalog->parsed()) return cmd_catalog(cfg, out);
    if (topo->parsed()) return cmd_topology(cfg, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace ntnsplit
