#include "ntnsplit/geometry.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ntnsplit {

namespace {

constexpr double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }

void check_elevation(double elevation_deg) {
  if (!(elevation_deg > 0.0 && elevation_deg <= 90.0)) {
    throw std::domain_error("elevation must be in (0, 90] degrees, got " +
                            std::to_string(elevation_deg));
  }
}

}  // namespace

void GeometryConfig::validate() const {
  if (!(earth_radius_km > 0.0)) throw std::domain_error("earth_radius_km must be positive");
  if (!(altitude_km > 0.0)) throw std::domain_error("altitude_km must be positive");
  check_elevation(sl_elevation_deg);
  check_elevation(fl_elevation_deg);
  if (sats_per_plane < 2) throw std::domain_error("sats_per_plane must be at least 2");
  if (!(igsl_inflation >= 1.0)) throw std::domain_error("igsl_inflation must be >= 1");
  if (!(light_speed_km_per_ms > 0.0) || !(max_distance_light_speed_km_per_ms > 0.0)) {
    throw std::domain_error("light speed constants must be positive");
  }
}

const char* to_string(LinkClass cls) {
  switch (cls) {
    case LinkClass::sl: return "SL";
    case LinkClass::fl: return "FL";
    case LinkClass::isl: return "ISL";
    case LinkClass::igsl: return "IGSL";
  }
  return "?";
}

double LinkDelays::delay_ms(LinkClass cls) const {
  switch (cls) {
    case LinkClass::sl: return sl_ms;
    case LinkClass::fl: return fl_ms;
    case LinkClass::isl: return isl_ms;
    case LinkClass::igsl: return igsl_ms;
  }
  return 0.0;
}

double LinkDelays::distance_km(LinkClass cls) const {
  switch (cls) {
    case LinkClass::sl: return sl_km;
    case LinkClass::fl: return fl_km;
    case LinkClass::isl: return isl_km;
    case LinkClass::igsl: return igsl_km;
  }
  return 0.0;
}

LinkDelays LinkDelays::scaled(double factor) const {
  LinkDelays out = *this;
  out.sl_km *= factor;
  out.fl_km *= factor;
  out.isl_km *= factor;
  out.igsl_km *= factor;
  out.sl_ms *= factor;
  out.fl_ms *= factor;
  out.isl_ms *= factor;
  out.igsl_ms *= factor;
  return out;
}

double slant_range_km(const GeometryConfig& cfg, double elevation_deg) {
  check_elevation(elevation_deg);
  if (!(cfg.altitude_km > 0.0)) throw std::domain_error("altitude_km must be positive");
  if (!(cfg.earth_radius_km > 0.0)) throw std::domain_error("earth_radius_km must be positive");

  const double re = cfg.earth_radius_km;
  const double orbit = re + cfg.altitude_km;
  // Zenith: the closed form reduces to h, but cos(pi/2) is not exactly zero.
  if (elevation_deg == 90.0) return cfg.altitude_km;

  const double el = deg_to_rad(elevation_deg);
  const double re_cos = re * std::cos(el);
  return std::sqrt(orbit * orbit - re_cos * re_cos) - re * std::sin(el);
}

double propagation_delay_ms(double distance_km, const GeometryConfig& cfg) {
  return distance_km / cfg.light_speed_km_per_ms;
}

double isl_distance_km(const GeometryConfig& cfg) {
  if (cfg.sats_per_plane < 2) throw std::domain_error("sats_per_plane must be at least 2");
  const double orbit = cfg.earth_radius_km + cfg.altitude_km;
  return 2.0 * orbit * std::sin(std::numbers::pi / cfg.sats_per_plane);
}

double igsl_distance_km(const GeometryConfig& cfg) {
  if (cfg.sats_per_plane < 2) throw std::domain_error("sats_per_plane must be at least 2");
  const double central_angle = 2.0 * std::numbers::pi / cfg.sats_per_plane;
  return cfg.igsl_inflation * cfg.earth_radius_km * central_angle;
}

LinkDelays link_delays(const GeometryConfig& cfg) {
  cfg.validate();
  LinkDelays d;
  d.sl_km = slant_range_km(cfg, cfg.sl_elevation_deg);
  d.fl_km = slant_range_km(cfg, cfg.fl_elevation_deg);
  d.isl_km = isl_distance_km(cfg);
  d.igsl_km = igsl_distance_km(cfg);
  d.sl_ms = propagation_delay_ms(d.sl_km, cfg);
  d.fl_ms = propagation_delay_ms(d.fl_km, cfg);
  d.isl_ms = propagation_delay_ms(d.isl_km, cfg);
  d.igsl_ms = propagation_delay_ms(d.igsl_km, cfg);
  return d;
}

const char* to_string(DelaySource src) {
  switch (src) {
    case DelaySource::automatic: return "auto";
    case DelaySource::derived: return "derived";
    case DelaySource::published: return "published";
  }
  return "?";
}

DelaySource delay_source_from_string(const char* text) {
  const std::string_view s{text};
  if (s == "auto") return DelaySource::automatic;
  if (s == "derived") return DelaySource::derived;
  if (s == "published") return DelaySource::published;
  throw std::invalid_argument("unknown delay source '" + std::string{s} + "'");
}

std::optional<LinkDelays> published_link_delays(const GeometryConfig& cfg) {
  const GeometryConfig ref;
  const bool reference_constellation =
      cfg.earth_radius_km == ref.earth_radius_km && cfg.altitude_km == ref.altitude_km &&
      cfg.sats_per_plane == ref.sats_per_plane && cfg.igsl_inflation == ref.igsl_inflation &&
      cfg.light_speed_km_per_ms == ref.light_speed_km_per_ms;
  if (!reference_constellation) return std::nullopt;

  LinkDelays d;
  if (cfg.sl_elevation_deg == 30.0 && cfg.fl_elevation_deg == 10.0) {
    d.sl_ms = 3.59;
    d.fl_ms = 6.45;
  } else if (cfg.sl_elevation_deg == 90.0 && cfg.fl_elevation_deg == 90.0) {
    d.sl_ms = 2.00;
    d.fl_ms = 2.00;
  } else {
    return std::nullopt;
  }
  d.isl_ms = 7.28;
  d.igsl_ms = 7.99;
  const double c = cfg.light_speed_km_per_ms;
  d.sl_km = d.sl_ms * c;
  d.fl_km = d.fl_ms * c;
  d.isl_km = d.isl_ms * c;
  d.igsl_km = d.igsl_ms * c;
  return d;
}

LinkDelays resolve_link_delays(const GeometryConfig& cfg, DelaySource src) {
  cfg.validate();
  switch (src) {
    case DelaySource::derived:
      return link_delays(cfg);
    case DelaySource::published:
      if (auto row = published_link_delays(cfg)) return *row;
      throw std::invalid_argument(
          "no published delay row for this geometry (needs h=600 km, N=20 and SL/FL "
          "elevations 30/10 or 90/90)");
    case DelaySource::automatic:
      if (auto row = published_link_delays(cfg)) return *row;
      return link_delays(cfg);
  }
  return link_delays(cfg);
}

}  // namespace ntnsplit
