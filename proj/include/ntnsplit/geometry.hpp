#pragma once

#include <optional>

namespace ntnsplit {

/// Spherical-Earth constellation parameters. Lengths in km, angles in degrees.
struct GeometryConfig {
  double earth_radius_km = 6371.0;
  double altitude_km = 600.0;
  double sl_elevation_deg = 30.0;
  double fl_elevation_deg = 10.0;
  int sats_per_plane = 20;
  double igsl_inflation = 1.2;
  double light_speed_km_per_ms = 299.792458;
  // Only used to turn a fronthaul latency budget into a distance.
  double max_distance_light_speed_km_per_ms = 300.0;

  /// Throws std::domain_error when any field is outside its valid range.
  void validate() const;
};

enum class LinkClass { sl, fl, isl, igsl };

inline constexpr LinkClass kAllLinkClasses[] = {LinkClass::sl, LinkClass::fl,
                                                LinkClass::isl, LinkClass::igsl};

const char* to_string(LinkClass cls);

/// One-way propagation of the four link classes.
struct LinkDelays {
  double sl_km = 0.0;
  double fl_km = 0.0;
  double isl_km = 0.0;
  double igsl_km = 0.0;
  double sl_ms = 0.0;
  double fl_ms = 0.0;
  double isl_ms = 0.0;
  double igsl_ms = 0.0;

  double delay_ms(LinkClass cls) const;
  double distance_km(LinkClass cls) const;
  LinkDelays scaled(double factor) const;
  bool operator==(const LinkDelays&) const = default;
};

double slant_range_km(const GeometryConfig& cfg, double elevation_deg);
double propagation_delay_ms(double distance_km, const GeometryConfig& cfg);

// Chord between adjacent satellites of one evenly populated circular plane.
double isl_distance_km(const GeometryConfig& cfg);

// Great-circle distance between two ground stations separated by the same
// central angle as adjacent satellites, multiplied by igsl_inflation.
double igsl_distance_km(const GeometryConfig& cfg);

LinkDelays link_delays(const GeometryConfig& cfg);

/// Where the CHO evaluation takes its link delays from.
///   derived   - always computed from the geometry.
///   published - the two-decimal delay rows of the LEO@600 reference table;
///               the geometry must match one of those rows.
///   automatic - published when the geometry matches a row, derived otherwise.
enum class DelaySource { automatic, derived, published };

const char* to_string(DelaySource src);
DelaySource delay_source_from_string(const char* text);

/// The reference row for this geometry, if it is one of the two published
/// LEO@600 configurations (SL 30/FL 10 or SL 90/FL 90, default constants).
std::optional<LinkDelays> published_link_delays(const GeometryConfig& cfg);

/// Resolves `src` against `cfg`. Throws std::invalid_argument when
/// `published` is requested for a geometry that has no published row.
LinkDelays resolve_link_delays(const GeometryConfig& cfg, DelaySource src);

}  // namespace ntnsplit
