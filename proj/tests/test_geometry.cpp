#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "ntnsplit/geometry.hpp"

using namespace ntnsplit;

namespace {

constexpr double kPi = std::numbers::pi;

// Satellite-centre distance from the law of cosines in the triangle
// Earth centre / ground station / satellite.
double centre_distance(double re, double d, double elev_deg) {
  const double e = elev_deg * kPi / 180.0;
  return std::sqrt(re * re + d * d + 2.0 * re * d * std::sin(e));
}

double chord_by_cosines(double r, int n) {
  return std::sqrt(2.0 * r * r * (1.0 - std::cos(2.0 * kPi / n)));
}

GeometryConfig at(double sl, double fl) {
  GeometryConfig g;
  g.sl_elevation_deg = sl;
  g.fl_elevation_deg = fl;
  return g;
}

}  // namespace

TEST_CASE("slant range satisfies the triangle it comes from") {
  GeometryConfig g;
  for (double h : {300.0, 600.0, 1200.0}) {
    g.altitude_km = h;
    for (double e : {5.0, 10.0, 30.0, 45.0, 75.0, 90.0}) {
      const double d = slant_range_km(g, e);
      CHECK(centre_distance(g.earth_radius_km, d, e) ==
            doctest::Approx(g.earth_radius_km + h).epsilon(1e-12));
    }
  }
}

TEST_CASE("slant range reference points") {
  GeometryConfig g;
  CHECK(slant_range_km(g, 90.0) == 600.0);
  const double d10 = slant_range_km(g, 10.0);
  CHECK(std::abs(d10 - 1935.0) / 1935.0 < 0.005);
  CHECK(d10 == doctest::Approx(1932.0).epsilon(0.001));
  CHECK(slant_range_km(g, 30.0) == doctest::Approx(1075.0).epsilon(0.001));
}

TEST_CASE("slant range is decreasing in elevation and increasing in altitude") {
  GeometryConfig g;
  double prev = slant_range_km(g, 1.0);
  for (double e = 2.0; e <= 90.0; e += 1.0) {
    const double d = slant_range_km(g, e);
    CHECK(d < prev);
    prev = d;
  }
  for (double e : {10.0, 30.0, 90.0}) {
    double last = 0.0;
    for (double h = 200.0; h <= 2000.0; h += 100.0) {
      g.altitude_km = h;
      const double d = slant_range_km(g, e);
      CHECK(d > last);
      last = d;
    }
  }
}

TEST_CASE("propagation delay") {
  GeometryConfig g;
  CHECK(propagation_delay_ms(0.0, g) == 0.0);
  CHECK(propagation_delay_ms(600.0, g) == doctest::Approx(2.00).epsilon(0.001));
  CHECK(std::abs(propagation_delay_ms(1075.0, g) - 3.59) <= 0.02);
}

TEST_CASE("ISL chord") {
  GeometryConfig g;
  g.sats_per_plane = 2;
  CHECK(isl_distance_km(g) == doctest::Approx(13942.0));
  g.sats_per_plane = 20;
  CHECK(isl_distance_km(g) == doctest::Approx(chord_by_cosines(6971.0, 20)).epsilon(1e-12));
  CHECK(isl_distance_km(g) == doctest::Approx(2182.0).epsilon(0.001));
  g.sats_per_plane = 40;
  CHECK(isl_distance_km(g) == doctest::Approx(1094.0).epsilon(0.001));
}

TEST_CASE("plane size reproducing the published ISL delay is 20") {
  // Invert delay(N) = 7.28 ms over continuous N by bisection; the chord
  // shrinks as N grows.
  const double target_km = 7.28 * 299.792458;
  const double r = 6971.0;
  double lo = 3.0, hi = 200.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double chord = 2.0 * r * std::sin(kPi / mid);
    (chord > target_km ? lo : hi) = mid;
  }
  CHECK(std::lround(lo) == 20);
  GeometryConfig g;
  CHECK(g.sats_per_plane == std::lround(lo));
  CHECK(link_delays(g).isl_ms == doctest::Approx(7.28).epsilon(0.01));
}

TEST_CASE("IGSL arc") {
  GeometryConfig g;
  g.igsl_inflation = 1.0;
  g.sats_per_plane = 4;
  CHECK(igsl_distance_km(g) == doctest::Approx(6371.0 * kPi / 2.0));
  CHECK(igsl_distance_km(g) == doctest::Approx(10007.0).epsilon(0.0001));

  GeometryConfig d;
  CHECK(igsl_distance_km(d) == doctest::Approx(2402.0).epsilon(0.001));
  const double ms = link_delays(d).igsl_ms;
  CHECK(ms == doctest::Approx(8.01).epsilon(0.001));
  CHECK(std::abs(ms - 7.99) / 7.99 <= 0.005);

  d.earth_radius_km = 6354.0;
  CHECK(link_delays(d).igsl_ms == doctest::Approx(7.99).epsilon(0.0005));
}

TEST_CASE("reference delay rows are reproduced from geometry") {
  const LinkDelays a = link_delays(at(30.0, 10.0));
  CHECK(std::abs(a.sl_ms - 3.59) / 3.59 <= 0.005);
  CHECK(std::abs(a.fl_ms - 6.45) / 6.45 <= 0.005);
  CHECK(std::abs(a.isl_ms - 7.28) / 7.28 <= 0.01);
  CHECK(std::abs(a.igsl_ms - 7.99) / 7.99 <= 0.01);

  const LinkDelays z = link_delays(at(90.0, 90.0));
  CHECK(std::abs(z.sl_ms - 2.00) / 2.00 <= 0.005);
  CHECK(std::abs(z.fl_ms - 2.00) / 2.00 <= 0.005);
  CHECK(z.sl_ms == z.fl_ms);
  CHECK(z.isl_ms == a.isl_ms);
  CHECK(z.igsl_ms == a.igsl_ms);
}

TEST_CASE("equal elevations give equal SL and FL delays") {
  for (double e : {15.0, 42.0, 77.0}) {
    const LinkDelays d = link_delays(at(e, e));
    CHECK(d.sl_ms == d.fl_ms);
    CHECK(d.sl_km == d.fl_km);
  }
}

TEST_CASE("delay accessors and scaling") {
  const LinkDelays d = link_delays(GeometryConfig{});
  CHECK(d.delay_ms(LinkClass::sl) == d.sl_ms);
  CHECK(d.delay_ms(LinkClass::igsl) == d.igsl_ms);
  CHECK(d.distance_km(LinkClass::isl) == d.isl_km);
  const LinkDelays s = d.scaled(2.0);
  CHECK(s.fl_ms == 2.0 * d.fl_ms);
  CHECK(s.fl_km == 2.0 * d.fl_km);
  for (LinkClass c : kAllLinkClasses) CHECK(d.delay_ms(c) > 0.0);
}

TEST_CASE("delay sources") {
  const GeometryConfig g;
  const auto pub = published_link_delays(g);
  REQUIRE(pub.has_value());
  CHECK(pub->sl_ms == 3.59);
  CHECK(pub->fl_ms == 6.45);
  CHECK(pub->isl_ms == 7.28);
  CHECK(pub->igsl_ms == 7.99);
  CHECK(resolve_link_delays(g, DelaySource::automatic) == *pub);
  CHECK(resolve_link_delays(g, DelaySource::derived) == link_delays(g));

  const auto zen = published_link_delays(at(90.0, 90.0));
  REQUIRE(zen.has_value());
  CHECK(zen->sl_ms == 2.00);
  CHECK(zen->fl_ms == 2.00);

  GeometryConfig other;
  other.altitude_km = 550.0;
  CHECK_FALSE(published_link_delays(other).has_value());
  CHECK(resolve_link_delays(other, DelaySource::automatic) == link_delays(other));
  CHECK_THROWS_AS(resolve_link_delays(other, DelaySource::published), std::invalid_argument);
  CHECK_FALSE(published_link_delays(at(30.0, 30.0)).has_value());

  CHECK(delay_source_from_string("derived") == DelaySource::derived);
  CHECK(std::string{to_string(DelaySource::automatic)} == "auto");
  CHECK_THROWS_AS(delay_source_from_string("rounded"), std::invalid_argument);
}

TEST_CASE("invalid geometry is rejected") {
  auto bad = [](auto mutate) {
    GeometryConfig g;
    mutate(g);
    return g;
  };
  CHECK_THROWS_AS(bad([](GeometryConfig& g) { g.altitude_km = 0.0; }).validate(), std::domain_error);
  CHECK_THROWS_AS(bad([](GeometryConfig& g) { g.sl_elevation_deg = 0.0; }).validate(), std::domain_error);
  CHECK_THROWS_AS(bad([](GeometryConfig& g) { g.fl_elevation_deg = 90.5; }).validate(), std::domain_error);
  CHECK_THROWS_AS(bad([](GeometryConfig& g) { g.sats_per_plane = 1; }).validate(), std::domain_error);
  CHECK_THROWS_AS(bad([](GeometryConfig& g) { g.igsl_inflation = 0.9; }).validate(), std::domain_error);
  CHECK_THROWS_AS(bad([](GeometryConfig& g) { g.altitude_km = std::nan(""); }).validate(), std::domain_error);
  CHECK_THROWS(link_delays(bad([](GeometryConfig& g) { g.sats_per_plane = 1; })));
  CHECK_NOTHROW(GeometryConfig{}.validate());
}
