#include "seashark/geodesy.hpp"

#include <cmath>

#include "seashark/error.hpp"

namespace seashark::geo {

namespace {
constexpr double kDegenerateDeg = 1e-9;
}

double normalize_longitude(double lon) {
  double r = std::fmod(lon, 360.0);
  if (r <= -180.0) r += 360.0;
  if (r > 180.0) r -= 360.0;
  return r;
}

GeoPoint GeoPoint::from_degrees(double lat, double lon) {
  if (!std::isfinite(lat) || !std::isfinite(lon) || lat < -90.0 || lat > 90.0) {
    throw Error(ErrorCode::InvalidParams, "latitude must lie in [-90, 90]");
  }
  return GeoPoint{lat, normalize_longitude(lon)};
}

double Heading::normalize(double degrees) {
  double r = std::fmod(degrees, 360.0);
  if (r < 0.0) r += 360.0;
  if (r >= 360.0) r -= 360.0;
  return r;
}

double LocalOffset::norm() const { return std::hypot(east, north); }

LocalOffset to_local(const GeoPoint& origin, const GeoPoint& p) {
  const double dlat = deg2rad(p.lat - origin.lat);
  const double dlon = deg2rad(normalize_longitude(p.lon - origin.lon));
  const double lat_mid = deg2rad(0.5 * (p.lat + origin.lat));
  return {dlon * std::cos(lat_mid) * kEarthRadius, dlat * kEarthRadius};
}

GeoPoint from_local(const GeoPoint& origin, const LocalOffset& offset) {
  const double lat = origin.lat + rad2deg(offset.north / kEarthRadius);
  const double lat_mid = deg2rad(0.5 * (lat + origin.lat));
  const double lon = origin.lon + rad2deg(offset.east / (kEarthRadius * std::cos(lat_mid)));
  return GeoPoint{lat, normalize_longitude(lon)};
}

double distance_m(const GeoPoint& a, const GeoPoint& b) {
  // Evaluated symmetrically so that distance(a, b) == distance(b, a) bit for bit.
  const LocalOffset d = to_local(a, b);
  return std::hypot(d.east, d.north);
}

Heading bearing_deg(const GeoPoint& a, const GeoPoint& b) {
  if (std::abs(b.lat - a.lat) < kDegenerateDeg &&
      std::abs(normalize_longitude(b.lon - a.lon)) < kDegenerateDeg) {
    throw Error(ErrorCode::DegenerateSegment, "bearing between coincident points");
  }
  const LocalOffset d = to_local(a, b);
  return Heading(rad2deg(std::atan2(d.east, d.north)));
}

GeoPoint destination(const GeoPoint& a, Heading h, double d) {
  if (!(d >= 0.0)) throw Error(ErrorCode::InvalidParams, "destination distance must be >= 0");
  if (d == 0.0) return a;
  return from_local(a, {d * std::sin(h.radians()), d * std::cos(h.radians())});
}

double wrap_degrees(double delta) {
  double r = std::fmod(delta, 360.0);
  if (r <= -180.0) r += 360.0;
  if (r > 180.0) r -= 360.0;
  return r;
}

double wrap_angle_error(Heading reference, Heading actual) {
  return wrap_degrees(reference.degrees() - actual.degrees());
}

}  // namespace seashark::geo
