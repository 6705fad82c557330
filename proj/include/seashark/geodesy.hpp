#pragma once

// Small-scale geographic math on a local tangent plane.
//
// Mission areas span hundreds of meters, so positions are related through an
// equirectangular projection evaluated at the mid-latitude of each pair:
//   east  = dlon * cos(lat_mid) * R
//   north = dlat * R
// with R = 6371000 m.

namespace seashark::geo {

inline constexpr double kEarthRadius = 6371000.0;
inline constexpr double kPi = 3.14159265358979323846;

constexpr double deg2rad(double deg) { return deg * kPi / 180.0; }
constexpr double rad2deg(double rad) { return rad * 180.0 / kPi; }

/// Latitude in [-90, 90], longitude normalized to (-180, 180].
struct GeoPoint {
  double lat = 0.0;
  double lon = 0.0;

  /// Validates latitude and normalizes longitude. Throws InvalidParams.
  static GeoPoint from_degrees(double lat, double lon);

  friend bool operator==(const GeoPoint&, const GeoPoint&) = default;
};

/// Degrees clockwise from true north, always in [0, 360).
class Heading {
 public:
  constexpr Heading() = default;
  explicit Heading(double degrees) : deg_(normalize(degrees)) {}

  double degrees() const { return deg_; }
  double radians() const { return deg2rad(deg_); }

  static double normalize(double degrees);

  friend bool operator==(const Heading&, const Heading&) = default;

 private:
  double deg_ = 0.0;
};

/// Planar offset in meters, east and north of some origin.
struct LocalOffset {
  double east = 0.0;
  double north = 0.0;

  LocalOffset operator+(const LocalOffset& o) const { return {east + o.east, north + o.north}; }
  LocalOffset operator-(const LocalOffset& o) const { return {east - o.east, north - o.north}; }
  LocalOffset operator*(double s) const { return {east * s, north * s}; }
  double norm() const;
};

double normalize_longitude(double lon);

/// Offset of `p` from `origin` on the tangent plane.
LocalOffset to_local(const GeoPoint& origin, const GeoPoint& p);

/// Inverse of to_local: to_local(origin, from_local(origin, d)) == d up to rounding.
GeoPoint from_local(const GeoPoint& origin, const LocalOffset& offset);

double distance_m(const GeoPoint& a, const GeoPoint& b);

/// Initial bearing from a to b. Throws DegenerateSegment when a and b coincide
/// within 1e-9 degrees on both axes.
Heading bearing_deg(const GeoPoint& a, const GeoPoint& b);

/// Point reached from `a` after `d` meters along `h`. Throws InvalidParams for d < 0.
GeoPoint destination(const GeoPoint& a, Heading h, double d);

/// Signed shortest rotation taking `actual` onto `reference`, in (-180, 180].
/// The antipodal tie resolves to +180.
double wrap_angle_error(Heading reference, Heading actual);

/// Same wrap applied to a raw angle difference in degrees.
double wrap_degrees(double delta);

}  // namespace seashark::geo
