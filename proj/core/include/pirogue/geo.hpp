#pragma once

namespace pirogue {

inline constexpr double kEarthRadiusKm = 6371.0;

struct LatLon {
  double lat = 0.0;
  double lon = 0.0;
  friend bool operator==(const LatLon&, const LatLon&) = default;
};

/// Great-circle (haversine) distance on a sphere of radius 6371 km.
double distance_km(LatLon a, LatLon b);

}  // namespace pirogue
