#pragma once

#include "odn/coordinate.hpp"

#include <span>

namespace odn::geo {

/// Mean Earth radius (IUGG), km.
inline constexpr double kEarthRadiusKm = 6371.0088;

/// Great-circle distance on the mean-radius sphere.
double haversine_km(const Coordinate& a, const Coordinate& b);

/// Sum of haversine distances between consecutive vertices.
/// Throws Error{TooFewPoints} for fewer than two vertices.
double geodesic_length_km(std::span<const Coordinate> polyline);

/// Point at the given distance and initial bearing (degrees clockwise from
/// north) from `origin` on the same sphere.
Coordinate destination(const Coordinate& origin, double bearing_deg, double distance_km);

}  // namespace odn::geo
