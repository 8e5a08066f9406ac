#include "odn/geodesy.hpp"

#include "odn/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace odn::geo {

namespace {
constexpr double kDegToRad = std::numbers::pi / 180.0;
constexpr double kRadToDeg = 180.0 / std::numbers::pi;
}  // namespace

double haversine_km(const Coordinate& a, const Coordinate& b) {
    const double phi1 = a.lat * kDegToRad;
    const double phi2 = b.lat * kDegToRad;
    const double dphi = (b.lat - a.lat) * kDegToRad;
    const double dlambda = (b.lon - a.lon) * kDegToRad;
    const double s1 = std::sin(dphi / 2.0);
    const double s2 = std::sin(dlambda / 2.0);
    const double h = s1 * s1 + std::cos(phi1) * std::cos(phi2) * s2 * s2;
    return 2.0 * kEarthRadiusKm * std::asin(std::min(1.0, std::sqrt(h)));
}

double geodesic_length_km(std::span<const Coordinate> polyline) {
    if (polyline.size() < 2) {
        throw Error(ErrorCode::TooFewPoints, "polyline needs at least two vertices");
    }
    double total = 0.0;
    for (std::size_t i = 1; i < polyline.size(); ++i) total += haversine_km(polyline[i - 1], polyline[i]);
    return total;
}

Coordinate destination(const Coordinate& origin, double bearing_deg, double distance_km) {
    const double delta = distance_km / kEarthRadiusKm;
    const double theta = bearing_deg * kDegToRad;
    const double phi1 = origin.lat * kDegToRad;
    const double lambda1 = origin.lon * kDegToRad;
    const double phi2 =
        std::asin(std::sin(phi1) * std::cos(delta) + std::cos(phi1) * std::sin(delta) * std::cos(theta));
    const double lambda2 = lambda1 + std::atan2(std::sin(theta) * std::sin(delta) * std::cos(phi1),
                                                std::cos(delta) - std::sin(phi1) * std::sin(phi2));
    double lon = lambda2 * kRadToDeg;
    lon = std::fmod(lon + 540.0, 360.0) - 180.0;
    return {lon, phi2 * kRadToDeg};
}

}  // namespace odn::geo
