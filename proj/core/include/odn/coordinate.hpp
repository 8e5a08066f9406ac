#pragma once

#include <cmath>

namespace odn {

/// Geographic position, WGS84 degrees.
struct Coordinate {
    double lon = 0.0;
    double lat = 0.0;

    friend bool operator==(const Coordinate&, const Coordinate&) = default;
};

inline bool is_valid_wgs84(const Coordinate& c) {
    return std::isfinite(c.lon) && std::isfinite(c.lat) && c.lon >= -180.0 && c.lon <= 180.0 &&
           c.lat >= -90.0 && c.lat <= 90.0;
}

/// Rounds to 7 decimal places (about 1 cm), the resolution plans are stored at.
inline double round_coordinate(double v) { return std::round(v * 1e7) / 1e7; }

inline Coordinate rounded(const Coordinate& c) { return {round_coordinate(c.lon), round_coordinate(c.lat)}; }

}  // namespace odn
