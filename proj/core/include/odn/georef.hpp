#pragma once

#include "odn/coordinate.hpp"

#include <span>
#include <string>
#include <vector>

namespace odn::geo {

/// Position in image or drawing units.
struct PlanarPoint {
    double x = 0.0;
    double y = 0.0;
};

/// A drawing position paired with its surveyed geographic position.
struct ControlPoint {
    PlanarPoint source;
    Coordinate target;
};

/// (x, y) -> (a*x + b*y + tx, c*x + d*y + ty)
struct AffineTransform {
    double a = 1.0;
    double b = 0.0;
    double c = 0.0;
    double d = 1.0;
    double tx = 0.0;
    double ty = 0.0;

    double determinant() const { return a * d - b * c; }
    Coordinate apply(const PlanarPoint& p) const { return {a * p.x + b * p.y + tx, c * p.x + d * p.y + ty}; }
};

struct AffineFit {
    AffineTransform transform;
    /// Root-mean-square of the per-point residual distance, in target units (degrees).
    double rms_residual = 0.0;
    std::vector<std::string> warnings;
};

/// Fewer than four points is accepted, with a warning on the result.
inline constexpr std::size_t kRecommendedControlPoints = 4;

/// Least-squares affine fit. Requires at least three control points whose
/// sources are distinct and not collinear; otherwise throws
/// Error{DegenerateControlPoints}.
AffineFit fit_affine(std::span<const ControlPoint> points);

std::vector<Coordinate> apply_affine(const AffineTransform& t, std::span<const PlanarPoint> points);

}  // namespace odn::geo
