#include "odn/georef.hpp"

#include "odn/error.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <set>
#include <utility>

namespace odn::geo {

AffineFit fit_affine(std::span<const ControlPoint> points) {
    const auto n = static_cast<Eigen::Index>(points.size());
    if (n < 3) {
        throw Error(ErrorCode::DegenerateControlPoints,
                    "an affine fit needs at least 3 control points, got " + std::to_string(points.size()));
    }
    std::set<std::pair<double, double>> sources;
    for (const auto& p : points) {
        if (!std::isfinite(p.source.x) || !std::isfinite(p.source.y) || !std::isfinite(p.target.lon) ||
            !std::isfinite(p.target.lat)) {
            throw Error(ErrorCode::DegenerateControlPoints, "control point has a non-finite coordinate");
        }
        if (!sources.emplace(p.source.x, p.source.y).second) {
            throw Error(ErrorCode::DegenerateControlPoints, "duplicate control point source (" +
                                                                std::to_string(p.source.x) + ", " +
                                                                std::to_string(p.source.y) + ")");
        }
    }

    // Centre and scale the sources so drawing units in the thousands do not
    // swamp the unit column.
    double mx = 0.0, my = 0.0;
    for (const auto& p : points) {
        mx += p.source.x;
        my += p.source.y;
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double scale = 0.0;
    for (const auto& p : points) scale = std::max({scale, std::fabs(p.source.x - mx), std::fabs(p.source.y - my)});

    Eigen::MatrixXd design(n, 3);
    Eigen::MatrixXd rhs(n, 2);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& p = points[static_cast<std::size_t>(i)];
        design(i, 0) = (p.source.x - mx) / scale;
        design(i, 1) = (p.source.y - my) / scale;
        design(i, 2) = 1.0;
        rhs(i, 0) = p.target.lon;
        rhs(i, 1) = p.target.lat;
    }

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(design, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    if (sv(sv.size() - 1) <= 1e-10 * sv(0)) {
        throw Error(ErrorCode::DegenerateControlPoints, "control point sources are collinear");
    }
    const Eigen::MatrixXd sol = design.colPivHouseholderQr().solve(rhs);

    AffineFit fit;
    auto& t = fit.transform;
    t.a = sol(0, 0) / scale;
    t.b = sol(1, 0) / scale;
    t.tx = sol(2, 0) - t.a * mx - t.b * my;
    t.c = sol(0, 1) / scale;
    t.d = sol(1, 1) / scale;
    t.ty = sol(2, 1) - t.c * mx - t.d * my;

    double sum_sq = 0.0;
    for (const auto& p : points) {
        const auto q = t.apply(p.source);
        const double dx = q.lon - p.target.lon;
        const double dy = q.lat - p.target.lat;
        sum_sq += dx * dx + dy * dy;
    }
    fit.rms_residual = std::sqrt(sum_sq / static_cast<double>(n));

    if (points.size() < kRecommendedControlPoints) {
        fit.warnings.push_back("only " + std::to_string(points.size()) +
                               " control points; at least 4 are recommended for reliable georeferencing");
    }
    return fit;
}

std::vector<Coordinate> apply_affine(const AffineTransform& t, std::span<const PlanarPoint> points) {
    std::vector<Coordinate> out;
    out.reserve(points.size());
    for (const auto& p : points) out.push_back(t.apply(p));
    return out;
}

}  // namespace odn::geo
