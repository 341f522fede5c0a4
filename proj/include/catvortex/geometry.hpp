#pragma once

#include <numbers>

namespace catvortex {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// The catenoid of throat radius a. `a` is the global length unit.
class CatenoidParams {
public:
    CatenoidParams() = default;
    explicit CatenoidParams(double a);

    double a() const noexcept { return a_; }

    friend bool operator==(const CatenoidParams&, const CatenoidParams&) = default;

private:
    double a_ = 1.0;
};

/// Surface coordinates: meridional v (length) and azimuth u (radians, unwrapped).
struct SurfacePoint {
    double v = 0.0;
    double u = 0.0;

    friend bool operator==(const SurfacePoint&, const SurfacePoint&) = default;
};

struct EmbeddedPoint {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

/// h(v) = cosh(v/a).
double conformal_factor(double v, const CatenoidParams& p);

/// K(V) = -1 / (a^2 h(V)^4).
double gaussian_curvature(double V, const CatenoidParams& p);

/// K'(V) = (4/a^3) sinh(V/a) / cosh^5(V/a).
double curvature_gradient(double V, const CatenoidParams& p);

/// S(v) = (a/2) v + (a^2/4) sinh(2v/a); the per-unit-circulation rotational
/// momentum, with S'(v) = a h(v)^2.
double momentum_density(double v, const CatenoidParams& p);

/// Reduce an angle to [0, 2pi).
double wrap_angle(double u);

EmbeddedPoint embed(const SurfacePoint& pt, const CatenoidParams& p);

/// Euclidean distance in R^3 between two surface points.
double chord_distance(const SurfacePoint& p1, const SurfacePoint& p2, const CatenoidParams& p);

}  // namespace catvortex
