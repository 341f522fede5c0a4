#include "catvortex/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace catvortex {

CatenoidParams::CatenoidParams(double a) : a_(a) {
    if (!(a > 0.0) || !std::isfinite(a)) {
        throw std::invalid_argument("throat radius must be positive and finite, got " +
                                    std::to_string(a));
    }
}

double conformal_factor(double v, const CatenoidParams& p) { return std::cosh(v / p.a()); }

double gaussian_curvature(double V, const CatenoidParams& p) {
    const double h = conformal_factor(V, p);
    const double h2 = h * h;
    return -1.0 / (p.a() * p.a() * h2 * h2);
}

double curvature_gradient(double V, const CatenoidParams& p) {
    const double a = p.a();
    const double c = std::cosh(V / a);
    const double c2 = c * c;
    return 4.0 * std::sinh(V / a) / (a * a * a * c2 * c2 * c);
}

double momentum_density(double v, const CatenoidParams& p) {
    const double a = p.a();
    return 0.5 * a * v + 0.25 * a * a * std::sinh(2.0 * v / a);
}

double wrap_angle(double u) {
    double w = std::fmod(u, kTwoPi);
    if (w < 0.0) w += kTwoPi;
    // fmod of a tiny negative number can round up to exactly 2pi
    if (w >= kTwoPi) w = 0.0;
    return w;
}

EmbeddedPoint embed(const SurfacePoint& pt, const CatenoidParams& p) {
    const double r = p.a() * conformal_factor(pt.v, p);
    const double u = wrap_angle(pt.u);
    return {r * std::cos(u), r * std::sin(u), pt.v};
}

double chord_distance(const SurfacePoint& p1, const SurfacePoint& p2, const CatenoidParams& p) {
    const double a = p.a();
    const double h1 = conformal_factor(p1.v, p);
    const double h2 = conformal_factor(p2.v, p);
    const double dv = p1.v - p2.v;
    // a^2 [ (h1 - h2)^2 + 2 h1 h2 (1 - cos du) ] avoids cancellation for close points
    const double half = std::sin(0.5 * (p1.u - p2.u));
    const double dh = h1 - h2;
    const double d2 = a * a * (dh * dh + 4.0 * h1 * h2 * half * half) + dv * dv;
    return std::sqrt(std::max(d2, 0.0));
}

}  // namespace catvortex
