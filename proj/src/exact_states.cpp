#include "catvortex/exact_states.hpp"

#include <cmath>

#include "catvortex/errors.hpp"

namespace catvortex {

double omega_symmetric(double V0, double Gamma, const CatenoidParams& p) {
    const double a = p.a();
    const double c = std::cosh(V0 / a);
    return Gamma / (4.0 * kPi * a * a) * std::tanh(V0 / a) / (c * c);
}

double omega_from_curvature(double V, double Gamma, const CatenoidParams& p) {
    return Gamma / (16.0 * kPi) * curvature_gradient(V, p) / std::sqrt(-gaussian_curvature(V, p));
}

SymmetricOrbit symmetric_orbit(double V0, double Gamma, const CatenoidParams& p) {
    return {V0, Gamma, p, omega_symmetric(V0, Gamma, p)};
}

double v_star(const CatenoidParams& p) { return 0.5 * p.a() * std::log(2.0 + std::sqrt(3.0)); }

StabilityData stability(double V0, double Gamma, const CatenoidParams& p) {
    const double a = p.a();
    const double c = std::cosh(V0 / a);
    const double sech2 = 1.0 / (c * c);
    const double th = std::tanh(V0 / a);
    StabilityData s;
    s.A = Gamma / (4.0 * kPi * a) * sech2;
    s.B = 3.0 * Gamma / (4.0 * kPi * a * a * a) * sech2 * th * th;
    const double AB = s.A * s.B;
    s.lambda = AB >= 0.0 ? std::sqrt(AB) : 0.0;
    s.eigen_ratio = -s.lambda / s.A;
    return s;
}

VortexSystem symmetric_state(double V0, double Gamma, const CatenoidParams& p) {
    VortexSystem sys;
    sys.params = p;
    sys.circulations = {Gamma, Gamma};
    sys.positions = {{V0, 0.5 * kPi}, {V0, -0.5 * kPi}};
    return sys;
}

VortexSystem seed_unstable(double V0, double eta0, double Gamma, const CatenoidParams& p) {
    if (std::abs(eta0) > kMaxSeedPerturbation * p.a()) {
        throw PerturbationTooLarge("|eta0| = " + std::to_string(std::abs(eta0)) +
                                   " exceeds the linear-regime bound " +
                                   std::to_string(kMaxSeedPerturbation * p.a()));
    }
    const double phi0 = stability(V0, Gamma, p).eigen_ratio * eta0;
    VortexSystem sys;
    sys.params = p;
    sys.circulations = {Gamma, Gamma};
    sys.positions = {{V0 + 0.5 * eta0, 0.5 * (kPi + phi0)}, {V0 - 0.5 * eta0, -0.5 * (kPi + phi0)}};
    return sys;
}

}  // namespace catvortex
