#pragma once

#include "catvortex/geometry.hpp"
#include "catvortex/nbody.hpp"

namespace catvortex {

/// Antipodal pair of identical vortices rotating rigidly on the latitude V0.
struct SymmetricOrbit {
    double V0 = 0.0;
    double Gamma = 1.0;
    CatenoidParams params;
    double Omega = 0.0;
};

/// Linearization about the symmetric orbit: eta' = -A phi, phi' = -B eta.
struct StabilityData {
    double A = 0.0;
    double B = 0.0;
    double lambda = 0.0;       ///< growth rate sqrt(A B)
    double eigen_ratio = 0.0;  ///< phi / eta on the growing mode, -lambda / A
};

/// Omega(V0) = Gamma / (4 pi a^2) tanh(V0/a) sech^2(V0/a).
double omega_symmetric(double V0, double Gamma, const CatenoidParams& p);

/// The same rate written through the curvature: (Gamma / 16 pi) K'(V) / sqrt(-K(V)).
double omega_from_curvature(double V, double Gamma, const CatenoidParams& p);

SymmetricOrbit symmetric_orbit(double V0, double Gamma, const CatenoidParams& p);

/// Latitude of the largest rotation rate, (a/2) ln(2 + sqrt 3).
double v_star(const CatenoidParams& p);

StabilityData stability(double V0, double Gamma, const CatenoidParams& p);

/// Largest admissible |eta0| for seed_unstable, in units of a.
inline constexpr double kMaxSeedPerturbation = 1e-2;

/// Two-vortex state on the growing eigenvector: dv = eta0, du = pi + phi0
/// with phi0 = eigen_ratio * eta0, centred on V0 and U = 0.
VortexSystem seed_unstable(double V0, double eta0, double Gamma, const CatenoidParams& p);

/// The unperturbed antipodal state at latitude V0 with u1 = pi/2, u2 = -pi/2.
VortexSystem symmetric_state(double V0, double Gamma, const CatenoidParams& p);

}  // namespace catvortex
