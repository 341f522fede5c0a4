#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "catvortex/geometry.hpp"

namespace catvortex {

/// Smallest admissible value of the pair kernel F before a collision is declared.
inline constexpr double kCollisionFloor = 1e-12;

/// N point vortices on a catenoid. Phase-space state plus circulations.
struct VortexSystem {
    CatenoidParams params;
    std::vector<double> circulations;
    std::vector<SurfacePoint> positions;

    std::size_t size() const noexcept { return positions.size(); }

    /// Throws std::invalid_argument on malformed input (N < 1, zero or
    /// non-finite circulation, size mismatch, non-finite coordinates) and
    /// CollisionError on coincident vortices.
    void validate() const;

    /// Flat layout used by the integrator: [v_1..v_N, u_1..u_N].
    std::vector<double> flat_state() const;
    void assign_flat_state(std::span<const double> state);
};

/// Time derivatives of the vortex coordinates.
struct PhaseVelocity {
    std::vector<double> dv;
    std::vector<double> du;
};

struct Invariants {
    double H = 0.0;
    double J = 0.0;
};

/// F = cosh((v_i - v_j)/a) - cos(u_i - u_j). Throws CollisionError when F < floor.
double pair_kernel(const SurfacePoint& pi, const SurfacePoint& pj, const CatenoidParams& p,
                   double floor = kCollisionFloor);

/// G = log(F) / (4 pi).
double green_function(const SurfacePoint& pi, const SurfacePoint& pj, const CatenoidParams& p);

double hamiltonian(const VortexSystem& sys);
double momentum(const VortexSystem& sys);
Invariants invariants(const VortexSystem& sys);

PhaseVelocity vector_field(const VortexSystem& sys);

/// Same field on the flat layout; `out` receives [dv_1..dv_N, du_1..du_N].
/// Pair sums run in fixed index order, so results are reproducible.
void vector_field(std::span<const double> circulations, const CatenoidParams& p,
                  std::span<const double> state, std::span<double> out);

/// H and J on the flat layout.
Invariants invariants(std::span<const double> circulations, const CatenoidParams& p,
                      std::span<const double> state);

using Observable = std::function<double(const VortexSystem&)>;

/// Central-difference step for coordinate x given a base step.
inline double fd_step(double base, double x) { return base * std::max(1.0, std::abs(x)); }

/// {A, B} = sum_i (dA/dv_i dB/du_i - dA/du_i dB/dv_i) / (Gamma_i a h(v_i)^2),
/// partials by central differences with step fd_step(step, coordinate).
double poisson_bracket(const Observable& A, const Observable& B, const VortexSystem& sys,
                       double step = 1e-6);

}  // namespace catvortex
