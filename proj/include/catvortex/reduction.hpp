#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "catvortex/geometry.hpp"
#include "catvortex/nbody.hpp"

namespace catvortex {

/// Branch sign of sin(du) on the reduced flow.
enum class Branch : int { Negative = -1, Positive = 1 };

inline double sign_of(Branch b) noexcept { return static_cast<double>(static_cast<int>(b)); }
inline Branch flip(Branch b) noexcept {
    return b == Branch::Positive ? Branch::Negative : Branch::Positive;
}
/// Negative values map to Negative; zero and positive values to Positive.
inline Branch branch_of(double s) noexcept { return s < 0.0 ? Branch::Negative : Branch::Positive; }

/// Two-vortex collective (V, U) and relative (dv, du) coordinates.
struct CollectiveState {
    double V = 0.0;
    double dv = 0.0;
    double U = 0.0;
    double du = 0.0;
    Branch eps = Branch::Positive;
};

CollectiveState to_collective(const VortexSystem& sys);
VortexSystem from_collective(const CollectiveState& cs, double gamma1, double gamma2,
                             const CatenoidParams& p);

/// Conserved values of a two-vortex level set and the constants derived from them.
struct ReducedConstants {
    double E = 0.0;
    double J0 = 0.0;
    double gamma1 = 1.0;
    double gamma2 = 1.0;
    CatenoidParams params;
    /// exp(4 pi E / (gamma1 gamma2)); equals exp(4 pi E / Gamma^2) for equal strengths.
    double C_E = 1.0;

    static ReducedConstants make(double E, double J0, double gamma1, double gamma2,
                                 const CatenoidParams& p);
    /// Level set through a two-vortex state.
    static ReducedConstants from_state(const VortexSystem& sys);
};

/// Everything the reduced flow needs at one separation.
struct ReducedPoint {
    double V = 0.0;
    double v1 = 0.0;
    double v2 = 0.0;
    double h1 = 1.0;
    double h2 = 1.0;
    double F_E = 0.0;  ///< energy-fixed pair kernel
    double C = 0.0;    ///< cos(du) implied by the energy, unclamped
};

/// Unique V with gamma1 S(V + dv/2) + gamma2 S(V - dv/2) = J0. Bracketed
/// bisection with safeguarded Newton. Same-sign circulations only.
double solve_V(double dv, const ReducedConstants& rc);

ReducedPoint reduced_point(double dv, const ReducedConstants& rc);

/// cos(du) as a function of dv on the level set. Values within 1e-12 beyond
/// +-1 are clamped; anything further throws InadmissibleError.
double cos_relative_angle(double dv, const ReducedConstants& rc);

inline constexpr double kClampSlack = 1e-12;

/// d(dv)/dt on branch eps.
double reduced_dv_rate(double dv, Branch eps, const ReducedConstants& rc);

/// Connected range of separations containing dv_ref on which |C(dv)| <= 1.
/// Endpoints are the turning points, localized by bisection to machine precision.
struct AdmissibleWindow {
    double lo = 0.0;
    double hi = 0.0;

    double mid() const noexcept { return 0.5 * (lo + hi); }
    double half() const noexcept { return 0.5 * (hi - lo); }
};

AdmissibleWindow admissible_window(double dv_ref, const ReducedConstants& rc);

/// Time to travel from dv0 to dv1 on branch eps (negative if the branch moves
/// the other way). Endpoints may be turning points.
double quadrature_time(double dv0, double dv1, Branch eps, const ReducedConstants& rc);

/// Mean azimuthal velocity dU/dt at separation (dv, du) on the level set.
double drift_rate(double dv, double du, const ReducedConstants& rc);

/// Reduced trajectory sampled at a fixed cadence.
struct ReducedTrajectory {
    std::vector<double> times;
    std::vector<double> dv;
    std::vector<double> du;  ///< principal value eps * acos(C), in [-pi, pi]
    std::vector<double> V;
    std::vector<double> U;   ///< filled by reconstruct_U
    std::vector<Branch> eps;
    std::vector<double> turning_times;
    AdmissibleWindow window;

    std::size_t size() const noexcept { return times.size(); }
};

/// Integrates the reduced flow from dv0 on branch eps0. The separation is
/// written dv = mid - half cos(theta) over the admissible window, which turns
/// the square-root turning points into regular points of theta' = f(theta);
/// eps flips each time theta crosses a multiple of pi.
ReducedTrajectory integrate_reduced(double dv0, Branch eps0, const ReducedConstants& rc,
                                    double t_final, double sample_dt, double rel_tol = 1e-12,
                                    double abs_tol = 1e-12);

/// U(t) = U0 + integral of drift_rate along the samples (cumulative
/// fourth-order composite rule on uniform cadence, trapezoid otherwise).
std::vector<double> reconstruct_U(const std::vector<double>& times, const std::vector<double>& dv,
                                  const std::vector<double>& du, const ReducedConstants& rc,
                                  double U0);

void reconstruct_U(ReducedTrajectory& tr, const ReducedConstants& rc, double U0);

/// CSV columns t,dv,du,V,U_reconstructed,eps.
void write_reduced_csv(std::ostream& os, const ReducedTrajectory& tr);

}  // namespace catvortex
