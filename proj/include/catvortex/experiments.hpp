#pragma once

#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "catvortex/config.hpp"
#include "catvortex/exact_states.hpp"
#include "catvortex/integrator.hpp"
#include "catvortex/reduction.hpp"

namespace catvortex {

/// Ordinary least-squares line y = slope * t + intercept over [t_lo, t_hi].
struct FitResult {
    double slope = 0.0;
    double intercept = 0.0;
    double rms_residual = 0.0;
    double t_lo = 0.0;
    double t_hi = 0.0;
    std::size_t samples = 0;
};

FitResult linear_fit(std::span<const double> t, std::span<const double> y);

struct RigidReport {
    SymmetricOrbit orbit;
    Trajectory trajectory;
    DriftReport drift;
    double max_dv_deviation = 0.0;     ///< max |dv(t)|
    double max_du_deviation = 0.0;     ///< max |du(t) - pi|
    double max_phase_deviation = 0.0;  ///< max |u1(t) - u1(0) - Omega t|
};

RigidReport run_rigid(const ScenarioConfig& cfg);

struct InstabilityReport {
    StabilityData stability;
    double Omega = 0.0;
    double t_final = 0.0;
    Trajectory trajectory;
    DriftReport drift;
    FitResult fit;                 ///< log|eta| against t inside the growth window
    double relative_error = 0.0;   ///< |lambda_fit - lambda| / lambda
    double ratio_min = 0.0;        ///< eta / (eta0 e^{lambda t}) over the window
    double ratio_max = 0.0;
};

/// The fit window keeps the first contiguous run of samples with
/// e |eta0| <= |eta(t)| <= e^3 |eta0|.
InstabilityReport run_instability(const ScenarioConfig& cfg);

struct PairReport {
    Trajectory trajectory;
    DriftReport drift;
    std::vector<double> chord;
    double chord_min = 0.0;
    double chord_max = 0.0;
    FitResult U_fit;                    ///< mean azimuth against t
    std::vector<double> turning_times;  ///< zeros of sin(du)
    double measured_period = 0.0;       ///< NaN with fewer than two turning points
};

PairReport run_generic_pair(const ScenarioConfig& cfg);

struct ReducedCompareReport {
    PairReport full;
    ReducedConstants constants;
    ReducedTrajectory reduced;
    double rate_mismatch = 0.0;        ///< sup |d(dv)/dt full - reduced_dv_rate|
    double drift_rate_mismatch = 0.0;  ///< sup |(u1' + u2')/2 - drift_rate|
    double U_mismatch = 0.0;           ///< sup |U full - U reconstructed|
    double cos_mismatch = 0.0;         ///< sup |C(dv) - cos du|
    double dv_mismatch = 0.0;          ///< sup |dv full - dv reduced|
    double quadrature_period = 0.0;    ///< twice the turning-point-to-turning-point time
    double period_relative_error = 0.0;
};

ReducedCompareReport run_reduced_compare(const ScenarioConfig& cfg);

struct ClusterDiagnostics {
    Trajectory trajectory;
    DriftReport drift;
    std::vector<double> Uc_series;
    std::vector<double> Vc_series;
    std::vector<double> mean_chord_series;
    FitResult Uc_fit;
    double Omega_eff = 0.0;
    int redraws = 0;
};

/// Random cluster around (uc, vc), uniform on the spread rectangle.
VortexSystem draw_cluster(const ScenarioConfig& cfg, double vc, int* redraws = nullptr);

ClusterDiagnostics run_cluster(const ScenarioConfig& cfg);
/// Same draw recentred on cfg.control_vc.
ClusterDiagnostics run_cluster_control(const ScenarioConfig& cfg);

struct ProfileRow {
    double V, Omega, Omega_curvature, K, K_prime;
};

struct ProfileReport {
    std::vector<ProfileRow> rows;
    double argmax = 0.0;
    double v_star = 0.0;
    double argmax_deviation = 0.0;
    double max_identity_error = 0.0;  ///< max relative gap between the two Omega forms
};

ProfileReport run_omega_profile(const ScenarioConfig& cfg);

/// Default integration horizon of a scenario.
double default_t_final(const ScenarioConfig& cfg);

/// Runs the configured scenario, writes CSV outputs and `<name>_summary.json`
/// into cfg.output_dir and returns the summary.
nlohmann::json run_scenario(const ScenarioConfig& cfg);

}  // namespace catvortex
