#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "catvortex/nbody.hpp"

namespace catvortex {

struct IntegratorSettings {
    double rel_tol = 1e-12;
    double abs_tol = 1e-12;
    double t_final = 1.0;
    double sample_dt = 0.01;
    double max_step = std::numeric_limits<double>::infinity();

    void validate() const;
};

/// Right-hand side of y' = f(t, y).
using OdeRhs = std::function<void(double t, std::span<const double> y, std::span<double> dydt)>;

/// Explicit embedded Runge-Kutta 8(5,3) stepper with PI step-size control
/// and a 7th-order continuous extension over the last accepted step.
class Dop853 {
public:
    Dop853(OdeRhs rhs, double t0, std::vector<double> y0, double rel_tol, double abs_tol,
           double max_step = std::numeric_limits<double>::infinity());

    /// Takes one accepted step towards t_bound (never past it). Throws
    /// StepFailure when the step size underflows or the step budget is spent.
    void step(double t_bound);

    double t() const noexcept { return t_; }
    double t_prev() const noexcept { return t_prev_; }
    const std::vector<double>& y() const noexcept { return y_; }

    /// Dense output on [t_prev(), t()].
    void dense(double t, std::span<double> out);

    std::size_t accepted() const noexcept { return accepted_; }
    std::size_t rejected() const noexcept { return rejected_; }
    std::size_t evaluations() const noexcept { return evaluations_; }

    static constexpr std::size_t kMaxSteps = 50'000'000;

private:
    double error_norm(double h) const;
    double initial_step();
    void prepare_dense();

    OdeRhs rhs_;
    std::size_t n_;
    double rtol_, atol_, max_step_;
    double t_, t_prev_;
    double h_ = 0.0;
    double h_last_ = 0.0;
    double fac_old_ = 1e-4;
    bool last_rejected_ = false;
    bool dense_ready_ = false;
    std::vector<double> y_, y_prev_, f_, f_prev_, y_new_, f_new_, tmp_;
    std::vector<std::vector<double>> k_;      // 16 stages
    std::vector<std::vector<double>> dense_;  // 7 interpolation rows
    std::size_t accepted_ = 0, rejected_ = 0, evaluations_ = 0;
};

/// Sampled N-vortex time series with conservation diagnostics.
struct Trajectory {
    std::vector<double> times;
    std::vector<VortexSystem> states;
    std::vector<double> H_series, J_series;
    std::vector<double> dH_series, dJ_series;
    /// Roots of the optional event function, located on the dense output.
    std::vector<double> event_times;
    /// Set when a near-collision stopped the run before t_final.
    bool halted = false;
    std::string diagnostic;
    std::size_t steps_accepted = 0;
    std::size_t steps_rejected = 0;

    std::size_t size() const noexcept { return times.size(); }
};

/// Scalar event on the flat state [v..., u...]; sign changes are recorded.
using EventFunction = std::function<double(std::span<const double> state)>;

/// Integrates the N-vortex field from t = 0 to cfg.t_final, sampling every
/// multiple of cfg.sample_dt. A near-collision halts the run and returns the
/// samples collected so far with `halted` set.
Trajectory integrate(const VortexSystem& sys0, const IntegratorSettings& cfg,
                     const EventFunction& event = {});

/// Throws CollisionError carrying the diagnostic if the run halted early.
void require_complete(const Trajectory& tr);

struct DriftReport {
    double max_dH = 0.0;
    double max_dJ = 0.0;
};

DriftReport drift_report(const Trajectory& tr);

/// CSV with header t,v_1..v_N,u_1..u_N,H,J,dH,dJ and 17 significant digits.
void write_trajectory_csv(std::ostream& os, const Trajectory& tr);

}  // namespace catvortex
