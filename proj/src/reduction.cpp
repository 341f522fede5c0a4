#include "catvortex/reduction.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "catvortex/errors.hpp"
#include "catvortex/integrator.hpp"

namespace catvortex {

namespace {

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

void require_pair(const VortexSystem& sys) {
    if (sys.size() != 2) {
        throw std::invalid_argument("two-vortex reduction needs exactly two vortices, got " +
                                    std::to_string(sys.size()));
    }
}

}  // namespace

CollectiveState to_collective(const VortexSystem& sys) {
    require_pair(sys);
    const auto& p1 = sys.positions[0];
    const auto& p2 = sys.positions[1];
    CollectiveState cs;
    cs.V = 0.5 * (p1.v + p2.v);
    cs.dv = p1.v - p2.v;
    cs.U = 0.5 * (p1.u + p2.u);
    cs.du = p1.u - p2.u;
    cs.eps = branch_of(std::sin(cs.du));
    return cs;
}

VortexSystem from_collective(const CollectiveState& cs, double gamma1, double gamma2,
                             const CatenoidParams& p) {
    VortexSystem sys;
    sys.params = p;
    sys.circulations = {gamma1, gamma2};
    sys.positions = {{cs.V + 0.5 * cs.dv, cs.U + 0.5 * cs.du},
                     {cs.V - 0.5 * cs.dv, cs.U - 0.5 * cs.du}};
    return sys;
}

ReducedConstants ReducedConstants::make(double E, double J0, double gamma1, double gamma2,
                                        const CatenoidParams& p) {
    if (gamma1 == 0.0 || gamma2 == 0.0) throw std::invalid_argument("circulations must be nonzero");
    if (!std::isfinite(E) || !std::isfinite(J0)) {
        throw std::invalid_argument("reduced constants must be finite");
    }
    ReducedConstants rc;
    rc.E = E;
    rc.J0 = J0;
    rc.gamma1 = gamma1;
    rc.gamma2 = gamma2;
    rc.params = p;
    rc.C_E = std::exp(4.0 * kPi * E / (gamma1 * gamma2));
    return rc;
}

ReducedConstants ReducedConstants::from_state(const VortexSystem& sys) {
    require_pair(sys);
    const Invariants inv = invariants(sys);
    return make(inv.H, inv.J, sys.circulations[0], sys.circulations[1], sys.params);
}

// ---------------------------------------------------------------------------
// Momentum inversion
// ---------------------------------------------------------------------------

double solve_V(double dv, const ReducedConstants& rc) {
    const double g1 = rc.gamma1;
    const double g2 = rc.gamma2;
    if (g1 * g2 < 0.0) {
        throw UnsupportedError("momentum inversion is only supported for same-sign circulations");
    }
    const CatenoidParams& p = rc.params;
    const double a = p.a();
    const double s = g1 > 0.0 ? 1.0 : -1.0;  // makes the residual increasing in V

    auto residual = [&](double V) {
        return s * (g1 * momentum_density(V + 0.5 * dv, p) + g2 * momentum_density(V - 0.5 * dv, p) -
                    rc.J0);
    };
    auto slope = [&](double V) {
        const double h1 = conformal_factor(V + 0.5 * dv, p);
        const double h2 = conformal_factor(V - 0.5 * dv, p);
        return s * a * (g1 * h1 * h1 + g2 * h2 * h2);
    };

    const double g_min = std::min(std::abs(g1), std::abs(g2));
    const double reach = std::abs(rc.J0) / (g_min * a) + std::abs(dv);
    double lo = -reach;
    double hi = reach;
    double f_lo = residual(lo);
    double f_hi = residual(hi);
    for (int k = 0; k < 64 && !(f_lo <= 0.0 && f_hi >= 0.0); ++k) {
        const double width = hi - lo + 1.0;
        if (f_lo > 0.0) {
            lo -= width;
            f_lo = residual(lo);
        }
        if (f_hi < 0.0) {
            hi += width;
            f_hi = residual(hi);
        }
    }
    if (!(f_lo <= 0.0 && f_hi >= 0.0)) {
        throw NoRootError("momentum constraint could not be bracketed for dv = " + fmt(dv) +
                          ", J0 = " + fmt(rc.J0));
    }
    if (f_lo == 0.0) return lo;
    if (f_hi == 0.0) return hi;

    const double tol = 1e-13 * std::max(1.0, std::abs(rc.J0));
    double x = 0.5 * (lo + hi);
    double best = x;
    double best_f = std::numeric_limits<double>::infinity();
    double dx_old = hi - lo;
    double dx = dx_old;
    for (int it = 0; it < 200; ++it) {
        const double f = residual(x);
        if (std::abs(f) < best_f) {
            best_f = std::abs(f);
            best = x;
        }
        if (std::abs(f) <= tol) {
            // one more Newton polish is free when already inside the tolerance
            const double xn = x - f / slope(x);
            if (xn > lo && xn < hi && std::abs(residual(xn)) < std::abs(f)) return xn;
            return x;
        }
        if (f < 0.0) lo = x; else hi = x;
        const double df = slope(x);
        const double newton = x - f / df;
        if (newton <= lo || newton >= hi || std::abs(2.0 * f) > std::abs(dx_old * df)) {
            dx_old = dx;
            dx = 0.5 * (hi - lo);
            x = lo + dx;
        } else {
            dx_old = dx;
            dx = f / df;
            x = newton;
        }
        if (hi - lo <= 2.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(x))) {
            break;
        }
    }
    return best;
}

ReducedPoint reduced_point(double dv, const ReducedConstants& rc) {
    const CatenoidParams& p = rc.params;
    ReducedPoint rp;
    rp.V = solve_V(dv, rc);
    rp.v1 = rp.V + 0.5 * dv;
    rp.v2 = rp.V - 0.5 * dv;
    rp.h1 = conformal_factor(rp.v1, p);
    rp.h2 = conformal_factor(rp.v2, p);
    const double r = rc.gamma1 / rc.gamma2;
    rp.F_E = std::exp(4.0 * kPi * rc.E / (rc.gamma1 * rc.gamma2) + r * std::log(rp.h1) +
                      std::log(rp.h2) / r);
    rp.C = std::cosh(dv / p.a()) - rp.F_E;
    return rp;
}

namespace {

double clamp_cos(double C, double dv) {
    if (std::abs(C) > 1.0 + kClampSlack || std::isnan(C)) {
        throw InadmissibleError("separation dv = " + fmt(dv) +
                                " lies outside the energetically allowed window (cos du = " +
                                fmt(C) + ")");
    }
    return std::clamp(C, -1.0, 1.0);
}

/// Rate on the positive branch; carries the sign of the circulations.
double positive_branch_rate(const ReducedPoint& rp, double C, const ReducedConstants& rc) {
    const double bracket = rc.gamma2 / (rp.h1 * rp.h1) + rc.gamma1 / (rp.h2 * rp.h2);
    return bracket * std::sqrt(std::max(0.0, 1.0 - C * C)) / (4.0 * kPi * rc.params.a() * rp.F_E);
}

}  // namespace

double cos_relative_angle(double dv, const ReducedConstants& rc) {
    return clamp_cos(reduced_point(dv, rc).C, dv);
}

double reduced_dv_rate(double dv, Branch eps, const ReducedConstants& rc) {
    const ReducedPoint rp = reduced_point(dv, rc);
    const double C = clamp_cos(rp.C, dv);
    return sign_of(eps) * positive_branch_rate(rp, C, rc);
}

// ---------------------------------------------------------------------------
// Admissible window and the regularized turning-point parametrization
// ---------------------------------------------------------------------------

namespace {

/// 1 - C^2, negative outside the window.
double margin(double dv, const ReducedConstants& rc) {
    const double C = reduced_point(dv, rc).C;
    if (!std::isfinite(C)) return -1.0;
    return 1.0 - C * C;
}

double find_edge(double start, double direction, const ReducedConstants& rc) {
    const double a = rc.params.a();
    const double step = 5e-3 * a;
    const double limit = 50.0 * a;
    if (margin(start, rc) < 0.0) {
        // start is itself a turning point within the clamp slack
        const double probe = start + direction * step;
        if (margin(probe, rc) < 0.0) return start;
    }
    double inside = start;
    double outside = start;
    for (int k = 1;; ++k) {
        const double x = start + direction * step * k;
        if (std::abs(x - start) > limit) {
            throw InadmissibleError("admissible window does not close within 50a of dv = " +
                                    fmt(start));
        }
        if (margin(x, rc) < 0.0) {
            outside = x;
            break;
        }
        inside = x;
    }
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (inside + outside);
        if (mid == inside || mid == outside) break;
        if (margin(mid, rc) >= 0.0) inside = mid; else outside = mid;
    }
    return inside;
}

/// Parametrization dv = mid - half cos(theta) of one admissible window.
class WindowMap {
public:
    WindowMap(AdmissibleWindow w, const ReducedConstants& rc) : w_(w), rc_(rc) {
        if (!(w_.hi > w_.lo)) {
            throw InadmissibleError("degenerate admissible window at dv = " + fmt(w_.lo));
        }
    }

    double dv(double theta) const { return w_.mid() - w_.half() * std::cos(theta); }

    double theta_of(double dv) const {
        return std::acos(std::clamp((w_.mid() - dv) / w_.half(), -1.0, 1.0));
    }

    /// |d theta / dt|^-1 = half |sin theta| / |rate|; smooth and even about
    /// every multiple of pi.
    double dt_dtheta(double theta) const {
        const double k = std::round(theta / kPi);
        const double phi = std::abs(theta - k * kPi);
        const double parity = (static_cast<long long>(k) % 2 == 0) ? 1.0 : -1.0;
        if (phi >= kGuard) return raw(phi, parity);
        // the 0/0 at a turning point is resolved by an even quadratic fit
        const double w1 = raw(kGuard, parity);
        const double w2 = raw(2.0 * kGuard, parity);
        const double c2 = (w2 - w1) / (3.0 * kGuard * kGuard);
        const double c0 = w1 - c2 * kGuard * kGuard;
        return c0 + c2 * phi * phi;
    }

    /// Sign of the physical rate on the Positive branch.
    double rate_sign() const { return rc_.gamma1 > 0.0 ? 1.0 : -1.0; }

    static constexpr double kGuard = 1e-3;

private:

    double raw(double phi, double parity) const {
        const double x = w_.mid() - w_.half() * parity * std::cos(phi);
        const ReducedPoint rp = reduced_point(x, rc_);
        const double C = std::clamp(rp.C, -1.0, 1.0);
        const double rate = std::abs(positive_branch_rate(rp, C, rc_));
        if (!(rate > 0.0)) {
            throw InadmissibleError("reduced rate vanishes inside the window at dv = " + fmt(x));
        }
        return w_.half() * std::sin(phi) / rate;
    }

    AdmissibleWindow w_;
    const ReducedConstants& rc_;
};

}  // namespace

AdmissibleWindow admissible_window(double dv_ref, const ReducedConstants& rc) {
    const double m = margin(dv_ref, rc);
    if (m < -2.0 * kClampSlack) {
        throw InadmissibleError("separation dv = " + fmt(dv_ref) +
                                " is outside the admissible window");
    }
    return {find_edge(dv_ref, -1.0, rc), find_edge(dv_ref, 1.0, rc)};
}

double quadrature_time(double dv0, double dv1, Branch eps, const ReducedConstants& rc) {
    if (dv0 == dv1) return 0.0;
    const AdmissibleWindow w = admissible_window(dv0, rc);
    const double slack = 1e-12 * std::max(1.0, w.half());
    if (dv1 < w.lo - slack || dv1 > w.hi + slack) {
        throw InadmissibleError("interval [" + fmt(dv0) + ", " + fmt(dv1) +
                                "] leaves the admissible window [" + fmt(w.lo) + ", " + fmt(w.hi) +
                                "]");
    }
    const WindowMap map(w, rc);
    const double th0 = map.theta_of(dv0);
    const double th1 = map.theta_of(dv1);
    // split at the turning-point guard edges so every piece is smooth
    const double lo = std::min(th0, th1);
    const double hi = std::max(th0, th1);
    std::vector<double> cuts{lo};
    for (double k = std::floor(lo / kPi); k * kPi <= hi + kPi; k += 1.0) {
        for (double c : {k * kPi - WindowMap::kGuard, k * kPi, k * kPi + WindowMap::kGuard}) {
            if (c > lo && c < hi) cuts.push_back(c);
        }
    }
    cuts.push_back(hi);
    std::sort(cuts.begin(), cuts.end());
    double span = 0.0;
    double err = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        if (!(cuts[i + 1] > cuts[i])) continue;
        double piece_err = 0.0;
        span += boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
            [&](double th) { return map.dt_dtheta(th); }, cuts[i], cuts[i + 1], 15, 1e-12,
            &piece_err);
        err += piece_err * 0.5 * (cuts[i + 1] - cuts[i]);  // boost reports it on [-1, 1]
    }
    if (err > 1e-10) {
        throw InadmissibleError("time quadrature did not converge (error estimate " + fmt(err) +
                                "); the interval may touch a separatrix");
    }
    const double oriented = th1 >= th0 ? span : -span;
    return sign_of(eps) * map.rate_sign() * oriented;
}

double drift_rate(double dv, double du, const ReducedConstants& rc) {
    const CatenoidParams& p = rc.params;
    const double a = p.a();
    const double V = solve_V(dv, rc);
    const double v1 = V + 0.5 * dv;
    const double v2 = V - 0.5 * dv;
    const double F = std::cosh(dv / a) - std::cos(du);
    if (!(F >= kCollisionFloor)) {
        throw CollisionError("drift rate at a near-collision: F = " + fmt(F));
    }
    const double h1 = conformal_factor(v1, p);
    const double h2 = conformal_factor(v2, p);
    const double i1 = 1.0 / (h1 * h1);
    const double i2 = 1.0 / (h2 * h2);
    const double g1 = rc.gamma1;
    const double g2 = rc.gamma2;
    return (-std::sinh(dv / a) / F * (g2 * i1 - g1 * i2) + g1 * std::tanh(v1 / a) * i1 +
            g2 * std::tanh(v2 / a) * i2) /
           (8.0 * kPi * a * a);
}

// ---------------------------------------------------------------------------
// Reduced trajectory and drift reconstruction
// ---------------------------------------------------------------------------

ReducedTrajectory integrate_reduced(double dv0, Branch eps0, const ReducedConstants& rc,
                                    double t_final, double sample_dt, double rel_tol,
                                    double abs_tol) {
    if (!(t_final > 0.0) || !(sample_dt > 0.0) || sample_dt > t_final) {
        throw std::invalid_argument("reduced integration needs 0 < sample_dt <= t_final");
    }
    ReducedTrajectory tr;
    tr.window = admissible_window(dv0, rc);
    const WindowMap map(tr.window, rc);

    // theta always increases; dv moves up for theta in (0, pi) mod 2 pi
    const double direction = sign_of(eps0) * map.rate_sign();
    const double th0 = direction >= 0.0 ? map.theta_of(dv0) : -map.theta_of(dv0);

    OdeRhs rhs = [&map](double, std::span<const double> y, std::span<double> dy) {
        dy[0] = 1.0 / map.dt_dtheta(y[0]);
    };
    Dop853 solver(rhs, 0.0, {th0}, rel_tol, abs_tol);

    auto record = [&](double t, double theta) {
        const double dv = map.dv(theta);
        const ReducedPoint rp = reduced_point(dv, rc);
        const double C = std::clamp(rp.C, -1.0, 1.0);
        const Branch eps = branch_of(std::sin(theta) * map.rate_sign());
        tr.times.push_back(t);
        tr.dv.push_back(dv);
        tr.du.push_back(sign_of(eps) * std::acos(C));
        tr.V.push_back(rp.V);
        tr.eps.push_back(eps);
    };

    const auto n_samples = static_cast<std::size_t>(std::floor(t_final / sample_dt + 1e-9));
    record(0.0, th0);
    std::size_t next = 1;
    double buf[1];
    while (solver.t() < t_final) {
        const double th_prev = solver.y()[0];
        solver.step(t_final);
        const double th_now = solver.y()[0];
        // eps flips where theta crosses a multiple of pi
        for (double k = std::floor(th_prev / kPi) + 1.0; k * kPi <= th_now; k += 1.0) {
            const double target = k * kPi;
            double lo = solver.t_prev();
            double hi = solver.t();
            for (int it = 0; it < 200; ++it) {
                const double mid = 0.5 * (lo + hi);
                if (mid == lo || mid == hi) break;
                solver.dense(mid, buf);
                if (buf[0] < target) lo = mid; else hi = mid;
            }
            tr.turning_times.push_back(0.5 * (lo + hi));
        }
        while (next <= n_samples) {
            const double ts = static_cast<double>(next) * sample_dt;
            if (ts > solver.t()) break;
            solver.dense(ts, buf);
            record(ts, buf[0]);
            ++next;
        }
    }
    return tr;
}

std::vector<double> reconstruct_U(const std::vector<double>& times, const std::vector<double>& dv,
                                  const std::vector<double>& du, const ReducedConstants& rc,
                                  double U0) {
    const std::size_t n = times.size();
    if (dv.size() != n || du.size() != n) {
        throw std::invalid_argument("reconstruct_U: series lengths differ");
    }
    std::vector<double> U(n, U0);
    if (n < 2) return U;

    std::vector<double> f(n);
    for (std::size_t k = 0; k < n; ++k) f[k] = drift_rate(dv[k], du[k], rc);

    const double h = times[1] - times[0];
    bool uniform = n >= 4;
    for (std::size_t k = 1; k + 1 < n && uniform; ++k) {
        uniform = std::abs((times[k + 1] - times[k]) - h) <= 1e-9 * std::abs(h);
    }
    for (std::size_t k = 0; k + 1 < n; ++k) {
        double inc;
        if (!uniform) {
            inc = 0.5 * (times[k + 1] - times[k]) * (f[k] + f[k + 1]);
        } else if (k == 0) {
            inc = h / 24.0 * (9.0 * f[0] + 19.0 * f[1] - 5.0 * f[2] + f[3]);
        } else if (k + 2 == n) {
            inc = h / 24.0 * (9.0 * f[n - 1] + 19.0 * f[n - 2] - 5.0 * f[n - 3] + f[n - 4]);
        } else {
            inc = h / 24.0 * (-f[k - 1] + 13.0 * f[k] + 13.0 * f[k + 1] - f[k + 2]);
        }
        U[k + 1] = U[k] + inc;
    }
    return U;
}

void reconstruct_U(ReducedTrajectory& tr, const ReducedConstants& rc, double U0) {
    tr.U = reconstruct_U(tr.times, tr.dv, tr.du, rc, U0);
}

void write_reduced_csv(std::ostream& os, const ReducedTrajectory& tr) {
    os << "t,dv,du,V,U_reconstructed,eps\n";
    char buf[32];
    auto put = [&](double x) {
        std::snprintf(buf, sizeof buf, "%.17g", x);
        os << buf;
    };
    for (std::size_t k = 0; k < tr.size(); ++k) {
        put(tr.times[k]);
        for (double x : {tr.dv[k], tr.du[k], tr.V[k]}) {
            os << ',';
            put(x);
        }
        os << ',';
        if (k < tr.U.size()) put(tr.U[k]); else os << "nan";
        os << ',' << static_cast<int>(tr.eps[k]) << '\n';
    }
}

}  // namespace catvortex
