#include "catvortex/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "catvortex/errors.hpp"
#include "dop853_tableau.hpp"

namespace catvortex {

namespace tab = detail::dop853;

void IntegratorSettings::validate() const {
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) {
        throw std::invalid_argument("integrator tolerances must be positive");
    }
    if (!(t_final > 0.0) || !std::isfinite(t_final)) {
        throw std::invalid_argument("t_final must be positive and finite");
    }
    if (!(sample_dt > 0.0) || sample_dt > t_final) {
        throw std::invalid_argument("sample_dt must satisfy 0 < sample_dt <= t_final");
    }
    if (!(max_step > 0.0)) throw std::invalid_argument("max_step must be positive");
}

// ---------------------------------------------------------------------------
// Dop853
// ---------------------------------------------------------------------------

namespace {

constexpr double kSafety = 0.9;
constexpr double kBeta = 0.04;  // PI controller weight on the previous error
constexpr double kFacMin = 0.333;
constexpr double kFacMax = 6.0;

}  // namespace

Dop853::Dop853(OdeRhs rhs, double t0, std::vector<double> y0, double rel_tol, double abs_tol,
               double max_step)
    : rhs_(std::move(rhs)),
      n_(y0.size()),
      rtol_(rel_tol),
      atol_(abs_tol),
      max_step_(max_step),
      t_(t0),
      t_prev_(t0),
      y_(std::move(y0)),
      y_prev_(n_),
      f_(n_),
      f_prev_(n_),
      y_new_(n_),
      f_new_(n_),
      tmp_(n_),
      k_(tab::kStagesExtended, std::vector<double>(n_)),
      dense_(7, std::vector<double>(n_)) {
    rhs_(t_, y_, f_);
    ++evaluations_;
    h_ = initial_step();
}

double Dop853::initial_step() {
    double dnf = 0.0;
    double dny = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
        const double sk = atol_ + rtol_ * std::abs(y_[i]);
        dnf += (f_[i] / sk) * (f_[i] / sk);
        dny += (y_[i] / sk) * (y_[i] / sk);
    }
    double h = (dnf <= 1e-10 || dny <= 1e-10) ? 1e-6 : 0.01 * std::sqrt(dny / dnf);
    h = std::min(h, max_step_);
    for (std::size_t i = 0; i < n_; ++i) tmp_[i] = y_[i] + h * f_[i];
    rhs_(t_ + h, tmp_, f_new_);
    ++evaluations_;
    double der2 = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
        const double sk = atol_ + rtol_ * std::abs(y_[i]);
        const double d = (f_new_[i] - f_[i]) / sk;
        der2 += d * d;
    }
    der2 = std::sqrt(der2) / h;
    const double der12 = std::max(std::abs(der2), std::sqrt(dnf));
    const double h1 =
        der12 <= 1e-15 ? std::max(1e-6, h * 1e-3) : std::pow(0.01 / der12, 1.0 / 8.0);
    return std::min({100.0 * h, h1, max_step_});
}

double Dop853::error_norm(double h) const {
    double err5 = 0.0;
    double err3 = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
        const double sc = atol_ + rtol_ * std::max(std::abs(y_[i]), std::abs(y_new_[i]));
        double e5 = 0.0;
        double e3 = 0.0;
        for (int s = 0; s <= tab::kStages; ++s) {
            e5 += tab::kE5[s] * k_[s][i];
            e3 += tab::kE3[s] * k_[s][i];
        }
        e5 /= sc;
        e3 /= sc;
        err5 += e5 * e5;
        err3 += e3 * e3;
    }
    if (err5 == 0.0 && err3 == 0.0) return 0.0;
    return std::abs(h) * err5 / std::sqrt((err5 + 0.01 * err3) * static_cast<double>(n_));
}

void Dop853::step(double t_bound) {
    if (t_ >= t_bound) return;
    const double h_min = 16.0 * std::numeric_limits<double>::epsilon() * std::abs(t_);

    for (;;) {
        if (accepted_ + rejected_ >= kMaxSteps) {
            throw StepFailure("step budget exhausted at t = " + std::to_string(t_));
        }
        double h = std::min(h_, max_step_);
        bool last = false;
        if (t_ + h >= t_bound) {
            h = t_bound - t_;
            last = true;
        }
        if (h <= h_min || !std::isfinite(h)) {
            throw StepFailure("step size underflow at t = " + std::to_string(t_));
        }

        std::copy(f_.begin(), f_.end(), k_[0].begin());
        for (int s = 1; s < tab::kStages; ++s) {
            for (std::size_t i = 0; i < n_; ++i) {
                double acc = 0.0;
                for (int j = 0; j < s; ++j) acc += tab::kA[s][j] * k_[j][i];
                tmp_[i] = y_[i] + h * acc;
            }
            rhs_(t_ + tab::kC[s] * h, tmp_, k_[s]);
        }
        for (std::size_t i = 0; i < n_; ++i) {
            double acc = 0.0;
            for (int j = 0; j < tab::kStages; ++j) acc += tab::kA[tab::kStages][j] * k_[j][i];
            y_new_[i] = y_[i] + h * acc;
        }
        const double t_new = last ? t_bound : t_ + h;
        rhs_(t_new, y_new_, f_new_);
        std::copy(f_new_.begin(), f_new_.end(), k_[tab::kStages].begin());
        evaluations_ += tab::kStages;

        const double err = error_norm(h);
        const double fac11 = std::pow(err, 1.0 / 8.0 - kBeta * 0.2);
        double fac = fac11 / std::pow(fac_old_, kBeta);
        fac = std::max(1.0 / kFacMax, std::min(1.0 / kFacMin, fac / kSafety));
        double h_new = h / fac;

        if (err <= 1.0) {
            fac_old_ = std::max(err, 1e-4);
            if (last_rejected_) h_new = std::min(h_new, h);
            last_rejected_ = false;
            ++accepted_;
            std::swap(y_prev_, y_);
            std::swap(f_prev_, f_);
            y_ = y_new_;
            f_ = f_new_;
            t_prev_ = t_;
            t_ = t_new;
            h_last_ = h;
            h_ = h_new;
            dense_ready_ = false;
            return;
        }
        h_ = h / std::min(1.0 / kFacMin, fac11 / kSafety);
        last_rejected_ = true;
        ++rejected_;
    }
}

void Dop853::prepare_dense() {
    const double h = h_last_;
    // k_ still holds the stages of the last accepted step; k_[0] = f(t_prev).
    for (int s = tab::kStages + 1; s < tab::kStagesExtended; ++s) {
        for (std::size_t i = 0; i < n_; ++i) {
            double acc = 0.0;
            for (int j = 0; j < s; ++j) acc += tab::kA[s][j] * k_[j][i];
            tmp_[i] = y_prev_[i] + h * acc;
        }
        rhs_(t_prev_ + tab::kC[s] * h, tmp_, k_[s]);
        ++evaluations_;
    }
    for (std::size_t i = 0; i < n_; ++i) {
        const double dy = y_[i] - y_prev_[i];
        dense_[0][i] = dy;
        dense_[1][i] = h * f_prev_[i] - dy;
        dense_[2][i] = 2.0 * dy - h * (f_[i] + f_prev_[i]);
        for (int r = 0; r < 4; ++r) {
            double acc = 0.0;
            for (int s = 0; s < tab::kStagesExtended; ++s) acc += tab::kD[r][s] * k_[s][i];
            dense_[3 + r][i] = h * acc;
        }
    }
    dense_ready_ = true;
}

void Dop853::dense(double t, std::span<double> out) {
    if (t == t_) {
        std::copy(y_.begin(), y_.end(), out.begin());
        return;
    }
    const double slack = 1e-12 * std::max(1.0, std::abs(t_));
    if (t < std::min(t_prev_, t_) - slack || t > std::max(t_prev_, t_) + slack) {
        throw std::invalid_argument("dense output requested outside the last step");
    }
    if (!dense_ready_) prepare_dense();
    const double x = (t - t_prev_) / h_last_;
    for (std::size_t i = 0; i < n_; ++i) {
        double acc = 0.0;
        for (int r = 6; r >= 0; --r) {
            acc += dense_[r][i];
            acc *= ((6 - r) % 2 == 0) ? x : (1.0 - x);
        }
        out[i] = y_prev_[i] + acc;
    }
}

// ---------------------------------------------------------------------------
// N-vortex integration
// ---------------------------------------------------------------------------

namespace {

void push_sample(Trajectory& tr, const VortexSystem& proto, double t, std::span<const double> y,
                 const Invariants& inv0) {
    VortexSystem s = proto;
    s.assign_flat_state(y);
    const Invariants inv = invariants(proto.circulations, proto.params, y);
    tr.times.push_back(t);
    tr.states.push_back(std::move(s));
    tr.H_series.push_back(inv.H);
    tr.J_series.push_back(inv.J);
    tr.dH_series.push_back(inv.H - inv0.H);
    tr.dJ_series.push_back(inv.J - inv0.J);
}

double locate_root(Dop853& solver, const EventFunction& event, double t_lo, double g_lo,
                   double t_hi, std::vector<double>& buf) {
    double lo = t_lo;
    double hi = t_hi;
    for (int it = 0; it < 200 && hi - lo > 4.0 * std::numeric_limits<double>::epsilon() * std::abs(hi);
         ++it) {
        const double mid = 0.5 * (lo + hi);
        solver.dense(mid, buf);
        const double g = event(buf);
        if ((g < 0.0) == (g_lo < 0.0) && g != 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace

Trajectory integrate(const VortexSystem& sys0, const IntegratorSettings& cfg,
                     const EventFunction& event) {
    sys0.validate();
    cfg.validate();

    const std::vector<double> gammas = sys0.circulations;
    const CatenoidParams params = sys0.params;
    OdeRhs rhs = [gammas, params](double, std::span<const double> y, std::span<double> dy) {
        vector_field(gammas, params, y, dy);
    };

    Trajectory tr;
    const std::vector<double> y0 = sys0.flat_state();
    const Invariants inv0 = invariants(gammas, params, y0);
    const auto n_samples = static_cast<std::size_t>(std::floor(cfg.t_final / cfg.sample_dt + 1e-9));
    tr.times.reserve(n_samples + 1);
    tr.states.reserve(n_samples + 1);
    push_sample(tr, sys0, 0.0, y0, inv0);

    Dop853 solver(rhs, 0.0, y0, cfg.rel_tol, cfg.abs_tol, cfg.max_step);
    std::vector<double> buf(y0.size());
    std::size_t next = 1;
    double g_prev = event ? event(y0) : 0.0;

    try {
        while (solver.t() < cfg.t_final) {
            solver.step(cfg.t_final);
            if (event) {
                const double g = event(solver.y());
                if ((g_prev < 0.0 && g >= 0.0) || (g_prev > 0.0 && g <= 0.0)) {
                    tr.event_times.push_back(
                        g == 0.0 ? solver.t()
                                 : locate_root(solver, event, solver.t_prev(), g_prev, solver.t(), buf));
                }
                g_prev = g;
            }
            while (next <= n_samples) {
                const double ts = static_cast<double>(next) * cfg.sample_dt;
                if (ts > solver.t()) break;
                solver.dense(ts, buf);
                push_sample(tr, sys0, ts, buf, inv0);
                ++next;
            }
        }
    } catch (const CollisionError& e) {
        tr.halted = true;
        std::ostringstream os;
        os.precision(17);
        os << "integration halted near t = " << solver.t() << ": " << e.what();
        tr.diagnostic = os.str();
    }
    tr.steps_accepted = solver.accepted();
    tr.steps_rejected = solver.rejected();
    return tr;
}

void require_complete(const Trajectory& tr) {
    if (tr.halted) throw CollisionError(tr.diagnostic);
}

DriftReport drift_report(const Trajectory& tr) {
    if (tr.size() == 0) throw std::invalid_argument("drift_report needs a non-empty trajectory");
    DriftReport r;
    for (std::size_t k = 0; k < tr.size(); ++k) {
        r.max_dH = std::max(r.max_dH, std::abs(tr.dH_series[k]));
        r.max_dJ = std::max(r.max_dJ, std::abs(tr.dJ_series[k]));
    }
    return r;
}

namespace {

void put(std::ostream& os, double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    os << buf;
}

}  // namespace

void write_trajectory_csv(std::ostream& os, const Trajectory& tr) {
    const std::size_t n = tr.states.empty() ? 0 : tr.states.front().size();
    os << "t";
    for (std::size_t i = 1; i <= n; ++i) os << ",v_" << i;
    for (std::size_t i = 1; i <= n; ++i) os << ",u_" << i;
    os << ",H,J,dH,dJ\n";
    for (std::size_t k = 0; k < tr.size(); ++k) {
        put(os, tr.times[k]);
        for (const auto& p : tr.states[k].positions) {
            os << ',';
            put(os, p.v);
        }
        for (const auto& p : tr.states[k].positions) {
            os << ',';
            put(os, p.u);
        }
        for (double x : {tr.H_series[k], tr.J_series[k], tr.dH_series[k], tr.dJ_series[k]}) {
            os << ',';
            put(os, x);
        }
        os << '\n';
    }
}

}  // namespace catvortex
