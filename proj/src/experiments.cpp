#include "catvortex/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <random>
#include <stdexcept>

#include "catvortex/errors.hpp"

namespace catvortex {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double mean_u(const VortexSystem& s) {
    double acc = 0.0;
    for (const auto& p : s.positions) acc += p.u;
    return acc / static_cast<double>(s.size());
}

double mean_v(const VortexSystem& s) {
    double acc = 0.0;
    for (const auto& p : s.positions) acc += p.v;
    return acc / static_cast<double>(s.size());
}

double mean_pair_chord(const VortexSystem& s) {
    const std::size_t n = s.size();
    if (n < 2) return 0.0;
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            acc += chord_distance(s.positions[i], s.positions[j], s.params);
        }
    }
    return acc / static_cast<double>(n * (n - 1) / 2);
}

VortexSystem pair_from_config(const ScenarioConfig& cfg) {
    VortexSystem sys;
    sys.params = cfg.params;
    sys.circulations = {cfg.gamma, cfg.gamma};
    sys.positions = {{cfg.v1, cfg.u1}, {cfg.v2, cfg.u2}};
    return sys;
}

}  // namespace

FitResult linear_fit(std::span<const double> t, std::span<const double> y) {
    if (t.size() != y.size()) throw std::invalid_argument("linear_fit: size mismatch");
    const std::size_t n = t.size();
    if (n < 2) throw WindowEmpty("linear fit needs at least two samples");
    double mt = 0.0;
    double my = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        mt += t[k];
        my += y[k];
    }
    mt /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double stt = 0.0;
    double sty = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        stt += (t[k] - mt) * (t[k] - mt);
        sty += (t[k] - mt) * (y[k] - my);
    }
    if (!(stt > 0.0)) throw WindowEmpty("linear fit needs distinct sample times");
    FitResult f;
    f.slope = sty / stt;
    f.intercept = my - f.slope * mt;
    double ss = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double r = y[k] - (f.slope * t[k] + f.intercept);
        ss += r * r;
    }
    f.rms_residual = std::sqrt(ss / static_cast<double>(n));
    f.t_lo = t.front();
    f.t_hi = t.back();
    f.samples = n;
    return f;
}

double default_t_final(const ScenarioConfig& cfg) {
    switch (cfg.scenario) {
        case Scenario::Rigid: return 50.0;
        case Scenario::Instability: {
            const double lambda = stability(cfg.v0, cfg.gamma, cfg.params).lambda;
            return lambda > 0.0 ? 6.0 / lambda : kNaN;
        }
        case Scenario::GenericPair:
        case Scenario::ReducedCompare: return 40.0;
        case Scenario::Cluster: return 60.0;
        case Scenario::OmegaProfile: return 0.0;
    }
    return 0.0;
}

// ---------------------------------------------------------------------------

RigidReport run_rigid(const ScenarioConfig& cfg) {
    RigidReport r;
    r.orbit = symmetric_orbit(cfg.v0, cfg.gamma, cfg.params);
    const VortexSystem sys0 = symmetric_state(cfg.v0, cfg.gamma, cfg.params);
    r.trajectory = integrate(sys0, cfg.integrator(default_t_final(cfg), 0.05));
    require_complete(r.trajectory);
    r.drift = drift_report(r.trajectory);
    const double u10 = sys0.positions[0].u;
    for (std::size_t k = 0; k < r.trajectory.size(); ++k) {
        const auto& s = r.trajectory.states[k];
        const double t = r.trajectory.times[k];
        r.max_dv_deviation =
            std::max(r.max_dv_deviation, std::abs(s.positions[0].v - s.positions[1].v));
        r.max_du_deviation =
            std::max(r.max_du_deviation, std::abs(s.positions[0].u - s.positions[1].u - kPi));
        r.max_phase_deviation = std::max(
            r.max_phase_deviation, std::abs(s.positions[0].u - u10 - r.orbit.Omega * t));
    }
    return r;
}

InstabilityReport run_instability(const ScenarioConfig& cfg) {
    InstabilityReport r;
    r.stability = stability(cfg.v0, cfg.gamma, cfg.params);
    r.Omega = omega_symmetric(cfg.v0, cfg.gamma, cfg.params);
    if (!(r.stability.lambda > 0.0)) {
        throw WindowEmpty("no growing mode at V0 = " + std::to_string(cfg.v0) +
                          " (marginal at the throat)");
    }
    if (cfg.eta0 == 0.0) throw WindowEmpty("eta0 = 0 excites no growth");
    const VortexSystem sys0 = seed_unstable(cfg.v0, cfg.eta0, cfg.gamma, cfg.params);
    r.t_final = cfg.t_final.value_or(default_t_final(cfg));
    const IntegratorSettings settings = cfg.integrator(r.t_final, r.t_final / 3000.0);
    r.trajectory = integrate(sys0, settings);
    require_complete(r.trajectory);
    r.drift = drift_report(r.trajectory);

    const double eta0 = std::abs(cfg.eta0);
    const double lo = std::exp(1.0) * eta0;
    const double hi = std::exp(3.0) * eta0;
    std::vector<double> ts;
    std::vector<double> logs;
    for (std::size_t k = 0; k < r.trajectory.size(); ++k) {
        const auto& s = r.trajectory.states[k];
        const double eta = std::abs(s.positions[0].v - s.positions[1].v);
        if (eta >= lo && eta <= hi) {
            ts.push_back(r.trajectory.times[k]);
            logs.push_back(std::log(eta));
        } else if (!ts.empty()) {
            break;
        }
    }
    if (ts.size() < 3) {
        throw WindowEmpty("growth window [e, e^3] x |eta0| holds " + std::to_string(ts.size()) +
                          " samples; extend t_final or refine sample_dt");
    }
    r.fit = linear_fit(ts, logs);
    const double lambda = r.stability.lambda;
    r.relative_error = std::abs(r.fit.slope - lambda) / lambda;
    r.ratio_min = std::numeric_limits<double>::infinity();
    r.ratio_max = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < r.trajectory.size(); ++k) {
        const double t = r.trajectory.times[k];
        if (t < r.fit.t_lo || t > r.fit.t_hi) continue;
        const auto& s = r.trajectory.states[k];
        const double ratio = (s.positions[0].v - s.positions[1].v) / (cfg.eta0 * std::exp(lambda * t));
        r.ratio_min = std::min(r.ratio_min, ratio);
        r.ratio_max = std::max(r.ratio_max, ratio);
    }
    return r;
}

PairReport run_generic_pair(const ScenarioConfig& cfg) {
    PairReport r;
    const VortexSystem sys0 = pair_from_config(cfg);
    const EventFunction sin_du = [](std::span<const double> y) { return std::sin(y[2] - y[3]); };
    r.trajectory = integrate(sys0, cfg.integrator(default_t_final(cfg), 0.01), sin_du);
    require_complete(r.trajectory);
    r.drift = drift_report(r.trajectory);
    r.turning_times = r.trajectory.event_times;

    std::vector<double> U;
    r.chord.reserve(r.trajectory.size());
    for (const auto& s : r.trajectory.states) {
        r.chord.push_back(chord_distance(s.positions[0], s.positions[1], s.params));
        U.push_back(mean_u(s));
    }
    r.chord_min = *std::min_element(r.chord.begin(), r.chord.end());
    r.chord_max = *std::max_element(r.chord.begin(), r.chord.end());
    r.U_fit = linear_fit(r.trajectory.times, U);

    // consecutive turning points alternate between the two window edges
    const auto& tt = r.turning_times;
    if (tt.size() >= 3) {
        r.measured_period = (tt.back() - tt.front()) / (0.5 * static_cast<double>(tt.size() - 1));
    } else if (tt.size() == 2) {
        r.measured_period = 2.0 * (tt[1] - tt[0]);
    } else {
        r.measured_period = kNaN;
    }
    return r;
}

ReducedCompareReport run_reduced_compare(const ScenarioConfig& cfg) {
    ReducedCompareReport r;
    r.full = run_generic_pair(cfg);
    const Trajectory& tr = r.full.trajectory;
    r.constants = ReducedConstants::from_state(tr.states.front());
    const ReducedConstants& rc = r.constants;

    std::vector<double> U_full;
    for (std::size_t k = 0; k < tr.size(); ++k) {
        const VortexSystem& s = tr.states[k];
        const CollectiveState cs = to_collective(s);
        const PhaseVelocity pv = vector_field(s);
        const double rate_full = pv.dv[0] - pv.dv[1];
        const double rate_red = reduced_dv_rate(cs.dv, cs.eps, rc);
        r.rate_mismatch = std::max(r.rate_mismatch, std::abs(rate_full - rate_red));
        const double drift_full = 0.5 * (pv.du[0] + pv.du[1]);
        r.drift_rate_mismatch =
            std::max(r.drift_rate_mismatch, std::abs(drift_full - drift_rate(cs.dv, cs.du, rc)));
        r.cos_mismatch =
            std::max(r.cos_mismatch, std::abs(cos_relative_angle(cs.dv, rc) - std::cos(cs.du)));
        U_full.push_back(cs.U);
    }

    const CollectiveState cs0 = to_collective(tr.states.front());
    const IntegratorSettings settings = cfg.integrator(default_t_final(cfg), 0.01);
    r.reduced = integrate_reduced(cs0.dv, cs0.eps, rc, settings.t_final, settings.sample_dt,
                                  settings.rel_tol, settings.abs_tol);
    reconstruct_U(r.reduced, rc, cs0.U);
    const std::size_t n = std::min(r.reduced.size(), tr.size());
    for (std::size_t k = 0; k < n; ++k) {
        const CollectiveState cs = to_collective(tr.states[k]);
        r.dv_mismatch = std::max(r.dv_mismatch, std::abs(cs.dv - r.reduced.dv[k]));
        r.U_mismatch = std::max(r.U_mismatch, std::abs(U_full[k] - r.reduced.U[k]));
    }

    const AdmissibleWindow& w = r.reduced.window;
    r.quadrature_period = 2.0 * std::abs(quadrature_time(w.lo, w.hi, Branch::Positive, rc));
    r.period_relative_error = std::isnan(r.full.measured_period)
                                  ? kNaN
                                  : std::abs(r.quadrature_period - r.full.measured_period) /
                                        r.full.measured_period;
    return r;
}

VortexSystem draw_cluster(const ScenarioConfig& cfg, double vc, int* redraws) {
    std::mt19937_64 rng(cfg.seed.value_or(kDefaultClusterSeed));
    std::uniform_real_distribution<double> du(-cfg.eps_u, cfg.eps_u);
    std::uniform_real_distribution<double> dv(-cfg.eps_v, cfg.eps_v);
    VortexSystem sys;
    sys.params = cfg.params;
    sys.circulations.assign(static_cast<std::size_t>(cfg.n_vortices), cfg.gamma);
    for (int attempt = 0; attempt <= 100; ++attempt) {
        sys.positions.clear();
        for (int i = 0; i < cfg.n_vortices; ++i) {
            const double u = cfg.uc + du(rng);
            const double v = vc + dv(rng);
            sys.positions.push_back({v, u});
        }
        try {
            sys.validate();
            if (redraws) *redraws = attempt;
            return sys;
        } catch (const CollisionError&) {
        }
    }
    throw CollisionError("cluster draw produced a near-collision 101 times");
}

namespace {

ClusterDiagnostics cluster_at(const ScenarioConfig& cfg, double vc) {
    ClusterDiagnostics d;
    const VortexSystem sys0 = draw_cluster(cfg, vc, &d.redraws);
    d.trajectory = integrate(sys0, cfg.integrator(default_t_final(cfg), 0.05));
    require_complete(d.trajectory);
    d.drift = drift_report(d.trajectory);
    for (const auto& s : d.trajectory.states) {
        d.Uc_series.push_back(mean_u(s));
        d.Vc_series.push_back(mean_v(s));
        d.mean_chord_series.push_back(mean_pair_chord(s));
    }
    d.Uc_fit = linear_fit(d.trajectory.times, d.Uc_series);
    d.Omega_eff = d.Uc_fit.slope;
    return d;
}

}  // namespace

ClusterDiagnostics run_cluster(const ScenarioConfig& cfg) { return cluster_at(cfg, cfg.vc); }

ClusterDiagnostics run_cluster_control(const ScenarioConfig& cfg) {
    return cluster_at(cfg, cfg.control_vc);
}

ProfileReport run_omega_profile(const ScenarioConfig& cfg) {
    ProfileReport r;
    const auto& p = cfg.params;
    const auto n = static_cast<std::size_t>(std::llround((cfg.v_max - cfg.v_min) / cfg.v_step));
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k <= n; ++k) {
        double V = cfg.v_min + static_cast<double>(k) * cfg.v_step;
        if (std::abs(V) < 1e-9 * cfg.v_step) V = 0.0;
        ProfileRow row{V, omega_symmetric(V, cfg.gamma, p), omega_from_curvature(V, cfg.gamma, p),
                       gaussian_curvature(V, p), curvature_gradient(V, p)};
        // sign(gamma) * Omega peaks at +V* for either orientation
        const double score = cfg.gamma > 0.0 ? row.Omega : -row.Omega;
        if (score > best) {
            best = score;
            r.argmax = V;
        }
        if (row.Omega != 0.0) {
            r.max_identity_error = std::max(
                r.max_identity_error, std::abs(row.Omega_curvature - row.Omega) / std::abs(row.Omega));
        } else {
            r.max_identity_error = std::max(r.max_identity_error, std::abs(row.Omega_curvature));
        }
        r.rows.push_back(row);
    }
    r.v_star = v_star(p);
    r.argmax_deviation = std::abs(r.argmax - r.v_star);
    return r;
}

// ---------------------------------------------------------------------------
// Output
// ---------------------------------------------------------------------------

namespace {

using nlohmann::json;

json fit_json(const FitResult& f) {
    return {{"slope", f.slope},         {"intercept", f.intercept}, {"rms_residual", f.rms_residual},
            {"t_lo", f.t_lo},           {"t_hi", f.t_hi},           {"samples", f.samples}};
}

json drift_json(const DriftReport& d) { return {{"max_dH", d.max_dH}, {"max_dJ", d.max_dJ}}; }

json finite_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

std::string g17(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::ofstream open_out(const ScenarioConfig& cfg, const std::string& name) {
    std::ofstream out(cfg.output_dir / name);
    if (!out) throw ConfigError("cannot write '" + (cfg.output_dir / name).string() + "'");
    return out;
}

void write_trajectory(const ScenarioConfig& cfg, const Trajectory& tr, const std::string& name) {
    auto out = open_out(cfg, name);
    write_trajectory_csv(out, tr);
}

json settings_json(const ScenarioConfig& cfg) {
    json j = {{"a", cfg.params.a()},   {"gamma", cfg.gamma},     {"rtol", cfg.rel_tol},
              {"atol", cfg.abs_tol},   {"negative_gamma", cfg.gamma < 0.0}};
    if (cfg.seed) j["seed"] = *cfg.seed;
    return j;
}

json trajectory_json(const Trajectory& tr, const IntegratorSettings& s) {
    return {{"t_final", s.t_final},
            {"sample_dt", s.sample_dt},
            {"samples", tr.size()},
            {"steps_accepted", tr.steps_accepted},
            {"steps_rejected", tr.steps_rejected}};
}

}  // namespace

nlohmann::json run_scenario(const ScenarioConfig& cfg) {
    cfg.validate();
    std::filesystem::create_directories(cfg.output_dir);
    const auto t_start = std::chrono::steady_clock::now();
    const std::string name(command_name(cfg.scenario));
    json summary = {{"scenario", name}, {"settings", settings_json(cfg)}};

    switch (cfg.scenario) {
        case Scenario::Rigid: {
            const RigidReport r = run_rigid(cfg);
            write_trajectory(cfg, r.trajectory, name + "_trajectory.csv");
            summary["V0"] = r.orbit.V0;
            summary["Omega"] = r.orbit.Omega;
            summary["max_dv_deviation"] = r.max_dv_deviation;
            summary["max_du_deviation"] = r.max_du_deviation;
            summary["max_phase_deviation"] = r.max_phase_deviation;
            summary["drift"] = drift_json(r.drift);
            summary["integration"] = trajectory_json(r.trajectory, cfg.integrator(default_t_final(cfg), 0.05));
            break;
        }
        case Scenario::Instability: {
            const InstabilityReport r = run_instability(cfg);
            write_trajectory(cfg, r.trajectory, name + "_trajectory.csv");
            summary["V0"] = cfg.v0;
            summary["eta0"] = cfg.eta0;
            summary["Omega"] = r.Omega;
            summary["A"] = r.stability.A;
            summary["B"] = r.stability.B;
            summary["lambda"] = r.stability.lambda;
            summary["eigen_ratio"] = r.stability.eigen_ratio;
            summary["lambda_fit"] = fit_json(r.fit);
            summary["relative_error"] = r.relative_error;
            summary["eta_ratio_min"] = r.ratio_min;
            summary["eta_ratio_max"] = r.ratio_max;
            summary["drift"] = drift_json(r.drift);
            summary["integration"] =
                trajectory_json(r.trajectory, cfg.integrator(r.t_final, r.t_final / 3000.0));
            break;
        }
        case Scenario::GenericPair: {
            const PairReport r = run_generic_pair(cfg);
            write_trajectory(cfg, r.trajectory, name + "_trajectory.csv");
            auto out = open_out(cfg, name + "_chord.csv");
            out << "t,chord\n";
            for (std::size_t k = 0; k < r.chord.size(); ++k) {
                out << g17(r.trajectory.times[k]) << ',' << g17(r.chord[k]) << '\n';
            }
            summary["chord_min"] = r.chord_min;
            summary["chord_max"] = r.chord_max;
            summary["U_fit"] = fit_json(r.U_fit);
            summary["turning_times"] = r.turning_times;
            summary["measured_period"] = finite_or_null(r.measured_period);
            summary["drift"] = drift_json(r.drift);
            summary["integration"] = trajectory_json(r.trajectory, cfg.integrator(default_t_final(cfg), 0.01));
            break;
        }
        case Scenario::ReducedCompare: {
            const ReducedCompareReport r = run_reduced_compare(cfg);
            write_trajectory(cfg, r.full.trajectory, name + "_trajectory.csv");
            auto out = open_out(cfg, name + "_reduced.csv");
            write_reduced_csv(out, r.reduced);
            summary["E"] = r.constants.E;
            summary["J0"] = r.constants.J0;
            summary["C_E"] = r.constants.C_E;
            summary["turning_points"] = {r.reduced.window.lo, r.reduced.window.hi};
            summary["reduced_turning_times"] = r.reduced.turning_times;
            summary["full_turning_times"] = r.full.turning_times;
            summary["measured_period"] = finite_or_null(r.full.measured_period);
            summary["quadrature_period"] = r.quadrature_period;
            summary["period_relative_error"] = finite_or_null(r.period_relative_error);
            summary["rate_mismatch"] = r.rate_mismatch;
            summary["drift_rate_mismatch"] = r.drift_rate_mismatch;
            summary["U_mismatch"] = r.U_mismatch;
            summary["cos_mismatch"] = r.cos_mismatch;
            summary["dv_mismatch"] = r.dv_mismatch;
            summary["drift"] = drift_json(r.full.drift);
            summary["integration"] =
                trajectory_json(r.full.trajectory, cfg.integrator(default_t_final(cfg), 0.01));
            break;
        }
        case Scenario::Cluster: {
            const ClusterDiagnostics d = run_cluster(cfg);
            write_trajectory(cfg, d.trajectory, name + "_trajectory.csv");
            auto out = open_out(cfg, name + "_diagnostics.csv");
            out << "t,Uc,Vc,mean_chord\n";
            for (std::size_t k = 0; k < d.Uc_series.size(); ++k) {
                out << g17(d.trajectory.times[k]) << ',' << g17(d.Uc_series[k]) << ','
                    << g17(d.Vc_series[k]) << ',' << g17(d.mean_chord_series[k]) << '\n';
            }
            double vc_drift = 0.0;
            double chord_ratio = 0.0;
            for (std::size_t k = 0; k < d.Vc_series.size(); ++k) {
                vc_drift = std::max(vc_drift, std::abs(d.Vc_series[k] - d.Vc_series.front()));
                chord_ratio = std::max(chord_ratio, d.mean_chord_series[k] / d.mean_chord_series.front());
            }
            const double excursion = std::abs(d.Uc_series.back() - d.Uc_series.front());
            summary["n"] = cfg.n_vortices;
            summary["center"] = {cfg.uc, cfg.vc};
            summary["spread"] = {cfg.eps_u, cfg.eps_v};
            summary["redraws"] = d.redraws;
            summary["Omega_eff"] = d.Omega_eff;
            summary["Uc_fit"] = fit_json(d.Uc_fit);
            summary["Uc_excursion"] = excursion;
            summary["Uc_rms_fraction"] = excursion > 0.0 ? d.Uc_fit.rms_residual / excursion : kNaN;
            summary["max_Vc_drift"] = vc_drift;
            summary["max_chord_ratio"] = chord_ratio;
            summary["drift"] = drift_json(d.drift);
            summary["integration"] = trajectory_json(d.trajectory, cfg.integrator(default_t_final(cfg), 0.05));
            if (cfg.cluster_control) {
                const ClusterDiagnostics c = run_cluster_control(cfg);
                summary["control"] = {{"Vc", cfg.control_vc},
                                      {"Omega_eff", c.Omega_eff},
                                      {"Uc_fit", fit_json(c.Uc_fit)},
                                      {"drift", drift_json(c.drift)}};
                summary["Omega_eff_ratio"] =
                    c.Omega_eff != 0.0 ? finite_or_null(std::abs(d.Omega_eff / c.Omega_eff)) : json(nullptr);
            }
            break;
        }
        case Scenario::OmegaProfile: {
            const ProfileReport r = run_omega_profile(cfg);
            auto out = open_out(cfg, name + "_table.csv");
            out << "V,Omega,Omega_curvature,K,K_prime\n";
            for (const auto& row : r.rows) {
                out << g17(row.V) << ',' << g17(row.Omega) << ',' << g17(row.Omega_curvature) << ','
                    << g17(row.K) << ',' << g17(row.K_prime) << '\n';
            }
            summary["argmax"] = r.argmax;
            summary["v_star"] = r.v_star;
            summary["argmax_deviation"] = r.argmax_deviation;
            summary["max_identity_error"] = r.max_identity_error;
            summary["rows"] = r.rows.size();
            break;
        }
    }

    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    summary["wall_time_s"] = wall;
    auto out = open_out(cfg, name + "_summary.json");
    out << summary.dump(2) << '\n';
    return summary;
}

}  // namespace catvortex
