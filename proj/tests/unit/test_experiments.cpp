#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "catvortex/errors.hpp"
#include "catvortex/experiments.hpp"

using namespace catvortex;

namespace {

std::filesystem::path scratch(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("catvortex_unit_" + name);
    std::filesystem::remove_all(dir);
    return dir;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_SUITE("experiments") {

TEST_CASE("least-squares line") {
    const std::vector<double> t{0, 1, 2, 3, 4};
    const std::vector<double> y{1, 3, 5, 7, 9};
    const FitResult f = linear_fit(t, y);
    CHECK(f.slope == doctest::Approx(2.0));
    CHECK(f.intercept == doctest::Approx(1.0));
    CHECK(f.rms_residual < 1e-15);
    CHECK(f.t_lo == 0.0);
    CHECK(f.t_hi == 4.0);
    CHECK(f.samples == 5);
    const FitResult g = linear_fit(std::vector<double>{0, 1, 2}, std::vector<double>{0, 1, 0});
    CHECK(g.slope == doctest::Approx(0.0));
    CHECK(g.rms_residual == doctest::Approx(std::sqrt(2.0 / 9.0)));
    CHECK_THROWS_AS(linear_fit(std::vector<double>{1}, std::vector<double>{1}), WindowEmpty);
    CHECK_THROWS_AS(linear_fit(std::vector<double>{1, 1}, std::vector<double>{1, 2}), WindowEmpty);
    CHECK_THROWS_AS(linear_fit(std::vector<double>{1, 2}, std::vector<double>{1}), std::invalid_argument);
}

TEST_CASE("default horizons") {
    CHECK(default_t_final(default_config(Scenario::Rigid)) == 50.0);
    CHECK(default_t_final(default_config(Scenario::GenericPair)) == 40.0);
    CHECK(default_t_final(default_config(Scenario::ReducedCompare)) == 40.0);
    CHECK(default_t_final(default_config(Scenario::Cluster)) == 60.0);
    const ScenarioConfig inst = default_config(Scenario::Instability);
    CHECK(default_t_final(inst) == doctest::Approx(6.0 / stability(0.5, 1.0, inst.params).lambda));
}

TEST_CASE("rigid rotation") {
    ScenarioConfig cfg = default_config(Scenario::Rigid);
    const RigidReport r = run_rigid(cfg);
    CHECK(r.max_dv_deviation <= 1e-10);
    CHECK(r.max_du_deviation <= 1e-10);
    CHECK(r.max_phase_deviation <= 1e-8);
    CHECK(r.drift.max_dH <= 1e-12);

    cfg.v0 = 0.0;
    const RigidReport still = run_rigid(cfg);
    CHECK(still.orbit.Omega == 0.0);
    for (const auto& s : still.trajectory.states) {
        CHECK(std::abs(s.positions[0].u - kPi / 2) <= 1e-10);
        CHECK(std::abs(s.positions[0].v) <= 1e-10);
    }
    cfg.v0 = -0.5;
    const RigidReport south = run_rigid(cfg);
    CHECK(south.orbit.Omega == doctest::Approx(-omega_symmetric(0.5, 1.0, cfg.params)));
    CHECK(south.max_phase_deviation <= 1e-8);
}

TEST_CASE("instability growth rate") {
    ScenarioConfig cfg = default_config(Scenario::Instability);
    const InstabilityReport r = run_instability(cfg);
    CHECK(r.relative_error < 1e-3);
    CHECK(r.ratio_min >= 0.99);
    CHECK(r.ratio_max <= 1.01);
    CHECK(r.drift.max_dH <= 1e-12);
    CHECK(r.drift.max_dJ <= 1e-12);
    CHECK(r.fit.t_lo < r.fit.t_hi);
    CHECK(r.fit.rms_residual >= 0.0);
    for (double V0 : {0.2, 2.0}) {
        cfg.v0 = V0;
        cfg.eta0 = 1e-4;
        CHECK_NOTHROW(run_instability(cfg));
    }
    cfg.v0 = 0.0;
    CHECK_THROWS_AS(run_instability(cfg), WindowEmpty);
    cfg.v0 = 0.5;
    cfg.eta0 = 0.0;
    CHECK_THROWS_AS(run_instability(cfg), WindowEmpty);
    cfg.eta0 = 1e-6;
    cfg.t_final = 10.0;
    CHECK_THROWS_AS(run_instability(cfg), WindowEmpty);
}

TEST_CASE("generic pair") {
    const PairReport r = run_generic_pair(default_config(Scenario::GenericPair));
    CHECK(r.drift.max_dH <= 1e-12);
    CHECK(r.drift.max_dJ <= 1e-10);
    CHECK(r.chord_min > 1.3);
    CHECK(r.chord_max < 1.5);
    CHECK(r.chord.size() == r.trajectory.size());
    CHECK(r.U_fit.slope > 0.0);
    REQUIRE(r.turning_times.size() == 2);
    CHECK(r.measured_period == doctest::Approx(53.3095099142).epsilon(1e-9));
}

TEST_CASE("reduced comparison") {
    const ReducedCompareReport r = run_reduced_compare(default_config(Scenario::ReducedCompare));
    CHECK(r.rate_mismatch <= 1e-8);
    CHECK(r.U_mismatch <= 1e-4);
    CHECK(r.cos_mismatch <= 1e-8);
    CHECK(r.drift_rate_mismatch <= 1e-10);
    CHECK(r.dv_mismatch <= 1e-6);
    CHECK(r.period_relative_error <= 1e-6);
    CHECK(r.reduced.turning_times.size() == r.full.turning_times.size());
}

TEST_CASE("cluster draw") {
    ScenarioConfig cfg = default_config(Scenario::Cluster);
    int redraws = -1;
    const VortexSystem a = draw_cluster(cfg, cfg.vc, &redraws);
    const VortexSystem b = draw_cluster(cfg, cfg.vc);
    CHECK(redraws == 0);
    REQUIRE(a.size() == 10);
    CHECK(a.positions == b.positions);
    for (const auto& x : a.positions) {
        CHECK(std::abs(x.u - cfg.uc) <= cfg.eps_u);
        CHECK(std::abs(x.v - cfg.vc) <= cfg.eps_v);
    }
    const VortexSystem c = draw_cluster(cfg, 0.0);
    for (std::size_t i = 0; i < 10; ++i) {
        CHECK(c.positions[i].u == a.positions[i].u);
        CHECK(c.positions[i].v == doctest::Approx(a.positions[i].v - cfg.vc).epsilon(1e-15));
    }
    cfg.seed = 7;
    CHECK(draw_cluster(cfg, cfg.vc).positions != a.positions);
    cfg.eps_u = 0.0;
    cfg.eps_v = 0.0;
    CHECK_THROWS_AS(draw_cluster(cfg, cfg.vc), CollisionError);
}

TEST_CASE("small cluster diagnostics") {
    ScenarioConfig cfg = default_config(Scenario::Cluster);
    cfg.n_vortices = 3;
    cfg.eps_u = 0.3;
    cfg.eps_v = 0.3;
    cfg.t_final = 5.0;
    const ClusterDiagnostics d = run_cluster(cfg);
    CHECK(d.Uc_series.size() == d.trajectory.size());
    CHECK(d.Vc_series.size() == d.trajectory.size());
    CHECK(d.mean_chord_series.size() == d.trajectory.size());
    CHECK(d.Omega_eff == d.Uc_fit.slope);
    CHECK(d.Omega_eff > 0.0);
    const ClusterDiagnostics c = run_cluster_control(cfg);
    CHECK(std::abs(c.Omega_eff) < std::abs(d.Omega_eff));
}

TEST_CASE("rotation-rate profile") {
    const ProfileReport r = run_omega_profile(default_config(Scenario::OmegaProfile));
    CHECK(r.rows.size() == 6001);
    CHECK(r.argmax_deviation <= 1e-3);
    CHECK(r.max_identity_error <= 1e-13);
    bool has_zero = false;
    for (const auto& row : r.rows) {
        if (row.V == 0.0) {
            has_zero = true;
            CHECK(row.Omega == 0.0);
            CHECK(row.K == -1.0);
        }
    }
    CHECK(has_zero);
    ScenarioConfig neg = default_config(Scenario::OmegaProfile);
    neg.gamma = -1.0;
    CHECK(run_omega_profile(neg).argmax_deviation <= 1e-3);
}

TEST_CASE("scenario outputs") {
    ScenarioConfig cfg = default_config(Scenario::GenericPair);
    cfg.output_dir = scratch("pair");
    cfg.t_final = 2.0;
    const auto summary = run_scenario(cfg);
    CHECK(summary["scenario"] == "pair");
    CHECK(summary.contains("wall_time_s"));
    CHECK(summary["drift"].contains("max_dH"));
    CHECK(summary["drift"].contains("max_dJ"));
    CHECK(summary["U_fit"].contains("rms_residual"));
    CHECK(std::filesystem::exists(cfg.output_dir / "pair_trajectory.csv"));
    CHECK(std::filesystem::exists(cfg.output_dir / "pair_chord.csv"));
    const auto json_text = slurp(cfg.output_dir / "pair_summary.json");
    CHECK(nlohmann::json::parse(json_text)["settings"]["negative_gamma"] == false);

    ScenarioConfig red = default_config(Scenario::ReducedCompare);
    red.output_dir = scratch("reduce");
    red.t_final = 2.0;
    const auto rs = run_scenario(red);
    CHECK(rs.contains("E"));
    CHECK(rs.contains("J0"));
    CHECK(rs["turning_points"].size() == 2);
    CHECK(slurp(red.output_dir / "reduce_reduced.csv").rfind("t,dv,du,V,U_reconstructed,eps\n", 0) == 0);

    ScenarioConfig prof = default_config(Scenario::OmegaProfile);
    prof.output_dir = scratch("profile");
    prof.gamma = -1.0;
    const auto ps = run_scenario(prof);
    CHECK(ps["settings"]["negative_gamma"] == true);
    CHECK(std::filesystem::exists(prof.output_dir / "profile_table.csv"));
}

TEST_CASE("identical configuration gives identical files") {
    ScenarioConfig cfg = default_config(Scenario::Cluster);
    cfg.n_vortices = 4;
    cfg.eps_u = 0.3;
    cfg.eps_v = 0.3;
    cfg.t_final = 1.0;
    cfg.cluster_control = false;
    cfg.output_dir = scratch("det_a");
    run_scenario(cfg);
    const auto first = slurp(cfg.output_dir / "cluster_trajectory.csv");
    cfg.output_dir = scratch("det_b");
    run_scenario(cfg);
    CHECK(first == slurp(cfg.output_dir / "cluster_trajectory.csv"));
    CHECK(!first.empty());
}

}  // TEST_SUITE
