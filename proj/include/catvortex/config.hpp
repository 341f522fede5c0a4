#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <string_view>

#include "catvortex/geometry.hpp"
#include "catvortex/integrator.hpp"

namespace catvortex {

enum class Scenario { Rigid, Instability, GenericPair, ReducedCompare, Cluster, OmegaProfile };

/// CLI subcommand name: rigid, instability, pair, reduce, cluster, profile.
std::string_view command_name(Scenario s);
/// Accepts the subcommand names and the long forms generic_pair,
/// reduced_compare and omega_profile.
Scenario parse_scenario(std::string_view name);

struct ScenarioConfig {
    Scenario scenario = Scenario::Rigid;
    CatenoidParams params;
    double gamma = 1.0;

    // symmetric pair (rigid, instability)
    double v0 = 0.5;
    double eta0 = 1e-6;

    // generic pair (pair, reduce)
    double u1 = 0.0;
    double v1 = 0.0;
    double u2 = kPi / 3.0;
    double v2 = kPi / 4.0;

    // cluster
    int n_vortices = 10;
    double uc = 0.0;
    double vc = 0.7;
    double eps_u = 0.12;
    double eps_v = 0.12;
    bool cluster_control = true;
    double control_vc = 0.0;
    std::optional<std::uint64_t> seed;

    // omega profile
    double v_min = -3.0;
    double v_max = 3.0;
    double v_step = 1e-3;

    /// t_final and sample_dt stay unset until resolved per scenario.
    std::optional<double> t_final;
    std::optional<double> sample_dt;
    double rel_tol = 1e-12;
    double abs_tol = 1e-12;
    double max_step = std::numeric_limits<double>::infinity();

    std::filesystem::path output_dir = ".";

    /// Throws ConfigError when the configuration is inconsistent.
    void validate() const;

    /// Integrator settings with the given scenario-specific defaults filled in.
    IntegratorSettings integrator(double default_t_final, double default_sample_dt) const;
};

/// Defaults for a scenario (cluster gets the default seed).
ScenarioConfig default_config(Scenario s);

inline constexpr std::uint64_t kDefaultClusterSeed = 20240607;

/// Sets one `key = value` entry. Unknown keys and malformed values throw ConfigError.
void apply_setting(ScenarioConfig& cfg, std::string_view key, std::string_view value);

/// Reads flat `key = value` lines; `#` starts a comment. A `scenario` key, if
/// present, must agree with cfg.scenario.
void read_config(std::istream& is, ScenarioConfig& cfg);
void read_config_file(const std::filesystem::path& path, ScenarioConfig& cfg);

}  // namespace catvortex
