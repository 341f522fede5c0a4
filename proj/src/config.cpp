#include "catvortex/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <string>

#include "catvortex/errors.hpp"

namespace catvortex {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

double to_double(std::string_view key, std::string_view value) {
    const std::string text(value);
    std::size_t used = 0;
    double x = 0.0;
    try {
        x = std::stod(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != text.size() || text.empty()) {
        throw ConfigError("value for '" + std::string(key) + "' is not a number: '" + text + "'");
    }
    return x;
}

std::uint64_t to_unsigned(std::string_view key, std::string_view value) {
    std::uint64_t x = 0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), x);
    if (ec != std::errc() || ptr != value.data() + value.size()) {
        throw ConfigError("value for '" + std::string(key) + "' is not an unsigned integer: '" +
                          std::string(value) + "'");
    }
    return x;
}

bool to_bool(std::string_view key, std::string_view value) {
    if (value == "true" || value == "1" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "no") return false;
    throw ConfigError("value for '" + std::string(key) + "' is not a boolean: '" +
                      std::string(value) + "'");
}

}  // namespace

std::string_view command_name(Scenario s) {
    switch (s) {
        case Scenario::Rigid: return "rigid";
        case Scenario::Instability: return "instability";
        case Scenario::GenericPair: return "pair";
        case Scenario::ReducedCompare: return "reduce";
        case Scenario::Cluster: return "cluster";
        case Scenario::OmegaProfile: return "profile";
    }
    return "unknown";
}

Scenario parse_scenario(std::string_view name) {
    if (name == "rigid") return Scenario::Rigid;
    if (name == "instability") return Scenario::Instability;
    if (name == "pair" || name == "generic_pair") return Scenario::GenericPair;
    if (name == "reduce" || name == "reduced_compare") return Scenario::ReducedCompare;
    if (name == "cluster") return Scenario::Cluster;
    if (name == "profile" || name == "omega_profile") return Scenario::OmegaProfile;
    throw ConfigError("unknown scenario '" + std::string(name) + "'");
}

ScenarioConfig default_config(Scenario s) {
    ScenarioConfig cfg;
    cfg.scenario = s;
    if (s == Scenario::Cluster) cfg.seed = kDefaultClusterSeed;
    return cfg;
}

void ScenarioConfig::validate() const {
    if (gamma == 0.0 || !std::isfinite(gamma)) throw ConfigError("gamma must be nonzero and finite");
    if (seed.has_value() != (scenario == Scenario::Cluster)) {
        throw ConfigError(scenario == Scenario::Cluster
                              ? "the cluster scenario needs a seed"
                              : "seed is only meaningful for the cluster scenario");
    }
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) throw ConfigError("tolerances must be positive");
    if (t_final && !(*t_final > 0.0)) throw ConfigError("t_final must be positive");
    if (sample_dt && !(*sample_dt > 0.0)) throw ConfigError("sample_dt must be positive");
    if (t_final && sample_dt && *sample_dt > *t_final) {
        throw ConfigError("sample_dt must not exceed t_final");
    }
    if (scenario == Scenario::Cluster) {
        if (n_vortices < 1) throw ConfigError("cluster needs at least one vortex");
        if (!(eps_u >= 0.0) || !(eps_v >= 0.0)) throw ConfigError("cluster spread must be >= 0");
    }
    if (scenario == Scenario::OmegaProfile && (!(v_step > 0.0) || !(v_max > v_min))) {
        throw ConfigError("profile grid needs v_min < v_max and v_step > 0");
    }
}

IntegratorSettings ScenarioConfig::integrator(double default_t_final,
                                              double default_sample_dt) const {
    IntegratorSettings s;
    s.rel_tol = rel_tol;
    s.abs_tol = abs_tol;
    s.t_final = t_final.value_or(default_t_final);
    s.sample_dt = std::min(sample_dt.value_or(default_sample_dt), s.t_final);
    s.max_step = max_step;
    return s;
}

void apply_setting(ScenarioConfig& cfg, std::string_view key, std::string_view value) {
    value = trim(value);
    auto num = [&] { return to_double(key, value); };
    if (key == "scenario") {
        if (parse_scenario(value) != cfg.scenario) {
            throw ConfigError("config file is for scenario '" + std::string(value) +
                              "' but '" + std::string(command_name(cfg.scenario)) + "' was requested");
        }
    } else if (key == "a") {
        try {
            cfg.params = CatenoidParams(num());
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
    } else if (key == "gamma") {
        cfg.gamma = num();
    } else if (key == "v0") {
        cfg.v0 = num();
    } else if (key == "eta0") {
        cfg.eta0 = num();
    } else if (key == "u1") {
        cfg.u1 = num();
    } else if (key == "v1") {
        cfg.v1 = num();
    } else if (key == "u2") {
        cfg.u2 = num();
    } else if (key == "v2") {
        cfg.v2 = num();
    } else if (key == "n") {
        cfg.n_vortices = static_cast<int>(to_unsigned(key, value));
    } else if (key == "uc") {
        cfg.uc = num();
    } else if (key == "vc") {
        cfg.vc = num();
    } else if (key == "eps_u") {
        cfg.eps_u = num();
    } else if (key == "eps_v") {
        cfg.eps_v = num();
    } else if (key == "cluster_control") {
        cfg.cluster_control = to_bool(key, value);
    } else if (key == "control_vc") {
        cfg.control_vc = num();
    } else if (key == "seed") {
        cfg.seed = to_unsigned(key, value);
    } else if (key == "v_min") {
        cfg.v_min = num();
    } else if (key == "v_max") {
        cfg.v_max = num();
    } else if (key == "v_step") {
        cfg.v_step = num();
    } else if (key == "t_final") {
        cfg.t_final = num();
    } else if (key == "sample_dt") {
        cfg.sample_dt = num();
    } else if (key == "rtol") {
        cfg.rel_tol = num();
    } else if (key == "atol") {
        cfg.abs_tol = num();
    } else if (key == "max_step") {
        cfg.max_step = num();
    } else if (key == "out") {
        cfg.output_dir = std::string(value);
    } else {
        throw ConfigError("unknown config key '" + std::string(key) + "'");
    }
}

void read_config(std::istream& is, ScenarioConfig& cfg) {
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        std::string_view view(line);
        if (const auto hash = view.find('#'); hash != std::string_view::npos) {
            view = view.substr(0, hash);
        }
        view = trim(view);
        if (view.empty()) continue;
        const auto eq = view.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
        }
        const auto key = trim(view.substr(0, eq));
        if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
        apply_setting(cfg, key, view.substr(eq + 1));
    }
}

void read_config_file(const std::filesystem::path& path, ScenarioConfig& cfg) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
    read_config(in, cfg);
}

}  // namespace catvortex
