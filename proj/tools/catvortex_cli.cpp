#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "catvortex/config.hpp"
#include "catvortex/errors.hpp"
#include "catvortex/experiments.hpp"

using namespace catvortex;

namespace {

struct Overrides {
    std::string config;
    std::optional<double> a, gamma, v0, eta0, t_final, rtol, atol;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
};

void add_options(CLI::App* sub, Overrides& o) {
    sub->add_option("--config", o.config, "key = value configuration file")->check(CLI::ExistingFile);
    sub->add_option("--a", o.a, "throat radius");
    sub->add_option("--gamma", o.gamma, "vortex circulation");
    sub->add_option("--v0", o.v0, "latitude of the symmetric pair");
    sub->add_option("--eta0", o.eta0, "initial latitude splitting");
    sub->add_option("--t-final", o.t_final, "integration horizon");
    sub->add_option("--rtol", o.rtol, "relative tolerance");
    sub->add_option("--atol", o.atol, "absolute tolerance");
    sub->add_option("--seed", o.seed, "cluster RNG seed");
    sub->add_option("--out", o.out, "output directory");
}

ScenarioConfig build_config(Scenario s, const Overrides& o) {
    ScenarioConfig cfg = default_config(s);
    if (!o.config.empty()) read_config_file(o.config, cfg);
    if (o.a) cfg.params = CatenoidParams(*o.a);
    if (o.gamma) cfg.gamma = *o.gamma;
    if (o.v0) cfg.v0 = *o.v0;
    if (o.eta0) cfg.eta0 = *o.eta0;
    if (o.t_final) cfg.t_final = *o.t_final;
    if (o.rtol) cfg.rel_tol = *o.rtol;
    if (o.atol) cfg.abs_tol = *o.atol;
    if (o.seed) {
        if (s != Scenario::Cluster) throw ConfigError("--seed applies to the cluster scenario only");
        cfg.seed = *o.seed;
    }
    if (o.out) cfg.output_dir = *o.out;
    return cfg;
}

int report_error(std::string_view kind, std::string_view message, int code) {
    nlohmann::json rec = {{"status", "error"}, {"kind", kind}, {"message", message}};
    std::cerr << rec.dump() << '\n';
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Point-vortex dynamics on the catenoid"};
    app.require_subcommand(1);

    Overrides o;
    const Scenario scenarios[] = {Scenario::Rigid,          Scenario::Instability,
                                  Scenario::GenericPair,    Scenario::ReducedCompare,
                                  Scenario::Cluster,        Scenario::OmegaProfile};
    std::optional<Scenario> chosen;
    for (Scenario s : scenarios) {
        auto* sub = app.add_subcommand(std::string(command_name(s)));
        add_options(sub, o);
        sub->callback([&chosen, s] { chosen = s; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return report_error("UsageError", e.what(), 2);
    }

    try {
        const ScenarioConfig cfg = build_config(*chosen, o);
        const nlohmann::json summary = run_scenario(cfg);
        nlohmann::json ok = {{"status", "ok"},
                             {"scenario", summary["scenario"]},
                             {"summary", (cfg.output_dir / (summary["scenario"].get<std::string>() +
                                                            "_summary.json")).string()}};
        std::cout << ok.dump() << '\n';
        return 0;
    } catch (const ConfigError& e) {
        return report_error(e.kind(), e.what(), 2);
    } catch (const VortexError& e) {
        return report_error(e.kind(), e.what(), 1);
    } catch (const std::invalid_argument& e) {
        return report_error("InvalidArgument", e.what(), 2);
    } catch (const std::exception& e) {
        return report_error("Error", e.what(), 1);
    }
}
