#include <functional>
#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "liouville/cli.hpp"
#include "liouville/errors.hpp"

namespace liouville::cli {

int run(int argc, char** argv) {
    using Pipeline = std::function<int(const RunConfig&, const std::filesystem::path&)>;
    const std::map<std::string, Pipeline> pipelines{
        {"simulate", run_simulate},
        {"verify-gauge", run_verify_gauge},
        {"verify-charges", run_verify_charges},
        {"verify-appendix-a", run_verify_appendix_a},
        {"verify-appendix-b", run_verify_appendix_b},
        {"backlund", run_backlund},
        {"bundle-report", run_bundle},
    };

    CLI::App app{"Liouville field theory with an integrable defect"};
    app.require_subcommand(1, 1);
    std::string config_path, out_dir = "out";
    std::vector<std::string> overrides;
    std::optional<long long> seed;
    app.add_option("--config", config_path, "flat key = value configuration file");
    app.add_option("--set", overrides, "key=value override, applied after --config")->take_all();
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--seed", seed, "seed for randomized property suites");
    for (const auto& [name, fn] : pipelines) app.add_subcommand(name)->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kPass : kConfigError;
    }

    const std::string sub = app.get_subcommands().front()->get_name();
    try {
        RunConfig cfg;
        if (!config_path.empty()) load_config_file(cfg, config_path);
        for (const std::string& o : overrides) apply_override(cfg, o);
        if (seed) {
            if (*seed < 0) throw ConfigError("--seed must be non-negative");
            cfg.seed = static_cast<std::uint64_t>(*seed);
        }
        validate(cfg);
        std::filesystem::create_directories(out_dir);
        return pipelines.at(sub)(cfg, out_dir);
    } catch (const ConfigError& e) {
        std::cerr << sub << ": " << e.what() << '\n';
        return kConfigError;
    } catch (const OutOfRange& e) {
        std::cerr << sub << ": " << e.what() << '\n';
        return kConfigError;
    } catch (const BlowupError& e) {
        std::cerr << sub << ": " << e.what() << '\n';
        return kBlowup;
    } catch (const IntegrationDiverged& e) {
        std::cerr << sub << ": " << e.what() << '\n';
        return kBlowup;
    } catch (const std::exception& e) {
        std::cerr << sub << ": " << e.what() << '\n';
        return kPropertyFailure;
    }
}

}  // namespace liouville::cli
