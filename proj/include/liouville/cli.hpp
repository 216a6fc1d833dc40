#pragma once

// Batch front-end: flat key = value configuration, scenario setup and the
// simulate / verify / bundle pipelines. Every pipeline writes its artifacts
// into an output directory and returns a process exit code.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "liouville/exact_solution.hpp"
#include "liouville/simulator.hpp"

namespace liouville::cli {

enum ExitCode : int {
    kPass = 0,
    kPropertyFailure = 1,
    kConfigError = 2,
    kBlowup = 3,
};

struct RunConfig {
    double mu = 1.0;
    double k = -4.0 * 3.14159265358979323846;
    double lambda = 0.5;

    double L = 2.0;
    double dx = 1.0 / 32.0;
    double dt = 1.0 / 128.0;
    double t0 = 0.0;
    double t_end = 2.0;

    std::string boundary = "exact";  // exact | sponge
    std::string defect = "backlund"; // backlund | none
    double phi_max = 30.0;
    double sponge_width = 0.25;
    double sponge_strength = 20.0;

    // backlund_pair | cosh_time | static_log | wave | file
    std::string initial = "backlund_pair";
    double omega = 1.0;
    double rapidity = 0.3;
    double x0 = -3.0;
    double amplitude = 0.5;
    double kappa = 3.14159265358979323846;
    std::string initial_file1;  // x,phi,phi_t rows for x in [-L, 0]
    std::string initial_file2;  // x,phi,phi_t rows for x in [0, L]
    // backlund_pair with a defect: phi2 on the first slice from the
    // transformation (generated) or sampled from the exact partner (oracle)
    std::string phi2_source = "generated";

    double a = -0.25;  // overlap edges for the patch connections
    double b = 0.25;

    double r = 0.5;
    int cover_points = 256;
    double smoothness_threshold = 100.0;
    double bundle_offset = 0.0;

    double backlund_extent = 1.0;
    int gauss_trials = 20;
    int gauge_trials = 50;

    std::uint64_t seed = 1;
};

/// Applies one key = value assignment. origin names the source in errors
/// (for example "config.txt:12" or "--set"). Throws ConfigError.
void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value, const std::string& origin);

/// Reads a flat key = value file; '#' starts a comment. Throws ConfigError.
void load_config_file(RunConfig& cfg, const std::filesystem::path& path);

/// "key=value" from the command line. Throws ConfigError.
void apply_override(RunConfig& cfg, const std::string& assignment);

/// Checks the invariants shared by every subcommand. Throws ConfigError.
void validate(const RunConfig& cfg);

/// Point count per half-line for spacing dx; throws ConfigError unless
/// L / dx is an integer.
std::size_t half_line_points(double L, double dx);

/// Initial state, step configuration and (when available) the oracles of
/// both half-lines, for spacing dx starting at t0.
struct Scenario {
    FieldState state;
    StepConfig step;
    std::optional<ExactSolution> oracle1, oracle2;
};

Scenario make_scenario(const RunConfig& cfg, double dx, double t0);

int run_simulate(const RunConfig& cfg, const std::filesystem::path& out);
int run_verify_gauge(const RunConfig& cfg, const std::filesystem::path& out);
int run_verify_charges(const RunConfig& cfg, const std::filesystem::path& out);
int run_verify_appendix_a(const RunConfig& cfg, const std::filesystem::path& out);
int run_verify_appendix_b(const RunConfig& cfg, const std::filesystem::path& out);
int run_backlund(const RunConfig& cfg, const std::filesystem::path& out);
int run_bundle(const RunConfig& cfg, const std::filesystem::path& out);

/// Full command line: subcommand plus --config, --set, --out, --seed.
int run(int argc, char** argv);

}  // namespace liouville::cli
