// cavity-billiard: command-line front end over the C interface.
//
// Exit codes: 0 ok, 1 configuration error, 2 compute error, 3 verification
// failure.

#include "cavity/cavity.h"

#include <CLI11.hpp>

#include <cstdio>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace {

enum Exit { kOk = 0, kConfig = 1, kCompute = 2, kVerify = 3 };

struct Overrides {
    std::string config_file;
    std::vector<std::pair<std::string, std::string>> values; // in flag order
};

int exit_code(cb_status s) {
    switch (s) {
    case CB_OK: return kOk;
    case CB_ERR_CONFIG:
    case CB_ERR_INVALID_ARGUMENT: return kConfig;
    case CB_ERR_VERIFY: return kVerify;
    default: return kCompute;
    }
}

int report(cb_status s) {
    std::fprintf(stderr, "cavity-billiard: %s: %s\n", cb_status_string(s), cb_last_error());
    return exit_code(s);
}

/// Registers a flag that becomes a config override "key = value".
void add_override(CLI::App* app, Overrides& ov, const std::string& flag, const std::string& key,
                  const std::string& help) {
    app->add_option_function<std::string>(
        flag, [&ov, key](const std::string& v) { ov.values.emplace_back(key, v); }, help);
}

void add_common(CLI::App* app, Overrides& ov) {
    app->add_option("--config", ov.config_file, "INI-style run configuration file");
    add_override(app, ov, "--out", "run.out", "output directory");
    add_override(app, ov, "--traj", "trajectory.kind", "static | sin | lawwu | file:PATH");
    add_override(app, ov, "--L0", "trajectory.L0", "unperturbed cavity length");
    add_override(app, ov, "--dL", "trajectory.dL", "mirror amplitude");
    add_override(app, ov, "--N", "trajectory.N", "resonance order");
    add_override(app, ov, "--domega", "trajectory.domega", "detuning from omega_N (sin)");
}

int run(const Overrides& ov, cb_status (*command)(const cb_config*, char**)) {
    cb_config* cfg = nullptr;
    if (cb_status s = cb_config_new(&cfg); s != CB_OK)
        return report(s);
    cb_status s = CB_OK;
    if (!ov.config_file.empty())
        s = cb_config_load(cfg, ov.config_file.c_str());
    for (const auto& [key, value] : ov.values) {
        if (s != CB_OK)
            break;
        s = cb_config_set(cfg, key.c_str(), value.c_str());
    }
    char* manifest = nullptr;
    if (s == CB_OK)
        s = command(cfg, &manifest);
    cb_config_free(cfg);
    if (s != CB_OK)
        return report(s);
    std::printf("%s\n", manifest);
    cb_string_free(manifest);
    return kOk;
}

void print_line(const char* line, void*) { std::printf("%s\n", line); }

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Light paths and field energy in a one-dimensional cavity with a moving mirror"};
    app.set_version_flag("--version", std::string(cb_version()));
    app.require_subcommand(1);

    Overrides sim, band, traj;

    auto* simulate = app.add_subcommand("simulate", "density snapshots, energy curve and peaks");
    add_common(simulate, sim);
    add_override(simulate, sim, "--mode", "run.mode", "classical | quantum");
    add_override(simulate, sim, "--periods", "run.periods", "number of round trips");
    add_override(simulate, sim, "--seed", "seed.kind", "default | uniform | file");
    add_override(simulate, sim, "--seed-value", "seed.value", "uniform seed density");
    add_override(simulate, sim, "--seed-file", "seed.file", "two-column (tau, rho) seed table");
    add_override(simulate, sim, "--snapshot-every", "output.snapshot_every",
                 "round trips between density snapshots");
    add_override(simulate, sim, "--points", "output.density_points", "samples per snapshot");

    auto* scan = app.add_subcommand("scan-band", "growth exponent across a frequency range");
    add_common(scan, band);
    add_override(scan, band, "--omega-min", "scan.omega_min", "lowest mirror frequency");
    add_override(scan, band, "--omega-max", "scan.omega_max", "highest mirror frequency");
    add_override(scan, band, "--span", "scan.detuning_span",
                 "default range |dw/w| <= span around omega_N");
    add_override(scan, band, "--samples", "scan.samples", "frequency samples");

    auto* trajectory = app.add_subcommand("trajectory", "bounce table of a single light path");
    add_common(trajectory, traj);
    add_override(trajectory, traj, "--tau0", "run.tau0", "starting time at the static mirror");
    add_override(trajectory, traj, "--n", "run.n", "number of bounces");

    double inject = 0.0;
    auto* verify = app.add_subcommand("verify", "closed-form cross checks of the engine");
    verify->add_option("--inject-error", inject,
                       "relative error added to every reference value (harness self-test)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfig;
    }

    if (*simulate)
        return run(sim, cb_run_simulate);
    if (*scan)
        return run(band, cb_run_scan_band);
    if (*trajectory)
        return run(traj, cb_run_trajectory);

    int failures = 0;
    const cb_status s = cb_run_verify(inject, print_line, nullptr, &failures);
    if (s == CB_ERR_VERIFY) {
        std::printf("%d check(s) failed\n", failures);
        return kVerify;
    }
    if (s != CB_OK)
        return report(s);
    std::printf("all checks passed\n");
    return kOk;
}
