#pragma once

// Orchestration behind the CLI subcommands. Every command writes its files
// into the configured output directory and finishes with manifest.json.

#include "cavity/config.hpp"

#include <functional>
#include <json.hpp>
#include <string>
#include <vector>

namespace cavity::app {

inline constexpr const char* kEngineVersion = "1.0.0";

struct FileEntry {
    std::string name;
    std::size_t rows = 0;
};

struct RunManifest {
    std::string command;
    std::map<std::string, std::string> config;
    std::string engine_version = kEngineVersion;
    double wall_clock_seconds = 0.0;
    std::vector<FileEntry> files;
    nlohmann::json metrics = nlohmann::json::object();
    std::vector<std::string> warnings;

    nlohmann::json to_json() const;
};

RunManifest cmd_simulate(const RunConfig& config);
RunManifest cmd_scan_band(const RunConfig& config);
RunManifest cmd_trajectory(const RunConfig& config);

struct VerifyOptions {
    double inject_relative_error = 0.0; // perturbs every oracle value
    std::function<void(const std::string&)> sink;
};

/// Oracle-vs-engine cross checks. Returns the number of failed checks.
int cmd_verify(const VerifyOptions& options);

/// Fixed CSV number format: 17 significant digits, round-trips doubles.
std::string format_number(double v);

struct EnergyFit {
    std::string model; // "exponential" | "quadratic"
    double a = 0.0;    // exponential: log-amplitude; quadratic: constant
    double b = 0.0;    // exponential: rate per period; quadratic: n^2 coefficient
    double residual = 0.0; // max relative deviation over the fitted points
};

/// Least-squares fits of E(n) to exp(a + b n) and a + b n^2; returns the one
/// with smaller residual (exponential only when every E > 0).
EnergyFit fit_energy(const std::vector<double>& n, const std::vector<double>& energy);
EnergyFit fit_quadratic(const std::vector<double>& n, const std::vector<double>& energy);
EnergyFit fit_exponential(const std::vector<double>& n, const std::vector<double>& energy);

} // namespace cavity::app
