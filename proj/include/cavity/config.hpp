#pragma once

// Run configuration: INI-style sections, every key validated; command-line
// flags override file values.

#include "cavity/trajectory.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace cavity::app {

enum class Mode { Classical, Quantum };

struct TrajectorySpec {
    std::string kind = "sin"; // static | sin | lawwu | file
    double length = 1.0;
    double amplitude = 0.01;
    int order = 1;
    double detuning = 0.0;    // absolute delta omega for sin
    std::filesystem::path file;
};

struct SeedSpec {
    std::string kind = "default"; // default | uniform | file
    double value = 1.0;
    std::filesystem::path file;
};

struct RunConfig {
    TrajectorySpec trajectory;
    Mode mode = Mode::Classical;
    SeedSpec seed;
    std::size_t periods = 10;
    std::size_t snapshot_every = 0;  // 0: periods / 5, at least 1
    double snapshot_phase = 0.125;   // fraction of a round trip
    std::size_t density_points = 1001;
    std::filesystem::path out_dir = "out";
    std::optional<double> root_tolerance;
    double quad_tolerance = 1e-10;
    // trajectory subcommand
    std::optional<double> tau0;
    std::size_t bounces = 10;
    // scan-band subcommand
    std::optional<double> omega_min, omega_max;
    double detuning_span = 0.03;     // default scan: |dw/w| <= span around omega_N
    std::size_t samples = 200;

    /// Throws ConfigError on unknown section/key or malformed value.
    void set(const std::string& key, const std::string& value);
    void load_file(const std::filesystem::path& path);

    /// Checks trajectory preconditions before any compute.
    void validate() const;
    MirrorTrajectory build_trajectory() const;

    /// Flat key -> value echo used in manifests.
    std::map<std::string, std::string> echo() const;

  private:
    std::map<std::string, std::string> raw_;
};

/// Keys accepted by RunConfig::set, in "section.key" form.
const std::vector<std::string>& known_keys();

} // namespace cavity::app
