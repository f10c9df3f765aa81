#pragma once

// Return points of the mirror, periodic light paths, their stability and the
// band structure of the parametric resonance.

#include "cavity/billiard.hpp"

#include <optional>
#include <span>
#include <vector>

namespace cavity {

struct ReturnPoint {
    double tau_star = 0.0;        // bounce instant with L(tau*) = target length
    double mirror_velocity = 0.0; // L'(tau*)
    double doppler = 1.0;         // (1 - L')/(1 + L')
    bool tangential = false;      // L - target has a double root here
};

struct ReturnPointSet {
    /// Mirror sits at the target length identically (static cavity): every
    /// instant is a return point and `points` stays empty.
    bool degenerate = false;
    std::vector<ReturnPoint> points;
};

struct ReturnPointOptions {
    double target_length = 0.0;      // 0 selects the unperturbed length L0
    int samples_per_period = 2000;   // scan density, at least 1000
    double value_tolerance = 1e-10;  // relative to L0, after polish
    double tangency_tolerance = 1e-8;
};

/// All solutions of L(tau*) = target inside [lo, hi).
ReturnPointSet find_return_points(const MirrorTrajectory& trajectory, double lo, double hi,
                                  ReturnPointOptions options = {});

enum class Stability { Positive, Negative, Marginal };

const char* to_string(Stability s) noexcept;

struct PeriodicTrajectory {
    double tau0 = 0.0;
    double period = 0.0;
    Stability sign = Stability::Marginal;
    double per_period_doppler = 1.0; // D_1(tau0)
};

/// Periodic light paths with T_1(tau0) = tau0 + period, tau0 in
/// [-L(0), L(0)). The mirror motion must repeat with a period dividing the
/// round trip 2 L0.
std::vector<PeriodicTrajectory> find_periodic_trajectories(const BilliardMap& map,
                                                           double classification_tolerance = 1e-9);

/// Variant for user-supplied candidate starting points; candidates failing
/// the periodicity condition are dropped.
std::vector<PeriodicTrajectory> classify_candidates(const BilliardMap& map,
                                                    std::span<const double> candidates,
                                                    double period,
                                                    double classification_tolerance = 1e-9);

struct PerturbationReport {
    std::size_t n = 0;
    double eps = 0.0;
    double predicted = 0.0; // first-order prediction
    double measured = 0.0;  // iterated bounce time
    double residual = 0.0;  // |measured - predicted|
};

/// Compares iterated bounce times around a periodic path with the first-order
/// perturbation formulas: T_n(tau+ + e) ~ tau+ + nT + e/D_n(tau+) for positive
/// paths and T_n(tau- + e D_n(tau-)) ~ tau- + nT + e for the others.
PerturbationReport perturbation_check(const BilliardMap& map, const PeriodicTrajectory& path,
                                      double eps, std::size_t n);

struct BandSample {
    double omega = 0.0;
    int order = 0;                       // nearest resonance N
    double detuning_ratio = 0.0;         // (omega - omega_N) / omega
    bool has_return_points = false;
    Stability stability = Stability::Marginal;
    double growth_exponent = 0.0;        // log D_1 of the positive path, or 0
};

struct BandScanResult {
    double length = 0.0;
    double amplitude = 0.0;
    std::vector<BandSample> samples;
};

/// Sinusoidal mirrors L0 + dL sin(omega t) on a uniform omega grid. Growth
/// exponents come from the generic return-point search and bounce iteration.
BandScanResult scan_band(double length, double amplitude, double omega_lo, double omega_hi,
                         std::size_t samples);

/// omega such that (omega - omega_N)/omega = ratio.
double omega_from_detuning_ratio(double length, int order, double ratio);

/// Evaluate one band sample; exposed for tests.
BandSample band_sample(double length, double amplitude, double omega);

} // namespace cavity
