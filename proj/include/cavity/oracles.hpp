#pragma once

// Closed-form results for the sinusoidal and Law-Wu cavities. These serve as
// independent references for the generic engine.

#include <cstddef>
#include <optional>
#include <vector>

namespace cavity::oracles {

struct SinusoidalForms {
    double length = 1.0;
    double amplitude = 0.01;
    int order = 1;
    double detuning = 0.0; // absolute delta omega; omega = omega_N + detuning

    double omega() const noexcept;
};

struct StartingPoints {
    std::vector<double> positive;
    std::vector<double> negative;
};

/// tau_{+m} = (-N + 2m + 1) L/N and tau_{-m} = (-N + 2m) L/N, resonant only.
StartingPoints sin_starting_points(const SinusoidalForms& forms);

/// Per-bounce Doppler parameter q = omega dL, or sqrt((omega dL)^2 - (L dw)^2)
/// off resonance. Throws DomainError outside the band.
double sin_band_parameter(const SinusoidalForms& forms);

/// D_n at a positive (sign = +1) or negative (sign = -1) starting point.
double sin_doppler(const SinusoidalForms& forms, std::size_t n, int sign = +1);

/// Cumulative anomaly at tau_{+m} after n bounces.
double sin_anomaly(const SinusoidalForms& forms, std::size_t n);

/// rho_seed(tau+) + A_inf(tau+) for the static-start vacuum.
double sin_growth_coefficient(const SinusoidalForms& forms);

struct LawWuForms {
    double length = 1.0;
    double amplitude = 0.1;
    int order = 2;

    double omega() const noexcept;
    double tan_half() const noexcept; // tan(omega_N dL / 2)
};

/// Exact billiard function, continuous increasing branch.
double lawwu_billiard(const LawWuForms& forms, double tau);
double lawwu_billiard_inverse(const LawWuForms& forms, double tau);

double lawwu_doppler(const LawWuForms& forms, double tau, std::size_t n);
double lawwu_anomaly(const LawWuForms& forms, double tau, std::size_t n);

/// Quantum density at tau, where n is the number of round trips separating tau
/// from the seed interval.
double lawwu_rho(const LawWuForms& forms, double tau, std::size_t n);

/// Starting points (-N + 2m) L/N of the marginal periodic paths.
std::vector<double> lawwu_starting_points(const LawWuForms& forms);

} // namespace cavity::oracles
