#pragma once

// Quantum vacuum in the vibrating cavity. The renormalised density
//   rho = -(pi/48) R'^2 - (1/24pi) S[R]
// follows from Moore's phase function, R(tau) - R(f(tau)) = 2, and obeys
//   rho(T_n(s)) = [rho(s) + A_n(s)] D_n(s)^2,
//   A_n(s) = -(1/24pi) sum_k D_k(s)^-2 S[f](T_k(s)).
// The anomaly A_n carries all particle production.

#include "cavity/field_classical.hpp"
#include "cavity/resonance.hpp"

#include <functional>
#include <memory>

namespace cavity {

/// Static Casimir density -pi/(48 L^2) of the empty cavity at rest.
double static_vacuum_density(double length) noexcept;

/// Schwarzian derivative of a thrice-differentiable scalar function given as a
/// jet-valued callable. Throws DomainError when the first derivative vanishes.
double schwarzian(const std::function<Jet3(double)>& fn, double tau);

struct AnomalyAccumulator {
    double tau = 0.0;
    std::vector<double> values;   // A_k(tau), k = 0..n (A_0 = 0)
    std::vector<double> dopplers; // D_k(tau)
    double direct = 0.0;          // (1/24pi) S[T_n](tau) via jet composition
};

class QuantumProfile {
  public:
    /// Static-start vacuum: seed density -pi/(48 L0^2), seed phase R = tau/L0.
    explicit QuantumProfile(std::shared_ptr<const BilliardMap> map);
    QuantumProfile(std::shared_ptr<const BilliardMap> map, std::function<double(double)> seed_rho);

    const BilliardMap& map() const noexcept { return *map_; }
    double seed_rho(double tau) const { return seed_(tau); }

    void set_peak_seeds(std::vector<double> seeds) { peak_seeds_ = std::move(seeds); }
    void set_quadrature(QuadratureOptions q) { quad_ = q; }

    /// Drop the Schwarzian from the recursion (diagnostic: the remainder is
    /// the classical Doppler recursion applied to the seed).
    void disable_anomaly(bool off = true) noexcept { anomaly_off_ = off; }

    /// R(tau), tau >= -L(0).
    double moore_phase(double tau) const;

    AnomalyAccumulator anomaly_accumulate(double tau, std::size_t n) const;

    double rho_at(double tau) const;
    double energy_density(double t, double x) const;

    /// E(T*_n(tau0)) from the seed interval: integral over [f(tau0), tau0] of
    /// [rho(s) + A_n(s)] D_n(s) ds.
    double total_energy(double tau0, std::size_t n) const;

    /// Same energy by direct quadrature of rho over [T_{n-1}(tau0), T_n(tau0)].
    double total_energy_direct(double tau0, std::size_t n) const;

    /// Direct quadrature of rho over [t - L(t), t + L(t)].
    double total_energy_at(double t) const;

    std::vector<Peak> peak_metrics(double t, PeakOptions options = {}) const;

  private:
    std::shared_ptr<const BilliardMap> map_;
    std::function<double(double)> seed_;
    std::vector<double> peak_seeds_;
    QuadratureOptions quad_{1e-10, 40};
    bool anomaly_off_ = false;
};

struct GrowthCoefficient {
    double value = 0.0;     // rho_seed(tau+) + A_inf(tau+)
    double tail_error = 0.0;
    std::size_t n = 0;
};

/// Coefficient c in rho(T_n(tau+)) ~ c D_n(tau+)^2 for a positive path.
GrowthCoefficient growth_coefficient(const QuantumProfile& profile, const PeriodicTrajectory& path,
                                     std::size_t n_max);

} // namespace cavity
