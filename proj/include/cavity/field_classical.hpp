#pragma once

// Classical cavity field. The field is A(t,x) = phi(t+x) - phi(t-x) with
// phi(tau) = phi(f(tau)), so the density profile rho = phi'^2 obeys
// rho(T_n(tau)) = rho(tau) D_n(tau)^2 and T00(t,x) = rho(t+x) + rho(t-x).

#include "cavity/billiard.hpp"
#include "cavity/quadrature.hpp"

#include <functional>
#include <memory>
#include <span>
#include <vector>

namespace cavity {

/// Density profile on the seed interval [-L(0), L(0)].
class InitialProfile {
  public:
    static InitialProfile uniform(double value);
    static InitialProfile closed_form(std::function<double(double)> fn);
    /// Sampled grid, interpolated by a monotone cubic (no negative overshoot).
    static InitialProfile sampled(std::vector<double> tau, std::vector<double> rho);

    double operator()(double tau) const { return fn_(tau); }
    bool is_uniform() const noexcept { return uniform_; }

  private:
    explicit InitialProfile(std::function<double(double)> fn, bool uniform = false)
        : fn_(std::move(fn)), uniform_(uniform) {}
    std::function<double(double)> fn_;
    bool uniform_ = false;
};

/// Result of pulling tau back through f until it lands in the seed interval:
/// tau = T_n(sigma).
struct Pullback {
    double sigma = 0.0;
    std::size_t n = 0;
    double doppler = 1.0;     // D_n(sigma)
    double log_doppler = 0.0;
    double anomaly = 0.0;     // A_n(sigma); filled only on request
};

/// Iterate f from tau (>= -L(0)) back into the seed interval.
Pullback pull_back(const BilliardMap& map, double tau, bool with_anomaly = false);

/// Forward images T_k(seed) of each seed that fall inside [a, b], sorted.
std::vector<double> forward_images(const BilliardMap& map, std::span<const double> seeds, double a,
                                   double b);

/// Quadrature breakpoints on [a, b]: forward images of the peak seeds and of
/// the seed-interval edge, where the density jumps by D_1(-L(0))^2.
std::vector<double> energy_breakpoints(const BilliardMap& map, std::span<const double> peak_seeds,
                                       double a, double b);

struct Peak {
    double position = 0.0; // x inside the cavity
    double height = 0.0;
    double width = 0.0;    // full width at half maximum
};

struct PeakOptions {
    std::size_t grid = 2048;             // uniform x samples
    std::size_t seed_grid = 2048;        // forward-mapped seed samples
    double min_prominence = 0.05;        // relative to the snapshot's range
};

class ExtendedProfile {
  public:
    ExtendedProfile(std::shared_ptr<const BilliardMap> map, InitialProfile seed);

    const BilliardMap& map() const noexcept { return *map_; }
    const InitialProfile& seed() const noexcept { return seed_; }

    /// Starting points of positive periodic paths; their forward images mark
    /// where the density concentrates and become quadrature breakpoints.
    void set_peak_seeds(std::vector<double> seeds) { peak_seeds_ = std::move(seeds); }
    std::span<const double> peak_seeds() const noexcept { return peak_seeds_; }

    void set_quadrature(QuadratureOptions q) { quad_ = q; }
    const QuadratureOptions& quadrature() const noexcept { return quad_; }

    double rho_at(double tau) const;
    double energy_density(double t, double x) const;

    /// E(t) = integral of rho over [t - L(t), t + L(t)].
    double total_energy(double t) const;

    /// E(T*_n(tau0)) = integral over [f(tau0), tau0] of rho(s) D_n(s) ds.
    double total_energy_recursive(double tau0, std::size_t n) const;

    std::vector<Peak> peak_metrics(double t, PeakOptions options = {}) const;

  private:
    std::shared_ptr<const BilliardMap> map_;
    InitialProfile seed_;
    std::vector<double> peak_seeds_;
    QuadratureOptions quad_{1e-10, 40};
};

/// Local maxima of a density snapshot g(x) on [0, length], with FWHM.
/// `extra_x` are additional sample positions (e.g. predicted peak locations).
std::vector<Peak> locate_peaks(const std::function<double(double)>& g, double length,
                               std::vector<double> extra_x, const PeakOptions& options);

/// Sample positions x in [0, length] where rays launched from a uniform grid
/// on the seed interval land at time t (dense exactly where peaks form).
std::vector<double> focused_samples(const BilliardMap& map, double t, double length,
                                    std::size_t count);

} // namespace cavity
