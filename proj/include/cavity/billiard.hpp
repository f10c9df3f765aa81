#pragma once

// Billiard function f(t + L(t)) = t - L(t): maps the arrival time of a ray at
// the static mirror x = 0 to the departure time of the same ray one round trip
// earlier. f' is the retarded Doppler factor (1 - L')/(1 + L') at t*.

#include "cavity/trajectory.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace cavity {

/// Value and first three derivatives of a scalar map at a point.
struct Jet3 {
    double value = 0.0;
    double d1 = 1.0;
    double d2 = 0.0;
    double d3 = 0.0;
};

/// Schwarzian derivative f'''/f' - 3/2 (f''/f')^2 from a 3-jet.
double schwarzian(const Jet3& jet);

/// Jet of the composition outer(inner(x)), given inner's jet at x and outer's
/// jet at inner(x).
Jet3 compose(const Jet3& outer, const Jet3& inner) noexcept;

struct BilliardOptions {
    std::optional<double> root_tolerance; // default 1e-12 * max(1, L0)
    std::optional<double> bracket_step;   // default L0
};

/// Bounce sequence starting from tau0 at the static mirror.
/// Index 0 holds T_0 = tau0 with D_0 = 1; retarded/factor/schwarzian entries at
/// index 0 are unused.
struct BounceSequence {
    double tau0 = 0.0;
    std::vector<double> times;         // T_k
    std::vector<double> retarded;      // T*_k, bounce instants on the moving mirror
    std::vector<double> factors;       // f'(T_k), single-bounce Doppler factor
    std::vector<double> dopplers;      // D_k = prod_{j<=k} f'(T_j)
    std::vector<double> log_dopplers;  // log D_k
    std::vector<double> schwarzians;   // S[f](T_k)

    std::size_t bounces() const noexcept { return times.empty() ? 0 : times.size() - 1; }
};

class BilliardMap {
  public:
    explicit BilliardMap(MirrorTrajectory trajectory, BilliardOptions options = {});

    const MirrorTrajectory& trajectory() const noexcept { return trajectory_; }
    double root_tolerance() const noexcept { return root_tol_; }
    double bracket_step() const noexcept { return bracket_step_; }
    double unperturbed_length() const noexcept { return trajectory_.unperturbed_length(); }

    /// Half-width of the seed interval [-L(0), L(0)].
    double seed_half_width() const noexcept { return seed_half_width_; }

    /// t* with t* + L(t*) = tau. `hint` seeds the Newton iteration.
    double retarded_time(double tau, std::optional<double> hint = std::nullopt) const;

    /// s with s - L(s) = tau: the bounce following departure at tau.
    double advanced_time(double tau, std::optional<double> hint = std::nullopt) const;

    double f(double tau) const;
    double f_inverse(double tau) const;

    /// (f', f'', f''') at tau.
    Jet3 f_jet(double tau) const;
    /// Same, from the bounce instant t* directly (no root solve).
    Jet3 f_jet_at_bounce(double retarded) const;
    /// Jet of f^{-1} at the point f(s) whose bounce instant is s.
    Jet3 f_inverse_jet_at_bounce(double advanced) const;

    double schwarzian_f(double tau) const;

    BounceSequence iterate_bounces(double tau0, std::size_t n) const;

    /// T_n(tau) with derivatives, propagated through the composition of f^{-1}.
    Jet3 bounce_jet(double tau0, std::size_t n) const;

  private:
    MirrorTrajectory trajectory_;
    double root_tol_;
    double bracket_step_;
    double seed_half_width_;
};

/// D_{k} after k bounces, switching from a running product to log-space
/// accumulation past this many bounces.
inline constexpr std::size_t kLogSpaceThreshold = 100;

} // namespace cavity
