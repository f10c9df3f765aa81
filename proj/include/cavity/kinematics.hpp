#pragma once

// Single-collision reflection laws for a particle bouncing off a moving target.
// Units c = 1; energies and masses in the same units (hbar = c = 1).

#include <optional>

namespace cavity::kinematics {

/// Velocity strictly inside (-1, 1); validated once at construction.
class SubluminalVelocity {
  public:
    explicit SubluminalVelocity(double v);
    double value() const noexcept { return v_; }
    double rapidity() const noexcept;

  private:
    double v_;
};

/// Target mass: finite positive value, or the infinite-mass mirror limit.
class TargetMass {
  public:
    static TargetMass infinite() noexcept { return TargetMass{}; }
    static TargetMass finite(double m);

    bool is_infinite() const noexcept { return !m_.has_value(); }
    double value() const; // throws for the infinite mass

  private:
    TargetMass() = default;
    std::optional<double> m_;
};

struct Collision1D {
    double v = 0.0;       // particle velocity before
    double u = 0.0;       // target velocity before
    double u_prime = 0.0; // target velocity after
    TargetMass mass = TargetMass::infinite();
    double energy = 1.0;  // photon energy before
};

/// Galilean reflection law v + v' = u + u'.
double reflect_nonrelativistic(double v, double u, double u_prime) noexcept;

/// Rapidity-sum reflection law; result strictly inside (-1, 1).
double reflect_relativistic(SubluminalVelocity v, SubluminalVelocity u,
                            SubluminalVelocity u_prime) noexcept;

/// Photon energy after a head-on bounce: Doppler factor (1-u)/(1+u) times the
/// Compton factor, which is exactly 1 for an infinite-mass target.
double photon_energy_after(double energy, SubluminalVelocity u, TargetMass mass);

/// Doppler factor (1-u)/(1+u).
double doppler_factor(SubluminalVelocity u) noexcept;

} // namespace cavity::kinematics
