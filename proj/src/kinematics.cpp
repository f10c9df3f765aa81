#include "cavity/kinematics.hpp"

#include "cavity/errors.hpp"

#include <cmath>
#include <string>

namespace cavity::kinematics {

SubluminalVelocity::SubluminalVelocity(double v) : v_(v) {
    if (!(std::abs(v) < 1.0))
        throw DomainError("velocity must lie strictly inside (-1, 1), got " + std::to_string(v));
}

double SubluminalVelocity::rapidity() const noexcept { return std::atanh(v_); }

TargetMass TargetMass::finite(double m) {
    if (!(m > 0.0) || !std::isfinite(m))
        throw PreconditionError("target mass must be positive and finite");
    TargetMass out;
    out.m_ = m;
    return out;
}

double TargetMass::value() const {
    if (!m_)
        throw DomainError("infinite target mass has no finite value");
    return *m_;
}

double reflect_nonrelativistic(double v, double u, double u_prime) noexcept {
    return u + u_prime - v;
}

double reflect_relativistic(SubluminalVelocity v, SubluminalVelocity u,
                            SubluminalVelocity u_prime) noexcept {
    return std::tanh(u.rapidity() + u_prime.rapidity() - v.rapidity());
}

double doppler_factor(SubluminalVelocity u) noexcept {
    return (1.0 - u.value()) / (1.0 + u.value());
}

double photon_energy_after(double energy, SubluminalVelocity u, TargetMass mass) {
    if (!(energy > 0.0))
        throw DomainError("photon energy must be positive");
    const double doppler = doppler_factor(u);
    if (mass.is_infinite())
        return energy * doppler;
    const double compton = 1.0 + 2.0 * energy / mass.value() * std::sqrt(doppler);
    return energy * doppler / compton;
}

} // namespace cavity::kinematics
