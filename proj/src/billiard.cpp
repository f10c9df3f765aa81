#include "cavity/billiard.hpp"

#include "cavity/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace cavity {

double schwarzian(const Jet3& jet) {
    if (jet.d1 == 0.0 || !std::isfinite(jet.d1))
        throw DomainError("Schwarzian undefined: vanishing or non-finite first derivative");
    const double r = jet.d2 / jet.d1;
    return jet.d3 / jet.d1 - 1.5 * r * r;
}

Jet3 compose(const Jet3& outer, const Jet3& inner) noexcept {
    const double i1 = inner.d1;
    return {outer.value, outer.d1 * i1, outer.d2 * i1 * i1 + outer.d1 * inner.d2,
            outer.d3 * i1 * i1 * i1 + 3.0 * outer.d2 * i1 * inner.d2 + outer.d1 * inner.d3};
}

namespace {

// Root of the increasing map x -> x + sign * L(x) - target. The derivative
// 1 + sign * L' lies in (0, 2), so Newton steps are safeguarded by a bracket
// that is grown geometrically until the sign changes.
double solve_light_cone(const MirrorTrajectory& traj, double sign, double target, double guess,
                        double step, double tol) {
    auto residual = [&](double x, double& slope) {
        MirrorJet jet;
        try {
            jet = traj.evaluate(x);
        } catch (const DomainError& e) {
            throw BracketError(std::string("retardation solve left the trajectory window: ") +
                               e.what());
        }
        slope = 1.0 + sign * jet.velocity;
        return x + sign * jet.position - target;
    };

    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    double x = guess;
    double grow = step;
    bool polished = false;
    for (int iter = 0; iter < 200; ++iter) {
        double slope = 1.0;
        const double g = residual(x, slope);
        if (g == 0.0)
            return x;
        if (g < 0.0)
            lo = x;
        else
            hi = x;

        double next = x - g / slope;
        const bool bracketed = std::isfinite(lo) && std::isfinite(hi);
        if (bracketed) {
            if (!(next > lo && next < hi))
                next = 0.5 * (lo + hi);
        } else if (std::abs(next - x) > grow || !std::isfinite(next)) {
            next = g < 0.0 ? x + grow : x - grow;
            grow *= 2.0;
        }

        if (std::abs(g) <= tol) {
            // One extra Newton step once inside tolerance, then accept.
            if (polished)
                return x;
            polished = true;
        }
        const double scale = std::max(1.0, std::abs(x));
        if (std::abs(next - x) <= 4.0 * std::numeric_limits<double>::epsilon() * scale) {
            if (std::abs(g) <= tol)
                return next;
        }
        if (bracketed && hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * scale) {
            double s1 = 1.0;
            const double gm = residual(next, s1);
            if (std::abs(gm) <= tol)
                return next;
            break;
        }
        x = next;
    }
    throw BracketError("retardation solve failed to converge for tau = " + std::to_string(target));
}

} // namespace

BilliardMap::BilliardMap(MirrorTrajectory trajectory, BilliardOptions options)
    : trajectory_(std::move(trajectory)) {
    const double l0 = trajectory_.unperturbed_length();
    root_tol_ = options.root_tolerance.value_or(1e-12 * std::max(1.0, l0));
    bracket_step_ = options.bracket_step.value_or(l0);
    if (!(root_tol_ > 0.0))
        throw PreconditionError("root tolerance must be positive");
    if (!(bracket_step_ > 0.0))
        throw PreconditionError("bracket step must be positive");
    seed_half_width_ = trajectory_.position(0.0);
}

double BilliardMap::retarded_time(double tau, std::optional<double> hint) const {
    const double guess = hint.value_or(tau - unperturbed_length());
    return solve_light_cone(trajectory_, +1.0, tau, guess, bracket_step_, root_tol_);
}

double BilliardMap::advanced_time(double tau, std::optional<double> hint) const {
    const double guess = hint.value_or(tau + unperturbed_length());
    return solve_light_cone(trajectory_, -1.0, tau, guess, bracket_step_, root_tol_);
}

double BilliardMap::f(double tau) const {
    const double ts = retarded_time(tau);
    return ts - trajectory_.position(ts);
}

double BilliardMap::f_inverse(double tau) const {
    const double s = advanced_time(tau);
    return s + trajectory_.position(s);
}

Jet3 BilliardMap::f_jet_at_bounce(double retarded) const {
    const MirrorJet m = trajectory_.evaluate(retarded);
    const double p = 1.0 + m.velocity;
    const double p3 = p * p * p;
    return {retarded - m.position, (1.0 - m.velocity) / p, -2.0 * m.acceleration / p3,
            (-2.0 * m.jerk * p + 6.0 * m.acceleration * m.acceleration) / (p3 * p * p)};
}

Jet3 BilliardMap::f_inverse_jet_at_bounce(double advanced) const {
    const MirrorJet m = trajectory_.evaluate(advanced);
    const double q = 1.0 - m.velocity;
    const double q3 = q * q * q;
    return {advanced + m.position, (1.0 + m.velocity) / q, 2.0 * m.acceleration / q3,
            (2.0 * m.jerk * q + 6.0 * m.acceleration * m.acceleration) / (q3 * q * q)};
}

Jet3 BilliardMap::f_jet(double tau) const { return f_jet_at_bounce(retarded_time(tau)); }

double BilliardMap::schwarzian_f(double tau) const { return schwarzian(f_jet(tau)); }

BounceSequence BilliardMap::iterate_bounces(double tau0, std::size_t n) const {
    BounceSequence seq;
    seq.tau0 = tau0;
    seq.times.reserve(n + 1);
    seq.retarded.reserve(n + 1);
    seq.factors.reserve(n + 1);
    seq.dopplers.reserve(n + 1);
    seq.log_dopplers.reserve(n + 1);
    seq.schwarzians.reserve(n + 1);

    seq.times.push_back(tau0);
    seq.retarded.push_back(std::numeric_limits<double>::quiet_NaN());
    seq.factors.push_back(1.0);
    seq.dopplers.push_back(1.0);
    seq.log_dopplers.push_back(0.0);
    seq.schwarzians.push_back(0.0);

    double hint = tau0 + unperturbed_length();
    for (std::size_t k = 1; k <= n; ++k) {
        const double prev = seq.times.back();
        const double s = advanced_time(prev, hint);
        const Jet3 jet = f_jet_at_bounce(s);
        const double arrival = s + trajectory_.position(s);
        seq.times.push_back(arrival);
        seq.retarded.push_back(s);
        seq.factors.push_back(jet.d1);
        const double log_d = seq.log_dopplers.back() + std::log(jet.d1);
        seq.log_dopplers.push_back(log_d);
        seq.dopplers.push_back(k <= kLogSpaceThreshold ? seq.dopplers.back() * jet.d1
                                                       : std::exp(log_d));
        seq.schwarzians.push_back(schwarzian(jet));
        hint = arrival + (arrival - s);
    }
    return seq;
}

Jet3 BilliardMap::bounce_jet(double tau0, std::size_t n) const {
    Jet3 jet{tau0, 1.0, 0.0, 0.0};
    double hint = tau0 + unperturbed_length();
    for (std::size_t k = 1; k <= n; ++k) {
        const double s = advanced_time(jet.value, hint);
        jet = compose(f_inverse_jet_at_bounce(s), jet);
        hint = jet.value + (jet.value - s);
    }
    return jet;
}

} // namespace cavity
