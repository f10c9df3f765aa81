#include "cavity/field_quantum.hpp"

#include "cavity/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace cavity {

namespace {
constexpr double kAnomalyScale = 1.0 / (24.0 * std::numbers::pi);
}

double static_vacuum_density(double length) noexcept {
    return -std::numbers::pi / (48.0 * length * length);
}

double schwarzian(const std::function<Jet3(double)>& fn, double tau) { return schwarzian(fn(tau)); }

QuantumProfile::QuantumProfile(std::shared_ptr<const BilliardMap> map)
    : map_(std::move(map)) {
    if (!map_)
        throw PreconditionError("quantum profile needs a billiard map");
    const double vacuum = static_vacuum_density(map_->seed_half_width());
    seed_ = [vacuum](double) { return vacuum; };
}

QuantumProfile::QuantumProfile(std::shared_ptr<const BilliardMap> map,
                               std::function<double(double)> seed_rho)
    : map_(std::move(map)), seed_(std::move(seed_rho)) {
    if (!map_)
        throw PreconditionError("quantum profile needs a billiard map");
    if (!seed_)
        throw PreconditionError("quantum seed density is empty");
}

double QuantumProfile::moore_phase(double tau) const {
    // Static past: R = tau / L(0) on the seed interval; each round trip adds 2.
    const Pullback pb = pull_back(*map_, tau);
    return pb.sigma / map_->seed_half_width() + 2.0 * static_cast<double>(pb.n);
}

AnomalyAccumulator QuantumProfile::anomaly_accumulate(double tau, std::size_t n) const {
    const BounceSequence seq = map_->iterate_bounces(tau, n);
    AnomalyAccumulator acc;
    acc.tau = tau;
    acc.dopplers = seq.dopplers;
    acc.values.assign(n + 1, 0.0);
    double sum = 0.0;
    for (std::size_t k = 1; k <= n; ++k) {
        const double d = seq.dopplers[k];
        sum += seq.schwarzians[k] / (d * d);
        acc.values[k] = -kAnomalyScale * sum;
    }
    if (n > 0)
        acc.direct = kAnomalyScale * schwarzian(map_->bounce_jet(tau, n));
    return acc;
}

double QuantumProfile::rho_at(double tau) const {
    const Pullback pb = pull_back(*map_, tau, !anomaly_off_);
    const double seed = seed_(pb.sigma);
    if (pb.n == 0)
        return seed;
    return (seed + pb.anomaly) * pb.doppler * pb.doppler;
}

double QuantumProfile::energy_density(double t, double x) const {
    const double len = map_->trajectory().position(t);
    const double slack = 1e-12 * std::max(1.0, len);
    if (x < -slack || x > len + slack)
        throw DomainError("position x = " + std::to_string(x) + " outside the cavity");
    return rho_at(t + x) + rho_at(t - x);
}

double QuantumProfile::total_energy(double tau0, std::size_t n) const {
    const double a = map_->f(tau0);
    if (a < -map_->seed_half_width() - 16.0 * map_->root_tolerance())
        throw DomainError("quantum energy needs f(tau0) inside the seed interval's forward closure");
    const auto integrand = [this, n](double s) {
        const BounceSequence seq = map_->iterate_bounces(s, n);
        double sum = 0.0;
        if (!anomaly_off_)
            for (std::size_t k = 1; k <= n; ++k)
                sum += seq.schwarzians[k] / (seq.dopplers[k] * seq.dopplers[k]);
        return (rho_at(s) - kAnomalyScale * sum) * seq.dopplers[n];
    };
    const auto bps = energy_breakpoints(*map_, peak_seeds_, a, tau0);
    return integrate(integrand, a, tau0, bps, quad_).value;
}

double QuantumProfile::total_energy_direct(double tau0, std::size_t n) const {
    if (n == 0)
        throw PreconditionError("direct quantum energy needs n >= 1");
    const BounceSequence seq = map_->iterate_bounces(tau0, n);
    const double a = seq.times[n - 1], b = seq.times[n];
    const auto bps = energy_breakpoints(*map_, peak_seeds_, a, b);
    return integrate([this](double s) { return rho_at(s); }, a, b, bps, quad_).value;
}

double QuantumProfile::total_energy_at(double t) const {
    if (t < 0.0)
        throw DomainError("total energy requested before t = 0");
    const double len = map_->trajectory().position(t);
    const auto bps = energy_breakpoints(*map_, peak_seeds_, t - len, t + len);
    return integrate([this](double s) { return rho_at(s); }, t - len, t + len, bps, quad_).value;
}

std::vector<Peak> QuantumProfile::peak_metrics(double t, PeakOptions options) const {
    const double len = map_->trajectory().position(t);
    std::vector<double> extra = focused_samples(*map_, t, len, options.seed_grid);
    for (double tau : forward_images(*map_, peak_seeds_, t - len, t + len))
        extra.push_back(std::abs(tau - t));
    return locate_peaks([&](double x) { return energy_density(t, std::clamp(x, 0.0, len)); }, len,
                        std::move(extra), options);
}

GrowthCoefficient growth_coefficient(const QuantumProfile& profile, const PeriodicTrajectory& path,
                                     std::size_t n_max) {
    if (path.sign != Stability::Positive)
        throw PreconditionError("growth coefficient needs a positive periodic path");
    if (n_max < 2)
        throw PreconditionError("growth coefficient needs n_max >= 2");
    const AnomalyAccumulator acc = profile.anomaly_accumulate(path.tau0, n_max);
    GrowthCoefficient out;
    out.n = n_max;
    const double seed = profile.seed_rho(path.tau0);
    out.value = seed + acc.values[n_max];
    // Terms decay geometrically with ratio D_1^-2; bound the remaining tail.
    const double last = std::abs(acc.values[n_max] - acc.values[n_max - 1]);
    const double ratio = 1.0 / (path.per_period_doppler * path.per_period_doppler);
    out.tail_error = last * ratio / (1.0 - ratio);
    const double scale = std::max(std::abs(seed), std::abs(out.value));
    if (!std::isfinite(out.value) || out.tail_error > 1e-8 * scale)
        throw ConvergenceError("growth coefficient did not converge by n = " +
                               std::to_string(n_max));
    return out;
}

} // namespace cavity
