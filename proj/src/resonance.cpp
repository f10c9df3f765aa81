#include "cavity/resonance.hpp"

#include "cavity/errors.hpp"
#include "parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace cavity {

namespace {

// Safeguarded Newton for a sign change of fn on [a, b]; fn returns the value
// and writes its derivative.
template <class Fn>
double polish_root(Fn&& fn, double a, double b) {
    double da = 0.0, db = 0.0;
    double fa = fn(a, da), fb = fn(b, db);
    if (fa == 0.0)
        return a;
    if (fb == 0.0)
        return b;
    if (fa > 0.0) {
        std::swap(a, b);
        std::swap(fa, fb);
    }
    // now fn(a) < 0 < fn(b); a may exceed b
    double x = 0.5 * (a + b);
    for (int iter = 0; iter < 200; ++iter) {
        double dx = 0.0;
        const double fx = fn(x, dx);
        if (fx == 0.0)
            return x;
        if (fx < 0.0)
            a = x;
        else
            b = x;
        double next = dx != 0.0 ? x - fx / dx : 0.5 * (a + b);
        const double lo = std::min(a, b), hi = std::max(a, b);
        if (!(next > lo && next < hi))
            next = 0.5 * (a + b);
        if (std::abs(next - x) <= 2.0 * std::numeric_limits<double>::epsilon() *
                                      std::max(1.0, std::abs(x)) ||
            hi - lo <= 2.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(x)))
            return next;
        x = next;
    }
    return x;
}

int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

Stability classify(double doppler, double tol) {
    if (doppler > 1.0 + tol)
        return Stability::Positive;
    if (doppler < 1.0 - tol)
        return Stability::Negative;
    return Stability::Marginal;
}

} // namespace

const char* to_string(Stability s) noexcept {
    switch (s) {
    case Stability::Positive: return "positive";
    case Stability::Negative: return "negative";
    case Stability::Marginal: return "marginal";
    }
    return "?";
}

ReturnPointSet find_return_points(const MirrorTrajectory& trajectory, double lo, double hi,
                                  ReturnPointOptions options) {
    if (!std::isfinite(lo) || !std::isfinite(hi) || !(hi > lo))
        throw PreconditionError("return-point window must be finite and non-empty");
    const double l0 = trajectory.unperturbed_length();
    const double target = options.target_length > 0.0 ? options.target_length : l0;
    const double value_tol = options.value_tolerance * l0;

    ReturnPointSet out;
    if (trajectory.kind() == TrajectoryKind::Static) {
        out.degenerate = std::abs(l0 - target) <= value_tol;
        return out;
    }
    const auto [wlo, whi] = trajectory.window();
    lo = std::max(lo, wlo);
    hi = std::min(hi, whi);
    if (!(hi > lo))
        return out;

    const double period = trajectory.motion_period() > 0.0 ? trajectory.motion_period() : l0;
    const int per_period = std::max(1000, options.samples_per_period);
    const std::size_t cells = std::max<std::size_t>(
        static_cast<std::size_t>(per_period),
        static_cast<std::size_t>(std::ceil((hi - lo) / period * per_period)));

    std::vector<double> t(cells + 1), h(cells + 1);
    for (std::size_t i = 0; i <= cells; ++i) {
        t[i] = i == cells ? hi : lo + (hi - lo) * static_cast<double>(i) / cells;
        h[i] = trajectory.position(t[i]) - target;
    }

    auto value = [&](double x, double& d) {
        const MirrorJet j = trajectory.evaluate(x);
        d = j.velocity;
        return j.position - target;
    };
    auto slope = [&](double x, double& d) {
        const MirrorJet j = trajectory.evaluate(x);
        d = j.acceleration;
        return j.velocity;
    };

    std::vector<double> roots;
    std::vector<double> touches;
    for (std::size_t i = 0; i <= cells; ++i) {
        if (h[i] == 0.0) {
            roots.push_back(t[i]);
            continue;
        }
        if (i < cells && h[i + 1] != 0.0 && sign_of(h[i]) != sign_of(h[i + 1]))
            roots.push_back(polish_root(value, t[i], t[i + 1]));
        // Grid extremum with no sign change on either side: the curve may touch
        // the target or cross it twice inside one cell pair.
        if (i > 0 && i < cells && sign_of(h[i - 1]) == sign_of(h[i]) &&
            sign_of(h[i + 1]) == sign_of(h[i]) && (h[i] - h[i - 1]) * (h[i + 1] - h[i]) <= 0.0) {
            double d0 = 0.0, d1 = 0.0;
            const double s0 = slope(t[i - 1], d0), s1 = slope(t[i + 1], d1);
            if (sign_of(s0) == sign_of(s1) && s0 != 0.0)
                continue;
            const double te = polish_root(slope, t[i - 1], t[i + 1]);
            double dd = 0.0;
            const double he = value(te, dd);
            if (std::abs(he) <= value_tol) {
                touches.push_back(te);
            } else if (sign_of(he) != sign_of(h[i])) {
                roots.push_back(polish_root(value, t[i - 1], te));
                roots.push_back(polish_root(value, te, t[i + 1]));
            }
        }
    }

    const double dedup = 1e-9 * std::max(1.0, hi - lo);
    auto accept = [&](double x, bool tangential) {
        if (x < lo || x >= hi - dedup)
            return;
        for (const auto& p : out.points)
            if (std::abs(p.tau_star - x) <= dedup)
                return;
        const MirrorJet j = trajectory.evaluate(x);
        ReturnPoint rp;
        rp.tau_star = x;
        rp.mirror_velocity = j.velocity;
        rp.doppler = (1.0 - j.velocity) / (1.0 + j.velocity);
        rp.tangential = tangential || std::abs(j.velocity) <= options.tangency_tolerance;
        out.points.push_back(rp);
    };
    for (double x : touches)
        accept(x, true);
    for (double x : roots)
        accept(x, false);
    std::sort(out.points.begin(), out.points.end(),
              [](const ReturnPoint& a, const ReturnPoint& b) { return a.tau_star < b.tau_star; });
    return out;
}

std::vector<PeriodicTrajectory> classify_candidates(const BilliardMap& map,
                                                    std::span<const double> candidates,
                                                    double period,
                                                    double classification_tolerance) {
    const double tol = 1e-9 * std::max(1.0, period);
    std::vector<PeriodicTrajectory> out;
    for (double tau0 : candidates) {
        const BounceSequence seq = map.iterate_bounces(tau0, 1);
        if (std::abs(seq.times[1] - tau0 - period) > tol)
            continue;
        PeriodicTrajectory p;
        p.tau0 = tau0;
        p.period = period;
        p.per_period_doppler = seq.factors[1];
        p.sign = classify(p.per_period_doppler, classification_tolerance);
        out.push_back(p);
    }
    std::sort(out.begin(), out.end(),
              [](const PeriodicTrajectory& a, const PeriodicTrajectory& b) { return a.tau0 < b.tau0; });
    return out;
}

std::vector<PeriodicTrajectory> find_periodic_trajectories(const BilliardMap& map,
                                                           double classification_tolerance) {
    const MirrorTrajectory& traj = map.trajectory();
    const double l0 = traj.unperturbed_length();
    const double period = 2.0 * l0;
    if (const double p = traj.motion_period(); p > 0.0) {
        const double ratio = period / p;
        if (std::abs(ratio - std::round(ratio)) > 1e-9 * std::max(1.0, ratio))
            throw PreconditionError("mirror period is not commensurate with the round trip 2 L0; "
                                    "supply candidate starting points instead");
    }
    // tau0 = tau* - L0 must fall in [-L(0), L(0)).
    const double w = map.seed_half_width();
    const ReturnPointSet rps = find_return_points(traj, l0 - w, l0 + w);
    if (rps.degenerate)
        return {};
    std::vector<double> starts;
    for (const auto& rp : rps.points)
        starts.push_back(rp.tau_star - l0);
    return classify_candidates(map, starts, period, classification_tolerance);
}

PerturbationReport perturbation_check(const BilliardMap& map, const PeriodicTrajectory& path,
                                      double eps, std::size_t n) {
    PerturbationReport r;
    r.n = n;
    r.eps = eps;
    const double base = path.tau0 + static_cast<double>(n) * path.period;
    const double dn = map.iterate_bounces(path.tau0, n).dopplers[n];
    if (path.sign == Stability::Negative) {
        r.measured = map.iterate_bounces(path.tau0 + eps * dn, n).times[n];
        r.predicted = base + eps;
    } else {
        r.measured = map.iterate_bounces(path.tau0 + eps, n).times[n];
        r.predicted = base + eps / dn;
    }
    r.residual = std::abs(r.measured - r.predicted);
    return r;
}

double omega_from_detuning_ratio(double length, int order, double ratio) {
    return resonance_frequency(length, order) / (1.0 - ratio);
}

BandSample band_sample(double length, double amplitude, double omega) {
    if (!(omega > 0.0))
        throw PreconditionError("band scan requires omega > 0");
    BandSample s;
    s.omega = omega;
    s.order = std::max(1, static_cast<int>(std::lround(omega * length / std::numbers::pi)));
    const double omega_n = resonance_frequency(length, s.order);
    s.detuning_ratio = (omega - omega_n) / omega;
    // Periodic paths close after N mirror periods; their bounce happens where
    // the mirror sits at half that round trip.
    const double mirror_period = 2.0 * std::numbers::pi / omega;
    const double round_trip = s.order * mirror_period;
    const double target = 0.5 * round_trip;

    if (amplitude == 0.0) {
        s.has_return_points = std::abs(target - length) <= 1e-10 * length;
        return s;
    }
    const BilliardMap map(make_sinusoidal(length, amplitude, omega));
    ReturnPointOptions opts;
    opts.target_length = target;
    const ReturnPointSet rps = find_return_points(map.trajectory(), 0.0, mirror_period, opts);
    s.has_return_points = !rps.points.empty();
    bool any_growing = false;
    for (const auto& rp : rps.points) {
        if (rp.tangential)
            continue;
        const double tau0 = rp.tau_star - target;
        const BounceSequence seq = map.iterate_bounces(tau0, 1);
        if (std::abs(seq.times[1] - tau0 - round_trip) > 1e-8 * std::max(1.0, round_trip))
            continue;
        const double g = seq.log_dopplers[1];
        if (g > s.growth_exponent) {
            s.growth_exponent = g;
            any_growing = true;
        }
    }
    s.stability = any_growing ? Stability::Positive : Stability::Marginal;
    return s;
}

BandScanResult scan_band(double length, double amplitude, double omega_lo, double omega_hi,
                         std::size_t samples) {
    if (samples < 2)
        throw PreconditionError("band scan needs at least 2 samples");
    if (!(omega_hi > omega_lo) || !(omega_lo > 0.0))
        throw PreconditionError("band scan needs 0 < omega_lo < omega_hi");
    if (!(length > 0.0) || amplitude < 0.0 || !(amplitude < length))
        throw PreconditionError("band scan needs L0 > 0 and 0 <= dL < L0");
    if (!(omega_hi * amplitude < 1.0))
        throw PreconditionError("band scan needs omega*dL < 1 across the range");
    BandScanResult out;
    out.length = length;
    out.amplitude = amplitude;
    out.samples.resize(samples);
    detail::parallel_for(samples, [&](std::size_t i) {
        const double omega =
            omega_lo + (omega_hi - omega_lo) * static_cast<double>(i) / (samples - 1);
        out.samples[i] = band_sample(length, amplitude, omega);
    });
    return out;
}

} // namespace cavity
