#include "cavity/field_classical.hpp"

#include "cavity/errors.hpp"
#include "cavity/interpolation.hpp"

#include <algorithm>
#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <numbers>
#include <string>

namespace cavity {

InitialProfile InitialProfile::uniform(double value) {
    return InitialProfile([value](double) { return value; }, true);
}

InitialProfile InitialProfile::closed_form(std::function<double(double)> fn) {
    if (!fn)
        throw PreconditionError("initial profile function is empty");
    return InitialProfile(std::move(fn));
}

InitialProfile InitialProfile::sampled(std::vector<double> tau, std::vector<double> rho) {
    auto interp = std::make_shared<const MonotoneCubic>(std::move(tau), std::move(rho));
    return InitialProfile([interp](double t) { return (*interp)(t); });
}

Pullback pull_back(const BilliardMap& map, double tau, bool with_anomaly) {
    const double w = map.seed_half_width();
    const double slack = 16.0 * map.root_tolerance();
    if (tau < -w - slack)
        throw DomainError("density requested at tau = " + std::to_string(tau) +
                          " before the seed interval (forward evolution only)");
    const double l0 = map.unperturbed_length();
    std::vector<double> factors, schwarz;
    double sigma = tau;
    double hint = tau - l0;
    while (sigma > w + slack) {
        const double ts = map.retarded_time(sigma, hint);
        const Jet3 jet = map.f_jet_at_bounce(ts);
        factors.push_back(jet.d1);
        if (with_anomaly)
            schwarz.push_back(schwarzian(jet));
        sigma = jet.value;
        hint = sigma - (ts - sigma);
    }
    Pullback pb;
    pb.sigma = std::clamp(sigma, -w, w);
    pb.n = factors.size();
    // factors[j] = f'(T_{n-j}(sigma)); walk from T_1 outward.
    double d = 1.0, log_d = 0.0, anomaly_sum = 0.0;
    for (std::size_t k = 1; k <= pb.n; ++k) {
        const double fk = factors[pb.n - k];
        log_d += std::log(fk);
        d = k <= kLogSpaceThreshold ? d * fk : std::exp(log_d);
        if (with_anomaly)
            anomaly_sum += schwarz[pb.n - k] / (d * d);
    }
    pb.doppler = d;
    pb.log_doppler = log_d;
    if (with_anomaly)
        pb.anomaly = -anomaly_sum / (24.0 * std::numbers::pi);
    return pb;
}

std::vector<double> forward_images(const BilliardMap& map, std::span<const double> seeds, double a,
                                   double b) {
    std::vector<double> out;
    const double l0 = map.unperturbed_length();
    for (double s : seeds) {
        double t = s;
        double hint = s + l0;
        for (std::size_t guard = 0; t <= b && guard < 1000000; ++guard) {
            if (t >= a)
                out.push_back(t);
            const double adv = map.advanced_time(t, hint);
            const double next = adv + map.trajectory().position(adv);
            hint = next + (next - adv);
            t = next;
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<double> focused_samples(const BilliardMap& map, double t, double length,
                                    std::size_t count) {
    std::vector<double> xs;
    if (count < 2)
        return xs;
    const double w = map.seed_half_width();
    const double lo = t - length, hi = t + length;
    std::vector<double> seeds(count);
    for (std::size_t i = 0; i < count; ++i)
        seeds[i] = -w + 2.0 * w * static_cast<double>(i) / (count - 1);
    for (double tau : forward_images(map, seeds, lo, hi))
        xs.push_back(std::abs(tau - t));
    return xs;
}

// ---- peaks ----------------------------------------------------------------------

std::vector<Peak> locate_peaks(const std::function<double(double)>& g, double length,
                               std::vector<double> extra_x, const PeakOptions& options) {
    std::vector<double> xs = std::move(extra_x);
    const std::size_t grid = std::max<std::size_t>(options.grid, 16);
    for (std::size_t i = 0; i <= grid; ++i)
        xs.push_back(length * static_cast<double>(i) / grid);
    std::erase_if(xs, [&](double x) { return !(x >= 0.0 && x <= length); });
    std::sort(xs.begin(), xs.end());
    const double dedup = 1e-13 * std::max(1.0, length);
    xs.erase(std::unique(xs.begin(), xs.end(), [&](double a, double b) { return b - a <= dedup; }),
             xs.end());

    const std::size_t n = xs.size();
    std::vector<double> ys(n);
    for (std::size_t i = 0; i < n; ++i)
        ys[i] = g(xs[i]);
    const auto [mn, mx] = std::minmax_element(ys.begin(), ys.end());
    const double range = *mx - *mn;
    std::vector<Peak> peaks;
    // A flat snapshot (up to rounding) has no peaks.
    if (!(range > 1e-9 * std::max(std::abs(*mx), std::abs(*mn))))
        return peaks;

    for (std::size_t i = 0; i < n; ++i) {
        const bool left_ok = i == 0 || ys[i] >= ys[i - 1];
        const bool right_ok = i + 1 == n || ys[i] > ys[i + 1];
        if (!left_ok || !right_ok || (i == 0 && n > 1 && ys[0] == ys[1]))
            continue;
        // Topographic prominence against the nearest higher sample each side.
        double left_min = ys[i], right_min = ys[i];
        std::size_t j = i;
        while (j > 0 && ys[j - 1] <= ys[i])
            left_min = std::min(left_min, ys[--j]);
        const bool left_bounded = j > 0;
        j = i;
        while (j + 1 < n && ys[j + 1] <= ys[i])
            right_min = std::min(right_min, ys[++j]);
        const bool right_bounded = j + 1 < n;
        double base;
        if (left_bounded && right_bounded)
            base = std::max(left_min, right_min);
        else if (left_bounded)
            base = left_min;
        else if (right_bounded)
            base = right_min;
        else
            base = std::min(left_min, right_min);
        if (ys[i] - base < options.min_prominence * range)
            continue;

        // Refine the maximum between the neighbouring samples.
        const double a = i > 0 ? xs[i - 1] : xs[i];
        const double b = i + 1 < n ? xs[i + 1] : xs[i];
        double xp = xs[i], yp = ys[i];
        if (b > a) {
            auto neg = [&](double x) { return -g(x); };
            const auto [xm, fm] = boost::math::tools::brent_find_minima(neg, a, b, 52);
            if (-fm > yp) {
                xp = xm;
                yp = -fm;
            }
        }
        const double level = 0.5 * (yp + std::max(left_min, right_min));

        auto crossing = [&](double inside, double outside) {
            for (int it = 0; it < 100 && std::abs(outside - inside) > 1e-15 * std::max(1.0, length);
                 ++it) {
                const double mid = 0.5 * (inside + outside);
                if (g(mid) > level)
                    inside = mid;
                else
                    outside = mid;
            }
            return 0.5 * (inside + outside);
        };
        double xl = 0.0, xr = length;
        for (std::size_t k = i; k-- > 0;) {
            if (ys[k] <= level) {
                xl = crossing(xs[k + 1], xs[k]);
                break;
            }
        }
        for (std::size_t k = i + 1; k < n; ++k) {
            if (ys[k] <= level) {
                xr = crossing(xs[k - 1], xs[k]);
                break;
            }
        }
        // A vanishing half-maximum width marks the edge of a density step.
        if (xr - xl <= 1e-9 * length)
            continue;
        peaks.push_back({xp, yp, xr - xl});
    }
    return peaks;
}

// ---- ExtendedProfile -------------------------------------------------------------

ExtendedProfile::ExtendedProfile(std::shared_ptr<const BilliardMap> map, InitialProfile seed)
    : map_(std::move(map)), seed_(std::move(seed)) {
    if (!map_)
        throw PreconditionError("extended profile needs a billiard map");
}

double ExtendedProfile::rho_at(double tau) const {
    const Pullback pb = pull_back(*map_, tau);
    if (pb.n == 0)
        return seed_(pb.sigma);
    return seed_(pb.sigma) * pb.doppler * pb.doppler;
}

double ExtendedProfile::energy_density(double t, double x) const {
    const double len = map_->trajectory().position(t);
    const double slack = 1e-12 * std::max(1.0, len);
    if (x < -slack || x > len + slack)
        throw DomainError("position x = " + std::to_string(x) + " outside the cavity [0, " +
                          std::to_string(len) + "]");
    return rho_at(t + x) + rho_at(t - x);
}

std::vector<double> energy_breakpoints(const BilliardMap& map, std::span<const double> peak_seeds,
                                       double a, double b) {
    std::vector<double> seeds(peak_seeds.begin(), peak_seeds.end());
    seeds.push_back(-map.seed_half_width());
    return forward_images(map, seeds, a, b);
}

double ExtendedProfile::total_energy(double t) const {
    if (t < 0.0)
        throw DomainError("total energy requested before t = 0");
    const double len = map_->trajectory().position(t);
    const double a = t - len, b = t + len;
    const auto bps = energy_breakpoints(*map_, peak_seeds_, a, b);
    return integrate([this](double s) { return rho_at(s); }, a, b, bps, quad_).value;
}

double ExtendedProfile::total_energy_recursive(double tau0, std::size_t n) const {
    const double a = map_->f(tau0);
    if (a < -map_->seed_half_width() - 16.0 * map_->root_tolerance())
        throw DomainError("recursive energy needs f(tau0) inside the seed interval's forward closure");
    const auto integrand = [this, n](double s) {
        const double dn = map_->iterate_bounces(s, n).dopplers[n];
        return rho_at(s) * dn;
    };
    const auto bps = energy_breakpoints(*map_, peak_seeds_, a, tau0);
    return integrate(integrand, a, tau0, bps, quad_).value;
}

std::vector<Peak> ExtendedProfile::peak_metrics(double t, PeakOptions options) const {
    const double len = map_->trajectory().position(t);
    std::vector<double> extra = focused_samples(*map_, t, len, options.seed_grid);
    for (double tau : forward_images(*map_, peak_seeds_, t - len, t + len))
        extra.push_back(std::abs(tau - t));
    return locate_peaks([&](double x) { return energy_density(t, std::clamp(x, 0.0, len)); }, len,
                        std::move(extra), options);
}

} // namespace cavity
