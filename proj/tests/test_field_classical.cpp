#include "cavity/errors.hpp"
#include "cavity/field_classical.hpp"
#include "cavity/resonance.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace cavity;
using doctest::Approx;
constexpr double pi = std::numbers::pi;

namespace {
std::shared_ptr<const BilliardMap> shared_map(MirrorTrajectory tr) {
    return std::make_shared<const BilliardMap>(std::move(tr));
}
} // namespace

TEST_CASE("static cavity keeps a uniform profile") {
    ExtendedProfile p(shared_map(make_static(1.0)), InitialProfile::uniform(0.7));
    for (double tau : {-1.0, 0.3, 5.7, 41.2})
        CHECK(p.rho_at(tau) == Approx(0.7).epsilon(1e-15));
    for (double t : {0.0, 3.3, 20.0})
        for (double x : {0.0, 0.4, 1.0})
            CHECK(p.energy_density(t, x) == Approx(1.4).epsilon(1e-15));
    CHECK(p.total_energy(7.25) == Approx(1.4).epsilon(1e-12));
    CHECK(p.total_energy_recursive(1.6, 9) == Approx(1.4).epsilon(1e-12));
}

TEST_CASE("pull back lands in the seed interval") {
    const BilliardMap m(make_sinusoidal(1.0, 0.01, pi));
    for (double tau : {-0.99, 0.5, 3.1, 25.0}) {
        const Pullback pb = pull_back(m, tau);
        CHECK(pb.sigma >= -1.0 - 1e-12);
        CHECK(pb.sigma <= 1.0 + 1e-12);
        const BounceSequence seq = m.iterate_bounces(pb.sigma, pb.n);
        CHECK(seq.times[pb.n] == Approx(tau).epsilon(1e-11));
        CHECK(seq.dopplers[pb.n] == Approx(pb.doppler).epsilon(1e-11));
    }
    CHECK_THROWS_AS(pull_back(m, -1.5), DomainError);
}

TEST_CASE("density at the images of a positive periodic path grows as D_n^2") {
    const auto map = shared_map(make_sinusoidal(1.0, 0.01, pi));
    ExtendedProfile p(map, InitialProfile::closed_form([](double s) { return 1.0 + 0.2 * s; }));
    const double x = 0.01 * pi;
    const double d1 = (1 + x) / (1 - x);
    for (std::size_t n : {1u, 5u, 20u}) {
        const double tau = 0.0 + 2.0 * static_cast<double>(n);
        CHECK(p.rho_at(tau) == Approx(std::pow(d1, 2.0 * n)).epsilon(1e-8));
    }
}

TEST_CASE("energy routes agree") {
    const auto map = shared_map(make_sinusoidal(1.0, 0.01, 2 * pi));
    ExtendedProfile p(map, InitialProfile::uniform(1.0));
    p.set_peak_seeds({-0.5, 0.5});
    const BounceSequence seq = map->iterate_bounces(1.0, 12);
    for (std::size_t n : {1u, 6u, 12u}) {
        const double recursive = p.total_energy_recursive(1.0, n);
        const double direct = p.total_energy(seq.retarded[n]);
        CHECK(recursive == Approx(direct).epsilon(1e-9));
    }
}

TEST_CASE("two peaks per snapshot at N = 2") {
    const auto map = shared_map(make_sinusoidal(1.0, 0.01, 2 * pi));
    ExtendedProfile p(map, InitialProfile::uniform(1.0));
    p.set_peak_seeds({-0.5, 0.5});
    const auto peaks = p.peak_metrics(2.0 * 10 + 0.25);
    REQUIRE(peaks.size() == 2);
    CHECK(peaks[0].position == Approx(0.25).epsilon(1e-2));
    CHECK(peaks[1].position == Approx(0.75).epsilon(1e-2));
    CHECK(peaks[0].height == Approx(peaks[1].height).epsilon(1e-2));
    CHECK(peaks[0].width > 0.0);
}

TEST_CASE("initial profiles") {
    const auto sampled = InitialProfile::sampled({-1.0, 0.0, 1.0}, {0.0, 1.0, 0.0});
    CHECK(sampled(0.0) == Approx(1.0));
    CHECK(sampled(0.5) >= 0.0);
    CHECK(InitialProfile::uniform(2.0).is_uniform());
    CHECK_FALSE(InitialProfile::closed_form([](double) { return 1.0; }).is_uniform());
}

TEST_CASE("positions outside the cavity are rejected") {
    ExtendedProfile p(shared_map(make_static(1.0)), InitialProfile::uniform(1.0));
    CHECK_THROWS_AS(p.energy_density(1.0, 1.2), DomainError);
    CHECK_THROWS_AS(p.energy_density(1.0, -0.1), DomainError);
}

TEST_CASE("peak finder on a synthetic snapshot") {
    const auto g = [](double x) { return std::exp(-std::pow((x - 0.3) / 0.01, 2)) + 0.01; };
    const auto peaks = locate_peaks(g, 1.0, {}, PeakOptions{});
    REQUIRE(peaks.size() == 1);
    CHECK(peaks[0].position == Approx(0.3).epsilon(1e-3));
    CHECK(peaks[0].width == Approx(2 * 0.01 * std::sqrt(std::log(2.0))).epsilon(2e-2));
}
