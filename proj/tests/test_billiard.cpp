#include "cavity/billiard.hpp"
#include "cavity/errors.hpp"
#include "cavity/oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <functional>
#include <numbers>
#include <random>

using namespace cavity;
using doctest::Approx;
constexpr double pi = std::numbers::pi;

namespace {

// Independent bisection for t + L(t) = tau.
double bisect_retarded(const MirrorTrajectory& tr, double tau) {
    double lo = tau - 10.0, hi = tau;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (mid + tr.position(mid) < tau ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

// Richardson-extrapolated central differences of a scalar map.
Jet3 fd_jet(const std::function<double(double)>& g, double x, double h) {
    auto d1 = [&](double s) { return (g(x + s) - g(x - s)) / (2 * s); };
    auto d2 = [&](double s) { return (g(x + s) - 2 * g(x) + g(x - s)) / (s * s); };
    auto d3 = [&](double s) {
        return (g(x + 2 * s) - 2 * g(x + s) + 2 * g(x - s) - g(x - 2 * s)) / (2 * s * s * s);
    };
    Jet3 j;
    j.value = g(x);
    j.d1 = (4 * d1(h / 2) - d1(h)) / 3;
    j.d2 = (4 * d2(h / 2) - d2(h)) / 3;
    j.d3 = (4 * d3(h) - d3(2 * h)) / 3;
    return j;
}

} // namespace

TEST_CASE("static cavity billiard") {
    const BilliardMap m(make_static(1.0));
    CHECK(m.retarded_time(3.0) == Approx(2.0).epsilon(1e-14));
    CHECK(m.f(0.7) == Approx(-1.3).epsilon(1e-14));
    CHECK(m.f_inverse(0.7) == Approx(2.7).epsilon(1e-14));
    const Jet3 j = m.f_jet(0.4);
    CHECK(j.d1 == Approx(1.0));
    CHECK(j.d2 == 0.0);
    CHECK(j.d3 == 0.0);
    CHECK(m.schwarzian_f(0.4) == 0.0);
    const BounceSequence seq = m.iterate_bounces(0.0, 3);
    REQUIRE(seq.bounces() == 3);
    for (int k = 0; k <= 3; ++k) {
        CHECK(seq.times[k] == Approx(2.0 * k).scale(1.0).epsilon(1e-13));
        CHECK(seq.dopplers[k] == Approx(1.0));
    }
}

TEST_CASE("retarded time against independent bisection") {
    const auto tr = make_sinusoidal(1.0, 0.1, 2 * pi);
    const BilliardMap m(tr);
    CHECK(m.retarded_time(1.5) == Approx(0.5).epsilon(1e-13));
    for (double tau : {1.3, -0.2, 4.77})
        CHECK(m.retarded_time(tau) == Approx(bisect_retarded(tr, tau)).epsilon(2e-12).scale(1.0));
}

TEST_CASE("Law-Wu billiard function in closed form") {
    const oracles::LawWuForms forms{1.0, 0.1, 2};
    const BilliardMap m(make_law_wu(1.0, 0.1, 2));
    for (int i = 0; i <= 200; ++i) {
        const double tau = -1.0 + 1.0 * i / 200.0; // one mirror period
        const double exact = oracles::lawwu_billiard(forms, tau);
        CHECK(std::abs(m.f(tau) - exact) <= 1e-9);
        CHECK(m.retarded_time(tau) == Approx(0.5 * (tau + exact)).epsilon(1e-11).scale(1.0));
        CHECK(std::abs(m.f_inverse(tau) - oracles::lawwu_billiard_inverse(forms, tau)) <= 1e-9);
    }
}

TEST_CASE("billiard function at resonance is periodic") {
    for (int order : {1, 2, 3}) {
        const BilliardMap m(make_sinusoidal(1.0, 0.02, resonance_frequency(1.0, order)));
        const double period = 2.0 / order;
        for (double tau : {-0.8, 0.1, 0.77})
            CHECK(m.f(tau + period) == Approx(m.f(tau) + period).epsilon(1e-12).scale(1.0));
    }
}

TEST_CASE("billiard function is increasing, retarded and invertible") {
    const BilliardMap m(make_sinusoidal(1.0, 0.1, 2.5));
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> d(-1.0, 30.0);
    for (int i = 0; i < 100; ++i) {
        const double tau = d(rng);
        CHECK(std::abs(m.f(m.f_inverse(tau)) - tau) <= 2 * m.root_tolerance());
        CHECK(m.f(tau) < tau);
    }
    double prev = m.f(-1.0);
    for (int i = 1; i <= 10000; ++i) {
        const double next = m.f(-1.0 + 12.0 * i / 10000);
        REQUIRE(next > prev);
        prev = next;
    }
}

TEST_CASE("single-bounce Doppler factor at an inward return point") {
    const double x = pi * 0.01;
    const BilliardMap m(make_sinusoidal(1.0, 0.01, pi));
    // sin(pi t*) = 0 with the mirror moving inward at t* = 1.
    CHECK(m.f_jet_at_bounce(1.0).d1 == Approx((1 + x) / (1 - x)).epsilon(1e-14));
    CHECK(m.f_jet(2.0).d1 == Approx((1 + x) / (1 - x)).epsilon(1e-12));
}

TEST_CASE("derivatives agree with finite differences") {
    const MirrorTrajectory trajs[] = {make_sinusoidal(1.0, 0.1, 2 * pi), make_law_wu(1.0, 0.1, 2),
                                      make_sinusoidal(1.5, 0.2, 1.7)};
    for (const auto& tr : trajs) {
        const BilliardMap m(tr);
        for (double tau : {0.3, 1.1, 2.9}) {
            const Jet3 j = m.f_jet(tau);
            const Jet3 fd = fd_jet([&](double s) { return m.f(s); }, tau, 2.5e-3);
            CHECK(j.d1 == Approx(fd.d1).epsilon(1e-5));
            CHECK(j.d2 == Approx(fd.d2).epsilon(1e-4).scale(1e-2));
            CHECK(j.d3 == Approx(fd.d3).epsilon(1e-3).scale(1e-1));
            const double s_fd = fd.d3 / fd.d1 - 1.5 * (fd.d2 / fd.d1) * (fd.d2 / fd.d1);
            CHECK(m.schwarzian_f(tau) == Approx(s_fd).epsilon(1e-3).scale(1e-1));
        }
    }
}

TEST_CASE("Schwarzian annihilates Moebius maps") {
    const double a = 2.0, b = -0.5, c = 0.3, d = 1.7;
    for (double t : {-1.0, 0.0, 2.5}) {
        const double den = c * t + d, det = a * d - b * c;
        const Jet3 j{(a * t + b) / den, det / (den * den), -2 * c * det / (den * den * den),
                     6 * c * c * det / (den * den * den * den)};
        CHECK(std::abs(schwarzian(j)) < 1e-9);
    }
    CHECK_THROWS_AS(schwarzian(Jet3{0.0, 0.0, 1.0, 1.0}), DomainError);
}

TEST_CASE("bounce invariants") {
    const BilliardMap m(make_sinusoidal(1.0, 0.05, 2.6));
    const BounceSequence seq = m.iterate_bounces(0.3, 40);
    for (std::size_t k = 1; k <= 40; ++k) {
        CHECK(seq.times[k] > seq.times[k - 1]);
        CHECK(seq.retarded[k] ==
              Approx(0.5 * (seq.times[k] + seq.times[k - 1])).epsilon(1e-12).scale(1.0));
        CHECK(seq.dopplers[k] == Approx(std::exp(seq.log_dopplers[k])).epsilon(1e-12));
    }
    for (std::size_t n : {1u, 7u, 40u})
        CHECK(m.bounce_jet(0.3, n).d1 == Approx(1.0 / seq.dopplers[n]).epsilon(1e-10));
}

TEST_CASE("resonant growth at the positive starting point") {
    const double x = pi * 0.01;
    const BilliardMap m(make_sinusoidal(1.0, 0.01, pi));
    const BounceSequence seq = m.iterate_bounces(0.0, 30);
    for (std::size_t n = 1; n <= 30; ++n) {
        CHECK(seq.times[n] == Approx(2.0 * n).epsilon(1e-12));
        CHECK(seq.dopplers[n] == Approx(std::pow((1 + x) / (1 - x), n)).epsilon(1e-10));
    }
}

TEST_CASE("Law-Wu marginal starting points keep D = 1") {
    const BilliardMap m(make_law_wu(1.0, 0.1, 2));
    for (double tau : oracles::lawwu_starting_points({1.0, 0.1, 2})) {
        const BounceSequence seq = m.iterate_bounces(tau, 25);
        for (std::size_t n = 1; n <= 25; ++n)
            CHECK(seq.dopplers[n] == Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("log-space accumulation beyond the product threshold") {
    const BilliardMap m(make_sinusoidal(1.0, 0.01, pi));
    const double x = pi * 0.01;
    const BounceSequence seq = m.iterate_bounces(0.0, kLogSpaceThreshold + 50);
    const std::size_t n = kLogSpaceThreshold + 50;
    CHECK(seq.log_dopplers[n] == Approx(n * std::log((1 + x) / (1 - x))).epsilon(1e-10));
    CHECK(seq.dopplers[n] == Approx(std::pow((1 + x) / (1 - x), n)).epsilon(1e-9));
}

TEST_CASE("roots outside a tabulated window fail to bracket") {
    std::vector<std::pair<double, double>> rows;
    for (int i = 0; i <= 40; ++i)
        rows.emplace_back(-1.0 + 0.1 * i, 1.0);
    const BilliardMap m(make_tabulated(rows));
    CHECK(m.f(2.0) == Approx(0.0).scale(1.0));
    CHECK_THROWS_AS(m.f(20.0), BracketError);
}
