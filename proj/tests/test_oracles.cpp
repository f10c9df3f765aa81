#include "cavity/errors.hpp"
#include "cavity/oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace cavity;
using namespace cavity::oracles;
using doctest::Approx;
constexpr double pi = std::numbers::pi;

TEST_CASE("sinusoidal starting points") {
    const auto one = sin_starting_points({1.0, 0.01, 1, 0.0});
    REQUIRE(one.positive.size() == 1);
    CHECK(one.positive[0] == 0.0);
    CHECK(one.negative[0] == -1.0);
    const auto two = sin_starting_points({1.0, 0.01, 2, 0.0});
    CHECK(two.positive == std::vector<double>{-0.5, 0.5});
    CHECK(two.negative == std::vector<double>{-1.0, 0.0});
    for (int n = 1; n <= 6; ++n)
        for (double t : sin_starting_points({1.0, 0.01, n, 0.0}).positive)
            CHECK((t >= -1.0 && t < 1.0));
    CHECK_THROWS_AS(sin_starting_points({1.0, 0.01, 1, 0.1}), PreconditionError);
}

TEST_CASE("sinusoidal Doppler closed form") {
    const SinusoidalForms f{1.0, 0.01, 1, 0.0};
    const double x = 0.01 * pi;
    CHECK(sin_doppler(f, 1) == Approx((1 + x) / (1 - x)).epsilon(1e-15));
    CHECK(sin_doppler(f, 1, -1) == Approx((1 - x) / (1 + x)).epsilon(1e-15));
    CHECK(sin_doppler(f, 0) == 1.0);
    // Band edge L dw = w dL: q = 0.
    const double dw = pi * 0.01 / (1.0 - 0.01);
    const SinusoidalForms edge{1.0, 0.01, 1, dw};
    CHECK(sin_band_parameter(edge) == Approx(0.0).scale(1.0).epsilon(1e-7));
    CHECK(sin_doppler(edge, 40) == Approx(1.0).epsilon(1e-5));
    CHECK_THROWS_AS(sin_band_parameter({1.0, 0.01, 1, 2 * dw}), DomainError);
    for (double dl : {0.002, 0.01, 0.015}) {
        const SinusoidalForms g{1.0, dl, 1, 0.0};
        for (std::size_t n = 1; n <= 10; ++n)
            CHECK(std::log(sin_doppler(g, n)) == Approx(2.0 * n * pi * dl).epsilon(1e-2));
    }
}

TEST_CASE("sinusoidal anomaly closed form") {
    const SinusoidalForms f{1.0, 0.01, 2, 0.0};
    CHECK(sin_anomaly(f, 0) == 0.0);
    const double w = 2 * pi, x = w * 0.01;
    const double limit = w * w / (48 * pi) / (1 - x * x);
    CHECK(sin_anomaly(f, 2000) == Approx(limit).epsilon(1e-12));
    CHECK(sin_growth_coefficient(f) == Approx(-pi / 48 + limit).epsilon(1e-13));
    const double x1 = 0.01 * pi;
    CHECK(sin_growth_coefficient({1.0, 0.01, 1, 0.0}) ==
          Approx(pi / 48 * x1 * x1 / (1 - x1 * x1)).epsilon(1e-10));
}

TEST_CASE("Law-Wu billiard closed form") {
    const LawWuForms f{1.0, 0.1, 2};
    // Vanishing amplitude: f(tau) = tau - 2L.
    const LawWuForms flat{1.0, 1e-12, 2};
    for (double tau : {-0.9, 0.3, 2.2})
        CHECK(lawwu_billiard(flat, tau) == Approx(tau - 2.0).epsilon(1e-10).scale(1.0));
    double prev = lawwu_billiard(f, -1.0);
    for (int i = 1; i <= 10000; ++i) {
        const double tau = -1.0 + 3.0 * i / 10000.0;
        const double next = lawwu_billiard(f, tau);
        REQUIRE(next > prev);
        prev = next;
        CHECK(lawwu_billiard_inverse(f, next) == Approx(tau).scale(1.0).epsilon(1e-12));
    }
    for (double tau : {-0.7, 0.2})
        CHECK(lawwu_billiard(f, tau + 1.0) == Approx(lawwu_billiard(f, tau) + 1.0).epsilon(1e-13));
}

TEST_CASE("Law-Wu Doppler and density closed forms") {
    const LawWuForms f{1.0, 0.1, 2};
    for (std::size_t n : {0u, 1u, 9u, 50u})
        CHECK(lawwu_doppler(f, -1.0, n) == Approx(1.0).epsilon(1e-15));
    CHECK(lawwu_doppler(f, 0.3, 0) == 1.0);
    const double slope =
        std::log(lawwu_doppler(f, 0.3, 1000) / lawwu_doppler(f, 0.3, 100)) / std::log(10.0);
    CHECK(slope == Approx(2.0).epsilon(0.02));
    CHECK(lawwu_anomaly(f, 0.3, 0) == 0.0);

    for (double tau : {-0.4, 0.0, 0.8})
        for (std::size_t n : {0u, 3u, 40u})
            CHECK(lawwu_rho({1.0, 0.1, 1}, tau, n) == Approx(-pi / 48).epsilon(1e-15));
    CHECK(lawwu_rho(f, 0.0, 0) == Approx(-pi / 48).epsilon(1e-15));
}

TEST_CASE("differentiated billiard iterates reproduce the Law-Wu Doppler factor") {
    const LawWuForms f{1.0, 0.1, 2};
    auto iterate_inverse = [&](double tau, std::size_t n) {
        for (std::size_t k = 0; k < n; ++k)
            tau = lawwu_billiard_inverse(f, tau);
        return tau;
    };
    const double h = 1e-5;
    for (double tau : {-0.6, 0.15, 0.9})
        for (std::size_t n : {1u, 5u, 20u}) {
            const double deriv = (iterate_inverse(tau + h, n) - iterate_inverse(tau - h, n)) / (2 * h);
            CHECK(1.0 / deriv == Approx(lawwu_doppler(f, tau, n)).epsilon(1e-5));
        }
}
