#include "cavity/errors.hpp"
#include "cavity/kinematics.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace cavity::kinematics;
using cavity::PreconditionError;
using doctest::Approx;

TEST_CASE("galilean reflection") {
    CHECK(reflect_nonrelativistic(1.0, 0.0, 0.0) == -1.0);
    CHECK(reflect_nonrelativistic(-1.0, 0.5, 0.5) == 2.0);
    CHECK(reflect_nonrelativistic(0.3, 0.1, 0.2) == Approx(0.0).epsilon(1e-15));
}

TEST_CASE("relativistic reflection reference values") {
    auto v = [](double x) { return SubluminalVelocity(x); };
    CHECK(reflect_relativistic(v(0.5), v(0.0), v(0.0)) == Approx(-0.5).epsilon(1e-15));
    // tanh(2 artanh 0.5 + artanh 0.5) = 13/14
    CHECK(reflect_relativistic(v(-0.5), v(0.5), v(0.5)) ==
          Approx(0.92857142857142857143).epsilon(1e-14));
    CHECK(reflect_relativistic(v(0.0), v(0.2), v(0.2)) ==
          Approx(0.38461538461538461538).epsilon(1e-14));
}

TEST_CASE("velocities at or beyond light speed are rejected") {
    CHECK_THROWS_AS(SubluminalVelocity(1.0), cavity::DomainError);
    CHECK_THROWS_AS(SubluminalVelocity(-1.2), cavity::DomainError);
    CHECK_THROWS_AS(SubluminalVelocity(std::nan("")), cavity::DomainError);
    CHECK_THROWS_AS(TargetMass::finite(0.0), PreconditionError);
    CHECK_THROWS(TargetMass::infinite().value());
}

TEST_CASE("photon energy after a head-on bounce") {
    auto v = [](double x) { return SubluminalVelocity(x); };
    CHECK(photon_energy_after(1.0, v(0.0), TargetMass::infinite()) == 1.0);
    CHECK(photon_energy_after(1.0, v(-0.5), TargetMass::infinite()) == Approx(3.0).epsilon(1e-15));
    CHECK(photon_energy_after(1.0, v(0.0), TargetMass::finite(10.0)) ==
          Approx(1.0 / 1.2).epsilon(1e-15));
    CHECK_THROWS_AS(photon_energy_after(0.0, v(0.0), TargetMass::infinite()), cavity::DomainError);
    CHECK(doppler_factor(v(0.25)) == Approx(0.6).epsilon(1e-15));
}

TEST_CASE("rapidities add and velocities stay subluminal") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> d(-0.999, 0.999);
    for (int i = 0; i < 1000; ++i) {
        const SubluminalVelocity v(d(rng)), u(d(rng)), up(d(rng));
        const double out = reflect_relativistic(v, u, up);
        REQUIRE(std::abs(out) < 1.0);
        const double lhs = std::atanh(out) + v.rapidity();
        const double rhs = u.rapidity() + up.rapidity();
        if (std::abs(out) < 0.999999)
            CHECK(lhs == Approx(rhs).epsilon(1e-8).scale(1.0));
    }
}

TEST_CASE("slow motion reduces to the galilean law") {
    const double s = 1e-4;
    const double rel = reflect_relativistic(SubluminalVelocity(0.3 * s), SubluminalVelocity(0.1 * s),
                                            SubluminalVelocity(0.2 * s));
    CHECK(rel == Approx(reflect_nonrelativistic(0.3 * s, 0.1 * s, 0.2 * s)).epsilon(1e-6).scale(s));
}
