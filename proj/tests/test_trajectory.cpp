#include "cavity/errors.hpp"
#include "cavity/trajectory.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

using namespace cavity;
using doctest::Approx;
constexpr double pi = std::numbers::pi;

TEST_CASE("static mirror") {
    const auto s = make_static(1.0);
    CHECK(s.kind() == TrajectoryKind::Static);
    CHECK(s.position(5.0) == 1.0);
    CHECK(s.evaluate(5.0).velocity == 0.0);
    CHECK(make_static(2.0).position(-3.0) == 2.0);
    CHECK_THROWS_AS(make_static(0.0), PreconditionError);
    CHECK_THROWS_AS(make_static(-1.0), PreconditionError);
}

TEST_CASE("sinusoidal mirror") {
    const auto s = make_sinusoidal(1.0, 0.1, pi);
    const MirrorJet j = s.evaluate(0.0);
    CHECK(j.position == Approx(1.0));
    CHECK(j.velocity == Approx(0.1 * pi).epsilon(1e-15));
    CHECK(j.jerk == Approx(-0.1 * pi * pi * pi).epsilon(1e-14));
    CHECK(make_sinusoidal(1.0, 0.1, 2 * pi).position(0.25) == Approx(1.1).epsilon(1e-15));
    CHECK(s.motion_period() == Approx(2.0));
    CHECK_THROWS_AS(make_sinusoidal(1.0, 0.5, 3.0), PreconditionError); // omega dL = 1.5
    CHECK_THROWS_AS(make_sinusoidal(1.0, 1.0, 0.5), PreconditionError); // dL = L0
    CHECK_THROWS_AS(make_sinusoidal(1.0, 0.0, 1.0), PreconditionError);
    CHECK(resonance_frequency(1.0, 2) == Approx(2 * pi));
}

TEST_CASE("Law-Wu mirror") {
    const auto lw = make_law_wu(1.0, 0.1, 2);
    CHECK(lw.position(0.0) == Approx(1.0).epsilon(1e-15));
    // cos(w t) = 1 is a turning point.
    CHECK(lw.evaluate(1.0).velocity == Approx(0.0).scale(1.0).epsilon(1e-14));
    double worst = 0.0;
    for (int i = 0; i <= 20000; ++i)
        worst = std::max(worst, std::abs(lw.position(2.0 * i / 20000.0) - 1.0));
    CHECK(worst <= 0.1 + 1e-12);
    CHECK(worst == Approx(0.1).epsilon(1e-6));
    CHECK(lw.motion_period() == Approx(1.0));
    CHECK_THROWS_AS(make_law_wu(1.0, 0.6, 2), PreconditionError); // dL >= L0/N
    CHECK_THROWS_AS(make_law_wu(1.0, 0.1, 0), PreconditionError);
}

TEST_CASE("analytic derivatives match finite differences") {
    const MirrorTrajectory trajs[] = {make_sinusoidal(1.0, 0.05, 3.0), make_law_wu(1.0, 0.1, 2),
                                      make_law_wu(1.3, 0.2, 1)};
    const double h = 1e-3;
    for (const auto& tr : trajs)
        for (double t : {-0.7, 0.1, 0.45, 1.9}) {
            auto p = [&](double x) { return tr.position(x); };
            const MirrorJet j = tr.evaluate(t);
            const double d1 = (p(t + h) - p(t - h)) / (2 * h);
            const double d2 = (p(t + h) - 2 * p(t) + p(t - h)) / (h * h);
            const double d3 = (p(t + 2 * h) - 2 * p(t + h) + 2 * p(t - h) - p(t - 2 * h)) / (2 * h * h * h);
            CHECK(j.velocity == Approx(d1).epsilon(1e-5).scale(1.0));
            CHECK(j.acceleration == Approx(d2).epsilon(1e-4).scale(1.0));
            CHECK(j.jerk == Approx(d3).epsilon(1e-3).scale(1.0));
        }
}

TEST_CASE("tabulated mirror follows a dense sinusoid") {
    const auto sin_tr = make_sinusoidal(1.0, 0.1, 2 * pi);
    std::vector<std::pair<double, double>> rows;
    for (int i = 0; i <= 800; ++i) {
        const double t = -2.0 + 8.0 * i / 800;
        rows.emplace_back(t, sin_tr.position(t));
    }
    const auto tab = make_tabulated(rows);
    CHECK(tab.smoothness() == 2);
    CHECK(tab.unperturbed_length() == Approx(1.0));
    double worst = 0.0;
    for (std::size_t i = 100; i + 100 < rows.size(); ++i) {
        const double mid = 0.5 * (rows[i].first + rows[i + 1].first);
        worst = std::max(worst, std::abs(tab.position(mid) - sin_tr.position(mid)));
    }
    CHECK(worst < 1e-6);
    CHECK_THROWS_AS(tab.position(10.0), DomainError);
}

TEST_CASE("tabulated mirror rejects bad tables") {
    CHECK_THROWS_AS(make_tabulated({{0.0, 1.0}, {1.0, 1.0}}), PreconditionError);
    CHECK_THROWS_AS(make_tabulated({{0.0, 1.0}, {1.0, 1.0}, {0.5, 1.0}, {2.0, 1.0}}),
                    PreconditionError);
    CHECK_THROWS_AS(make_tabulated({{1.0, 1.0}, {2.0, 1.0}, {3.0, 1.0}, {4.0, 1.0}}),
                    PreconditionError); // t = 0 not covered
    CHECK_THROWS_AS(make_tabulated({{-1.0, 1.0}, {0.0, 1.0}, {1.0, 3.0}, {2.0, 1.0}}),
                    PreconditionError); // superluminal
}

TEST_CASE("constant table behaves like a static mirror") {
    const auto tab = make_tabulated({{-2.0, 1.0}, {-1.0, 1.0}, {0.0, 1.0}, {1.0, 1.0}, {5.0, 1.0}});
    for (double t : {-1.5, 0.0, 3.3}) {
        const MirrorJet j = tab.evaluate(t);
        CHECK(j.position == Approx(1.0).epsilon(1e-15));
        CHECK(std::abs(j.velocity) < 1e-15);
    }
}

TEST_CASE("trajectory table file") {
    const auto path = std::filesystem::temp_directory_path() / "cavity_traj_table.txt";
    {
        std::ofstream out(path);
        out << "# t L\n-1 1\n0 1.0  # comment\n\n1 1\n2 1\n";
    }
    const auto rows = read_trajectory_table(path);
    REQUIRE(rows.size() == 4);
    CHECK(rows[1].first == 0.0);
    {
        std::ofstream out(path);
        out << "0 1 2\n";
    }
    CHECK_THROWS_AS(read_trajectory_table(path), IoError);
    std::filesystem::remove(path);
    CHECK_THROWS_AS(read_trajectory_table(path), IoError);
}
