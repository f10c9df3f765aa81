#include "cavity/commands.hpp"
#include "cavity/config.hpp"
#include "cavity/errors.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <numbers>

using namespace cavity;
using namespace cavity::app;
using doctest::Approx;
namespace fs = std::filesystem;

namespace {
fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "cavity_config_test";
    fs::create_directories(dir);
    return dir / name;
}
} // namespace

TEST_CASE("keys and values") {
    RunConfig c;
    c.set("trajectory.kind", "lawwu");
    c.set("trajectory.N", "3");
    c.set("trajectory.dL", "0.05");
    c.set("run.mode", "quantum");
    c.set("run.periods", "40");
    CHECK(c.trajectory.kind == "lawwu");
    CHECK(c.trajectory.order == 3);
    CHECK(c.trajectory.amplitude == 0.05);
    CHECK(c.mode == Mode::Quantum);
    CHECK(c.periods == 40);
    CHECK_NOTHROW(c.validate());

    CHECK_THROWS_AS(c.set("trajectory.colour", "red"), ConfigError);
    CHECK_THROWS_AS(c.set("run.periods", "ten"), ConfigError);
    CHECK_THROWS_AS(c.set("run.mode", "relativistic"), ConfigError);
    try {
        c.set("trajectory.L0", "1.0x");
        FAIL("accepted a malformed number");
    } catch (const ConfigError& e) {
        CHECK(e.field() == "trajectory.L0");
    }
}

TEST_CASE("trajectory preconditions surface as config errors") {
    RunConfig c;
    c.set("trajectory.dL", "2.0");
    CHECK_THROWS_AS(c.validate(), ConfigError);
    RunConfig d;
    d.set("trajectory.L0", "-1");
    CHECK_THROWS_AS(d.validate(), ConfigError);
    RunConfig e;
    e.set("trajectory.kind", "file");
    e.set("trajectory.file", scratch("missing.csv").string());
    CHECK_THROWS_AS(e.validate(), ConfigError);
}

TEST_CASE("sinusoidal frequency is the resonance plus the detuning") {
    RunConfig c;
    c.set("trajectory.N", "2");
    c.set("trajectory.domega", "0.01");
    const auto tr = c.build_trajectory();
    CHECK(tr.motion_period() == Approx(2 * std::numbers::pi / (2 * std::numbers::pi + 0.01)));
}

TEST_CASE("INI files") {
    const fs::path good = scratch("good.ini");
    {
        std::ofstream f(good);
        f << "# comment\n[trajectory]\nkind = sin\nN = 2 ; trailing\n\n[run]\nperiods = 12\n";
    }
    RunConfig c;
    c.load_file(good);
    CHECK(c.trajectory.order == 2);
    CHECK(c.periods == 12);
    const auto echo = c.echo();
    CHECK(echo.at("trajectory.N") == "2");

    const fs::path bad = scratch("bad.ini");
    {
        std::ofstream f(bad);
        f << "[trajectory]\nkind = sin\nwobble = 3\n";
    }
    RunConfig d;
    try {
        d.load_file(bad);
        FAIL("accepted an unknown key");
    } catch (const ConfigError& e) {
        CHECK(e.field() == "trajectory.wobble");
        CHECK(std::string(e.what()).find(":3:") != std::string::npos);
    }
    RunConfig e;
    CHECK_THROWS_AS(e.load_file(scratch("absent.ini")), ConfigError);
}

TEST_CASE("number formatting round-trips") {
    for (double v : {0.1, 1.0 / 3.0, 6.02214076e23, -2.5e-300}) {
        CHECK(std::stod(format_number(v)) == v);
    }
}

TEST_CASE("energy fits") {
    std::vector<double> n, quad, expo;
    for (int k = 1; k <= 30; ++k) {
        n.push_back(k);
        quad.push_back(2.0 + 0.5 * k * k);
        expo.push_back(std::exp(0.3 + 0.2 * k));
    }
    const EnergyFit q = fit_energy(n, quad);
    CHECK(q.model == "quadratic");
    CHECK(q.b == Approx(0.5).epsilon(1e-10));
    const EnergyFit e = fit_energy(n, expo);
    CHECK(e.model == "exponential");
    CHECK(e.b == Approx(0.2).epsilon(1e-10));
    CHECK(e.residual < 1e-10);
}

TEST_CASE("trajectory command writes bounce rows") {
    RunConfig c;
    c.set("trajectory.N", "1");
    c.set("run.out", scratch("traj_out").string());
    c.set("run.n", "5");
    const RunManifest m = cmd_trajectory(c);
    REQUIRE_FALSE(m.files.empty());
    CHECK(m.files.front().rows == 6);
    const auto j = m.to_json();
    CHECK(j.contains("engine_version"));
    CHECK(fs::exists(scratch("traj_out") / "manifest.json"));
}
