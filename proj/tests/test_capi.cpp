#include "cavity/cavity.h"

#include <doctest.h>

#include <cmath>
#include <cstring>
#include <numbers>
#include <string>
#include <vector>

using doctest::Approx;
constexpr double pi = std::numbers::pi;

TEST_CASE("status strings and version") {
    CHECK(std::string(cb_status_string(CB_OK)).size() > 0);
    CHECK(std::string(cb_version()).size() > 0);
}

TEST_CASE("invalid arguments report errors") {
    cb_trajectory* tr = nullptr;
    CHECK(cb_trajectory_static(-1.0, &tr) == CB_ERR_INVALID_ARGUMENT);
    CHECK(tr == nullptr);
    CHECK(std::strlen(cb_last_error()) > 0);
    CHECK(cb_trajectory_sinusoidal(1.0, 2.0, pi, &tr) == CB_ERR_INVALID_ARGUMENT);
    CHECK(cb_trajectory_eval(nullptr, 0.0, nullptr) == CB_ERR_NULL_HANDLE);
    const double t[] = {0.0, 1.0};
    const double l[] = {1.0, 1.0};
    CHECK(cb_trajectory_tabulated(t, l, 2, &tr) == CB_ERR_INVALID_ARGUMENT);
}

TEST_CASE("bounce iteration through the C interface") {
    cb_trajectory* tr = nullptr;
    REQUIRE(cb_trajectory_sinusoidal(1.0, 0.01, pi, &tr) == CB_OK);
    cb_mirror_jet jet{};
    REQUIRE(cb_trajectory_eval(tr, 0.5, &jet) == CB_OK);
    CHECK(jet.position == Approx(1.01));
    cb_billiard* map = nullptr;
    REQUIRE(cb_billiard_new(tr, 0.0, &map) == CB_OK);
    cb_trajectory_free(tr);

    std::vector<cb_bounce> rows(11);
    REQUIRE(cb_billiard_iterate(map, 0.0, 10, rows.data()) == CB_OK);
    const double x = 0.01 * pi;
    CHECK(rows[10].doppler == Approx(std::pow((1 + x) / (1 - x), 10)).epsilon(1e-10));
    CHECK(rows[10].time == Approx(20.0).epsilon(1e-10));

    double f = 0.0, back = 0.0;
    REQUIRE(cb_billiard_f(map, 2.3, &f) == CB_OK);
    REQUIRE(cb_billiard_f_inverse(map, f, &back) == CB_OK);
    CHECK(back == Approx(2.3).epsilon(1e-12));

    cb_periodic_path paths[8];
    std::size_t count = 0;
    REQUIRE(cb_find_periodic(map, paths, 8, &count) == CB_OK);
    CHECK(count == 2);

    cb_field* cl = nullptr;
    REQUIRE(cb_field_classical_uniform(map, 1.0, &cl) == CB_OK);
    CHECK(cb_field_is_quantum(cl) == 0);
    double rho = 0.0;
    REQUIRE(cb_field_rho(cl, 20.0, &rho) == CB_OK);
    CHECK(rho == Approx(std::pow((1 + x) / (1 - x), 20)).epsilon(1e-8));
    double e = 0.0;
    CHECK(cb_field_energy_density(cl, 1.0, 1.5, &e) == CB_ERR_DOMAIN);
    double phase = 0.0;
    CHECK(cb_field_moore_phase(cl, 0.0, &phase) == CB_ERR_INVALID_ARGUMENT);
    cb_field_free(cl);

    cb_field* q = nullptr;
    REQUIRE(cb_field_quantum_vacuum(map, &q) == CB_OK);
    double c = 0.0;
    REQUIRE(cb_field_growth_coefficient(q, 0.0, 4000, &c) == CB_OK);
    CHECK(c == Approx(pi / 48 * x * x / (1 - x * x)).epsilon(1e-8));
    CHECK(cb_field_growth_coefficient(q, -1.0, 4000, &c) == CB_ERR_INVALID_ARGUMENT);
    cb_field_free(q);
    cb_billiard_free(map);
}

TEST_CASE("band scan through the C interface") {
    std::vector<cb_band_sample> out(21);
    REQUIRE(cb_scan_band(1.0, 0.01, 0.97 * pi, 1.03 * pi, out.size(), out.data()) == CB_OK);
    CHECK(out[10].has_return_points == 1);
    CHECK(out[0].has_return_points == 0);
    CHECK(out[10].growth_exponent > out[5].growth_exponent);
}

TEST_CASE("config errors and verification") {
    cb_config* cfg = nullptr;
    REQUIRE(cb_config_new(&cfg) == CB_OK);
    CHECK(cb_config_set(cfg, "nope.key", "1") == CB_ERR_CONFIG);
    CHECK(cb_config_load(cfg, "/nonexistent/run.ini") == CB_ERR_CONFIG);
    cb_config_free(cfg);

    int failures = -1;
    CHECK(cb_run_verify(0.0, nullptr, nullptr, &failures) == CB_OK);
    CHECK(failures == 0);
    std::size_t lines = 0;
    const cb_line_sink sink = [](const char*, void* user) { ++*static_cast<std::size_t*>(user); };
    CHECK(cb_run_verify(1e-3, sink, &lines, &failures) == CB_ERR_VERIFY);
    CHECK(failures > 0);
    CHECK(lines > 0);
}
