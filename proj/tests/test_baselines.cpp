#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "solar3d/baselines.hpp"
#include "solar3d/guards.hpp"
#include "solar3d/sim.hpp"

using namespace solar3d;

TEST_CASE("closed-form areas") {
    CHECK(baselines::gen_flat(20.0).total_area() == Catch::Approx(400.0).epsilon(1e-9));
    CHECK(baselines::gen_open_cube(10.0, 10.0).total_area() ==
          Catch::Approx(100.0 + 8 * 100.0).epsilon(1e-9));  // s^2 + 8sh, walls two-faced
    CHECK(baselines::gen_open_cube(20.0, 10.0).total_area() ==
          Catch::Approx(2000.0).epsilon(1e-9));
    CHECK(baselines::gen_high_table(20.0, 10.0).total_area() ==
          Catch::Approx(800.0).epsilon(1e-9));  // 2 walls + roof
    CHECK(baselines::gen_cavity_fin(20.0, 10.0).total_area() ==
          Catch::Approx(2000.0).epsilon(1e-9));  // floor + two-faced 3 walls + fin
    // Sawtooth: skirts + roof strips + wall profile (twice the area under
    // the M profile, which is s^2 * (z_lo + z_hi) / (2 * s) per side... use
    // the decomposition directly instead.
    const double s = 20.0, z_lo = 2.0, z_hi = 8.0, rf = 0.75;
    const int teeth = 2;
    const double pitch = s / teeth;
    const double dy_up = rf * pitch, dy_dn = (1 - rf) * pitch;
    const double roof = teeth * s *
                        (std::hypot(dy_up, z_hi - z_lo) + std::hypot(dy_dn, z_hi - z_lo));
    const double profile = teeth * (dy_up + dy_dn) * (z_lo + z_hi) / 2.0;  // trapezoids
    const double skirts = 2.0 * s * z_lo;
    CHECK(baselines::gen_tilted_sawtooth(s, z_lo, z_hi, teeth, rf).total_area() ==
          Catch::Approx(roof + 2.0 * profile + skirts).epsilon(1e-9));
    const double tilt = 19.0, wh = 8.0, ph = 8.0;
    const double slant = ph / std::cos(spa::deg2rad(tilt));  // partition slant height
    CHECK(baselines::gen_tilted_waffle(20.0, 11, 13, tilt, wh, ph).total_area() ==
          Catch::Approx(11 * 20.0 * wh + 13 * 20.0 * slant).epsilon(1e-9));
}

TEST_CASE("waffle stays within its 20x footprint cap") {
    CHECK(baselines::gen_tilted_waffle().total_area() <= 20.0 * 400.0);
}

TEST_CASE("every family passes the guards") {
    GuardConfig guard;
    guard.area_cap = 8000.0;
    for (const auto& name : baselines::names()) {
        INFO(name);
        const auto report = run_guards(baselines::generate(name), guard);
        const std::string why = report.violations.empty()
                                    ? ""
                                    : report.violations[0].rule + ": " + report.violations[0].detail;
        INFO(why);
        CHECK(report.all_ok());
    }
}

TEST_CASE("generators are deterministic") {
    for (const auto& name : baselines::names()) {
        CHECK(serialize_geometry(baselines::generate(name)) ==
              serialize_geometry(baselines::generate(name)));
    }
}

TEST_CASE("volumetric designs beat the same-footprint flat panel") {
    SimConfig cfg;
    cfg.subcell_target_area = 2.0;
    cfg.step_minutes = 20.0;
    const double flat = simulate_day(baselines::gen_flat(10.0), cfg).energy_wh;
    CHECK(simulate_day(baselines::gen_open_cube(10.0, 10.0), cfg).energy_wh > flat);
    const double flat20 = simulate_day(baselines::gen_flat(20.0), cfg).energy_wh;
    CHECK(simulate_day(baselines::gen_high_table(20.0, 10.0), cfg).energy_wh > flat20);
    CHECK(simulate_day(baselines::gen_cavity_fin(20.0, 10.0), cfg).energy_wh > flat20);
    CHECK(simulate_day(baselines::gen_tilted_sawtooth(), cfg).energy_wh > flat20);
    CHECK(simulate_day(baselines::gen_tilted_waffle(), cfg).energy_wh > flat20);
}

TEST_CASE("parameter dispatch") {
    CHECK(baselines::generate("flat", {{"s", 10.0}}).total_area() ==
          Catch::Approx(100.0).epsilon(1e-9));
    CHECK_THROWS_AS(baselines::generate("megatower"), baselines::BaselineError);
    CHECK_THROWS_AS(baselines::generate("flat", {{"height", 3.0}}), baselines::BaselineError);
    CHECK_THROWS_AS(baselines::generate("open-cube", {{"s", -1.0}}), baselines::BaselineError);
    CHECK_THROWS_AS(baselines::generate("sawtooth", {{"z_lo", 8.0}, {"z_hi", 2.0}}),
                    baselines::BaselineError);
}
