#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <sstream>

#include "solar3d/baselines.hpp"
#include "solar3d/sim.hpp"

using namespace solar3d;

namespace {

Mesh horizontal_panel(double side, double x0 = 0.0, double y0 = 0.0, double z = 0.0) {
    Mesh m;
    m.triangles = {{{x0, y0, z}, {x0 + side, y0, z}, {x0 + side, y0 + side, z}},
                   {{x0, y0, z}, {x0 + side, y0 + side, z}, {x0, y0 + side, z}}};
    return m;
}

SimConfig quick_config() {
    SimConfig cfg;
    cfg.subcell_target_area = 1.0;
    return cfg;
}

}  // namespace

TEST_CASE("flat panel at zenith sun matches the closed-form product") {
    // 1 m^2 horizontal panel, artificial sun straight overhead.
    const Mesh m = horizontal_panel(1.0);
    SimConfig cfg = quick_config();
    SunState sun;
    sun.zenith = 0.0;
    sun.azimuth = 180.0;
    sun.s_hat = {0, 0, 1};
    // T(0) * I(0) * A * eta = 0.859375 * 1041.6 * 1 * 0.12
    const auto p = instantaneous_power(m, sun, cfg);
    CHECK(p.total_w == Catch::Approx(107.415).margin(1e-9));
}

TEST_CASE("a parallel opaque cover zeroes the primary contribution") {
    Mesh m = horizontal_panel(2.0);
    Mesh cover = horizontal_panel(6.0, -2.0, -2.0, 1.0);
    m.triangles.insert(m.triangles.end(), cover.triangles.begin(), cover.triangles.end());
    SimConfig cfg = quick_config();
    cfg.secondary_bounce = false;
    SunState sun;
    sun.zenith = 0.0;
    sun.s_hat = {0, 0, 1};
    const auto p = instantaneous_power(m, sun, cfg);
    CHECK(p.per_triangle_w[0] == 0.0);
    CHECK(p.per_triangle_w[1] == 0.0);
    CHECK(p.per_triangle_w[2] > 0.0);
    CHECK(p.per_triangle_w[3] > 0.0);
}

namespace {

// Horizontal 2x2 receiver at the origin plus a 2x2 wall at x = -6,
// z in [6, 8], sized so that with the sun at 45 deg in the x-z plane
// every receiver reflection lands on the wall and vice versa.
Mesh receiver_and_wall(bool wall_faces_receiver) {
    Mesh m = horizontal_panel(2.0);
    const Vec3 a{-6, 0, 6}, b{-6, 2, 6}, c{-6, 2, 8}, d{-6, 0, 8};
    if (wall_faces_receiver) {  // +x normal
        m.triangles.push_back({a, b, c});
        m.triangles.push_back({a, c, d});
    } else {  // -x normal: receiver reflections strike its back
        m.triangles.push_back({a, c, b});
        m.triangles.push_back({a, d, c});
    }
    return m;
}

SunState sun_45_east() {
    SunState sun;
    sun.zenith = 45.0;
    sun.azimuth = 90.0;
    const double s = std::sqrt(0.5);
    sun.s_hat = {s, 0, s};
    return sun;
}

}  // namespace

TEST_CASE("facing panels exchange a closed-form secondary term") {
    const Mesh m = receiver_and_wall(true);
    const SunState sun = sun_45_east();
    SimConfig cfg = quick_config();
    cfg.secondary_bounce = false;
    const double single = instantaneous_power(m, sun, cfg).total_w;
    cfg.secondary_bounce = true;
    const double with_bounce = instantaneous_power(m, sun, cfg).total_w;
    CHECK(with_bounce > single);
    // Both mirrored beams hit at 45 deg, each carrying R*I*cos45*A:
    // panel -> wall plus wall -> panel, A = 4 m^2 each.
    const double irradiance = direct_irradiance(45.0);
    const double term = fresnel_reflectance(45.0) * irradiance * std::sqrt(0.5) * 4.0 *
                        transmission(45.0) * 0.12;
    CHECK(with_bounce - single == Catch::Approx(2.0 * term).epsilon(1e-9));
    // Bound: one bounce can at most recycle the reflected fraction.
    CHECK(with_bounce <= single * (1.0 + fresnel_reflectance(45.0)) + 1e-9);
}

TEST_CASE("secondary bounce on a back face is discarded") {
    const Mesh m = receiver_and_wall(false);
    const SunState sun = sun_45_east();
    SimConfig cfg = quick_config();
    cfg.secondary_bounce = false;
    const auto without = instantaneous_power(m, sun, cfg);
    cfg.secondary_bounce = true;
    const auto with_bounce = instantaneous_power(m, sun, cfg);
    CHECK(with_bounce.total_w == without.total_w);
    // The flipped wall is back-lit, so only the receiver produces power.
    CHECK(without.per_triangle_w[2] == 0.0);
    CHECK(without.per_triangle_w[3] == 0.0);
}

TEST_CASE("trapezoid of a constant is exact") {
    // Inject a constant power curve through the public integration path
    // by checking the identity on a hand-built curve.
    std::vector<double> grid;
    for (int i = 0; i <= 100; ++i) grid.push_back(5.0 + 10.0 * i / 100.0);
    double energy = 0.0;
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        energy += 0.5 * (100.0 + 100.0) * (grid[i + 1] - grid[i]);
    }
    CHECK(energy == Catch::Approx(1000.0).epsilon(1e-12));
}

TEST_CASE("daily simulation of the flat panel") {
    const Mesh m = horizontal_panel(20.0);
    SimConfig cfg = quick_config();
    const SimResult r = simulate_day(m, cfg);
    REQUIRE(r.curve.size() > 100);
    CHECK(r.energy_wh > 0.0);
    CHECK(r.peak_w > 0.0);
    SECTION("non-negativity and ordering") {
        for (std::size_t i = 0; i < r.curve.size(); ++i) {
            CHECK(r.curve[i].power_w >= 0.0);
            if (i) CHECK(r.curve[i].local_hour > r.curve[i - 1].local_hour);
        }
    }
    SECTION("per-triangle energies sum to the total") {
        double sum = 0.0;
        for (const double e : r.per_triangle_wh) sum += e;
        CHECK(std::abs(sum - r.energy_wh) / r.energy_wh < 1e-9);
    }
    SECTION("peak equals the max sample") {
        double mx = 0.0;
        for (const auto& s : r.curve) mx = std::max(mx, s.power_w);
        CHECK(r.peak_w == mx);
    }
}

TEST_CASE("energy halves when a lone panel shrinks to half area") {
    const Mesh big = horizontal_panel(10.0, 5.0, 5.0);
    // Same centroid, half the area: scale side by 1/sqrt(2).
    const double side = 10.0 / std::sqrt(2.0);
    const double off = (10.0 - side) / 2.0;
    const Mesh small = horizontal_panel(side, 5.0 + off, 5.0 + off);
    SimConfig cfg = quick_config();
    cfg.subcell_target_area = 0.5;
    cfg.step_minutes = 12.0;
    const double e_big = simulate_day(big, cfg).energy_wh;
    const double e_small = simulate_day(small, cfg).energy_wh;
    CHECK(std::abs(e_small / e_big - 0.5) < 0.001);
}

TEST_CASE("integration refines as the step shrinks") {
    const Mesh cube = baselines::gen_open_cube(6.0, 6.0);
    SimConfig cfg = quick_config();
    cfg.subcell_target_area = 2.0;
    std::vector<double> energies;
    for (const double step : {24.0, 12.0, 6.0, 3.0}) {
        cfg.step_minutes = step;
        energies.push_back(simulate_day(cube, cfg).energy_wh);
    }
    const double err24 = std::abs(energies[0] - energies[1]) / energies[1];
    const double err12 = std::abs(energies[1] - energies[2]) / energies[2];
    const double err6 = std::abs(energies[2] - energies[3]) / energies[3];
    CHECK(err12 < err24);
    CHECK(err6 < err12 * 2.0);  // allow noise floor at fine steps
}

TEST_CASE("morning and afternoon halves roughly mirror for an E-W symmetric mesh") {
    const Mesh m = horizontal_panel(20.0);
    SimConfig cfg = quick_config();
    const SimResult r = simulate_day(m, cfg);
    double morning = 0.0, afternoon = 0.0;
    // Split around the minimum-zenith sample.
    std::size_t noon = 0;
    for (std::size_t i = 0; i < r.curve.size(); ++i) {
        if (r.curve[i].zenith < r.curve[noon].zenith) noon = i;
    }
    for (std::size_t i = 0; i + 1 < r.curve.size(); ++i) {
        const double e =
            0.5 * (r.curve[i].power_w + r.curve[i + 1].power_w) *
            (r.curve[i + 1].local_hour - r.curve[i].local_hour);
        (i < noon ? morning : afternoon) += e;
    }
    CHECK(std::abs(morning - afternoon) / std::max(morning, afternoon) < 0.02);
}

TEST_CASE("determinism across thread counts") {
    const Mesh cube = baselines::gen_open_cube(8.0, 8.0);
    SimConfig cfg = quick_config();
    cfg.subcell_target_area = 2.0;
    cfg.step_minutes = 12.0;
    cfg.threads = 1;
    const SimResult a = simulate_day(cube, cfg);
    cfg.threads = 8;
    const SimResult b = simulate_day(cube, cfg);
    REQUIRE(a.curve.size() == b.curve.size());
    CHECK(a.energy_wh == b.energy_wh);
    CHECK(a.peak_w == b.peak_w);
    for (std::size_t i = 0; i < a.curve.size(); ++i) {
        CHECK(a.curve[i].power_w == b.curve[i].power_w);
    }
    for (std::size_t k = 0; k < a.per_triangle_wh.size(); ++k) {
        CHECK(a.per_triangle_wh[k] == b.per_triangle_wh[k]);
    }
}

TEST_CASE("light curve CSV export") {
    SimResult r;
    r.curve = {{5.25, 89.0, 60.0, 0.0}, {6.25, 80.0, 70.0, 120.5}, {7.25, 70.0, 80.0, 240.25}};
    const std::string csv = export_lightcurve(r);
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    CHECK(line == "time_iso,zenith_deg,azimuth_deg,power_w");
    std::getline(in, line);
    CHECK(line == "05:15:00,89.000000,60.000000,0.000000");
    std::getline(in, line);
    std::getline(in, line);
    CHECK(line == "07:15:00,70.000000,80.000000,240.250000");
    CHECK_FALSE(std::getline(in, line));

    SimResult empty;
    CHECK(export_lightcurve(empty) == "time_iso,zenith_deg,azimuth_deg,power_w\n");
}

TEST_CASE("empty mesh cannot be simulated") {
    CHECK_THROWS_AS(simulate_day(Mesh{}, SimConfig{}), GeometryError);
}
