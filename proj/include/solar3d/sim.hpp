#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <thread>
#include <vector>

#include "solar3d/geometry.hpp"
#include "solar3d/optics.hpp"
#include "solar3d/shade.hpp"
#include "solar3d/solar.hpp"

namespace solar3d {

struct SimConfig {
    Site site;
    OpticsConfig optics;
    double step_minutes = 6.0;
    double subcell_target_area = 0.25;  // m^2
    double shadow_eps = 1e-6;           // m
    bool secondary_bounce = true;
    bool brute_force = false;           // exhaustive occlusion instead of the index
    int threads = 1;                    // parallel width across timesteps
};

struct LightCurveSample {
    double local_hour = 0.0;
    double zenith = 0.0;
    double azimuth = 0.0;
    double power_w = 0.0;
};

struct SimResult {
    double energy_wh = 0.0;
    double peak_w = 0.0;
    std::vector<LightCurveSample> curve;
    std::vector<double> per_triangle_wh;
};

struct PowerBreakdown {
    double total_w = 0.0;
    std::vector<double> per_triangle_w;
};

// §2-style evaluation of one instant: per sub-cell, back-face cull,
// shadow test, Fresnel absorption, then one reflected bounce whose beam
// carries R·I·cosθi·A and deposits T(θi2)·η on a front-face hit.
inline PowerBreakdown instantaneous_power(const Mesh& mesh, const std::vector<SubCell>& cells,
                                          const OcclusionIndex& index, const SunState& sun,
                                          const SimConfig& cfg) {
    PowerBreakdown out;
    out.per_triangle_w.assign(mesh.size(), 0.0);
    if (sun.zenith >= 90.0) return out;
    const double irradiance = direct_irradiance(sun.zenith, cfg.optics);
    const Vec3 s_hat = sun.s_hat;
    for (const SubCell& cell : cells) {
        const double cos_i = s_hat.dot(cell.normal);
        if (cos_i <= 0.0) continue;  // back-lit, single-sided panel
        if (is_shadowed(cell.centroid, s_hat, index, cell.parent, cfg.shadow_eps)) continue;
        const double theta_i = spa::rad2deg(std::acos(std::min(cos_i, 1.0)));
        out.per_triangle_w[cell.parent] +=
            subcell_power(theta_i, irradiance, cell.area, cfg.optics);
        if (!cfg.secondary_bounce) continue;
        const double refl_power =
            fresnel_reflectance(theta_i, cfg.optics) * irradiance * cos_i * cell.area;
        if (refl_power <= 0.0) continue;
        const Vec3 dir = reflect_direction(-s_hat, cell.normal);
        const Ray ray{cell.centroid + cfg.shadow_eps * dir, dir};
        const auto hit = index.nearest_hit(ray, cell.parent);
        if (!hit) continue;
        const Vec3 n2 = mesh.triangles[hit->triangle].normal();
        const double cos_i2 = -dir.dot(n2);
        if (cos_i2 <= 0.0) continue;  // back-face hit, discarded
        const double theta_i2 = spa::rad2deg(std::acos(std::min(cos_i2, 1.0)));
        out.per_triangle_w[hit->triangle] +=
            transmission(theta_i2, cfg.optics) * refl_power * cfg.optics.eta;
    }
    for (const double p : out.per_triangle_w) out.total_w += p;
    return out;
}

inline PowerBreakdown instantaneous_power(const Mesh& mesh, const SunState& sun,
                                          const SimConfig& cfg) {
    const auto cells = tessellate(mesh, cfg.subcell_target_area);
    const OcclusionIndex index(mesh, cfg.brute_force);
    return instantaneous_power(mesh, cells, index, sun, cfg);
}

// Full-day light curve and Eq.-2-style trapezoidal energy (Wh).
inline SimResult simulate_day(const Mesh& mesh, const SimConfig& cfg) {
    if (mesh.empty()) throw GeometryError("cannot simulate an empty mesh");
    const auto [t_rise, t_set] = sunrise_sunset(cfg.site);
    const std::vector<double> grid = time_grid(t_rise, t_set, cfg.step_minutes);
    const auto cells = tessellate(mesh, cfg.subcell_target_area);
    const OcclusionIndex index(mesh, cfg.brute_force);

    std::vector<SunState> suns(grid.size());
    std::vector<PowerBreakdown> powers(grid.size());
    const auto eval = [&](std::size_t i) {
        suns[i] = sun_position(cfg.site, grid[i]);
        powers[i] = suns[i].zenith < 90.0
                        ? instantaneous_power(mesh, cells, index, suns[i], cfg)
                        : PowerBreakdown{0.0, std::vector<double>(mesh.size(), 0.0)};
    };
    const int threads = std::max(1, cfg.threads);
    if (threads == 1 || grid.size() < 2) {
        for (std::size_t i = 0; i < grid.size(); ++i) eval(i);
    } else {
        std::vector<std::thread> pool;
        std::size_t next = 0;
        const std::size_t chunk = (grid.size() + threads - 1) / threads;
        for (int w = 0; w < threads && next < grid.size(); ++w) {
            const std::size_t lo = next;
            const std::size_t hi = std::min(grid.size(), lo + chunk);
            next = hi;
            pool.emplace_back([&, lo, hi] {
                for (std::size_t i = lo; i < hi; ++i) eval(i);
            });
        }
        for (auto& t : pool) t.join();
    }

    SimResult result;
    result.per_triangle_wh.assign(mesh.size(), 0.0);
    result.curve.reserve(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        result.curve.push_back(
            {grid[i], suns[i].zenith, suns[i].azimuth, powers[i].total_w});
        result.peak_w = std::max(result.peak_w, powers[i].total_w);
    }
    // Fixed reduction order: timesteps ascending, then triangles.
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        const double dt = grid[i + 1] - grid[i];
        result.energy_wh += 0.5 * (powers[i].total_w + powers[i + 1].total_w) * dt;
        for (std::size_t k = 0; k < mesh.size(); ++k) {
            result.per_triangle_wh[k] +=
                0.5 * (powers[i].per_triangle_w[k] + powers[i + 1].per_triangle_w[k]) * dt;
        }
    }
    return result;
}

inline std::string export_lightcurve(const SimResult& result) {
    std::string out = "time_iso,zenith_deg,azimuth_deg,power_w\n";
    char buf[128];
    for (const LightCurveSample& s : result.curve) {
        std::snprintf(buf, sizeof(buf), "%s,%.6f,%.6f,%.6f\n",
                      format_local_time(s.local_hour).c_str(), s.zenith, s.azimuth, s.power_w);
        out += buf;
    }
    return out;
}

}  // namespace solar3d
