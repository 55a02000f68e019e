#pragma once

#include <fstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "solar3d/guards.hpp"
#include "solar3d/sim.hpp"

namespace solar3d {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    SimConfig sim;
    GuardConfig guard;
};

namespace detail {

inline void check_keys(const nlohmann::json& obj, std::initializer_list<const char*> allowed,
                       const std::string& section) {
    for (const auto& [key, value] : obj.items()) {
        bool ok = false;
        for (const char* a : allowed) {
            if (key == a) ok = true;
        }
        if (!ok) throw ConfigError("unknown key \"" + key + "\" in config section " + section);
    }
}

template <typename T>
void maybe(const nlohmann::json& obj, const char* key, T& out) {
    if (obj.contains(key)) out = obj.at(key).get<T>();
}

}  // namespace detail

// Missing keys take the compiled defaults; unknown keys are rejected.
inline RunConfig parse_config(const nlohmann::json& j) {
    RunConfig cfg;
    detail::check_keys(j, {"site", "optics", "sim", "guard"}, "(root)");
    if (j.contains("site")) {
        const auto& s = j.at("site");
        detail::check_keys(s,
                           {"latitude", "longitude", "year", "month", "day", "timezone",
                            "elevation", "delta_t", "pressure", "temperature", "apply_refraction"},
                           "site");
        Site& site = cfg.sim.site;
        detail::maybe(s, "latitude", site.latitude);
        detail::maybe(s, "longitude", site.longitude);
        detail::maybe(s, "year", site.year);
        detail::maybe(s, "month", site.month);
        detail::maybe(s, "day", site.day);
        detail::maybe(s, "timezone", site.timezone);
        detail::maybe(s, "elevation", site.elevation);
        detail::maybe(s, "delta_t", site.delta_t);
        detail::maybe(s, "pressure", site.pressure);
        detail::maybe(s, "temperature", site.temperature);
        detail::maybe(s, "apply_refraction", site.apply_refraction);
        if (std::abs(site.latitude) > 90.0 || std::abs(site.longitude) > 180.0) {
            throw ConfigError("site coordinates out of range");
        }
    }
    if (j.contains("optics")) {
        const auto& o = j.at("optics");
        detail::check_keys(o, {"n1", "n2", "eta", "s0", "k_atm", "am_exp", "literal_am"}, "optics");
        OpticsConfig& oc = cfg.sim.optics;
        detail::maybe(o, "n1", oc.n1);
        detail::maybe(o, "n2", oc.n2);
        detail::maybe(o, "eta", oc.eta);
        detail::maybe(o, "s0", oc.s0);
        detail::maybe(o, "k_atm", oc.k_atm);
        detail::maybe(o, "am_exp", oc.am_exp);
        detail::maybe(o, "literal_am", oc.literal_am);
        if (oc.n2 <= oc.n1 || oc.n1 <= 0.0 || oc.eta <= 0.0 || oc.eta > 1.0 || oc.s0 <= 0.0 ||
            oc.k_atm <= 0.0 || oc.k_atm >= 1.0) {
            throw ConfigError("optics constants out of range");
        }
    }
    if (j.contains("sim")) {
        const auto& s = j.at("sim");
        detail::check_keys(
            s, {"step_minutes", "subcell_target_area", "shadow_eps", "secondary_bounce",
                "brute_force", "threads"},
            "sim");
        detail::maybe(s, "step_minutes", cfg.sim.step_minutes);
        detail::maybe(s, "subcell_target_area", cfg.sim.subcell_target_area);
        detail::maybe(s, "shadow_eps", cfg.sim.shadow_eps);
        detail::maybe(s, "secondary_bounce", cfg.sim.secondary_bounce);
        detail::maybe(s, "brute_force", cfg.sim.brute_force);
        detail::maybe(s, "threads", cfg.sim.threads);
        if (cfg.sim.step_minutes <= 0.0 || cfg.sim.subcell_target_area <= 0.0 ||
            cfg.sim.shadow_eps <= 0.0) {
            throw ConfigError("sim parameters must be positive");
        }
    }
    if (j.contains("guard")) {
        const auto& g = j.at("guard");
        detail::check_keys(g,
                           {"ground_eps", "hash_quantum", "min_feature", "min_area",
                            "min_clearance", "parallel_tol_deg", "area_cap", "box_x", "box_y",
                            "box_z", "overlap_enabled", "soft_penalty_factor"},
                           "guard");
        GuardConfig& gc = cfg.guard;
        detail::maybe(g, "ground_eps", gc.ground_eps);
        detail::maybe(g, "hash_quantum", gc.hash_quantum);
        detail::maybe(g, "min_feature", gc.min_feature);
        detail::maybe(g, "min_area", gc.min_area);
        detail::maybe(g, "min_clearance", gc.min_clearance);
        detail::maybe(g, "parallel_tol_deg", gc.parallel_tol_deg);
        detail::maybe(g, "area_cap", gc.area_cap);
        detail::maybe(g, "box_x", gc.box.x_max);
        detail::maybe(g, "box_y", gc.box.y_max);
        detail::maybe(g, "box_z", gc.box.z_max);
        detail::maybe(g, "overlap_enabled", gc.overlap_enabled);
        detail::maybe(g, "soft_penalty_factor", gc.soft_penalty_factor);
        if (gc.ground_eps <= 0.0 || gc.hash_quantum <= 0.0 || gc.min_feature <= 0.0 ||
            gc.min_area <= 0.0 || gc.min_clearance <= 0.0 || gc.area_cap <= 0.0 ||
            gc.box.x_max <= 0.0 || gc.box.y_max <= 0.0 || gc.box.z_max <= 0.0) {
            throw ConfigError("guard thresholds must be positive");
        }
    }
    return cfg;
}

inline RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config JSON parse failure in " + path + ": " + e.what());
    }
    return parse_config(j);
}

inline nlohmann::json sim_result_to_json(const SimResult& r) {
    nlohmann::json samples = nlohmann::json::array();
    for (const LightCurveSample& s : r.curve) {
        samples.push_back({{"time", format_local_time(s.local_hour)},
                           {"zenith_deg", s.zenith},
                           {"azimuth_deg", s.azimuth},
                           {"power_w", s.power_w}});
    }
    return {{"energy_wh", r.energy_wh},
            {"peak_w", r.peak_w},
            {"samples", samples},
            {"per_triangle_wh", r.per_triangle_wh}};
}

inline nlohmann::json guard_report_to_json(const GuardReport& r) {
    nlohmann::json violations = nlohmann::json::array();
    for (const Violation& v : r.violations) {
        violations.push_back({{"rule", v.rule}, {"triangles", v.triangles}, {"detail", v.detail}});
    }
    return {{"bbox_ok", r.bbox_ok},
            {"connectivity_ok", r.connectivity_ok},
            {"area_ok", r.area_ok},
            {"degeneracy_ok", r.degeneracy_ok},
            {"overlap_ok", r.overlap_ok},
            {"violations", violations},
            {"final_score_wh", r.final_score}};
}

}  // namespace solar3d
