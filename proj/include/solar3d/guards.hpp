#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <deque>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "solar3d/geometry.hpp"
#include "solar3d/sim.hpp"

namespace solar3d {

struct GuardConfig {
    double ground_eps = 0.01;      // m, ground-anchor tolerance
    double hash_quantum = 0.001;   // m, vertex weld scale
    double min_feature = 0.001;    // m, minimum triangle altitude
    double min_area = 1e-6;        // m^2
    double min_clearance = 0.001;  // m, between near-parallel coincident panels
    double parallel_tol_deg = 0.5;
    double area_cap = 1200.0;      // m^2; Eq.-1 style cap, experiment-dependent
    BoundingBox box;
    bool overlap_enabled = true;   // disabled only by the anti-tunneling test
    double soft_penalty_factor = 0.0;  // 0 = hard rejection
};

struct Violation {
    std::string rule;
    std::vector<std::size_t> triangles;
    std::string detail;
};

struct GuardReport {
    bool bbox_ok = true;
    bool connectivity_ok = true;
    bool area_ok = true;
    bool degeneracy_ok = true;
    bool overlap_ok = true;
    std::vector<Violation> violations;
    double final_score = 0.0;  // Wh; 0 on any violation

    bool all_ok() const {
        return bbox_ok && connectivity_ok && area_ok && degeneracy_ok && overlap_ok &&
               violations.empty();
    }
};

struct GuardVerdict {
    bool ok = true;
    Violation violation;
};

namespace detail {

using QuantizedVertex = std::array<std::int64_t, 3>;

inline QuantizedVertex quantize(const Vec3& v, double quantum) {
    return {static_cast<std::int64_t>(std::llround(v.x / quantum)),
            static_cast<std::int64_t>(std::llround(v.y / quantum)),
            static_cast<std::int64_t>(std::llround(v.z / quantum))};
}

}  // namespace detail

// BFS over shared quantized vertices, seeded with ground-anchored triangles.
inline GuardVerdict connectivity_check(const Mesh& mesh, const GuardConfig& cfg) {
    if (mesh.empty()) return {false, {"connectivity", {}, "empty mesh"}};
    std::map<detail::QuantizedVertex, std::vector<std::size_t>> vertex_to_tris;
    for (std::size_t k = 0; k < mesh.size(); ++k) {
        const Triangle& t = mesh.triangles[k];
        for (const Vec3* v : {&t.v1, &t.v2, &t.v3}) {
            vertex_to_tris[detail::quantize(*v, cfg.hash_quantum)].push_back(k);
        }
    }
    std::vector<char> reached(mesh.size(), 0);
    std::deque<std::size_t> queue;
    for (std::size_t k = 0; k < mesh.size(); ++k) {
        const Triangle& t = mesh.triangles[k];
        if (t.v1.z <= cfg.ground_eps || t.v2.z <= cfg.ground_eps || t.v3.z <= cfg.ground_eps) {
            reached[k] = 1;
            queue.push_back(k);
        }
    }
    std::size_t count = queue.size();
    while (!queue.empty()) {
        const std::size_t k = queue.front();
        queue.pop_front();
        const Triangle& t = mesh.triangles[k];
        for (const Vec3* v : {&t.v1, &t.v2, &t.v3}) {
            for (const std::size_t other : vertex_to_tris[detail::quantize(*v, cfg.hash_quantum)]) {
                if (!reached[other]) {
                    reached[other] = 1;
                    ++count;
                    queue.push_back(other);
                }
            }
        }
    }
    if (count == mesh.size()) return {};
    std::vector<std::size_t> orphans;
    for (std::size_t k = 0; k < mesh.size(); ++k) {
        if (!reached[k]) orphans.push_back(k);
    }
    return {false,
            {"connectivity", orphans,
             std::to_string(orphans.size()) + " triangle(s) not reachable from ground"}};
}

inline GuardVerdict degeneracy_check(const Mesh& mesh, const GuardConfig& cfg) {
    for (std::size_t k = 0; k < mesh.size(); ++k) {
        const Triangle& t = mesh.triangles[k];
        const double area = t.area();
        if (area < cfg.min_area) {
            return {false, {"degeneracy", {k}, "area " + std::to_string(area) + " m^2 below minimum"}};
        }
        const double alt = t.min_altitude();
        if (alt < cfg.min_feature) {
            return {false,
                    {"degeneracy", {k}, "altitude " + std::to_string(alt) + " m below minimum"}};
        }
    }
    return {};
}

namespace detail {

// Area of the intersection of two triangles projected into a shared plane,
// by Sutherland–Hodgman clipping.
inline double projected_overlap_area(const Triangle& a, const Triangle& b, const Vec3& normal) {
    // Build a 2D frame in the plane.
    Vec3 u = a.edge1().normalized();
    if (u.norm() == 0.0) u = {1, 0, 0};
    Vec3 w = normal.cross(u).normalized();
    const Vec3 origin = a.v1;
    const auto project = [&](const Vec3& p) {
        const Vec3 d = p - origin;
        return std::array<double, 2>{d.dot(u), d.dot(w)};
    };
    std::vector<std::array<double, 2>> poly{project(b.v1), project(b.v2), project(b.v3)};
    std::array<std::array<double, 2>, 3> clip{project(a.v1), project(a.v2), project(a.v3)};
    // Ensure counter-clockwise clip polygon.
    const double twice_area = (clip[1][0] - clip[0][0]) * (clip[2][1] - clip[0][1]) -
                              (clip[2][0] - clip[0][0]) * (clip[1][1] - clip[0][1]);
    if (twice_area < 0.0) std::swap(clip[1], clip[2]);
    for (int e = 0; e < 3; ++e) {
        const auto& p0 = clip[e];
        const auto& p1 = clip[(e + 1) % 3];
        const auto inside = [&](const std::array<double, 2>& p) {
            return (p1[0] - p0[0]) * (p[1] - p0[1]) - (p1[1] - p0[1]) * (p[0] - p0[0]) >= 0.0;
        };
        const auto intersect = [&](const std::array<double, 2>& s, const std::array<double, 2>& t) {
            const double denom = (p1[0] - p0[0]) * (s[1] - t[1]) - (p1[1] - p0[1]) * (s[0] - t[0]);
            const double num = (p1[0] - p0[0]) * (s[1] - p0[1]) - (p1[1] - p0[1]) * (s[0] - p0[0]);
            const double f = denom != 0.0 ? num / denom : 0.0;
            return std::array<double, 2>{s[0] + f * (t[0] - s[0]), s[1] + f * (t[1] - s[1])};
        };
        std::vector<std::array<double, 2>> next;
        for (std::size_t i = 0; i < poly.size(); ++i) {
            const auto& cur = poly[i];
            const auto& nxt = poly[(i + 1) % poly.size()];
            const bool cur_in = inside(cur);
            const bool nxt_in = inside(nxt);
            if (cur_in) next.push_back(cur);
            if (cur_in != nxt_in) next.push_back(intersect(cur, nxt));
        }
        poly = std::move(next);
        if (poly.empty()) return 0.0;
    }
    double twice = 0.0;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const auto& p = poly[i];
        const auto& q = poly[(i + 1) % poly.size()];
        twice += p[0] * q[1] - p[1] * q[0];
    }
    return 0.5 * std::abs(twice);
}

}  // namespace detail

// Stacked near-parallel panels closer than min_clearance with positive
// projected overlap fail; shared edges (zero-area contact) pass.
inline GuardVerdict overlap_check(const Mesh& mesh, const GuardConfig& cfg) {
    if (!cfg.overlap_enabled) return {};
    const double cos_tol = std::cos(spa::deg2rad(cfg.parallel_tol_deg));
    for (std::size_t i = 0; i < mesh.size(); ++i) {
        const Triangle& a = mesh.triangles[i];
        const Vec3 na = a.normal();
        if (na.norm() == 0.0) continue;  // degeneracy_check owns this case
        for (std::size_t j = i + 1; j < mesh.size(); ++j) {
            const Triangle& b = mesh.triangles[j];
            const Vec3 nb = b.normal();
            if (nb.norm() == 0.0) continue;
            if (std::abs(na.dot(nb)) < cos_tol) continue;
            double sep = 0.0;
            for (const Vec3* v : {&b.v1, &b.v2, &b.v3}) {
                sep = std::max(sep, std::abs((*v - a.v1).dot(na)));
            }
            if (sep >= cfg.min_clearance) continue;
            const double overlap = detail::projected_overlap_area(a, b, na);
            if (overlap > 1e-9) {
                return {false,
                        {"overlap",
                         {i, j},
                         "stacked panels, separation " + std::to_string(sep) + " m, overlap " +
                             std::to_string(overlap) + " m^2"}};
            }
        }
    }
    return {};
}

inline GuardVerdict area_check(const Mesh& mesh, const GuardConfig& cfg) {
    const double total = mesh.total_area();
    if (total <= cfg.area_cap) return {};
    return {false,
            {"area", {}, "total area " + std::to_string(total) + " m^2 exceeds cap " +
                             std::to_string(cfg.area_cap)}};
}

inline GuardVerdict bbox_check(const Mesh& mesh, const GuardConfig& cfg) {
    const BboxVerdict v = check_bbox(mesh, cfg.box);
    if (v.ok) return {};
    char buf[96];
    std::snprintf(buf, sizeof(buf), "vertex (%g, %g, %g) outside box", v.vertex.x, v.vertex.y,
                  v.vertex.z);
    return {false, {"bbox", {v.triangle}, buf}};
}

// Cheap checks first; the first failure zeroes the score.
inline GuardReport run_guards(const Mesh& mesh, const GuardConfig& cfg) {
    GuardReport report;
    if (const auto v = bbox_check(mesh, cfg); !v.ok) {
        report.bbox_ok = false;
        report.violations.push_back(v.violation);
        return report;
    }
    if (const auto v = connectivity_check(mesh, cfg); !v.ok) {
        report.connectivity_ok = false;
        report.violations.push_back(v.violation);
        return report;
    }
    if (const auto v = degeneracy_check(mesh, cfg); !v.ok) {
        report.degeneracy_ok = false;
        report.violations.push_back(v.violation);
        return report;
    }
    if (const auto v = overlap_check(mesh, cfg); !v.ok) {
        report.overlap_ok = false;
        report.violations.push_back(v.violation);
        return report;
    }
    if (const auto v = area_check(mesh, cfg); !v.ok) {
        report.area_ok = false;
        report.violations.push_back(v.violation);
        return report;
    }
    return report;
}

struct ScoreResult {
    double score_wh = 0.0;
    GuardReport report;
    bool parsed = false;
    SimResult sim;  // populated only when all guards pass
};

// Parse -> guards -> simulate. Malformed proposals score 0, never throw.
inline ScoreResult score(const std::string& mesh_text, const SimConfig& sim_cfg,
                         const GuardConfig& guard_cfg) {
    ScoreResult out;
    Mesh mesh;
    try {
        mesh = parse_geometry(mesh_text);
    } catch (const GeometryError& e) {
        out.report.violations.push_back({"parse", {}, e.what()});
        return out;
    }
    out.parsed = true;
    out.report = run_guards(mesh, guard_cfg);
    if (!out.report.all_ok()) {
        if (guard_cfg.soft_penalty_factor > 0.0) {
            out.sim = simulate_day(mesh, sim_cfg);
            out.score_wh = out.sim.energy_wh * guard_cfg.soft_penalty_factor;
            out.report.final_score = out.score_wh;
        }
        return out;
    }
    out.sim = simulate_day(mesh, sim_cfg);
    out.score_wh = out.sim.energy_wh;
    out.report.final_score = out.score_wh;
    return out;
}

}  // namespace solar3d
