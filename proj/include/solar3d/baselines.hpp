#pragma once

#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

#include "solar3d/geometry.hpp"
#include "solar3d/spa.hpp"

namespace solar3d::baselines {

struct BaselineError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

// Corners ordered counter-clockwise seen from the front (normal) side.
inline void quad(Mesh& m, const Vec3& p00, const Vec3& p10, const Vec3& p11, const Vec3& p01) {
    m.triangles.push_back({p00, p10, p11});
    m.triangles.push_back({p00, p11, p01});
}

// Fully active wall: the quad as given plus a reversed copy offset by
// `shift` (gap kFaceGap into the interior), so both sides collect.
constexpr double kFaceGap = 0.01;  // m; above guard clearance and ray eps
inline void active_quad(Mesh& m, const Vec3& p00, const Vec3& p10, const Vec3& p11,
                        const Vec3& p01, const Vec3& shift) {
    quad(m, p00, p10, p11, p01);
    quad(m, p00 + shift, p01 + shift, p11 + shift, p10 + shift);
}

inline void require(bool ok, const std::string& what) {
    if (!ok) throw BaselineError(what);
}

}  // namespace detail

// Two triangles tiling [x0,x0+s] x [y0,y0+s] at z = 0, normals up.
// Generators center the footprint in the default 20 x 20 box.
inline Mesh gen_flat(double s = 20.0, double x0 = -1.0, double y0 = -1.0) {
    detail::require(s > 0.0, "footprint must be positive");
    if (x0 < 0.0) x0 = (20.0 - s) / 2.0;
    if (y0 < 0.0) y0 = (20.0 - s) / 2.0;
    Mesh m;
    detail::quad(m, {x0, y0, 0}, {x0 + s, y0, 0}, {x0 + s, y0 + s, 0}, {x0, y0 + s, 0});
    return m;
}

// Floor plus four fully active vertical walls (outward face on the
// footprint boundary, inward face a gap away); area s^2 + 8sh.
inline Mesh gen_open_cube(double s = 10.0, double h = 10.0) {
    detail::require(s > 0.0 && h > 0.0, "cube dimensions must be positive");
    detail::require(s <= 20.0 && h <= 10.0, "cube does not fit the bounding box");
    const double x0 = (20.0 - s) / 2.0;
    const double y0 = (20.0 - s) / 2.0;
    const double x1 = x0 + s, y1 = y0 + s;
    const double g = detail::kFaceGap;
    Mesh m = gen_flat(s, x0, y0);
    detail::active_quad(m, {x0, y0, 0}, {x1, y0, 0}, {x1, y0, h}, {x0, y0, h}, {0, g, 0});
    detail::active_quad(m, {x0, y1, 0}, {x0, y1, h}, {x1, y1, h}, {x1, y1, 0}, {0, -g, 0});
    detail::active_quad(m, {x0, y0, 0}, {x0, y0, h}, {x0, y1, h}, {x0, y1, 0}, {g, 0, 0});
    detail::active_quad(m, {x1, y0, 0}, {x1, y1, 0}, {x1, y1, h}, {x1, y0, h}, {-g, 0, 0});
    return m;
}

// East/West vertical walls joined by a horizontal roof; N and S faces open.
inline Mesh gen_high_table(double s = 20.0, double h = 10.0, double width = -1.0) {
    detail::require(s > 0.0 && h > 0.0, "table dimensions must be positive");
    if (width < 0.0) width = s;
    const double x0 = (20.0 - width) / 2.0;
    const double y0 = (20.0 - s) / 2.0;
    const double x1 = x0 + width, y1 = y0 + s;
    Mesh m;
    detail::quad(m, {x0, y0, 0}, {x0, y1, 0}, {x0, y1, h}, {x0, y0, h});  // west wall, +x
    detail::quad(m, {x1, y0, 0}, {x1, y0, h}, {x1, y1, h}, {x1, y1, 0});  // east wall, -x
    detail::quad(m, {x0, y0, h}, {x1, y0, h}, {x1, y1, h}, {x0, y1, h});  // roof, +z
    return m;
}

// Asymmetric M-shaped roof rising toward the North (faces tilt South),
// carried by vertical East/West walls that follow the roof profile.
inline Mesh gen_tilted_sawtooth(double s = 20.0, double z_lo = 2.0, double z_hi = 8.0,
                                int teeth = 2, double rise_fraction = 0.75) {
    detail::require(s > 0.0 && teeth >= 1, "invalid sawtooth parameters");
    detail::require(z_hi > z_lo && z_lo > 0.0, "tooth heights must satisfy 0 < z_lo < z_hi");
    detail::require(rise_fraction > 0.0 && rise_fraction < 1.0, "rise fraction in (0,1)");
    const double x0 = (20.0 - s) / 2.0;
    const double y0 = (20.0 - s) / 2.0;
    const double x1 = x0 + s;
    const double pitch = s / teeth;
    Mesh m;
    // Ground anchors: two skirt walls at the south and north ends.
    double y = y0;
    double z = z_lo;
    detail::quad(m, {x0, y0, 0}, {x0, y0, z_lo}, {x1, y0, z_lo}, {x1, y0, 0});  // south skirt, +y
    const auto segment = [&](double y_next, double z_next) {
        // Roof strip; rising segments face up-South, falling ones up-North.
        detail::quad(m, {x0, y, z}, {x1, y, z}, {x1, y_next, z_next}, {x0, y_next, z_next});
        // Wall strips under the roof (west +x, east -x).
        detail::quad(m, {x0, y, 0}, {x0, y_next, 0}, {x0, y_next, z_next}, {x0, y, z});
        detail::quad(m, {x1, y, 0}, {x1, y, z}, {x1, y_next, z_next}, {x1, y_next, 0});
        y = y_next;
        z = z_next;
    };
    for (int t = 0; t < teeth; ++t) {
        segment(y0 + t * pitch + rise_fraction * pitch, z_hi);
        segment(y0 + (t + 1) * pitch, z_lo);
    }
    detail::quad(m, {x0, y, 0}, {x1, y, 0}, {x1, y, z_lo}, {x0, y, z_lo});  // north skirt, -y
    return m;
}

// South-open cavity: floor, fully active East/West/North walls, and a
// fully active central North-South divider fin; area s^2 + 8sh.
inline Mesh gen_cavity_fin(double s = 20.0, double h = 10.0) {
    detail::require(s > 0.0 && h > 0.0, "cavity dimensions must be positive");
    const double x0 = (20.0 - s) / 2.0;
    const double y0 = (20.0 - s) / 2.0;
    const double x1 = x0 + s, y1 = y0 + s;
    const double xc = 0.5 * (x0 + x1);
    const double g = detail::kFaceGap;
    Mesh m = gen_flat(s, x0, y0);
    detail::active_quad(m, {x0, y1, 0}, {x0, y1, h}, {x1, y1, h}, {x1, y1, 0}, {0, -g, 0});
    detail::active_quad(m, {x0, y0, 0}, {x0, y0, h}, {x0, y1, h}, {x0, y1, 0}, {g, 0, 0});
    detail::active_quad(m, {x1, y0, 0}, {x1, y1, 0}, {x1, y1, h}, {x1, y0, h}, {-g, 0, 0});
    detail::active_quad(m, {xc, y0, 0}, {xc, y0, h}, {xc, y1, h}, {xc, y1, 0}, {g, 0, 0});
    return m;
}

// 11 vertical North-South walls plus 13 East-West partitions tilted 19
// degrees from vertical, leaning North so their fronts face up-South —
// matching the noon sun (19 degrees zenith) at the default site.
inline Mesh gen_tilted_waffle(double s = 20.0, int walls = 11, int partitions = 13,
                              double tilt_deg = 19.0, double wall_height = 8.0,
                              double partition_height = 8.0) {
    detail::require(s > 0.0 && walls >= 1 && partitions >= 1, "invalid waffle parameters");
    detail::require(wall_height > 0.0 && partition_height > 0.0, "heights must be positive");
    detail::require(tilt_deg > 0.0 && tilt_deg < 90.0, "tilt must be in (0, 90) degrees");
    const double x0 = (20.0 - s) / 2.0;
    const double y0 = (20.0 - s) / 2.0;
    const double x1 = x0 + s, y1 = y0 + s;
    // Horizontal offset of each partition's top edge.
    const double run = partition_height * std::tan(spa::deg2rad(tilt_deg));
    detail::require(run < s, "partition tilt leaves the footprint");
    Mesh m;
    for (int i = 0; i < walls; ++i) {
        const double x = walls == 1 ? 0.5 * (x0 + x1) : x0 + s * i / (walls - 1.0);
        if (i % 2 == 0) {
            detail::quad(m, {x, y0, 0}, {x, y1, 0}, {x, y1, wall_height}, {x, y0, wall_height});
        } else {
            detail::quad(m, {x, y0, 0}, {x, y0, wall_height}, {x, y1, wall_height}, {x, y1, 0});
        }
    }
    for (int j = 0; j < partitions; ++j) {
        const double yb = partitions == 1 ? y0 + 0.5 * (s - run)
                                          : y0 + (s - run) * j / (partitions - 1.0);
        detail::quad(m, {x0, yb, 0}, {x1, yb, 0}, {x1, yb + run, partition_height},
                     {x0, yb + run, partition_height});
    }
    return m;
}

// CLI-facing dispatch; unknown params are rejected.
inline Mesh generate(const std::string& name, const std::map<std::string, double>& params = {}) {
    const auto get = [&](const std::string& key, double fallback) {
        const auto it = params.find(key);
        return it == params.end() ? fallback : it->second;
    };
    const auto check_keys = [&](std::initializer_list<const char*> allowed) {
        for (const auto& [key, value] : params) {
            bool ok = false;
            for (const char* a : allowed) {
                if (key == a) ok = true;
            }
            if (!ok) throw BaselineError("unknown parameter \"" + key + "\" for " + name);
        }
    };
    if (name == "flat") {
        check_keys({"s"});
        return gen_flat(get("s", 20.0));
    }
    if (name == "open-cube") {
        check_keys({"s", "h"});
        return gen_open_cube(get("s", 10.0), get("h", 10.0));
    }
    if (name == "high-table") {
        check_keys({"s", "h", "width"});
        return gen_high_table(get("s", 20.0), get("h", 10.0), get("width", -1.0));
    }
    if (name == "sawtooth") {
        check_keys({"s", "z_lo", "z_hi", "teeth", "rise_fraction"});
        return gen_tilted_sawtooth(get("s", 20.0), get("z_lo", 2.0), get("z_hi", 8.0),
                                   static_cast<int>(get("teeth", 2)), get("rise_fraction", 0.75));
    }
    if (name == "cavity-fin") {
        check_keys({"s", "h"});
        return gen_cavity_fin(get("s", 20.0), get("h", 10.0));
    }
    if (name == "tilted-waffle") {
        check_keys({"s", "walls", "partitions", "tilt", "wall_height", "partition_height"});
        return gen_tilted_waffle(get("s", 20.0), static_cast<int>(get("walls", 11)),
                                 static_cast<int>(get("partitions", 13)), get("tilt", 19.0),
                                 get("wall_height", 8.0), get("partition_height", 8.0));
    }
    throw BaselineError("unknown baseline \"" + name + "\"");
}

inline const std::vector<std::string>& names() {
    static const std::vector<std::string> kNames{"flat",     "open-cube",  "high-table",
                                                 "sawtooth", "cavity-fin", "tilted-waffle"};
    return kNames;
}

}  // namespace solar3d::baselines
