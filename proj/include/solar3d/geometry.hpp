#pragma once

#include <algorithm>
#include <charconv>
#include <cstddef>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "solar3d/vec3.hpp"

namespace solar3d {

struct GeometryError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Triangle {
    Vec3 v1, v2, v3;

    Vec3 edge1() const { return v2 - v1; }
    Vec3 edge2() const { return v3 - v1; }

    // Front face is the side the normal points from; vertex order is author intent.
    Vec3 normal() const { return edge1().cross(edge2()).normalized(); }

    double area() const { return 0.5 * edge1().cross(edge2()).norm(); }

    Vec3 centroid() const { return (v1 + v2 + v3) / 3.0; }

    // Shortest altitude; 0 for degenerate triangles.
    double min_altitude() const {
        const double a = area();
        if (a <= 0.0) return 0.0;
        const double longest = std::max({(v2 - v1).norm(), (v3 - v2).norm(), (v1 - v3).norm()});
        return 2.0 * a / longest;
    }
};

struct Mesh {
    std::vector<Triangle> triangles;

    std::size_t size() const { return triangles.size(); }
    bool empty() const { return triangles.empty(); }

    double total_area() const {
        double sum = 0.0;
        for (const Triangle& t : triangles) sum += t.area();
        return sum;
    }
};

struct SubCell {
    Vec3 centroid;
    double area = 0.0;
    Vec3 normal;
    std::size_t parent = 0;
};

// Min corner fixed at the origin.
struct BoundingBox {
    double x_max = 20.0;
    double y_max = 20.0;
    double z_max = 10.0;

    bool contains(const Vec3& v) const {
        return v.x >= 0.0 && v.x <= x_max && v.y >= 0.0 && v.y <= y_max && v.z >= 0.0 &&
               v.z <= z_max;
    }
};

inline double triangle_area(const Triangle& t) { return t.area(); }

inline double mesh_total_area(const Mesh& m) { return m.total_area(); }

// Geometry text: whitespace-separated floats, 9 per triangle, no count prefix.
inline Mesh parse_geometry(std::string_view text) {
    std::vector<double> values;
    std::size_t pos = 0;
    std::size_t token_index = 0;
    const auto is_space = [](char c) {
        return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
    };
    while (pos < text.size()) {
        while (pos < text.size() && is_space(text[pos])) ++pos;
        if (pos >= text.size()) break;
        std::size_t end = pos;
        while (end < text.size() && !is_space(text[end])) ++end;
        const std::string_view token = text.substr(pos, end - pos);
        double value = 0.0;
        const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
        if (ec != std::errc{} || ptr != token.data() + token.size() || !std::isfinite(value)) {
            throw GeometryError("geometry parse error: non-numeric token \"" +
                                std::string(token) + "\" at position " +
                                std::to_string(token_index + 1));
        }
        values.push_back(value);
        ++token_index;
        pos = end;
    }
    if (values.empty()) throw GeometryError("geometry parse error: empty geometry");
    if (values.size() % 9 != 0) {
        throw GeometryError("geometry format error: " + std::to_string(values.size()) +
                            " floats is not a multiple of 9");
    }
    Mesh mesh;
    mesh.triangles.reserve(values.size() / 9);
    for (std::size_t i = 0; i < values.size(); i += 9) {
        mesh.triangles.push_back(Triangle{{values[i], values[i + 1], values[i + 2]},
                                          {values[i + 3], values[i + 4], values[i + 5]},
                                          {values[i + 6], values[i + 7], values[i + 8]}});
    }
    return mesh;
}

namespace detail {
inline std::string format_double(double v) {
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}
}  // namespace detail

// One triangle per line; shortest decimal form that round-trips exactly.
inline std::string serialize_geometry(const Mesh& m) {
    if (m.empty()) throw GeometryError("cannot serialize an empty mesh");
    std::string out;
    for (const Triangle& t : m.triangles) {
        const Vec3* vs[] = {&t.v1, &t.v2, &t.v3};
        for (std::size_t i = 0; i < 3; ++i) {
            if (i) out += ' ';
            out += detail::format_double(vs[i]->x);
            out += ' ';
            out += detail::format_double(vs[i]->y);
            out += ' ';
            out += detail::format_double(vs[i]->z);
        }
        out += '\n';
    }
    return out;
}

namespace detail {
inline void subdivide(const Triangle& t, const Vec3& normal, double area, std::size_t parent,
                      int depth, std::vector<SubCell>& out) {
    if (depth == 0) {
        out.push_back(SubCell{t.centroid(), area, normal, parent});
        return;
    }
    const Vec3 m12 = (t.v1 + t.v2) * 0.5;
    const Vec3 m23 = (t.v2 + t.v3) * 0.5;
    const Vec3 m31 = (t.v3 + t.v1) * 0.5;
    const double quarter = area * 0.25;
    subdivide({t.v1, m12, m31}, normal, quarter, parent, depth - 1, out);
    subdivide({m12, t.v2, m23}, normal, quarter, parent, depth - 1, out);
    subdivide({m31, m23, t.v3}, normal, quarter, parent, depth - 1, out);
    subdivide({m12, m23, m31}, normal, quarter, parent, depth - 1, out);
}
}  // namespace detail

// Recursive 4-way midpoint subdivision until every sub-cell area <= target.
inline std::vector<SubCell> tessellate(const Triangle& t, double target_subcell_area,
                                       std::size_t parent = 0) {
    if (target_subcell_area <= 0.0) throw GeometryError("target sub-cell area must be positive");
    const double area = t.area();
    int depth = 0;
    double cell = area;
    while (cell > target_subcell_area) {
        cell *= 0.25;
        ++depth;
    }
    std::vector<SubCell> cells;
    cells.reserve(static_cast<std::size_t>(std::pow(4.0, depth)));
    detail::subdivide(t, t.normal(), area, parent, depth, cells);
    return cells;
}

inline std::vector<SubCell> tessellate(const Mesh& m, double target_subcell_area) {
    std::vector<SubCell> cells;
    for (std::size_t k = 0; k < m.triangles.size(); ++k) {
        auto sub = tessellate(m.triangles[k], target_subcell_area, k);
        cells.insert(cells.end(), sub.begin(), sub.end());
    }
    return cells;
}

struct BboxVerdict {
    bool ok = true;
    std::size_t triangle = 0;   // first offender
    Vec3 vertex;                // first offending vertex
};

// Closed interval, no epsilon slack.
inline BboxVerdict check_bbox(const Mesh& m, const BoundingBox& box) {
    for (std::size_t k = 0; k < m.triangles.size(); ++k) {
        const Triangle& t = m.triangles[k];
        for (const Vec3* v : {&t.v1, &t.v2, &t.v3}) {
            if (!box.contains(*v)) return {false, k, *v};
        }
    }
    return {};
}

// Wavefront text, no vertex dedup, 1-based indices.
inline std::string export_obj(const Mesh& m) {
    if (m.empty()) throw GeometryError("cannot export an empty mesh");
    std::ostringstream out;
    for (const Triangle& t : m.triangles) {
        for (const Vec3* v : {&t.v1, &t.v2, &t.v3}) {
            out << "v " << detail::format_double(v->x) << ' ' << detail::format_double(v->y)
                << ' ' << detail::format_double(v->z) << '\n';
        }
    }
    for (std::size_t k = 0; k < m.triangles.size(); ++k) {
        out << "f " << 3 * k + 1 << ' ' << 3 * k + 2 << ' ' << 3 * k + 3 << '\n';
    }
    return out.str();
}

}  // namespace solar3d
