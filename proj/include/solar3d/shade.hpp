#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <numeric>
#include <optional>
#include <vector>

#include "solar3d/geometry.hpp"
#include "solar3d/vec3.hpp"

namespace solar3d {

struct Ray {
    Vec3 origin;
    Vec3 direction;  // unit length
};

// Möller–Trumbore. Hits at t >= 0 count, including t == 0, so coplanar
// stacks are never transparent. Boundary hits (u, v on the edge) count.
inline std::optional<double> ray_triangle_intersect(const Ray& r, const Triangle& tri) {
    constexpr double kEps = 1e-12;
    const Vec3 e1 = tri.edge1();
    const Vec3 e2 = tri.edge2();
    const Vec3 p = r.direction.cross(e2);
    const double det = e1.dot(p);
    if (std::abs(det) < kEps) return std::nullopt;  // parallel to the plane
    const double inv_det = 1.0 / det;
    const Vec3 s = r.origin - tri.v1;
    const double u = s.dot(p) * inv_det;
    if (u < 0.0 || u > 1.0) return std::nullopt;
    const Vec3 q = s.cross(e1);
    const double v = r.direction.dot(q) * inv_det;
    if (v < 0.0 || u + v > 1.0) return std::nullopt;
    const double t = e2.dot(q) * inv_det;
    if (t < 0.0) return std::nullopt;
    return t;
}

inline Vec3 reflect_direction(const Vec3& incident, const Vec3& normal) {
    return incident - 2.0 * incident.dot(normal) * normal;
}

struct Hit {
    std::size_t triangle = 0;
    double distance = 0.0;
};

namespace detail {

struct Aabb {
    Vec3 lo{std::numeric_limits<double>::max(), std::numeric_limits<double>::max(),
            std::numeric_limits<double>::max()};
    Vec3 hi{std::numeric_limits<double>::lowest(), std::numeric_limits<double>::lowest(),
            std::numeric_limits<double>::lowest()};

    void grow(const Vec3& v) {
        lo = {std::min(lo.x, v.x), std::min(lo.y, v.y), std::min(lo.z, v.z)};
        hi = {std::max(hi.x, v.x), std::max(hi.y, v.y), std::max(hi.z, v.z)};
    }
    void grow(const Aabb& b) {
        grow(b.lo);
        grow(b.hi);
    }

    // Slab test; conservative (never rejects a real hit).
    bool hit(const Ray& r, double t_max) const {
        double t0 = 0.0, t1 = t_max;
        const double* lo_p = &lo.x;
        const double* hi_p = &hi.x;
        const double* o = &r.origin.x;
        const double* d = &r.direction.x;
        for (int axis = 0; axis < 3; ++axis) {
            const double inv = 1.0 / d[axis];
            double near = (lo_p[axis] - o[axis]) * inv;
            double far = (hi_p[axis] - o[axis]) * inv;
            if (inv < 0.0) std::swap(near, far);
            t0 = std::max(t0, near);
            t1 = std::min(t1, far);
            if (t0 > t1) return false;
        }
        return true;
    }
};

}  // namespace detail

// Median-split BVH over mesh triangles. Queries answer exactly as
// exhaustive testing; a brute-force mode is kept as the oracle.
class OcclusionIndex {
public:
    explicit OcclusionIndex(const Mesh& mesh, bool brute_force = false)
        : mesh_(&mesh), brute_force_(brute_force) {
        if (mesh.empty()) throw GeometryError("cannot build an occlusion index on an empty mesh");
        if (brute_force_) return;
        const std::size_t n = mesh.size();
        order_.resize(n);
        std::iota(order_.begin(), order_.end(), std::size_t{0});
        boxes_.resize(n);
        centroids_.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            const Triangle& t = mesh.triangles[i];
            boxes_[i].grow(t.v1);
            boxes_[i].grow(t.v2);
            boxes_[i].grow(t.v3);
            centroids_[i] = t.centroid();
        }
        nodes_.reserve(2 * n);
        build(0, n);
        right_.resize(nodes_.size(), 0);
    }

    // Nearest hit at t >= 0, skipping `skip` (pass npos to test all).
    std::optional<Hit> nearest_hit(const Ray& ray, std::size_t skip = npos) const {
        if (brute_force_) return nearest_hit_brute(ray, skip);
        std::optional<Hit> best;
        double t_max = std::numeric_limits<double>::max();
        walk(0, ray, skip, t_max, best);
        return best;
    }

    bool any_hit(const Ray& ray, std::size_t skip = npos) const {
        return nearest_hit(ray, skip).has_value();
    }

    std::optional<Hit> nearest_hit_brute(const Ray& ray, std::size_t skip = npos) const {
        std::optional<Hit> best;
        for (std::size_t i = 0; i < mesh_->size(); ++i) {
            if (i == skip) continue;
            if (const auto t = ray_triangle_intersect(ray, mesh_->triangles[i])) {
                if (!best || *t < best->distance) best = Hit{i, *t};
            }
        }
        return best;
    }

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

private:
    struct Node {
        detail::Aabb box;
        std::size_t left = 0;   // child node, or first triangle when leaf
        std::size_t count = 0;  // leaf triangle count; 0 for inner nodes
    };

    std::size_t build(std::size_t begin, std::size_t end) {
        const std::size_t idx = nodes_.size();
        nodes_.emplace_back();
        detail::Aabb box;
        for (std::size_t i = begin; i < end; ++i) box.grow(boxes_[order_[i]]);
        nodes_[idx].box = box;
        if (end - begin <= 2) {
            nodes_[idx].left = begin;
            nodes_[idx].count = end - begin;
            return idx;
        }
        const Vec3 extent = box.hi - box.lo;
        int axis = 0;
        if (extent.y > extent.x) axis = 1;
        if (extent.z > (axis == 0 ? extent.x : extent.y)) axis = 2;
        const std::size_t mid = begin + (end - begin) / 2;
        std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                         [&](std::size_t a, std::size_t b) {
                             const double* ca = &centroids_[a].x;
                             const double* cb = &centroids_[b].x;
                             return ca[axis] < cb[axis];
                         });
        const std::size_t left = build(begin, mid);
        const std::size_t right = build(mid, end);
        nodes_[idx].left = left;
        right_.resize(nodes_.size(), 0);
        right_[idx] = right;
        return idx;
    }

    void walk(std::size_t node_idx, const Ray& ray, std::size_t skip, double& t_max,
              std::optional<Hit>& best) const {
        const Node& node = nodes_[node_idx];
        if (!node.box.hit(ray, t_max)) return;
        if (node.count > 0) {
            for (std::size_t i = node.left; i < node.left + node.count; ++i) {
                const std::size_t tri = order_[i];
                if (tri == skip) continue;
                if (const auto t = ray_triangle_intersect(ray, mesh_->triangles[tri])) {
                    if (!best || *t < best->distance ||
                        (*t == best->distance && tri < best->triangle)) {
                        best = Hit{tri, *t};
                        t_max = *t;
                    }
                }
            }
            return;
        }
        walk(node.left, ray, skip, t_max, best);
        walk(right_[node_idx], ray, skip, t_max, best);
    }

    const Mesh* mesh_;
    bool brute_force_;
    std::vector<std::size_t> order_;
    std::vector<detail::Aabb> boxes_;
    std::vector<Vec3> centroids_;
    std::vector<Node> nodes_;
    std::vector<std::size_t> right_;
};

inline OcclusionIndex build_index(const Mesh& mesh, bool brute_force = false) {
    return OcclusionIndex(mesh, brute_force);
}

// Shadow test from point p toward the sun; eps offsets the origin off the
// parent surface so a sub-cell never shadows itself.
inline bool is_shadowed(const Vec3& p, const Vec3& s_hat, const OcclusionIndex& index,
                        std::size_t skip, double eps = 1e-6) {
    return index.any_hit(Ray{p + eps * s_hat, s_hat}, skip);
}

inline bool is_shadowed(const Vec3& p, const Vec3& s_hat, const Mesh& mesh, std::size_t skip,
                        double eps = 1e-6) {
    const Ray ray{p + eps * s_hat, s_hat};
    for (std::size_t i = 0; i < mesh.size(); ++i) {
        if (i == skip) continue;
        if (ray_triangle_intersect(ray, mesh.triangles[i])) return true;
    }
    return false;
}

}  // namespace solar3d
