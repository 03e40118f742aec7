#pragma once

// Structured polar triangulation of the closed unit disk and shortest-path
// distances in a conformal metric |Phi'(z)| |dz|. Dijkstra on the graph
// gives an upper bound with O(1) anisotropy error; a chord-shortcut pass
// afterwards drives it to the continuum value (the disk is convex, so any
// straight segment between path nodes is admissible).

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <queue>
#include <stdexcept>
#include <vector>

#include "liouville/conformal.hpp"
#include "liouville/grid_field.hpp"

namespace liouville {

using ConformalMetric = std::function<double(complexd)>;  // |Phi'| at a point

struct DiskMesh {
    int level = 0;
    int rings = 0;     // radial cells
    int sectors = 0;   // angular cells
    std::vector<complexd> vertices;          // [0] = center, then ring-major
    std::vector<std::array<int, 2>> edges;
    std::vector<char> on_boundary;

    [[nodiscard]] static DiskMesh structured(int level) {
        if (level < 0 || level > 8) throw std::invalid_argument("mesh level out of range");
        DiskMesh m;
        m.level = level;
        m.rings = 4 << level;
        m.sectors = 16 << level;
        const int r = m.rings, s = m.sectors;
        m.vertices.reserve(1 + r * s);
        m.vertices.push_back(complexd(0.0, 0.0));
        for (int i = 1; i <= r; ++i)
            for (int j = 0; j < s; ++j)
                m.vertices.push_back(std::polar(double(i) / r, two_pi * j / s));
        m.on_boundary.assign(m.vertices.size(), 0);
        for (int j = 0; j < s; ++j) m.on_boundary[m.index(r, j)] = 1;

        for (int j = 0; j < s; ++j) m.edges.push_back({0, m.index(1, j)});
        for (int i = 1; i <= r; ++i) {
            for (int j = 0; j < s; ++j) {
                m.edges.push_back({m.index(i, j), m.index(i, (j + 1) % s)});
                if (i < r) {
                    m.edges.push_back({m.index(i, j), m.index(i + 1, j)});
                    m.edges.push_back({m.index(i, j), m.index(i + 1, (j + 1) % s)});
                    m.edges.push_back({m.index(i, (j + 1) % s), m.index(i + 1, j)});
                }
            }
        }
        return m;
    }

    [[nodiscard]] int index(int ring, int sector) const {
        return 1 + (ring - 1) * sectors + (sector % sectors + sectors) % sectors;
    }

    [[nodiscard]] int vertex_count() const { return static_cast<int>(vertices.size()); }

    [[nodiscard]] int boundary_vertex_near(double angle) const {
        const int j = static_cast<int>(std::lround(angle / two_pi * sectors));
        return index(rings, j);
    }
};

namespace detail {

// Metric length of the straight segment [a, b] by composite Simpson.
[[nodiscard]] inline double segment_length(const ConformalMetric& metric, complexd a,
                                           complexd b, int panels = 24) {
    const double chord = std::abs(b - a);
    if (chord == 0.0) return 0.0;
    double acc = metric(a) + metric(b);
    for (int k = 1; k < 2 * panels; ++k) {
        const complexd p = a + (b - a) * (double(k) / (2 * panels));
        acc += metric(p) * ((k % 2) ? 4.0 : 2.0);
    }
    return acc * chord / (6.0 * panels);
}

}  // namespace detail

struct GeodesicResult {
    double distance = 0.0;
    std::vector<complexd> path;  // polyline from source to target
};

// Dijkstra on metric edge weights, then iterative chord shortcuts.
[[nodiscard]] inline GeodesicResult geodesic_distance(const DiskMesh& mesh,
                                                      const ConformalMetric& metric,
                                                      int source, int target) {
    const int n = mesh.vertex_count();
    if (source < 0 || source >= n || target < 0 || target >= n)
        throw std::invalid_argument("geodesic endpoints outside the mesh");

    std::vector<std::vector<std::pair<int, double>>> adj(n);
    for (const auto& e : mesh.edges) {
        const complexd a = mesh.vertices[e[0]], b = mesh.vertices[e[1]];
        const double w = metric(0.5 * (a + b)) * std::abs(b - a);
        adj[e[0]].push_back({e[1], w});
        adj[e[1]].push_back({e[0], w});
    }

    std::vector<double> dist(n, std::numeric_limits<double>::infinity());
    std::vector<int> prev(n, -1);
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    dist[source] = 0.0;
    heap.push({0.0, source});
    while (!heap.empty()) {
        const auto [dcur, v] = heap.top();
        heap.pop();
        if (dcur > dist[v]) continue;
        if (v == target) break;
        for (const auto& [w, len] : adj[v]) {
            const double cand = dcur + len;
            if (cand < dist[w]) {
                dist[w] = cand;
                prev[w] = v;
                heap.push({cand, w});
            }
        }
    }
    if (!std::isfinite(dist[target]))
        throw numeric_error("mesh is disconnected between the requested vertices");

    std::vector<complexd> path;
    for (int v = target; v != -1; v = prev[v]) path.push_back(mesh.vertices[v]);
    std::reverse(path.begin(), path.end());

    // Chord shortcuts: repeatedly replace sub-polylines by straight
    // segments when the metric length of the segment is shorter.
    std::vector<double> seg(path.size(), 0.0);
    auto recompute = [&]() {
        for (size_t i = 0; i + 1 < path.size(); ++i)
            seg[i] = detail::segment_length(metric, path[i], path[i + 1]);
    };
    recompute();
    for (int pass = 0; pass < 6; ++pass) {
        bool changed = false;
        size_t i = 0;
        while (i + 2 < path.size()) {
            double best_gain = 1e-13;
            size_t best_j = 0;
            double cum = seg[i];
            for (size_t j = i + 2; j < path.size() && j <= i + 64; ++j) {
                cum += seg[j - 1];
                const double direct = detail::segment_length(metric, path[i], path[j]);
                if (cum - direct > best_gain) {
                    best_gain = cum - direct;
                    best_j = j;
                }
            }
            if (best_j != 0) {
                path.erase(path.begin() + i + 1, path.begin() + best_j);
                seg.assign(path.size(), 0.0);
                for (size_t k = 0; k + 1 < path.size(); ++k)
                    seg[k] = detail::segment_length(metric, path[k], path[k + 1]);
                changed = true;
            } else {
                ++i;
            }
        }
        if (!changed) break;
    }

    GeodesicResult res;
    res.path = path;
    for (size_t i = 0; i + 1 < path.size(); ++i)
        res.distance += detail::segment_length(metric, path[i], path[i + 1], 64);
    return res;
}

// Same distance in the metric of an explicit immersion.
[[nodiscard]] inline GeodesicResult geodesic_distance(const DiskMesh& mesh,
                                                      const DiskImmersion& im, int source,
                                                      int target) {
    return geodesic_distance(
        mesh, [&im](complexd z) { return std::abs(im.dmap(z)); }, source, target);
}

// Total absolute turning of the path polyline, for curvature-bound checks.
[[nodiscard]] inline double path_turning(const std::vector<complexd>& path) {
    double acc = 0.0;
    for (size_t i = 0; i + 2 < path.size(); ++i) {
        const complexd d0 = path[i + 1] - path[i], d1 = path[i + 2] - path[i + 1];
        if (std::abs(d0) == 0.0 || std::abs(d1) == 0.0) continue;
        acc += std::abs(std::arg(d1 / d0));
    }
    return acc;
}

}  // namespace liouville
