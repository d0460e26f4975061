#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include "dieplan/mesh.hpp"
#include "dieplan/pipeline.hpp"

namespace testing {

using namespace dieplan;

/// Independent triangles with random corners in a 100 mm box.
inline TriMesh random_soup(std::uint64_t seed, std::size_t n) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-50.0, 50.0);
    std::vector<Vec3> verts;
    std::vector<std::array<VertexId, 3>> facets;
    while (facets.size() < n) {
        const Vec3 a{u(rng), u(rng), u(rng)}, b{u(rng), u(rng), u(rng)}, c{u(rng), u(rng), u(rng)};
        if (norm(cross(b - a, c - a)) < 1e-3) {
            continue;
        }
        const auto base = static_cast<VertexId>(verts.size());
        verts.insert(verts.end(), {a, b, c});
        facets.push_back({base, base + 1, base + 2});
    }
    return TriMesh::from_indexed(std::move(verts), std::move(facets));
}

/// Same geometry with the facet list reordered.
inline TriMesh permuted(const TriMesh& mesh, std::uint64_t seed, std::vector<FacetId>* order = nullptr) {
    std::vector<FacetId> idx(mesh.facet_count());
    std::iota(idx.begin(), idx.end(), 0u);
    std::mt19937_64 rng(seed);
    std::shuffle(idx.begin(), idx.end(), rng);
    std::vector<std::array<VertexId, 3>> facets;
    for (FacetId f : idx) {
        facets.push_back(mesh.facets()[f]);
    }
    if (order) {
        *order = idx;
    }
    return TriMesh::from_indexed(std::vector<Vec3>(mesh.vertices().begin(), mesh.vertices().end()), std::move(facets));
}

/// Height field with 2 n^2 facets: irregular spacing with thin strips, a few bumps and dips, raised ridges.
/// Thin strips give the small-region merge and the continuity grouping something to do.
inline TriMesh height_field(std::uint64_t seed, std::size_t n = 10) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    auto spacing = [&] {
        std::vector<double> c{0.0};
        for (std::size_t i = 0; i < n; ++i) {
            c.push_back(c.back() + (u(rng) < 0.25 ? 0.2 + 0.3 * u(rng) : 2.0 + 4.0 * u(rng)));
        }
        return c;
    };
    const auto xs = spacing(), ys = spacing();
    struct Bump {
        double x, y, w, amp;
    };
    std::vector<Bump> bumps(1 + rng() % 3);
    for (auto& b : bumps) {
        b = {xs.back() * u(rng), ys.back() * u(rng), 3.0 + 10.0 * u(rng), (u(rng) < 0.3 ? -1.0 : 1.0) * 12.0 * u(rng)};
    }
    const double tx = 0.6 * (u(rng) - 0.5), ty = 0.6 * (u(rng) - 0.5);
    std::vector<double> ridge(n + 1, 0.0);
    for (auto& r : ridge) {
        r = u(rng) < 0.15 ? 0.1 + 1.5 * u(rng) : 0.0;
    }
    std::vector<Vec3> v;
    for (std::size_t j = 0; j <= n; ++j) {
        for (std::size_t i = 0; i <= n; ++i) {
            double z = tx * xs[i] + ty * ys[j] + ridge[i];
            for (const auto& b : bumps) {
                z += b.amp * std::exp(-((xs[i] - b.x) * (xs[i] - b.x) + (ys[j] - b.y) * (ys[j] - b.y)) / (b.w * b.w));
            }
            v.push_back({xs[i], ys[j], z});
        }
    }
    std::vector<std::array<VertexId, 3>> f;
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < n; ++i) {
            const auto a = static_cast<VertexId>(j * (n + 1) + i);
            f.push_back({a, a + 1, a + static_cast<VertexId>(n + 2)});
            f.push_back({a, a + static_cast<VertexId>(n + 2), a + static_cast<VertexId>(n + 1)});
        }
    }
    return TriMesh::from_indexed(std::move(v), std::move(f));
}

inline double kappa_of(const Vec3& n) { return std::hypot(n.x, n.y); }

inline PipelineConfig default_config() { return PipelineConfig{}; }

}  // namespace testing
