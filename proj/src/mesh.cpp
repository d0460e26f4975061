#include "dieplan/mesh.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <unordered_map>

#include "dieplan/error.hpp"

namespace dieplan {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::Io: return "io";
        case ErrorCode::Format: return "format";
        case ErrorCode::EmptyMesh: return "empty_mesh";
        case ErrorCode::InvalidArgument: return "invalid_argument";
        case ErrorCode::Schema: return "schema";
        case ErrorCode::NotAdjacent: return "not_adjacent";
        case ErrorCode::NoTool: return "no_tool";
        case ErrorCode::UnsupportedCriteria: return "unsupported_criteria";
        case ErrorCode::MissingArtifact: return "missing_artifact";
        case ErrorCode::StaleArtifact: return "stale_artifact";
        case ErrorCode::NotFound: return "not_found";
    }
    return "unknown";
}

namespace {

struct CellKey {
    std::int64_t x, y, z;
    bool operator==(const CellKey&) const = default;
};

struct CellHash {
    std::size_t operator()(const CellKey& k) const noexcept {
        std::uint64_t h = 1469598103934665603ull;
        for (std::int64_t v : {k.x, k.y, k.z}) {
            h ^= static_cast<std::uint64_t>(v);
            h *= 1099511628211ull;
        }
        return static_cast<std::size_t>(h);
    }
};

/// Welds points closer than the tolerance; first-seen point wins.
class VertexWelder {
public:
    explicit VertexWelder(double tolerance) : tol_(tolerance > 0.0 ? tolerance : 0.0) {}

    VertexId insert(const Vec3& p) {
        if (tol_ == 0.0) {
            return exact(p);
        }
        const CellKey key = cell(p);
        for (std::int64_t dx = -1; dx <= 1; ++dx) {
            for (std::int64_t dy = -1; dy <= 1; ++dy) {
                for (std::int64_t dz = -1; dz <= 1; ++dz) {
                    auto it = grid_.find(CellKey{key.x + dx, key.y + dy, key.z + dz});
                    if (it == grid_.end()) {
                        continue;
                    }
                    for (VertexId v : it->second) {
                        if (distance(points_[v], p) <= tol_) {
                            return v;
                        }
                    }
                }
            }
        }
        const auto id = static_cast<VertexId>(points_.size());
        points_.push_back(p);
        grid_[key].push_back(id);
        return id;
    }

    std::vector<Vec3> take() { return std::move(points_); }

private:
    CellKey cell(const Vec3& p) const {
        return {static_cast<std::int64_t>(std::floor(p.x / tol_)), static_cast<std::int64_t>(std::floor(p.y / tol_)),
                static_cast<std::int64_t>(std::floor(p.z / tol_))};
    }

    VertexId exact(const Vec3& p) {
        const CellKey key{std::bit_cast<std::int64_t>(p.x), std::bit_cast<std::int64_t>(p.y),
                          std::bit_cast<std::int64_t>(p.z)};
        auto [it, inserted] = grid_.try_emplace(key);
        if (inserted) {
            it->second.push_back(static_cast<VertexId>(points_.size()));
            points_.push_back(p);
        }
        return it->second.front();
    }

    double tol_;
    std::vector<Vec3> points_;
    std::unordered_map<CellKey, std::vector<VertexId>, CellHash> grid_;
};

double triangle_area(const Vec3& a, const Vec3& b, const Vec3& c) { return 0.5 * norm(cross(b - a, c - a)); }

}  // namespace

std::span<const std::uint32_t> TriMesh::facet_adjacency(FacetId facet) const {
    if (adjacency_offsets_.empty()) {
        return {};
    }
    const auto begin = adjacency_offsets_[facet];
    const auto end = adjacency_offsets_[facet + 1];
    return std::span<const std::uint32_t>(adjacency_index_).subspan(begin, end - begin);
}

std::optional<AdjacencyRecord> TriMesh::find_adjacency(FacetId i, FacetId j) const {
    const FacetId a = std::min(i, j);
    const FacetId b = std::max(i, j);
    for (std::uint32_t r : facet_adjacency(a)) {
        if (adjacency_[r].facet_a == a && adjacency_[r].facet_b == b) {
            return adjacency_[r];
        }
    }
    return std::nullopt;
}

std::array<Vec3, 3> TriMesh::corners(FacetId f) const {
    const auto& t = facets_[f];
    return {vertices_[t[0]], vertices_[t[1]], vertices_[t[2]]};
}

double TriMesh::total_area() const {
    double sum = 0.0;
    for (double a : areas_) {
        sum += a;
    }
    return sum;
}

BoundingBox TriMesh::bounding_box() const {
    BoundingBox box;
    if (vertices_.empty()) {
        return box;
    }
    box.min = box.max = vertices_.front();
    for (const Vec3& p : vertices_) {
        box.min = {std::min(box.min.x, p.x), std::min(box.min.y, p.y), std::min(box.min.z, p.z)};
        box.max = {std::max(box.max.x, p.x), std::max(box.max.y, p.y), std::max(box.max.z, p.z)};
    }
    return box;
}

TriMesh TriMesh::from_indexed(std::vector<Vec3> vertices, std::vector<std::array<VertexId, 3>> facets) {
    TriMesh mesh;
    mesh.vertices_ = std::move(vertices);
    mesh.facets_ = std::move(facets);
    const std::size_t n = mesh.facets_.size();
    mesh.normals_.resize(n);
    mesh.areas_.resize(n);
    mesh.centroids_.resize(n);
    for (std::size_t f = 0; f < n; ++f) {
        const auto [a, b, c] = mesh.corners(static_cast<FacetId>(f));
        const Vec3 w = cross(b - a, c - a);
        mesh.normals_[f] = normalized(w);
        mesh.areas_[f] = 0.5 * norm(w);
        mesh.centroids_[f] = (a + b + c) / 3.0;
    }
    return build_adjacency(std::move(mesh));
}

TriMesh build_adjacency(TriMesh mesh) {
    struct EdgeUse {
        VertexId v0, v1;
        FacetId facet;
    };
    std::vector<EdgeUse> uses;
    uses.reserve(mesh.facets_.size() * 3);
    for (std::size_t f = 0; f < mesh.facets_.size(); ++f) {
        const auto& t = mesh.facets_[f];
        for (int k = 0; k < 3; ++k) {
            const VertexId a = t[k];
            const VertexId b = t[(k + 1) % 3];
            uses.push_back({std::min(a, b), std::max(a, b), static_cast<FacetId>(f)});
        }
    }
    std::sort(uses.begin(), uses.end(), [](const EdgeUse& l, const EdgeUse& r) {
        return std::tie(l.v0, l.v1, l.facet) < std::tie(r.v0, r.v1, r.facet);
    });

    mesh.adjacency_.clear();
    mesh.non_manifold_.clear();
    mesh.boundary_edges_ = 0;
    for (std::size_t i = 0; i < uses.size();) {
        std::size_t j = i;
        while (j < uses.size() && uses[j].v0 == uses[i].v0 && uses[j].v1 == uses[i].v1) {
            ++j;
        }
        const std::size_t count = j - i;
        const VertexId v0 = uses[i].v0;
        const VertexId v1 = uses[i].v1;
        const double length = distance(mesh.vertices_[v0], mesh.vertices_[v1]);
        if (count == 1) {
            ++mesh.boundary_edges_;
        } else {
            if (count > 2) {
                NonManifoldEdge nm{v0, v1, {}};
                for (std::size_t k = i; k < j; ++k) {
                    nm.facets.push_back(uses[k].facet);
                }
                mesh.non_manifold_.push_back(std::move(nm));
            }
            for (std::size_t p = i; p < j; ++p) {
                for (std::size_t q = p + 1; q < j; ++q) {
                    if (uses[p].facet != uses[q].facet) {
                        mesh.adjacency_.push_back({uses[p].facet, uses[q].facet, v0, v1, length});
                    }
                }
            }
        }
        i = j;
    }
    std::sort(mesh.adjacency_.begin(), mesh.adjacency_.end(), [](const AdjacencyRecord& l, const AdjacencyRecord& r) {
        return std::tie(l.facet_a, l.facet_b, l.v0, l.v1) < std::tie(r.facet_a, r.facet_b, r.v0, r.v1);
    });
    // Facets sharing two edges only happen with duplicated triangles; keep one record per pair.
    mesh.adjacency_.erase(std::unique(mesh.adjacency_.begin(), mesh.adjacency_.end(),
                                      [](const AdjacencyRecord& l, const AdjacencyRecord& r) {
                                          return l.facet_a == r.facet_a && l.facet_b == r.facet_b;
                                      }),
                          mesh.adjacency_.end());

    const std::size_t n = mesh.facets_.size();
    mesh.adjacency_offsets_.assign(n + 1, 0);
    for (const auto& rec : mesh.adjacency_) {
        ++mesh.adjacency_offsets_[rec.facet_a + 1];
        ++mesh.adjacency_offsets_[rec.facet_b + 1];
    }
    for (std::size_t f = 0; f < n; ++f) {
        mesh.adjacency_offsets_[f + 1] += mesh.adjacency_offsets_[f];
    }
    mesh.adjacency_index_.assign(mesh.adjacency_offsets_.back(), 0);
    std::vector<std::uint32_t> fill(mesh.adjacency_offsets_.begin(), mesh.adjacency_offsets_.end() - 1);
    for (std::size_t r = 0; r < mesh.adjacency_.size(); ++r) {
        mesh.adjacency_index_[fill[mesh.adjacency_[r].facet_a]++] = static_cast<std::uint32_t>(r);
        mesh.adjacency_index_[fill[mesh.adjacency_[r].facet_b]++] = static_cast<std::uint32_t>(r);
    }
    return mesh;
}

LoadedMesh build_mesh(std::span<const RawTriangle> triangles, const CleaningOptions& options) {
    MeshDiagnostics diag;
    VertexWelder welder(options.merge_tolerance);
    std::vector<std::array<VertexId, 3>> facets;
    facets.reserve(triangles.size());

    for (const RawTriangle& tri : triangles) {
        auto corners = tri.corners;
        const Vec3 winding = cross(corners[1] - corners[0], corners[2] - corners[0]);
        const Vec3 stored = normalized(tri.stored_normal);
        // The stored normal only decides orientation; its direction is never used.
        if (norm(stored) > 0.0 && dot(stored, winding) < 0.0) {
            std::swap(corners[1], corners[2]);
            ++diag.winding_flipped_count;
        }
        std::array<VertexId, 3> ids{};
        for (int k = 0; k < 3; ++k) {
            ids[k] = welder.insert(corners[k]);
        }
        facets.push_back(ids);
    }
    std::vector<Vec3> vertices = welder.take();
    diag.merged_vertex_count = triangles.size() * 3 - vertices.size();

    std::vector<std::array<VertexId, 3>> kept;
    kept.reserve(facets.size());
    for (const auto& t : facets) {
        const bool repeated = t[0] == t[1] || t[1] == t[2] || t[0] == t[2];
        if (repeated || triangle_area(vertices[t[0]], vertices[t[1]], vertices[t[2]]) <= options.min_area) {
            ++diag.degenerate_count;
            continue;
        }
        kept.push_back(t);
    }
    if (kept.empty()) {
        throw Error(ErrorCode::EmptyMesh, "mesh has zero facets after cleaning");
    }

    // Drop vertices only referenced by removed facets.
    std::vector<VertexId> remap(vertices.size(), std::numeric_limits<VertexId>::max());
    std::vector<Vec3> used;
    for (auto& t : kept) {
        for (auto& v : t) {
            if (remap[v] == std::numeric_limits<VertexId>::max()) {
                remap[v] = static_cast<VertexId>(used.size());
                used.push_back(vertices[v]);
            }
            v = remap[v];
        }
    }

    LoadedMesh out{TriMesh::from_indexed(std::move(used), std::move(kept)), std::move(diag)};
    out.diagnostics.facet_count = out.mesh.facet_count();
    out.diagnostics.boundary_edge_count = out.mesh.boundary_edge_count();
    out.diagnostics.non_manifold_edges = out.mesh.non_manifold_edges();
    out.diagnostics.non_manifold_edge_count = out.diagnostics.non_manifold_edges.size();
    update_diagnostics(out.mesh, Vec3{0, 0, 1}, out.diagnostics);
    return out;
}

void update_diagnostics(const TriMesh& mesh, const Vec3& tool_axis, MeshDiagnostics& diagnostics) {
    diagnostics.bounding_box = mesh.bounding_box();
    diagnostics.undercut_facet_count = 0;
    for (const Vec3& n : mesh.facet_normals()) {
        if (dot(n, tool_axis) < 0.0) {
            ++diagnostics.undercut_facet_count;
        }
    }
}

std::uint64_t mesh_fingerprint(const TriMesh& mesh) {
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&h](std::uint64_t word) {
        for (int b = 0; b < 8; ++b) {
            h ^= (word >> (8 * b)) & 0xffu;
            h *= 1099511628211ull;
        }
    };
    mix(mesh.vertex_count());
    for (const Vec3& p : mesh.vertices()) {
        mix(std::bit_cast<std::uint64_t>(p.x));
        mix(std::bit_cast<std::uint64_t>(p.y));
        mix(std::bit_cast<std::uint64_t>(p.z));
    }
    mix(mesh.facet_count());
    for (const auto& t : mesh.facets()) {
        mix(t[0]);
        mix(t[1]);
        mix(t[2]);
    }
    return h;
}

}  // namespace dieplan
