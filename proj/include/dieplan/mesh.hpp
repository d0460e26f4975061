#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "dieplan/vec.hpp"

namespace dieplan {

using FacetId = std::uint32_t;
using VertexId = std::uint32_t;

/// One triangle as read from a file, before vertex merging.
struct RawTriangle {
    std::array<Vec3, 3> corners;
    Vec3 stored_normal;  // zero when the source carried none
};

struct CleaningOptions {
    double merge_tolerance = 1e-6;  // mm
    double min_area = 1e-9;         // mm^2
};

/// Shared edge between two facets. `facet_a < facet_b`, `v0 < v1`.
struct AdjacencyRecord {
    FacetId facet_a = 0;
    FacetId facet_b = 0;
    VertexId v0 = 0;
    VertexId v1 = 0;
    double length = 0.0;
};

/// Edge used by more than two facets.
struct NonManifoldEdge {
    VertexId v0 = 0;
    VertexId v1 = 0;
    std::vector<FacetId> facets;
};

struct BoundingBox {
    Vec3 min;
    Vec3 max;
};

struct MeshDiagnostics {
    std::size_t facet_count = 0;
    std::size_t degenerate_count = 0;
    std::size_t non_manifold_edge_count = 0;
    std::size_t boundary_edge_count = 0;
    std::size_t undercut_facet_count = 0;
    std::size_t winding_flipped_count = 0;
    std::size_t merged_vertex_count = 0;
    BoundingBox bounding_box;
    std::vector<NonManifoldEdge> non_manifold_edges;
};

/// Indexed triangle mesh with per-facet geometry and edge adjacency.
/// Immutable once built; every analysis stage reads it concurrently.
class TriMesh {
public:
    TriMesh() = default;

    std::size_t facet_count() const { return facets_.size(); }
    std::size_t vertex_count() const { return vertices_.size(); }

    std::span<const Vec3> vertices() const { return vertices_; }
    std::span<const std::array<VertexId, 3>> facets() const { return facets_; }
    std::span<const Vec3> facet_normals() const { return normals_; }
    std::span<const double> facet_areas() const { return areas_; }
    std::span<const Vec3> facet_centroids() const { return centroids_; }

    /// Adjacency records sorted by (facet_a, facet_b).
    std::span<const AdjacencyRecord> adjacency() const { return adjacency_; }

    /// Indices into `adjacency()` of records touching `facet`.
    std::span<const std::uint32_t> facet_adjacency(FacetId facet) const;

    /// Neighbour across a shared edge, in either argument order.
    std::optional<AdjacencyRecord> find_adjacency(FacetId i, FacetId j) const;

    Vec3 vertex(VertexId v) const { return vertices_[v]; }
    std::array<Vec3, 3> corners(FacetId f) const;
    double total_area() const;
    BoundingBox bounding_box() const;

    /// Rebuilds everything derived from vertices and facets.
    static TriMesh from_indexed(std::vector<Vec3> vertices, std::vector<std::array<VertexId, 3>> facets);

    const std::vector<NonManifoldEdge>& non_manifold_edges() const { return non_manifold_; }
    std::size_t boundary_edge_count() const { return boundary_edges_; }

private:
    friend TriMesh build_adjacency(TriMesh mesh);

    std::vector<Vec3> vertices_;
    std::vector<std::array<VertexId, 3>> facets_;
    std::vector<Vec3> normals_;
    std::vector<double> areas_;
    std::vector<Vec3> centroids_;
    std::vector<AdjacencyRecord> adjacency_;
    std::vector<std::uint32_t> adjacency_offsets_;
    std::vector<std::uint32_t> adjacency_index_;
    std::vector<NonManifoldEdge> non_manifold_;
    std::size_t boundary_edges_ = 0;
};

struct LoadedMesh {
    TriMesh mesh;
    MeshDiagnostics diagnostics;
};

/// Vertex merge, degenerate removal, winding-derived normals, adjacency.
LoadedMesh build_mesh(std::span<const RawTriangle> triangles, const CleaningOptions& options = {});

/// Populates undirected facet adjacency over shared edges.
TriMesh build_adjacency(TriMesh mesh);

/// Counts facets facing away from the tool axis and refreshes the bounding box.
void update_diagnostics(const TriMesh& mesh, const Vec3& tool_axis, MeshDiagnostics& diagnostics);

/// 64-bit FNV-1a over the vertex coordinates and facet indices.
std::uint64_t mesh_fingerprint(const TriMesh& mesh);

}  // namespace dieplan
