#include "dieplan/segmentation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <numeric>
#include <set>
#include <tuple>
#include <unordered_map>

#include "dieplan/error.hpp"

namespace dieplan {

namespace {

constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();

/// Connected components of `member` facets where neighbours also share `same(f, g)`.
template <typename Same>
std::vector<std::vector<FacetId>> components(const TriMesh& mesh, std::span<const FacetId> member, Same same) {
    std::unordered_map<FacetId, std::uint32_t> local;
    local.reserve(member.size());
    for (std::uint32_t i = 0; i < member.size(); ++i) {
        local.emplace(member[i], i);
    }
    std::vector<FacetId> sorted(member.begin(), member.end());
    std::sort(sorted.begin(), sorted.end());
    std::vector<bool> seen(member.size(), false);
    std::vector<std::vector<FacetId>> out;
    std::vector<FacetId> stack;
    const auto adj = mesh.adjacency();
    for (FacetId seed : sorted) {
        if (seen[local.at(seed)]) {
            continue;
        }
        std::vector<FacetId> comp;
        seen[local.at(seed)] = true;
        stack.push_back(seed);
        while (!stack.empty()) {
            const FacetId f = stack.back();
            stack.pop_back();
            comp.push_back(f);
            for (std::uint32_t r : mesh.facet_adjacency(f)) {
                const FacetId g = adj[r].facet_a == f ? adj[r].facet_b : adj[r].facet_a;
                auto it = local.find(g);
                if (it == local.end() || seen[it->second] || !same(f, g)) {
                    continue;
                }
                seen[it->second] = true;
                stack.push_back(g);
            }
        }
        std::sort(comp.begin(), comp.end());
        out.push_back(std::move(comp));
    }
    return out;
}

double mesh_top(const TriMesh& mesh, const ToolAxis& axis) {
    double top = -std::numeric_limits<double>::infinity();
    for (const Vec3& p : mesh.vertices()) {
        top = std::max(top, axis.height(p));
    }
    return top;
}

std::vector<FacetId> merged_facets(const std::vector<FacetId>& a, const std::vector<FacetId>& b) {
    std::vector<FacetId> out;
    out.reserve(a.size() + b.size());
    std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

std::vector<std::uint32_t> facet_owner(const TriMesh& mesh, std::span<const GeometricFeature> features) {
    std::vector<std::uint32_t> owner(mesh.facet_count(), kNone);
    for (std::uint32_t i = 0; i < features.size(); ++i) {
        for (FacetId f : features[i].facets) {
            owner[f] = i;
        }
    }
    return owner;
}

/// Shared boundary length between features, keyed by (lower index, higher index).
std::map<std::pair<std::uint32_t, std::uint32_t>, double> feature_boundaries(const TriMesh& mesh,
                                                                             const std::vector<std::uint32_t>& owner) {
    std::map<std::pair<std::uint32_t, std::uint32_t>, double> out;
    for (const auto& rec : mesh.adjacency()) {
        const auto a = owner[rec.facet_a];
        const auto b = owner[rec.facet_b];
        if (a == kNone || b == kNone || a == b) {
            continue;
        }
        out[{std::min(a, b), std::max(a, b)}] += rec.length;
    }
    return out;
}

bool continuity_compatible(const RegionContinuity& a, const RegionContinuity& b, const ContinuityParams& params) {
    if (a.cls.kind != b.cls.kind) {
        return false;
    }
    switch (a.cls.kind) {
        case ContinuityKind::Indifferent: return true;
        case ContinuityKind::Oriented: return a.cls.direction_deg == b.cls.direction_deg;
        case ContinuityKind::ZLevel: return std::abs(a.kappa_mean - b.kappa_mean) <= params.epsilon_z;
        case ContinuityKind::Undefined: return false;
    }
    return false;
}

bool still_satisfies(const RegionContinuity& merged, const RegionContinuity& part) {
    if (merged.cls.kind != part.cls.kind) {
        return false;
    }
    return merged.cls.kind != ContinuityKind::Oriented || merged.cls.direction_deg == part.cls.direction_deg;
}

}  // namespace

double projected_extent(const TriMesh& mesh, std::span<const FacetId> facets, const Vec3& direction) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (FacetId f : facets) {
        for (VertexId v : mesh.facets()[f]) {
            const double s = dot(mesh.vertex(v), direction);
            lo = std::min(lo, s);
            hi = std::max(hi, s);
        }
    }
    return facets.empty() ? 0.0 : hi - lo;
}

GeometricFeature describe_feature(const TriMesh& mesh, std::vector<FacetId> facets, ContactClass cls,
                                  const ContinuityProfile& profile, const ToolAxis& axis,
                                  const ContinuityParams& params, double top) {
    std::sort(facets.begin(), facets.end());
    GeometricFeature g;
    g.contact_class = cls;
    g.z_min = std::numeric_limits<double>::infinity();
    g.z_max = -g.z_min;
    const auto areas = mesh.facet_areas();
    const auto centroids = mesh.facet_centroids();
    const auto& [e1, e2] = axis.h_basis();
    Vec3 weighted;
    for (FacetId f : facets) {
        g.area += areas[f];
        weighted += centroids[f] * areas[f];
        for (VertexId v : mesh.facets()[f]) {
            const double h = axis.height(mesh.vertex(v));
            g.z_min = std::min(g.z_min, h);
            g.z_max = std::max(g.z_max, h);
        }
    }
    g.centroid = g.area > 0.0 ? weighted / g.area : Vec3{};
    g.mean_height = axis.height(g.centroid);
    g.depth_from_top = top - g.z_min;

    // Principal azimuth from the area-weighted second moment of the centroids in plane H.
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    const double cu = dot(g.centroid, e1);
    const double cv = dot(g.centroid, e2);
    for (FacetId f : facets) {
        const double u = dot(centroids[f], e1) - cu;
        const double v = dot(centroids[f], e2) - cv;
        sxx += areas[f] * u * u;
        syy += areas[f] * v * v;
        sxy += areas[f] * u * v;
    }
    double angle = 0.0;
    if (std::hypot(2.0 * sxy, sxx - syy) > 1e-9 * (sxx + syy)) {
        angle = 0.5 * std::atan2(2.0 * sxy, sxx - syy) * 180.0 / std::numbers::pi;
        if (angle < 0.0) {
            angle += 180.0;
        }
        if (angle >= 180.0) {
            angle -= 180.0;
        }
    }
    g.principal_direction = angle;
    g.facets = std::move(facets);
    g.continuity = classify_continuity(g.facets, profile, params);
    return g;
}

namespace {

/// Sum over facets in the given (ascending) order, so equal sets give equal sums.
double area_of(const TriMesh& mesh, const std::vector<FacetId>& facets) {
    double a = 0.0;
    for (FacetId f : facets) {
        a += mesh.facet_areas()[f];
    }
    return a;
}

}  // namespace

void renumber(std::vector<GeometricFeature>& features) {
    std::sort(features.begin(), features.end(),
              [](const GeometricFeature& a, const GeometricFeature& b) { return a.facets.front() < b.facets.front(); });
    for (std::uint32_t i = 0; i < features.size(); ++i) {
        features[i].id = i;
    }
}

std::vector<GeometricFeature> grow_elementary_features(const TriMesh& mesh, const FacetIndicators& indicators,
                                                       const ContinuityProfile& profile, const ToolAxis& axis,
                                                       const SegmentationParams& params) {
    const auto& cls = indicators.contact_class;
    if (cls.size() != mesh.facet_count()) {
        throw Error(ErrorCode::InvalidArgument, "segmentation needs classified indicators");
    }
    std::vector<FacetId> reachable;
    for (FacetId f = 0; f < mesh.facet_count(); ++f) {
        if (cls[f] != ContactClass::Undercut) {
            reachable.push_back(f);
        }
    }
    auto regions = components(mesh, reachable, [&cls](FacetId a, FacetId b) { return cls[a] == cls[b]; });

    struct Region {
        std::vector<FacetId> facets;
        ContactClass cls;
        double area = 0.0;
        std::map<std::uint32_t, double> boundary;
        bool alive = true;
    };
    const auto areas = mesh.facet_areas();
    // Areas are always summed in ascending facet order so ties resolve the same way on every run.
    auto area_of = [&areas](const std::vector<FacetId>& facets) {
        double a = 0.0;
        for (FacetId f : facets) {
            a += areas[f];
        }
        return a;
    };
    std::vector<Region> rs(regions.size());
    std::vector<std::uint32_t> owner(mesh.facet_count(), kNone);
    for (std::uint32_t r = 0; r < regions.size(); ++r) {
        rs[r].cls = cls[regions[r].front()];
        for (FacetId f : regions[r]) {
            owner[f] = r;
        }
        rs[r].area = area_of(regions[r]);
        rs[r].facets = std::move(regions[r]);
    }
    const double total = area_of(reachable);
    for (const auto& rec : mesh.adjacency()) {
        const auto a = owner[rec.facet_a];
        const auto b = owner[rec.facet_b];
        if (a != kNone && b != kNone && a != b) {
            rs[a].boundary[b] += rec.length;
            rs[b].boundary[a] += rec.length;
        }
    }

    // Smallest region first (ties: smallest member facet); it joins the neighbour with the longest
    // shared boundary, near-equal lengths going to the neighbour with the smallest member facet.
    const double threshold = params.min_region_area_fraction * total;
    using Key = std::tuple<double, FacetId, std::uint32_t>;
    std::set<Key> small;
    auto key = [&rs](std::uint32_t r) { return Key{rs[r].area, rs[r].facets.front(), r}; };
    for (std::uint32_t r = 0; r < rs.size(); ++r) {
        if (rs[r].area < threshold && !rs[r].boundary.empty()) {
            small.insert(key(r));
        }
    }
    while (!small.empty()) {
        const std::uint32_t r = std::get<2>(*small.begin());
        small.erase(small.begin());
        Region& victim = rs[r];
        std::uint32_t target = kNone;
        double best = -1.0;
        for (const auto& [n, len] : victim.boundary) {
            const double tol = 1e-9 * std::max(len, best);
            if (target == kNone || len > best + tol ||
                (len >= best - tol && rs[n].facets.front() < rs[target].facets.front())) {
                best = std::max(best, len);
                target = n;
            }
        }
        Region& host = rs[target];
        small.erase(key(target));
        host.facets = merged_facets(host.facets, victim.facets);
        host.area = area_of(host.facets);
        host.boundary.erase(r);
        for (const auto& [n, len] : victim.boundary) {
            if (n == target) {
                continue;
            }
            host.boundary[n] += len;
            rs[n].boundary.erase(r);
            rs[n].boundary[target] += len;
        }
        victim.alive = false;
        victim.boundary.clear();
        victim.facets.clear();
        if (host.area < threshold && !host.boundary.empty()) {
            small.insert(key(target));
        }
    }

    const double top = mesh_top(mesh, axis);
    std::vector<GeometricFeature> out;
    for (auto& r : rs) {
        if (r.alive) {
            out.push_back(describe_feature(mesh, std::move(r.facets), r.cls, profile, axis, params.continuity, top));
        }
    }
    renumber(out);
    return out;
}

std::vector<GeometricFeature> group_by_continuity(const TriMesh& mesh, std::vector<GeometricFeature> features,
                                                  const FacetIndicators& indicators, const ContinuityProfile& profile,
                                                  const ToolAxis& axis, const SegmentationParams& params) {
    const double top = mesh_top(mesh, axis);
    renumber(features);
    bool merged = true;
    while (merged) {
        merged = false;
        const auto boundaries = feature_boundaries(mesh, facet_owner(mesh, features));
        for (const auto& [pair, len] : boundaries) {
            auto& a = features[pair.first];
            auto& b = features[pair.second];
            if (a.contact_class != b.contact_class ||
                !continuity_compatible(a.continuity, b.continuity, params.continuity)) {
                continue;
            }
            GeometricFeature u = describe_feature(mesh, merged_facets(a.facets, b.facets), a.contact_class, profile,
                                                  axis, params.continuity, top);
            if (!still_satisfies(u.continuity, a.continuity)) {
                continue;
            }
            a = std::move(u);
            features.erase(features.begin() + pair.second);
            renumber(features);
            merged = true;
            break;
        }
    }

    if (params.ring_bands > 1) {
        std::vector<GeometricFeature> banded;
        for (auto& g : features) {
            if (g.contact_class != ContactClass::Transition) {
                banded.push_back(std::move(g));
                continue;
            }
            std::vector<double> ks;
            for (FacetId f : g.facets) {
                ks.push_back(indicators.kappa[f]);
            }
            std::sort(ks.begin(), ks.end());
            std::vector<double> cuts;
            for (std::size_t q = 1; q < params.ring_bands; ++q) {
                cuts.push_back(ks[q * ks.size() / params.ring_bands]);
            }
            auto band = [&](FacetId f) {
                return std::upper_bound(cuts.begin(), cuts.end(), indicators.kappa[f]) - cuts.begin();
            };
            auto rings = components(mesh, g.facets, [&](FacetId a, FacetId b) { return band(a) == band(b); });
            // A cut can fall inside one tessellation ring; fold the slivers it leaves into the band around them.
            constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();
            std::unordered_map<FacetId, std::uint32_t> owner;
            std::vector<double> area(rings.size());
            for (std::uint32_t i = 0; i < rings.size(); ++i) {
                for (FacetId f : rings[i]) {
                    owner[f] = i;
                }
                std::sort(rings[i].begin(), rings[i].end());
                area[i] = area_of(mesh, rings[i]);
            }
            const double sliver = g.area / (4.0 * static_cast<double>(params.ring_bands));
            std::vector<bool> stuck(rings.size(), false);
            while (true) {
                std::uint32_t victim = kNone;
                for (std::uint32_t i = 0; i < rings.size(); ++i) {
                    if (!rings[i].empty() && !stuck[i] && area[i] < sliver &&
                        (victim == kNone || area[i] < area[victim] ||
                         (area[i] == area[victim] && rings[i].front() < rings[victim].front()))) {
                        victim = i;
                    }
                }
                if (victim == kNone) {
                    break;
                }
                std::map<std::uint32_t, double> shared;
                for (FacetId f : rings[victim]) {
                    for (std::uint32_t r : mesh.facet_adjacency(f)) {
                        const auto& rec = mesh.adjacency()[r];
                        const auto it = owner.find(rec.facet_a == f ? rec.facet_b : rec.facet_a);
                        if (it != owner.end() && it->second != victim) {
                            shared[it->second] += rec.length;
                        }
                    }
                }
                if (shared.empty()) {
                    stuck[victim] = true;
                    continue;
                }
                std::uint32_t host = shared.begin()->first;
                for (const auto& [i, len] : shared) {
                    if (len > shared[host] * (1.0 + 1e-9)) {
                        host = i;
                    }
                }
                for (FacetId f : rings[victim]) {
                    owner[f] = host;
                }
                rings[host].insert(rings[host].end(), rings[victim].begin(), rings[victim].end());
                std::sort(rings[host].begin(), rings[host].end());
                area[host] = area_of(mesh, rings[host]);
                rings[victim].clear();
            }
            for (auto& ring : rings) {
                if (!ring.empty()) {
                    banded.push_back(describe_feature(mesh, std::move(ring), g.contact_class, profile, axis,
                                                      params.continuity, top));
                }
            }
        }
        features = std::move(banded);
        renumber(features);
    }
    return features;
}

std::vector<GeometricFeature> apply_overrides(const TriMesh& mesh, std::vector<GeometricFeature> features,
                                              const SegmentationOverrides& overrides,
                                              const FacetIndicators& indicators, const ContinuityProfile& profile,
                                              const ToolAxis& axis, const SegmentationParams& params) {
    if (overrides.empty()) {
        return features;
    }
    renumber(features);
    const std::size_t n = features.size();
    auto check = [n](FeatureId id) {
        if (id >= n) {
            throw Error(ErrorCode::InvalidArgument, "override references unknown feature id " + std::to_string(id));
        }
    };
    std::vector<bool> split(n, false);
    for (FeatureId id : overrides.split) {
        check(id);
        split[id] = true;
    }
    const auto boundaries = feature_boundaries(mesh, facet_owner(mesh, features));
    std::vector<std::uint32_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0u);
    auto find = [&parent](std::uint32_t x) {
        while (parent[x] != x) {
            x = parent[x] = parent[parent[x]];
        }
        return x;
    };
    for (auto [a, b] : overrides.merge) {
        check(a);
        check(b);
        if (a == b) {
            continue;
        }
        if (split[a] || split[b]) {
            throw Error(ErrorCode::InvalidArgument, "feature " + std::to_string(split[a] ? a : b) +
                                                        " cannot be both merged and split");
        }
        if (!boundaries.contains({std::min(a, b), std::max(a, b)})) {
            throw Error(ErrorCode::InvalidArgument, "features " + std::to_string(a) + " and " + std::to_string(b) +
                                                        " do not share an edge");
        }
        const auto ra = find(a);
        const auto rb = find(b);
        parent[std::max(ra, rb)] = std::min(ra, rb);
    }

    const double top = mesh_top(mesh, axis);
    const auto& cls = indicators.contact_class;
    std::vector<GeometricFeature> out;
    std::map<std::uint32_t, std::vector<FacetId>> groups;
    for (std::uint32_t i = 0; i < n; ++i) {
        if (split[i]) {
            for (auto& comp : components(mesh, features[i].facets, [&cls](FacetId a, FacetId b) { return cls[a] == cls[b]; })) {
                const ContactClass c = cls[comp.front()];
                out.push_back(describe_feature(mesh, std::move(comp), c, profile, axis, params.continuity, top));
            }
        } else if (find(i) == i && parent[i] == i) {
            groups[i] = features[i].facets;
        } else {
            auto& g = groups[find(i)];
            g = merged_facets(g.empty() ? features[find(i)].facets : g, features[i].facets);
        }
    }
    for (auto& [root, facets] : groups) {
        out.push_back(
            describe_feature(mesh, std::move(facets), features[root].contact_class, profile, axis, params.continuity, top));
    }
    renumber(out);
    return out;
}

std::string_view to_string(EdgeConvexity c) {
    switch (c) {
        case EdgeConvexity::Concave: return "concave";
        case EdgeConvexity::Convex: return "convex";
        case EdgeConvexity::Tangent: return "tangent";
    }
    return "unknown";
}

EdgeConvexity edge_convexity(const TriMesh& mesh, FacetId i, FacetId j, double epsilon) {
    if (i >= mesh.facet_count() || j >= mesh.facet_count() || !mesh.find_adjacency(i, j)) {
        throw Error(ErrorCode::NotAdjacent, "facets " + std::to_string(i) + " and " + std::to_string(j) +
                                                " do not share an edge");
    }
    const FacetId a = std::min(i, j);
    const FacetId b = std::max(i, j);
    const double s = dot(mesh.facet_normals()[a], mesh.facet_centroids()[b] - mesh.facet_centroids()[a]);
    if (s < -epsilon) {
        return EdgeConvexity::Convex;
    }
    if (s > epsilon) {
        return EdgeConvexity::Concave;
    }
    return EdgeConvexity::Tangent;
}

std::string_view to_string(RelationKind k) {
    switch (k) {
        case RelationKind::ContactConcave: return "contact_concave";
        case RelationKind::ContactConvex: return "contact_convex";
        case RelationKind::ContactTangent: return "contact_tangent";
        case RelationKind::Proximity: return "proximity";
    }
    return "unknown";
}

RelationKind parse_relation_kind(std::string_view name) {
    for (auto k : {RelationKind::ContactConcave, RelationKind::ContactConvex, RelationKind::ContactTangent,
                   RelationKind::Proximity}) {
        if (to_string(k) == name) {
            return k;
        }
    }
    throw Error(ErrorCode::InvalidArgument, "unknown relation kind '" + std::string(name) + "'");
}

std::vector<TopologicalRelation> feature_relations(const TriMesh& mesh, std::span<const GeometricFeature> features,
                                                   double d_prox, double epsilon_conv) {
    // Features are addressed by position; ids are expected to equal positions after renumber().
    const auto owner = facet_owner(mesh, features);
    std::map<std::pair<std::uint32_t, std::uint32_t>, TopologicalRelation> rel;
    for (const auto& rec : mesh.adjacency()) {
        const auto fa = owner[rec.facet_a];
        const auto fb = owner[rec.facet_b];
        if (fa == kNone || fb == kNone || fa == fb) {
            continue;
        }
        auto& r = rel[{std::min(fa, fb), std::max(fa, fb)}];
        r.feature_a = features[std::min(fa, fb)].id;
        r.feature_b = features[std::max(fa, fb)].id;
        r.shared_edge_length += rec.length;
        switch (edge_convexity(mesh, rec.facet_a, rec.facet_b, epsilon_conv)) {
            case EdgeConvexity::Concave: r.concave_length += rec.length; break;
            case EdgeConvexity::Convex: r.convex_length += rec.length; break;
            case EdgeConvexity::Tangent: r.tangent_length += rec.length; break;
        }
    }
    for (auto& [key, r] : rel) {
        // A majority must win by more than round-off; anything closer is a tie.
        const double tol = 1e-9 * r.shared_edge_length;
        if (r.concave_length > r.convex_length + tol && r.concave_length > r.tangent_length + tol) {
            r.kind = RelationKind::ContactConcave;
        } else if (r.convex_length > r.concave_length + tol && r.convex_length > r.tangent_length + tol) {
            r.kind = RelationKind::ContactConvex;
        } else {
            r.kind = RelationKind::ContactTangent;
        }
    }

    if (d_prox > 0.0 && features.size() > 1) {
        // Features touching each vertex.
        std::vector<std::vector<std::uint32_t>> vfeat(mesh.vertex_count());
        for (std::uint32_t i = 0; i < features.size(); ++i) {
            for (FacetId f : features[i].facets) {
                for (VertexId v : mesh.facets()[f]) {
                    auto& list = vfeat[v];
                    if (list.empty() || list.back() != i) {
                        if (std::find(list.begin(), list.end(), i) == list.end()) {
                            list.push_back(i);
                        }
                    }
                }
            }
        }
        struct Key {
            std::int64_t x, y, z;
            bool operator<(const Key& o) const { return std::tie(x, y, z) < std::tie(o.x, o.y, o.z); }
        };
        auto cell = [d_prox](const Vec3& p) {
            return Key{static_cast<std::int64_t>(std::floor(p.x / d_prox)), static_cast<std::int64_t>(std::floor(p.y / d_prox)),
                       static_cast<std::int64_t>(std::floor(p.z / d_prox))};
        };
        std::map<Key, std::vector<VertexId>> grid;
        for (VertexId v = 0; v < mesh.vertex_count(); ++v) {
            if (!vfeat[v].empty()) {
                grid[cell(mesh.vertex(v))].push_back(v);
            }
        }
        std::map<std::pair<std::uint32_t, std::uint32_t>, double> nearest;
        for (VertexId v = 0; v < mesh.vertex_count(); ++v) {
            if (vfeat[v].empty()) {
                continue;
            }
            const Vec3 p = mesh.vertex(v);
            const Key k = cell(p);
            for (std::int64_t dx = -1; dx <= 1; ++dx) {
                for (std::int64_t dy = -1; dy <= 1; ++dy) {
                    for (std::int64_t dz = -1; dz <= 1; ++dz) {
                        auto it = grid.find(Key{k.x + dx, k.y + dy, k.z + dz});
                        if (it == grid.end()) {
                            continue;
                        }
                        for (VertexId u : it->second) {
                            if (u < v) {
                                continue;
                            }
                            const double d = distance(p, mesh.vertex(u));
                            if (d > d_prox) {
                                continue;
                            }
                            for (auto fa : vfeat[v]) {
                                for (auto fb : vfeat[u]) {
                                    if (fa == fb) {
                                        continue;
                                    }
                                    const std::pair key{std::min(fa, fb), std::max(fa, fb)};
                                    if (rel.contains(key)) {
                                        continue;
                                    }
                                    auto [pos, inserted] = nearest.try_emplace(key, d);
                                    if (!inserted && d < pos->second) {
                                        pos->second = d;
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        for (const auto& [key, d] : nearest) {
            TopologicalRelation r;
            r.feature_a = features[key.first].id;
            r.feature_b = features[key.second].id;
            r.kind = RelationKind::Proximity;
            r.min_distance = d;
            rel.emplace(key, r);
        }
    }

    std::vector<TopologicalRelation> out;
    out.reserve(rel.size());
    for (auto& [key, r] : rel) {
        out.push_back(r);
    }
    std::sort(out.begin(), out.end(), [](const TopologicalRelation& l, const TopologicalRelation& r) {
        return std::tie(l.feature_a, l.feature_b) < std::tie(r.feature_a, r.feature_b);
    });
    return out;
}

const TopologicalRelation* find_relation(std::span<const TopologicalRelation> relations, FeatureId a, FeatureId b) {
    const FeatureId lo = std::min(a, b);
    const FeatureId hi = std::max(a, b);
    for (const auto& r : relations) {
        if (r.feature_a == lo && r.feature_b == hi) {
            return &r;
        }
    }
    return nullptr;
}

std::vector<ContainmentNote> protrusion_containment(std::span<const GeometricFeature> features,
                                                    std::span<const TopologicalRelation> relations,
                                                    double epsilon) {
    std::vector<ContainmentNote> out;
    for (const auto& a : features) {
        if (a.contact_class != ContactClass::Flat) {
            continue;
        }
        for (const auto& b : features) {
            if (b.id == a.id || b.z_max > a.z_min + epsilon) {
                continue;
            }
            std::string note = "feature " + std::to_string(b.id) + " does not exceed feature " + std::to_string(a.id);
            if (const auto* r = find_relation(relations, a.id, b.id)) {
                note += " (" + std::string(to_string(r->kind)) + ")";
            }
            out.push_back({a.id, b.id, std::move(note)});
        }
    }
    return out;
}

}  // namespace dieplan
