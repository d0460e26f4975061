#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dieplan/continuity.hpp"
#include "dieplan/indicators.hpp"
#include "dieplan/mesh.hpp"

namespace dieplan {

using FeatureId = std::uint32_t;

/// Edge-connected facet set with its contact class and continuity.
/// Heights (`z_min`, `z_max`, `mean_height`) are measured along the tool axis.
struct GeometricFeature {
    FeatureId id = 0;
    std::vector<FacetId> facets;  // ascending
    ContactClass contact_class = ContactClass::Flat;
    RegionContinuity continuity;
    double area = 0.0;
    double z_min = 0.0;
    double z_max = 0.0;
    double depth_from_top = 0.0;
    double mean_height = 0.0;
    Vec3 centroid;
    double principal_direction = 0.0;  // degrees in [0,180)
};

struct SegmentationParams {
    double min_region_area_fraction = 0.01;
    ContinuityParams continuity;
    std::size_t ring_bands = 0;  // split Transition features into kappa-quantile rings; 0 = off
};

/// Manual corrections from the machining assistant, by feature id of the automatic result.
struct SegmentationOverrides {
    std::vector<std::pair<FeatureId, FeatureId>> merge;
    std::vector<FeatureId> split;

    bool empty() const { return merge.empty() && split.empty(); }
};

/// Maximal edge-connected regions of one contact class; undercuts excluded.
/// Regions below the area threshold join the neighbour with the longest shared boundary.
std::vector<GeometricFeature> grow_elementary_features(const TriMesh& mesh, const FacetIndicators& indicators,
                                                       const ContinuityProfile& profile, const ToolAxis& axis,
                                                       const SegmentationParams& params);

/// Merges adjacent features of the same contact class and compatible continuity,
/// keeping a merge only if the union still classifies the same way.
std::vector<GeometricFeature> group_by_continuity(const TriMesh& mesh, std::vector<GeometricFeature> features,
                                                  const FacetIndicators& indicators, const ContinuityProfile& profile,
                                                  const ToolAxis& axis, const SegmentationParams& params);

std::vector<GeometricFeature> apply_overrides(const TriMesh& mesh, std::vector<GeometricFeature> features,
                                              const SegmentationOverrides& overrides,
                                              const FacetIndicators& indicators, const ContinuityProfile& profile,
                                              const ToolAxis& axis, const SegmentationParams& params);

/// Rebuilds the derived fields of a feature from its facet list.
GeometricFeature describe_feature(const TriMesh& mesh, std::vector<FacetId> facets, ContactClass cls,
                                  const ContinuityProfile& profile, const ToolAxis& axis,
                                  const ContinuityParams& params, double mesh_top);

/// Sorts features by smallest facet and renumbers ids from 0.
void renumber(std::vector<GeometricFeature>& features);

/// Extent of the features' vertices projected on `direction`.
double projected_extent(const TriMesh& mesh, std::span<const FacetId> facets, const Vec3& direction);

enum class EdgeConvexity { Concave, Convex, Tangent };

std::string_view to_string(EdgeConvexity c);

/// Evaluated with the lower facet index as reference so the result ignores argument order.
EdgeConvexity edge_convexity(const TriMesh& mesh, FacetId i, FacetId j, double epsilon = 1e-6);

enum class RelationKind { ContactConcave, ContactConvex, ContactTangent, Proximity };

std::string_view to_string(RelationKind k);
RelationKind parse_relation_kind(std::string_view name);

struct TopologicalRelation {
    FeatureId feature_a = 0;  // feature_a < feature_b
    FeatureId feature_b = 0;
    RelationKind kind = RelationKind::ContactTangent;
    double shared_edge_length = 0.0;
    double min_distance = 0.0;
    double concave_length = 0.0;
    double convex_length = 0.0;
    double tangent_length = 0.0;

    bool involves(FeatureId f) const { return feature_a == f || feature_b == f; }
    FeatureId other(FeatureId f) const { return feature_a == f ? feature_b : feature_a; }
    bool is_contact() const { return kind != RelationKind::Proximity; }
};

/// One relation per related pair, ordered by (feature_a, feature_b).
std::vector<TopologicalRelation> feature_relations(const TriMesh& mesh, std::span<const GeometricFeature> features,
                                                   double d_prox, double epsilon_conv = 1e-6);

const TopologicalRelation* find_relation(std::span<const TopologicalRelation> relations, FeatureId a, FeatureId b);

/// "contained does not exceed container": a Flat container whose lowest point is not below the other feature's top.
struct ContainmentNote {
    FeatureId container = 0;
    FeatureId contained = 0;
    std::string note;
};

std::vector<ContainmentNote> protrusion_containment(std::span<const GeometricFeature> features,
                                                    std::span<const TopologicalRelation> relations,
                                                    double epsilon = 1e-3);

}  // namespace dieplan
