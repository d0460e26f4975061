#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dieplan/association.hpp"
#include "dieplan/continuity.hpp"
#include "dieplan/indicators.hpp"
#include "dieplan/mesh.hpp"
#include "dieplan/planner.hpp"
#include "dieplan/segmentation.hpp"

namespace dieplan {

struct DirectionSpec {
    double start = 0.0;
    double stop = 90.0;
    double step = 10.0;

    std::vector<FeedDirection> expand(const ToolAxis& axis) const { return direction_range(start, stop, step, axis); }
    bool operator==(const DirectionSpec&) const = default;
};

/// "start:stop:step" in degrees; validated by expanding it.
DirectionSpec parse_direction_spec(std::string_view text);

/// Manual tool/strategy decisions of the machining assistant.
struct AssociationOverrides {
    /// "corner-only" or a tool id: one tool for every feature, Z-level everywhere.
    std::optional<std::string> single_tool;
    std::map<FeatureId, std::string> tool_by_feature;
    std::map<FeatureId, FeedKind> feed_by_feature;

    bool empty() const { return !single_tool && tool_by_feature.empty() && feed_by_feature.empty(); }
};

struct PipelineConfig {
    CleaningOptions cleaning;
    ContactMapConfig contact;
    DirectionSpec directions;
    SegmentationParams segmentation;
    SegmentationOverrides segmentation_overrides;
    std::optional<double> d_prox;  // defaults to the largest tool diameter
    double epsilon_conv = 1e-6;
    double containment_epsilon = 1e-3;
    TechnologicalData tech = default_technological_data();
    std::vector<CuttingTool> tools = default_tool_library();
    ToolSelectionOptions tool_selection;
    StrategyOptions strategy;
    double junction_factor = 0.05;
    AssociationOverrides association_overrides;
    SequenceOptions sequence;
    OrderBy order_by = OrderBy::Tool;

    double proximity_distance() const { return d_prox.value_or(largest_diameter(tools)); }
};

struct SegmentationResult {
    std::vector<GeometricFeature> elementary;
    std::vector<GeometricFeature> features;
    std::vector<TopologicalRelation> relations;
    std::vector<ContainmentNote> waivers;
};

struct Binding {
    FeatureId feature = 0;
    CuttingTool tool;
    MachiningStrategy strategy;
    std::string tool_reason;
};

struct AssociationError {
    FeatureId feature = 0;
    std::string message;
};

struct JunctionNote {
    FeatureId feature_a = 0;
    FeatureId feature_b = 0;
    JunctionResult result;
};

struct AssociationResult {
    std::vector<MachiningFeature> features;
    std::vector<Binding> bindings;  // by feature id
    std::vector<AssociationError> errors;
    std::vector<JunctionNote> junctions;

    const Binding* binding(FeatureId f) const;
};

struct PlanResult {
    std::vector<MachiningSequence> sequences;
    MachiningProcess process;
    std::vector<std::string> warnings;
};

/// Every stage, in order; later stages are only filled by the calls that need them.
struct PipelineResult {
    FacetIndicators indicators;
    MapDocument map;
    ContinuityProfile profile;
    RegionContinuity mesh_continuity;
    SegmentationResult segmentation;
    AssociationResult association;
    PlanResult plan;
};

double mesh_top(const TriMesh& mesh, const ToolAxis& axis);

MapDocument run_contact_map(const TriMesh& mesh, const PipelineConfig& cfg);
ContinuityProfile run_continuity(const TriMesh& mesh, const FacetIndicators& indicators, const PipelineConfig& cfg);
SegmentationResult run_segmentation(const TriMesh& mesh, const FacetIndicators& indicators,
                                    const ContinuityProfile& profile, const PipelineConfig& cfg);
AssociationResult run_association(const TriMesh& mesh, const SegmentationResult& seg, const PipelineConfig& cfg);
PlanResult run_plan(const TriMesh& mesh, const FacetIndicators& indicators, const AssociationResult& assoc,
                    const SegmentationResult& seg, const PipelineConfig& cfg);

enum class Stage { Map, Continuity, Segmentation, Association, Plan };

PipelineResult run_pipeline(const TriMesh& mesh, const PipelineConfig& cfg, Stage until = Stage::Plan);

}  // namespace dieplan
