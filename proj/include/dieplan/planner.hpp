#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dieplan/association.hpp"

namespace dieplan {

/// Descriptor of one trajectory; geometry is left to the CAM system.
struct TrajectoryDescriptor {
    std::string approach_path;
    std::string machining_path;
    std::string clearance_path;
};

struct SequenceStructure {
    std::string fast_initial_approach;
    TrajectoryDescriptor initial_trajectory;
    std::size_t intermediate_trajectory_count = 0;
    TrajectoryDescriptor intermediate_trajectory;
    TrajectoryDescriptor final_trajectory;
    std::string fast_final_clearance;
};

struct TransitionDescriptor {
    std::string style;
    double step_mm = 0.0;
};

struct SequenceEstimates {
    std::size_t pass_count = 1;
    double swept_extent_mm = 0.0;
    double mean_pass_length_mm = 0.0;
    double machining_length_mm = 0.0;
};

/// One feature machined with one tool, one approach and one clearance.
struct MachiningSequence {
    std::uint32_t id = 0;
    FeatureId feature = 0;
    std::string tool_id;
    MachiningStrategy strategy;
    SequenceStructure structure;
    TransitionDescriptor transitions;
    Vec3 parking_point;
    SequenceEstimates estimates;
    std::vector<std::string> interference_notes;
    double mean_height = 0.0;
    double top_height = 0.0;
};

struct SequenceOptions {
    double safety_margin_mm = 10.0;
    double clearance_mm = 5.0;
    double shallow_kappa = 0.3;  // facets below this slope need infill passes under Z-level
};

/// Passes: ceil(extent across the feed / pitch) for parallel planes; for Z-level the height
/// range plus the across-extent of shallow facets. Length = passes * area / extent.
MachiningSequence build_sequence(const TriMesh& mesh, const FacetIndicators& indicators, const ToolAxis& axis,
                                 const MachiningFeature& mf, const CuttingTool& tool,
                                 const MachiningStrategy& strategy, double mesh_top,
                                 const SequenceOptions& options = {});

enum class OrderBy { Tool, Z };

std::string_view to_string(OrderBy o);
OrderBy parse_order_by(std::string_view s);

struct MachiningProcess {
    std::vector<std::uint32_t> order;  // sequence ids
    std::size_t tool_change_count = 0;
    std::vector<std::string> rationale;
    double total_machining_length_mm = 0.0;
};

std::size_t count_tool_changes(std::span<const MachiningSequence> sequences, std::span<const std::uint32_t> order);

/// Tool groups (group of the topmost feature first), top-down inside a group, feature id tie-break.
/// A containment waiver keeps its container ahead of the contained feature.
MachiningProcess order_process(std::span<const MachiningSequence> sequences,
                               std::span<const ContainmentNote> waivers, OrderBy order_by = OrderBy::Tool);

}  // namespace dieplan
