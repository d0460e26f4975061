#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dieplan/segmentation.hpp"
#include "dieplan/tooling.hpp"

namespace dieplan {

/// Functional requirements from die design. Roughness must be given as R_t.
struct TechnologicalData {
    std::string material;
    double roughness_um = 0.0;
    std::string roughness_criteria = "Rt";
    double form_tolerance_mm = 0.0;
    double tolerance_factor = 1.0;
};

/// Parses `{material, roughness_Rt_um, form_tolerance_mm, tolerance_factor?}`.
/// Any other roughness key (e.g. `roughness_Ra_um`) or `roughness_criteria` != "Rt" is rejected.
TechnologicalData parse_technological_data(std::string_view json_text);

/// The reference die: 16 um R_t, 0.1 mm form tolerance.
TechnologicalData default_technological_data();

struct MachiningData {
    double scallop_height_um = 0.0;
    double machining_tolerance_mm = 0.0;
};

struct MachiningFeature {
    GeometricFeature geometry;
    TechnologicalData tech;
    MachiningData machining;
    std::vector<TopologicalRelation> relations;
    std::vector<ContainmentNote> waivers;

    FeatureId id() const { return geometry.id; }
};

MachiningFeature make_machining_feature(const GeometricFeature& gf, const TechnologicalData& tech,
                                        std::span<const TopologicalRelation> relations,
                                        std::span<const ContainmentNote> waivers, double tolerance_factor = 1.0);

/// part material -> allowed tool materials. Absent part material means "anything goes".
using MaterialCompatibility = std::map<std::string, std::vector<std::string>>;

MaterialCompatibility parse_material_compatibility(std::string_view json_text);

struct ToolSelectionOptions {
    double clearance_mm = 5.0;
    MaterialCompatibility compatibility;
};

/// Flat -> largest accessible corner end mill; Draft/Transition -> largest accessible ball nose.
/// Accessible: TL >= depth and OL >= depth + clearance. Ties go to the smaller id.
CuttingTool select_tool(const MachiningFeature& mf, const std::vector<CuttingTool>& library, double mesh_top,
                        const ToolSelectionOptions& options = {});

/// Accessibility and material checks for a forced tool.
void check_tool(const MachiningFeature& mf, const CuttingTool& tool, double mesh_top,
                const ToolSelectionOptions& options = {});

enum class FeedKind { ParallelPlanes, ZLevel, ParallelCurve };
enum class SweepingMode { OneWay, ZigZag };
enum class CuttingMode { Upward, Downward };

std::string_view to_string(FeedKind k);
std::string_view to_string(SweepingMode m);
std::string_view to_string(CuttingMode m);
FeedKind parse_feed_kind(std::string_view s);

struct MachiningStrategy {
    FeedKind feed_kind = FeedKind::ZLevel;
    double feed_direction_deg = 0.0;  // ParallelPlanes only
    SweepingMode sweeping_mode = SweepingMode::ZigZag;
    CuttingMode cutting_mode = CuttingMode::Upward;
    double pitch_mm = 0.0;
    double machining_tolerance_mm = 0.0;

    bool operator==(const MachiningStrategy&) const = default;
};

struct StrategyOptions {
    SweepingMode sweeping_mode = SweepingMode::ZigZag;
    CuttingMode cutting_mode = CuttingMode::Upward;
    std::optional<FeedKind> force_feed;  // single-tool contingency forces ZLevel
};

MachiningStrategy select_strategy(const MachiningFeature& mf, const CuttingTool& tool,
                                  const StrategyOptions& options = {});

/// Stepover leaving `scallop_height_um` on flat contact: 2 sqrt(2 R h - h^2) with the tip radius R;
/// 0.6 D for flat end mills.
double compute_pitch(const CuttingTool& tool, double scallop_height_um);

struct JunctionResult {
    bool ok = true;
    double mismatch_mm = 0.0;
    std::string reason;
};

/// Tool change across a contact boundary; degrades when |R_a - R_b| * factor exceeds the form tolerance.
JunctionResult junction_check(const MachiningFeature& a, const MachiningFeature& b, const CuttingTool& tool_a,
                              const CuttingTool& tool_b, double junction_factor = 0.05);

}  // namespace dieplan
