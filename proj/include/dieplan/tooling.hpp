#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace dieplan {

/// APT tip families.
enum class TipType { FlatEnd, BallNose, CornerEnd };

std::string_view to_string(TipType type);
TipType parse_tip_type(std::string_view name);

struct CuttingTool {
    std::string id;
    TipType tip_type = TipType::BallNose;
    double diameter = 0.0;        // D, mm
    double corner_radius = 0.0;   // r, mm
    double overall_length = 0.0;  // OL, mm
    double tool_length = 0.0;     // TL, mm
    std::string material;

    /// Radius of the rounded part of the tip that leaves the scallop (D/2 or r; 0 for flat end).
    double tip_radius() const;

    bool operator==(const CuttingTool&) const = default;
};

/// Throws `Error{Schema}` naming the first violated invariant.
void validate(const CuttingTool& tool);

/// Parses `[{id, tip_type, diameter_mm, corner_radius_mm, overall_length_mm, tool_length_mm, material}]`.
/// Errors carry a JSON-path position such as `[1].diameter_mm`.
std::vector<CuttingTool> parse_tool_library(std::string_view json_text);
std::string tool_library_to_json(const std::vector<CuttingTool>& tools);

/// Largest diameter in the library; 10 mm for an empty one.
double largest_diameter(const std::vector<CuttingTool>& tools);

/// Ball D10 and corner-radius D16 r2: the two finishing tools of the reference die.
std::vector<CuttingTool> default_tool_library();

}  // namespace dieplan
