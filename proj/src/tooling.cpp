#include "dieplan/tooling.hpp"

#include <cmath>

#include <nlohmann/json.hpp>

#include "dieplan/error.hpp"

namespace dieplan {

using nlohmann::json;

std::string_view to_string(TipType type) {
    switch (type) {
        case TipType::FlatEnd: return "flat_end";
        case TipType::BallNose: return "ball_nose";
        case TipType::CornerEnd: return "corner_end";
    }
    return "unknown";
}

TipType parse_tip_type(std::string_view name) {
    if (name == "flat_end") {
        return TipType::FlatEnd;
    }
    if (name == "ball_nose") {
        return TipType::BallNose;
    }
    if (name == "corner_end") {
        return TipType::CornerEnd;
    }
    throw Error(ErrorCode::InvalidArgument, "unknown tip type '" + std::string(name) + "'");
}

double CuttingTool::tip_radius() const {
    switch (tip_type) {
        case TipType::BallNose: return diameter / 2.0;
        case TipType::CornerEnd: return corner_radius;
        case TipType::FlatEnd: return 0.0;
    }
    return 0.0;
}

void validate(const CuttingTool& tool) {
    auto fail = [&tool](const std::string& what) {
        throw Error(ErrorCode::Schema, "tool '" + tool.id + "': " + what);
    };
    if (tool.id.empty()) {
        throw Error(ErrorCode::Schema, "tool id must not be empty");
    }
    if (!(tool.diameter > 0.0)) {
        fail("diameter must be positive");
    }
    switch (tool.tip_type) {
        case TipType::FlatEnd:
            if (tool.corner_radius != 0.0) {
                fail("flat end mill must have corner radius 0");
            }
            break;
        case TipType::BallNose:
            if (std::abs(tool.corner_radius - tool.diameter / 2.0) > 1e-9) {
                fail("ball nose corner radius must equal D/2");
            }
            break;
        case TipType::CornerEnd:
            if (!(tool.corner_radius > 0.0 && tool.corner_radius < tool.diameter / 2.0)) {
                fail("corner end mill needs 0 < r < D/2");
            }
            break;
    }
    if (!(tool.tool_length > 0.0)) {
        fail("tool length TL must be positive");
    }
    if (tool.overall_length < tool.tool_length) {
        fail("overall length OL must be >= TL");
    }
}

namespace {

double positive_field(const json& entry, const std::string& where, const char* key, bool required = true) {
    if (!entry.contains(key)) {
        if (!required) {
            return 0.0;
        }
        throw Error(ErrorCode::Schema, where + "." + key + ": missing");
    }
    const json& v = entry.at(key);
    if (!v.is_number()) {
        throw Error(ErrorCode::Schema, where + "." + key + ": expected number");
    }
    const double d = v.get<double>();
    if (d < 0.0) {
        throw Error(ErrorCode::Schema, where + "." + key + ": must be >= 0");
    }
    return d;
}

std::string string_field(const json& entry, const std::string& where, const char* key) {
    if (!entry.contains(key) || !entry.at(key).is_string()) {
        throw Error(ErrorCode::Schema, where + "." + key + ": expected string");
    }
    return entry.at(key).get<std::string>();
}

}  // namespace

std::vector<CuttingTool> parse_tool_library(std::string_view json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::Schema, "tool library: JSON parse error at byte " + std::to_string(e.byte));
    }
    if (!doc.is_array()) {
        throw Error(ErrorCode::Schema, "tool library: top level must be an array");
    }
    std::vector<CuttingTool> tools;
    for (std::size_t i = 0; i < doc.size(); ++i) {
        const std::string where = "[" + std::to_string(i) + "]";
        const json& e = doc[i];
        if (!e.is_object()) {
            throw Error(ErrorCode::Schema, where + ": expected object");
        }
        CuttingTool t;
        t.id = string_field(e, where, "id");
        try {
            t.tip_type = parse_tip_type(string_field(e, where, "tip_type"));
        } catch (const Error& err) {
            if (err.code() == ErrorCode::Schema) {
                throw;
            }
            throw Error(ErrorCode::Schema, where + ".tip_type: " + err.what());
        }
        t.diameter = positive_field(e, where, "diameter_mm");
        t.corner_radius = positive_field(e, where, "corner_radius_mm", t.tip_type == TipType::CornerEnd);
        if (t.tip_type == TipType::BallNose && !e.contains("corner_radius_mm")) {
            t.corner_radius = t.diameter / 2.0;
        }
        t.overall_length = positive_field(e, where, "overall_length_mm");
        t.tool_length = positive_field(e, where, "tool_length_mm");
        t.material = e.contains("material") ? string_field(e, where, "material") : std::string{};
        try {
            validate(t);
        } catch (const Error& err) {
            throw Error(ErrorCode::Schema, where + ": " + err.what());
        }
        for (const auto& other : tools) {
            if (other.id == t.id) {
                throw Error(ErrorCode::Schema, where + ".id: duplicate tool id '" + t.id + "'");
            }
        }
        tools.push_back(std::move(t));
    }
    return tools;
}

std::string tool_library_to_json(const std::vector<CuttingTool>& tools) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& t : tools) {
        arr.push_back({{"id", t.id},
                       {"tip_type", std::string(to_string(t.tip_type))},
                       {"diameter_mm", t.diameter},
                       {"corner_radius_mm", t.corner_radius},
                       {"overall_length_mm", t.overall_length},
                       {"tool_length_mm", t.tool_length},
                       {"material", t.material}});
    }
    return arr.dump(2);
}

double largest_diameter(const std::vector<CuttingTool>& tools) {
    double d = 0.0;
    for (const auto& t : tools) {
        d = std::max(d, t.diameter);
    }
    return tools.empty() ? 10.0 : d;
}

std::vector<CuttingTool> default_tool_library() {
    return {
        CuttingTool{"ball-d10", TipType::BallNose, 10.0, 5.0, 60.0, 40.0, "carbide"},
        CuttingTool{"corner-d16-r2", TipType::CornerEnd, 16.0, 2.0, 70.0, 45.0, "carbide"},
    };
}

}  // namespace dieplan
