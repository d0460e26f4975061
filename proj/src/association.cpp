#include "dieplan/association.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

#include "dieplan/error.hpp"

namespace dieplan {

using nlohmann::json;

namespace {

std::string format_mm(double v) {
    std::ostringstream ss;
    ss << v;
    return ss.str();
}

}  // namespace

TechnologicalData parse_technological_data(std::string_view json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::Schema, "technological data: JSON parse error at byte " + std::to_string(e.byte));
    }
    if (!doc.is_object()) {
        throw Error(ErrorCode::Schema, "technological data: top level must be an object");
    }
    for (const auto& [key, value] : doc.items()) {
        if (key.starts_with("roughness_") && key != "roughness_Rt_um" && key != "roughness_criteria") {
            throw Error(ErrorCode::UnsupportedCriteria,
                        "unsupported criteria '" + key + "': convert roughness to R_t (roughness_Rt_um) first");
        }
    }
    TechnologicalData t;
    if (doc.contains("roughness_criteria")) {
        t.roughness_criteria = doc.at("roughness_criteria").get<std::string>();
        if (t.roughness_criteria != "Rt") {
            throw Error(ErrorCode::UnsupportedCriteria, "unsupported criteria '" + t.roughness_criteria +
                                                            "': convert roughness to R_t first");
        }
    }
    auto number = [&doc](const char* key) {
        if (!doc.contains(key) || !doc.at(key).is_number()) {
            throw Error(ErrorCode::Schema, std::string("technological data.") + key + ": expected number");
        }
        return doc.at(key).get<double>();
    };
    t.material = doc.contains("material") ? doc.at("material").get<std::string>() : std::string{};
    t.roughness_um = number("roughness_Rt_um");
    t.form_tolerance_mm = number("form_tolerance_mm");
    if (doc.contains("tolerance_factor")) {
        t.tolerance_factor = number("tolerance_factor");
    }
    if (!(t.roughness_um > 0.0)) {
        throw Error(ErrorCode::Schema, "technological data.roughness_Rt_um: must be > 0");
    }
    if (!(t.form_tolerance_mm > 0.0)) {
        throw Error(ErrorCode::Schema, "technological data.form_tolerance_mm: must be > 0");
    }
    if (!(t.tolerance_factor > 0.0)) {
        throw Error(ErrorCode::Schema, "technological data.tolerance_factor: must be > 0");
    }
    return t;
}

TechnologicalData default_technological_data() { return {"X38CrMoV5", 16.0, "Rt", 0.1, 1.0}; }

MachiningFeature make_machining_feature(const GeometricFeature& gf, const TechnologicalData& tech,
                                        std::span<const TopologicalRelation> relations,
                                        std::span<const ContainmentNote> waivers, double tolerance_factor) {
    if (tech.roughness_criteria != "Rt") {
        throw Error(ErrorCode::UnsupportedCriteria,
                    "unsupported criteria '" + tech.roughness_criteria + "': convert roughness to R_t first");
    }
    if (!(tech.roughness_um > 0.0) || !(tech.form_tolerance_mm > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "roughness and form tolerance must be positive");
    }
    if (!(tolerance_factor > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "tolerance factor must be positive");
    }
    MachiningFeature mf;
    mf.geometry = gf;
    mf.tech = tech;
    mf.machining.scallop_height_um = tech.roughness_um;
    mf.machining.machining_tolerance_mm = tolerance_factor * tech.form_tolerance_mm;
    for (const auto& r : relations) {
        if (r.involves(gf.id)) {
            mf.relations.push_back(r);
        }
    }
    for (const auto& w : waivers) {
        if (w.container == gf.id || w.contained == gf.id) {
            mf.waivers.push_back(w);
        }
    }
    return mf;
}

MaterialCompatibility parse_material_compatibility(std::string_view json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::Schema, "material compatibility: JSON parse error at byte " + std::to_string(e.byte));
    }
    if (!doc.is_object()) {
        throw Error(ErrorCode::Schema, "material compatibility: top level must be an object");
    }
    MaterialCompatibility out;
    for (const auto& [part, tools] : doc.items()) {
        if (!tools.is_array()) {
            throw Error(ErrorCode::Schema, "material compatibility." + part + ": expected array");
        }
        for (std::size_t i = 0; i < tools.size(); ++i) {
            if (!tools[i].is_string()) {
                throw Error(ErrorCode::Schema,
                            "material compatibility." + part + "[" + std::to_string(i) + "]: expected string");
            }
            out[part].push_back(tools[i].get<std::string>());
        }
    }
    return out;
}

namespace {

bool material_ok(const MachiningFeature& mf, const CuttingTool& tool, const ToolSelectionOptions& options) {
    const auto it = options.compatibility.find(mf.tech.material);
    if (it == options.compatibility.end()) {
        return true;
    }
    return std::find(it->second.begin(), it->second.end(), tool.material) != it->second.end();
}

double depth_of(const MachiningFeature& mf, double mesh_top) { return std::max(0.0, mesh_top - mf.geometry.z_min); }

bool accessible(const CuttingTool& tool, double depth, double clearance) {
    return tool.tool_length >= depth && tool.overall_length >= depth + clearance;
}

}  // namespace

void check_tool(const MachiningFeature& mf, const CuttingTool& tool, double mesh_top,
                const ToolSelectionOptions& options) {
    const double depth = depth_of(mf, mesh_top);
    if (!material_ok(mf, tool, options)) {
        throw Error(ErrorCode::NoTool, "tool '" + tool.id + "' material '" + tool.material +
                                           "' is not compatible with part material '" + mf.tech.material + "'");
    }
    if (!accessible(tool, depth, options.clearance_mm)) {
        throw Error(ErrorCode::NoTool, "tool '" + tool.id + "' cannot reach feature " + std::to_string(mf.id()) +
                                           ": minimum TL " + format_mm(depth + options.clearance_mm) +
                                           " mm required");
    }
}

CuttingTool select_tool(const MachiningFeature& mf, const std::vector<CuttingTool>& library, double mesh_top,
                        const ToolSelectionOptions& options) {
    if (library.empty()) {
        throw Error(ErrorCode::NoTool, "tool library is empty");
    }
    if (mf.geometry.contact_class == ContactClass::Undercut) {
        throw Error(ErrorCode::NoTool, "feature " + std::to_string(mf.id()) + " is unreachable along the tool axis");
    }
    const TipType wanted = mf.geometry.contact_class == ContactClass::Flat ? TipType::CornerEnd : TipType::BallNose;
    std::vector<const CuttingTool*> compatible;
    for (const auto& t : library) {
        if (t.tip_type == wanted && material_ok(mf, t, options)) {
            compatible.push_back(&t);
        }
    }
    if (compatible.empty()) {
        throw Error(ErrorCode::NoTool, "feature " + std::to_string(mf.id()) + ": no compatible " +
                                           std::string(to_string(wanted)) + " tool for material '" +
                                           mf.tech.material + "'");
    }
    const double depth = depth_of(mf, mesh_top);
    const CuttingTool* best = nullptr;
    for (const CuttingTool* t : compatible) {
        if (!accessible(*t, depth, options.clearance_mm)) {
            continue;
        }
        if (!best || t->diameter > best->diameter || (t->diameter == best->diameter && t->id < best->id)) {
            best = t;
        }
    }
    if (!best) {
        throw Error(ErrorCode::NoTool, "feature " + std::to_string(mf.id()) + ": no accessible tool, minimum TL " +
                                           format_mm(depth + options.clearance_mm) + " mm required");
    }
    return *best;
}

std::string_view to_string(FeedKind k) {
    switch (k) {
        case FeedKind::ParallelPlanes: return "parallel_planes";
        case FeedKind::ZLevel: return "z_level";
        case FeedKind::ParallelCurve: return "parallel_curve";
    }
    return "unknown";
}

std::string_view to_string(SweepingMode m) { return m == SweepingMode::ZigZag ? "zigzag" : "one_way"; }

std::string_view to_string(CuttingMode m) { return m == CuttingMode::Upward ? "upward" : "downward"; }

FeedKind parse_feed_kind(std::string_view s) {
    for (auto k : {FeedKind::ParallelPlanes, FeedKind::ZLevel, FeedKind::ParallelCurve}) {
        if (to_string(k) == s) {
            return k;
        }
    }
    throw Error(ErrorCode::InvalidArgument, "unknown feed kind '" + std::string(s) + "'");
}

MachiningStrategy select_strategy(const MachiningFeature& mf, const CuttingTool& tool,
                                  const StrategyOptions& options) {
    MachiningStrategy s;
    const auto& c = mf.geometry.continuity.cls;
    switch (c.kind) {
        case ContinuityKind::Indifferent:
            s.feed_kind = FeedKind::ParallelPlanes;
            s.feed_direction_deg = mf.geometry.principal_direction;
            break;
        case ContinuityKind::Oriented:
            s.feed_kind = FeedKind::ParallelPlanes;
            s.feed_direction_deg = c.direction_deg;
            break;
        case ContinuityKind::ZLevel:
        case ContinuityKind::Undefined:
            s.feed_kind = FeedKind::ZLevel;
            break;
    }
    if (options.force_feed) {
        s.feed_kind = *options.force_feed;
        if (s.feed_kind != FeedKind::ParallelPlanes) {
            s.feed_direction_deg = 0.0;
        }
    }
    s.sweeping_mode = options.sweeping_mode;
    s.cutting_mode = options.cutting_mode;
    s.pitch_mm = compute_pitch(tool, mf.machining.scallop_height_um);
    s.machining_tolerance_mm = mf.machining.machining_tolerance_mm;
    return s;
}

double compute_pitch(const CuttingTool& tool, double scallop_height_um) {
    if (tool.tip_type == TipType::FlatEnd) {
        return 0.6 * tool.diameter;
    }
    const double r = tool.tip_radius();
    const double h = scallop_height_um / 1000.0;
    if (!(h > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "scallop height must be positive");
    }
    if (h >= r) {
        throw Error(ErrorCode::InvalidArgument, "scallop height " + format_mm(h) + " mm must be below tip radius " +
                                                    format_mm(r) + " mm");
    }
    return 2.0 * std::sqrt(2.0 * r * h - h * h);
}

JunctionResult junction_check(const MachiningFeature& a, const MachiningFeature& b, const CuttingTool& tool_a,
                              const CuttingTool& tool_b, double junction_factor) {
    const TopologicalRelation* rel = find_relation(a.relations, a.id(), b.id());
    if (!rel || !rel->is_contact()) {
        throw Error(ErrorCode::InvalidArgument, "features " + std::to_string(a.id()) + " and " +
                                                    std::to_string(b.id()) + " are not in contact");
    }
    JunctionResult out;
    if (tool_a.id == tool_b.id) {
        return out;
    }
    out.mismatch_mm = std::abs(tool_a.tip_radius() - tool_b.tip_radius()) * junction_factor;
    const double tol = std::min(a.tech.form_tolerance_mm, b.tech.form_tolerance_mm);
    if (out.mismatch_mm > tol) {
        out.ok = false;
        out.reason = "unify tool: junction mismatch " + format_mm(out.mismatch_mm) + " mm exceeds tolerance " +
                     format_mm(tol) + " mm";
    }
    return out;
}

}  // namespace dieplan
