#include "dieplan/serialize.hpp"

#include <algorithm>
#include <cstdio>
#include <set>

#include "dieplan/error.hpp"

namespace dieplan {

using json = nlohmann::json;

std::string dump(const OrderedJson& doc) { return doc.dump(2) + "\n"; }

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::uint64_t fnv1a(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

namespace {

OrderedJson vec_json(const Vec3& v) { return OrderedJson::array({v.x, v.y, v.z}); }

Vec3 vec_from(const json& j, const char* where) {
    if (!j.is_array() || j.size() != 3 || !j[0].is_number() || !j[1].is_number() || !j[2].is_number()) {
        throw Error(ErrorCode::Schema, std::string(where) + ": expected [x, y, z]");
    }
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

OrderedJson tech_json(const TechnologicalData& t) {
    return {{"material", t.material},
            {"roughness_Rt_um", t.roughness_um},
            {"roughness_criteria", t.roughness_criteria},
            {"form_tolerance_mm", t.form_tolerance_mm},
            {"tolerance_factor", t.tolerance_factor}};
}

SweepingMode parse_sweeping(const std::string& s) {
    if (s == "zigzag") {
        return SweepingMode::ZigZag;
    }
    if (s == "one_way") {
        return SweepingMode::OneWay;
    }
    throw Error(ErrorCode::Schema, "association.sweeping_mode: unknown value '" + s + "'");
}

CuttingMode parse_cutting(const std::string& s) {
    if (s == "upward") {
        return CuttingMode::Upward;
    }
    if (s == "downward") {
        return CuttingMode::Downward;
    }
    throw Error(ErrorCode::Schema, "association.cutting_mode: unknown value '" + s + "'");
}

FeatureId feature_key(const std::string& key, const char* where) {
    try {
        std::size_t used = 0;
        const unsigned long v = std::stoul(key, &used);
        if (used == key.size()) {
            return static_cast<FeatureId>(v);
        }
    } catch (const std::exception&) {
    }
    throw Error(ErrorCode::Schema, std::string(where) + ": feature key '" + key + "' is not an integer");
}

}  // namespace

OrderedJson config_to_json(const PipelineConfig& cfg) {
    OrderedJson merge = OrderedJson::array();
    for (const auto& [a, b] : cfg.segmentation_overrides.merge) {
        merge.push_back({a, b});
    }
    OrderedJson compat = OrderedJson::object();
    for (const auto& [part, tools] : cfg.tool_selection.compatibility) {
        compat[part] = tools;
    }
    OrderedJson tool_by = OrderedJson::object();
    for (const auto& [f, id] : cfg.association_overrides.tool_by_feature) {
        tool_by[std::to_string(f)] = id;
    }
    OrderedJson feed_by = OrderedJson::object();
    for (const auto& [f, k] : cfg.association_overrides.feed_by_feature) {
        feed_by[std::to_string(f)] = std::string(to_string(k));
    }
    OrderedJson tools = OrderedJson::array();
    for (const auto& t : cfg.tools) {
        tools.push_back(tool_json(t));
    }
    const auto& cp = cfg.segmentation.continuity;
    return {
        {"cleaning", {{"merge_tolerance_mm", cfg.cleaning.merge_tolerance}, {"min_area_mm2", cfg.cleaning.min_area}}},
        {"contact",
         {{"tau_draft", cfg.contact.tau_draft},
          {"tau_flat", cfg.contact.tau_flat},
          {"tool_axis", vec_json(cfg.contact.tool_axis.requested())}}},
        {"directions",
         {{"start_deg", cfg.directions.start}, {"stop_deg", cfg.directions.stop}, {"step_deg", cfg.directions.step}}},
        {"continuity",
         {{"epsilon_pp", cp.epsilon_pp},
          {"coverage_min", cp.coverage_min},
          {"epsilon_z", cp.epsilon_z},
          {"tau_zmin", cp.tau_zmin},
          {"max_band_steps", cp.max_band_steps}}},
        {"segmentation",
         {{"min_region_area_fraction", cfg.segmentation.min_region_area_fraction},
          {"ring_bands", cfg.segmentation.ring_bands},
          {"d_prox_mm", cfg.d_prox ? OrderedJson(*cfg.d_prox) : OrderedJson(nullptr)},
          {"epsilon_conv_mm", cfg.epsilon_conv},
          {"containment_epsilon_mm", cfg.containment_epsilon},
          {"merge", merge},
          {"split", cfg.segmentation_overrides.split}}},
        {"technological_data", tech_json(cfg.tech)},
        {"tools", tools},
        {"association",
         {{"clearance_mm", cfg.tool_selection.clearance_mm},
          {"material_compatibility", compat},
          {"sweeping_mode", std::string(to_string(cfg.strategy.sweeping_mode))},
          {"cutting_mode", std::string(to_string(cfg.strategy.cutting_mode))},
          {"junction_factor", cfg.junction_factor},
          {"single_tool", cfg.association_overrides.single_tool ? OrderedJson(*cfg.association_overrides.single_tool)
                                                                : OrderedJson(nullptr)},
          {"tool_by_feature", tool_by},
          {"feed_by_feature", feed_by}}},
        {"sequence",
         {{"safety_margin_mm", cfg.sequence.safety_margin_mm},
          {"clearance_mm", cfg.sequence.clearance_mm},
          {"shallow_kappa", cfg.sequence.shallow_kappa}}},
        {"order_by", std::string(to_string(cfg.order_by))},
    };
}

PipelineConfig config_from_json(const json& doc, PipelineConfig base) {
    if (!doc.is_object()) {
        throw Error(ErrorCode::Schema, "config: top level must be an object");
    }
    // Overlay the document on the full form of `base`, then read every field back.
    json full = json::parse(config_to_json(base).dump());
    static const std::set<std::string> sections = {"cleaning",   "contact",  "directions",         "continuity",
                                                   "segmentation", "tools",  "technological_data", "association",
                                                   "sequence",   "order_by"};
    for (const auto& [key, value] : doc.items()) {
        if (!sections.contains(key)) {
            throw Error(ErrorCode::Schema, "config: unknown section '" + key + "'");
        }
        if (value.is_object() && full[key].is_object()) {
            for (const auto& [k, v] : value.items()) {
                if (!full[key].contains(k)) {
                    throw Error(ErrorCode::Schema, "config." + key + ": unknown field '" + k + "'");
                }
                full[key][k] = v;
            }
        } else {
            full[key] = value;
        }
    }

    PipelineConfig cfg;
    std::string where;
    try {
        where = "cleaning";
        const json& cl = full.at("cleaning");
        cfg.cleaning.merge_tolerance = cl.at("merge_tolerance_mm").get<double>();
        cfg.cleaning.min_area = cl.at("min_area_mm2").get<double>();

        where = "contact";
        const json& ct = full.at("contact");
        cfg.contact.tau_draft = ct.at("tau_draft").get<double>();
        cfg.contact.tau_flat = ct.at("tau_flat").get<double>();
        cfg.contact.tool_axis = ToolAxis(vec_from(ct.at("tool_axis"), "config.contact.tool_axis"));
        validate(cfg.contact);

        where = "directions";
        const json& dr = full.at("directions");
        cfg.directions = {dr.at("start_deg").get<double>(), dr.at("stop_deg").get<double>(),
                          dr.at("step_deg").get<double>()};
        (void)cfg.directions.expand(cfg.contact.tool_axis);

        where = "continuity";
        const json& co = full.at("continuity");
        auto& cp = cfg.segmentation.continuity;
        cp.epsilon_pp = co.at("epsilon_pp").get<double>();
        cp.coverage_min = co.at("coverage_min").get<double>();
        cp.epsilon_z = co.at("epsilon_z").get<double>();
        cp.tau_zmin = co.at("tau_zmin").get<double>();
        cp.max_band_steps = co.at("max_band_steps").get<std::size_t>();

        where = "segmentation";
        const json& sg = full.at("segmentation");
        cfg.segmentation.min_region_area_fraction = sg.at("min_region_area_fraction").get<double>();
        cfg.segmentation.ring_bands = sg.at("ring_bands").get<std::size_t>();
        if (!sg.at("d_prox_mm").is_null()) {
            cfg.d_prox = sg.at("d_prox_mm").get<double>();
            if (!(*cfg.d_prox >= 0.0)) {
                throw Error(ErrorCode::Schema, "config.segmentation.d_prox_mm: must be >= 0");
            }
        }
        cfg.epsilon_conv = sg.at("epsilon_conv_mm").get<double>();
        cfg.containment_epsilon = sg.at("containment_epsilon_mm").get<double>();
        for (const auto& pair : sg.at("merge")) {
            if (!pair.is_array() || pair.size() != 2) {
                throw Error(ErrorCode::Schema, "config.segmentation.merge: expected [a, b] pairs");
            }
            cfg.segmentation_overrides.merge.emplace_back(pair[0].get<FeatureId>(), pair[1].get<FeatureId>());
        }
        cfg.segmentation_overrides.split = sg.at("split").get<std::vector<FeatureId>>();
        if (!(cfg.segmentation.min_region_area_fraction >= 0.0 && cfg.segmentation.min_region_area_fraction < 1.0)) {
            throw Error(ErrorCode::Schema, "config.segmentation.min_region_area_fraction: must lie in [0,1)");
        }

        where = "technological_data";
        cfg.tech = parse_technological_data(full.at("technological_data").dump());

        where = "tools";
        cfg.tools = parse_tool_library(full.at("tools").dump());

        where = "association";
        const json& as = full.at("association");
        cfg.tool_selection.clearance_mm = as.at("clearance_mm").get<double>();
        cfg.tool_selection.compatibility = parse_material_compatibility(as.at("material_compatibility").dump());
        cfg.strategy.sweeping_mode = parse_sweeping(as.at("sweeping_mode").get<std::string>());
        cfg.strategy.cutting_mode = parse_cutting(as.at("cutting_mode").get<std::string>());
        cfg.junction_factor = as.at("junction_factor").get<double>();
        if (!as.at("single_tool").is_null()) {
            cfg.association_overrides.single_tool = as.at("single_tool").get<std::string>();
        }
        for (const auto& [k, v] : as.at("tool_by_feature").items()) {
            cfg.association_overrides.tool_by_feature[feature_key(k, "config.association.tool_by_feature")] =
                v.get<std::string>();
        }
        for (const auto& [k, v] : as.at("feed_by_feature").items()) {
            cfg.association_overrides.feed_by_feature[feature_key(k, "config.association.feed_by_feature")] =
                parse_feed_kind(v.get<std::string>());
        }

        where = "sequence";
        const json& sq = full.at("sequence");
        cfg.sequence.safety_margin_mm = sq.at("safety_margin_mm").get<double>();
        cfg.sequence.clearance_mm = sq.at("clearance_mm").get<double>();
        cfg.sequence.shallow_kappa = sq.at("shallow_kappa").get<double>();

        where = "order_by";
        cfg.order_by = parse_order_by(full.at("order_by").get<std::string>());
    } catch (const json::exception& e) {
        throw Error(ErrorCode::Schema, "config." + where + ": " + e.what());
    } catch (const Error& e) {
        if (e.code() == ErrorCode::Schema || e.code() == ErrorCode::UnsupportedCriteria) {
            throw;
        }
        throw Error(ErrorCode::Schema, "config." + where + ": " + e.what());
    }
    return cfg;
}

std::string config_fingerprint(const PipelineConfig& cfg) { return hex64(fnv1a(config_to_json(cfg).dump())); }

OrderedJson diagnostics_json(const MeshDiagnostics& d) {
    OrderedJson nm = OrderedJson::array();
    for (const auto& e : d.non_manifold_edges) {
        nm.push_back({{"vertices", {e.v0, e.v1}}, {"facets", e.facets}});
    }
    return {{"facet_count", d.facet_count},
            {"degenerate_count", d.degenerate_count},
            {"non_manifold_edge_count", d.non_manifold_edge_count},
            {"boundary_edge_count", d.boundary_edge_count},
            {"undercut_facet_count", d.undercut_facet_count},
            {"winding_flipped_count", d.winding_flipped_count},
            {"merged_vertex_count", d.merged_vertex_count},
            {"bounding_box", {{"min", vec_json(d.bounding_box.min)}, {"max", vec_json(d.bounding_box.max)}}},
            {"non_manifold_edges", nm}};
}

OrderedJson tool_json(const CuttingTool& t) {
    return {{"id", t.id},
            {"tip_type", std::string(to_string(t.tip_type))},
            {"diameter_mm", t.diameter},
            {"corner_radius_mm", t.corner_radius},
            {"overall_length_mm", t.overall_length},
            {"tool_length_mm", t.tool_length},
            {"material", t.material}};
}

CuttingTool tool_from_json(const json& j) { return parse_tool_library(json::array({j}).dump()).front(); }

OrderedJson strategy_json(const MachiningStrategy& s) {
    OrderedJson out = {{"feed_kind", std::string(to_string(s.feed_kind))}};
    if (s.feed_kind == FeedKind::ParallelPlanes) {
        out["feed_direction_deg"] = s.feed_direction_deg;
    }
    out["sweeping_mode"] = std::string(to_string(s.sweeping_mode));
    out["cutting_mode"] = std::string(to_string(s.cutting_mode));
    out["pitch_mm"] = s.pitch_mm;
    out["machining_tolerance_mm"] = s.machining_tolerance_mm;
    return out;
}

OrderedJson continuity_json(const RegionContinuity& c, const ContinuityProfile& profile) {
    OrderedJson out = {{"kind", std::string(to_string(c.cls.kind))}};
    if (c.cls.kind == ContinuityKind::Oriented) {
        out["direction_deg"] = c.cls.direction_deg;
        out["band_deg"] = c.cls.band_deg;
    }
    OrderedJson per = OrderedJson::array();
    for (std::size_t d = 0; d < profile.directions.size() && d < c.coverage.size(); ++d) {
        per.push_back({{"angle_deg", profile.directions[d].angle_deg},
                       {"coverage", c.coverage[d]},
                       {"mean_residual", c.mean_residual[d]}});
    }
    out["directions"] = per;
    out["kappa_mean"] = c.kappa_mean;
    out["kappa_stddev"] = c.kappa_stddev;
    return out;
}

OrderedJson feature_json(const GeometricFeature& g, const ContinuityProfile& profile, bool with_facets) {
    OrderedJson out = {{"id", g.id},
                       {"class", std::string(to_string(g.contact_class))},
                       {"continuity", continuity_json(g.continuity, profile)},
                       {"facet_count", g.facets.size()},
                       {"area", g.area},
                       {"z_range", {g.z_min, g.z_max}},
                       {"depth_from_top", g.depth_from_top},
                       {"mean_height", g.mean_height},
                       {"centroid", vec_json(g.centroid)},
                       {"principal_direction", g.principal_direction}};
    if (with_facets) {
        out["facet_ids"] = g.facets;
    }
    return out;
}

OrderedJson relation_json(const TopologicalRelation& r) {
    OrderedJson out = {{"feature_a", r.feature_a}, {"feature_b", r.feature_b}, {"kind", std::string(to_string(r.kind))}};
    if (r.is_contact()) {
        out["shared_edge_length_mm"] = r.shared_edge_length;
        out["concave_length_mm"] = r.concave_length;
        out["convex_length_mm"] = r.convex_length;
        out["tangent_length_mm"] = r.tangent_length;
    } else {
        out["min_distance_mm"] = r.min_distance;
    }
    return out;
}

OrderedJson waiver_json(const ContainmentNote& w) {
    return {{"container", w.container}, {"contained", w.contained}, {"note", w.note}};
}

OrderedJson map_document_json(const MapDocument& doc) {
    OrderedJson per = OrderedJson::array();
    for (std::size_t f = 0; f < doc.indicators.size(); ++f) {
        per.push_back({{"omega", doc.indicators.omega[f]},
                       {"kappa", doc.indicators.kappa[f]},
                       {"class", std::string(to_string(doc.indicators.contact_class[f]))}});
    }
    OrderedJson hist = OrderedJson::object();
    for (auto c : {ContactClass::Flat, ContactClass::Draft, ContactClass::Transition, ContactClass::Undercut}) {
        hist[std::string(to_string(c))] = {{"count", doc.histogram.count(c)}, {"area_mm2", doc.histogram.area(c)}};
    }
    return {{"thresholds", {{"tau_draft", doc.config.tau_draft}, {"tau_flat", doc.config.tau_flat}}},
            {"tool_axis", vec_json(doc.config.tool_axis.direction())},
            {"histogram", hist},
            {"undercuts", doc.undercuts},
            {"per_facet", per}};
}

OrderedJson continuity_document_json(const PipelineResult& r, const PipelineConfig& cfg, bool per_facet) {
    OrderedJson dirs = OrderedJson::array();
    for (const auto& d : r.profile.directions) {
        dirs.push_back({{"angle_deg", d.angle_deg}, {"vector", vec_json(d.vector)}});
    }
    const auto& cp = cfg.segmentation.continuity;
    OrderedJson out = {{"directions", dirs},
                       {"circular", r.profile.circular()},
                       {"params",
                        {{"epsilon_pp", cp.epsilon_pp},
                         {"coverage_min", cp.coverage_min},
                         {"epsilon_z", cp.epsilon_z},
                         {"tau_zmin", cp.tau_zmin},
                         {"max_band_steps", cp.max_band_steps}}},
                       {"whole_mesh", continuity_json(r.mesh_continuity, r.profile)}};
    if (per_facet) {
        const std::size_t nd = r.profile.directions.size();
        OrderedJson rows = OrderedJson::array();
        for (std::size_t f = 0; f < r.profile.facet_count(); ++f) {
            OrderedJson row = OrderedJson::array();
            for (std::size_t d = 0; d < nd; ++d) {
                row.push_back(r.profile.rho(f, d));
            }
            rows.push_back(std::move(row));
        }
        out["per_facet_residuals"] = std::move(rows);
    }
    return out;
}

OrderedJson segmentation_document_json(const SegmentationResult& seg, const ContinuityProfile& profile) {
    OrderedJson features = OrderedJson::array();
    for (const auto& g : seg.features) {
        features.push_back(feature_json(g, profile));
    }
    OrderedJson relations = OrderedJson::array();
    for (const auto& r : seg.relations) {
        relations.push_back(relation_json(r));
    }
    OrderedJson waivers = OrderedJson::array();
    for (const auto& w : seg.waivers) {
        waivers.push_back(waiver_json(w));
    }
    return {{"elementary_feature_count", seg.elementary.size()},
            {"features", features},
            {"relations", relations},
            {"waivers", waivers}};
}

namespace {

OrderedJson machining_features_json(const AssociationResult& assoc) {
    OrderedJson out = OrderedJson::array();
    for (const auto& mf : assoc.features) {
        OrderedJson rel = OrderedJson::array();
        for (const auto& r : mf.relations) {
            rel.push_back({{"other", r.other(mf.id())}, {"kind", std::string(to_string(r.kind))}});
        }
        OrderedJson w = OrderedJson::array();
        for (const auto& n : mf.waivers) {
            w.push_back(waiver_json(n));
        }
        out.push_back({{"feature", mf.id()},
                       {"scallop_height_um", mf.machining.scallop_height_um},
                       {"machining_tolerance_mm", mf.machining.machining_tolerance_mm},
                       {"relations", rel},
                       {"waivers", w}});
    }
    return out;
}

OrderedJson bindings_json(const AssociationResult& assoc) {
    OrderedJson out = OrderedJson::array();
    for (const auto& b : assoc.bindings) {
        out.push_back({{"feature", b.feature},
                       {"tool", b.tool.id},
                       {"tool_reason", b.tool_reason},
                       {"strategy", strategy_json(b.strategy)}});
    }
    return out;
}

OrderedJson association_summary(const AssociationResult& assoc) {
    std::set<std::string> tools;
    std::set<std::string> kinds;
    for (const auto& b : assoc.bindings) {
        tools.insert(b.tool.id);
        kinds.insert(std::string(to_string(b.strategy.feed_kind)));
    }
    return {{"tools_used", tools}, {"strategies_used", kinds}};
}

OrderedJson errors_json(const AssociationResult& assoc) {
    OrderedJson out = OrderedJson::array();
    for (const auto& e : assoc.errors) {
        out.push_back({{"feature", e.feature}, {"message", e.message}});
    }
    return out;
}

OrderedJson junctions_json(const AssociationResult& assoc) {
    OrderedJson out = OrderedJson::array();
    for (const auto& j : assoc.junctions) {
        OrderedJson o = {{"feature_a", j.feature_a},
                         {"feature_b", j.feature_b},
                         {"ok", j.result.ok},
                         {"mismatch_mm", j.result.mismatch_mm}};
        if (!j.result.reason.empty()) {
            o["reason"] = j.result.reason;
        }
        out.push_back(std::move(o));
    }
    return out;
}

OrderedJson trajectory_json(const TrajectoryDescriptor& t) {
    return {{"approach_path", t.approach_path}, {"machining_path", t.machining_path}, {"clearance_path", t.clearance_path}};
}

OrderedJson sequence_json(const MachiningSequence& s) {
    return {{"id", s.id},
            {"feature", s.feature},
            {"tool", s.tool_id},
            {"strategy", strategy_json(s.strategy)},
            {"structure",
             {{"fast_initial_approach", s.structure.fast_initial_approach},
              {"initial_trajectory", trajectory_json(s.structure.initial_trajectory)},
              {"intermediate_trajectory_count", s.structure.intermediate_trajectory_count},
              {"intermediate_trajectory", trajectory_json(s.structure.intermediate_trajectory)},
              {"final_trajectory", trajectory_json(s.structure.final_trajectory)},
              {"fast_final_clearance", s.structure.fast_final_clearance}}},
            {"transitions", {{"style", s.transitions.style}, {"step_mm", s.transitions.step_mm}}},
            {"parking_point", vec_json(s.parking_point)},
            {"estimates",
             {{"pass_count", s.estimates.pass_count},
              {"swept_extent_mm", s.estimates.swept_extent_mm},
              {"mean_pass_length_mm", s.estimates.mean_pass_length_mm},
              {"machining_length_mm", s.estimates.machining_length_mm}}},
            {"interference_notes", s.interference_notes}};
}

}  // namespace

OrderedJson association_document_json(const AssociationResult& assoc, const PipelineConfig& cfg) {
    OrderedJson tools = OrderedJson::array();
    for (const auto& t : cfg.tools) {
        tools.push_back(tool_json(t));
    }
    return {{"technological_data", tech_json(cfg.tech)},
            {"tools", tools},
            {"machining_features", machining_features_json(assoc)},
            {"bindings", bindings_json(assoc)},
            {"errors", errors_json(assoc)},
            {"junctions", junctions_json(assoc)},
            {"summary", association_summary(assoc)}};
}

OrderedJson plan_document_json(const TriMesh& mesh, const PipelineResult& r, const PipelineConfig& cfg) {
    const BoundingBox box = mesh.bounding_box();
    OrderedJson seqs = OrderedJson::array();
    for (const auto& s : r.plan.sequences) {
        seqs.push_back(sequence_json(s));
    }
    OrderedJson doc = {
        {"plan_schema", 1},
        {"mesh",
         {{"fingerprint", hex64(mesh_fingerprint(mesh))},
          {"facet_count", mesh.facet_count()},
          {"vertex_count", mesh.vertex_count()},
          {"bounding_box", {{"min", vec_json(box.min)}, {"max", vec_json(box.max)}}},
          {"top_height_mm", mesh.facet_count() ? mesh_top(mesh, cfg.contact.tool_axis) : 0.0}}},
        {"config", config_to_json(cfg)},
        {"config_fingerprint", config_fingerprint(cfg)},
    };
    const auto seg = segmentation_document_json(r.segmentation, r.profile);
    doc["features"] = seg["features"];
    doc["relations"] = seg["relations"];
    doc["waivers"] = seg["waivers"];
    const auto assoc = association_document_json(r.association, cfg);
    doc["technological_data"] = assoc["technological_data"];
    doc["tools"] = assoc["tools"];
    doc["machining_features"] = assoc["machining_features"];
    doc["bindings"] = assoc["bindings"];
    doc["association_errors"] = assoc["errors"];
    doc["junctions"] = assoc["junctions"];
    doc["sequences"] = seqs;
    doc["process"] = {{"order", r.plan.process.order},
                      {"tool_change_count", r.plan.process.tool_change_count},
                      {"total_machining_length_mm", r.plan.process.total_machining_length_mm},
                      {"rationale", r.plan.process.rationale}};
    doc["summary"] = {{"feature_count", r.segmentation.features.size()},
                      {"sequence_count", r.plan.sequences.size()},
                      {"tools_used", assoc["summary"]["tools_used"]},
                      {"strategies_used", assoc["summary"]["strategies_used"]}};
    doc["warnings"] = r.plan.warnings;
    return doc;
}

}  // namespace dieplan
