#include "dieplan/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <limits>

#include "dieplan/error.hpp"

namespace dieplan {

const Binding* AssociationResult::binding(FeatureId f) const {
    for (const auto& b : bindings) {
        if (b.feature == f) {
            return &b;
        }
    }
    return nullptr;
}

DirectionSpec parse_direction_spec(std::string_view text) {
    double parts[3] = {};
    std::size_t n = 0;
    std::size_t pos = 0;
    for (; n < 3 && pos <= text.size(); ++n) {
        const std::size_t colon = std::min(text.find(':', pos), text.size());
        const std::string_view token = text.substr(pos, colon - pos);
        auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), parts[n]);
        if (token.empty() || ec != std::errc{} || ptr != token.data() + token.size()) {
            break;
        }
        pos = colon + 1;
    }
    if (n != 3 || pos != text.size() + 1) {
        throw Error(ErrorCode::InvalidArgument, "directions must be start:stop:step, got '" + std::string(text) + "'");
    }
    DirectionSpec spec{parts[0], parts[1], parts[2]};
    (void)spec.expand(ToolAxis{});
    return spec;
}

double mesh_top(const TriMesh& mesh, const ToolAxis& axis) {
    double top = -std::numeric_limits<double>::infinity();
    for (const Vec3& p : mesh.vertices()) {
        top = std::max(top, axis.height(p));
    }
    return top;
}

MapDocument run_contact_map(const TriMesh& mesh, const PipelineConfig& cfg) { return contact_map(mesh, cfg.contact); }

ContinuityProfile run_continuity(const TriMesh& mesh, const FacetIndicators& indicators, const PipelineConfig& cfg) {
    const auto dirs = cfg.directions.expand(cfg.contact.tool_axis);
    return continuity_residuals(mesh, indicators, dirs, cfg.contact.tool_axis);
}

SegmentationResult run_segmentation(const TriMesh& mesh, const FacetIndicators& indicators,
                                    const ContinuityProfile& profile, const PipelineConfig& cfg) {
    const ToolAxis& axis = cfg.contact.tool_axis;
    SegmentationResult out;
    out.elementary = grow_elementary_features(mesh, indicators, profile, axis, cfg.segmentation);
    out.features = group_by_continuity(mesh, out.elementary, indicators, profile, axis, cfg.segmentation);
    out.features = apply_overrides(mesh, std::move(out.features), cfg.segmentation_overrides, indicators, profile,
                                   axis, cfg.segmentation);
    out.relations = feature_relations(mesh, out.features, cfg.proximity_distance(), cfg.epsilon_conv);
    out.waivers = protrusion_containment(out.features, out.relations, cfg.containment_epsilon);
    return out;
}

namespace {

const CuttingTool& find_tool(const std::vector<CuttingTool>& tools, const std::string& id) {
    for (const auto& t : tools) {
        if (t.id == id) {
            return t;
        }
    }
    throw Error(ErrorCode::InvalidArgument, "unknown tool id '" + id + "'");
}

/// Largest corner end mill reaching every feature.
const CuttingTool& corner_only_tool(const std::vector<CuttingTool>& tools, const std::vector<MachiningFeature>& mfs,
                                    double top, const ToolSelectionOptions& opts) {
    const CuttingTool* best = nullptr;
    for (const auto& t : tools) {
        if (t.tip_type != TipType::CornerEnd) {
            continue;
        }
        bool ok = true;
        for (const auto& mf : mfs) {
            try {
                check_tool(mf, t, top, opts);
            } catch (const Error&) {
                ok = false;
                break;
            }
        }
        if (ok && (!best || t.diameter > best->diameter || (t.diameter == best->diameter && t.id < best->id))) {
            best = &t;
        }
    }
    if (!best) {
        throw Error(ErrorCode::NoTool, "no corner end mill in the library reaches every feature");
    }
    return *best;
}

}  // namespace

AssociationResult run_association(const TriMesh& mesh, const SegmentationResult& seg, const PipelineConfig& cfg) {
    AssociationResult out;
    const double top = mesh_top(mesh, cfg.contact.tool_axis);
    for (const auto& g : seg.features) {
        out.features.push_back(
            make_machining_feature(g, cfg.tech, seg.relations, seg.waivers, cfg.tech.tolerance_factor));
    }
    const auto& ov = cfg.association_overrides;
    const CuttingTool* single = nullptr;
    std::string single_error;
    if (ov.single_tool) {
        try {
            single = *ov.single_tool == "corner-only"
                         ? &corner_only_tool(cfg.tools, out.features, top, cfg.tool_selection)
                         : &find_tool(cfg.tools, *ov.single_tool);
        } catch (const Error& e) {
            single_error = e.what();
        }
    }

    for (const auto& mf : out.features) {
        try {
            if (!single_error.empty()) {
                throw Error(ErrorCode::NoTool, single_error);
            }
            Binding b;
            b.feature = mf.id();
            StrategyOptions so = cfg.strategy;
            if (single) {
                check_tool(mf, *single, top, cfg.tool_selection);
                b.tool = *single;
                b.tool_reason = "single-tool override (" + *ov.single_tool + ")";
                so.force_feed = FeedKind::ZLevel;
            } else if (auto it = ov.tool_by_feature.find(mf.id()); it != ov.tool_by_feature.end()) {
                b.tool = find_tool(cfg.tools, it->second);
                check_tool(mf, b.tool, top, cfg.tool_selection);
                b.tool_reason = "manual override";
            } else {
                b.tool = select_tool(mf, cfg.tools, top, cfg.tool_selection);
                b.tool_reason = mf.geometry.contact_class == ContactClass::Flat
                                    ? "flat contact: largest accessible corner end mill"
                                    : "draft/transition contact: largest accessible ball nose";
            }
            if (auto it = ov.feed_by_feature.find(mf.id()); it != ov.feed_by_feature.end() && !single) {
                so.force_feed = it->second;
            }
            b.strategy = select_strategy(mf, b.tool, so);
            out.bindings.push_back(std::move(b));
        } catch (const Error& e) {
            out.errors.push_back({mf.id(), e.what()});
        }
    }

    for (const auto& r : seg.relations) {
        if (!r.is_contact()) {
            continue;
        }
        const Binding* ba = out.binding(r.feature_a);
        const Binding* bb = out.binding(r.feature_b);
        if (!ba || !bb) {
            continue;
        }
        const auto& ma = out.features[r.feature_a];
        const auto& mb = out.features[r.feature_b];
        out.junctions.push_back({r.feature_a, r.feature_b, junction_check(ma, mb, ba->tool, bb->tool, cfg.junction_factor)});
    }
    return out;
}

PlanResult run_plan(const TriMesh& mesh, const FacetIndicators& indicators, const AssociationResult& assoc,
                    const SegmentationResult& seg, const PipelineConfig& cfg) {
    PlanResult out;
    const double top = mesh_top(mesh, cfg.contact.tool_axis);
    for (const auto& b : assoc.bindings) {
        auto s = build_sequence(mesh, indicators, cfg.contact.tool_axis, assoc.features[b.feature], b.tool, b.strategy,
                                top, cfg.sequence);
        s.id = static_cast<std::uint32_t>(out.sequences.size());
        out.sequences.push_back(std::move(s));
    }
    out.process = order_process(out.sequences, seg.waivers, cfg.order_by);
    if (assoc.features.empty()) {
        out.warnings.push_back("no machinable features: the process is empty");
    }
    for (const auto& e : assoc.errors) {
        out.warnings.push_back("feature " + std::to_string(e.feature) + " not sequenced: " + e.message);
    }
    for (const auto& j : assoc.junctions) {
        if (!j.result.ok) {
            out.warnings.push_back("junction " + std::to_string(j.feature_a) + "/" + std::to_string(j.feature_b) + ": " +
                                   j.result.reason);
        }
    }
    return out;
}

PipelineResult run_pipeline(const TriMesh& mesh, const PipelineConfig& cfg, Stage until) {
    PipelineResult r;
    r.map = run_contact_map(mesh, cfg);
    r.indicators = r.map.indicators;
    if (until == Stage::Map) {
        return r;
    }
    r.profile = run_continuity(mesh, r.indicators, cfg);
    std::vector<FacetId> all(mesh.facet_count());
    for (FacetId f = 0; f < all.size(); ++f) {
        all[f] = f;
    }
    r.mesh_continuity = classify_continuity(all, r.profile, cfg.segmentation.continuity);
    if (until == Stage::Continuity) {
        return r;
    }
    r.segmentation = run_segmentation(mesh, r.indicators, r.profile, cfg);
    if (until == Stage::Segmentation) {
        return r;
    }
    r.association = run_association(mesh, r.segmentation, cfg);
    if (until == Stage::Association) {
        return r;
    }
    r.plan = run_plan(mesh, r.indicators, r.association, r.segmentation, cfg);
    return r;
}

}  // namespace dieplan
