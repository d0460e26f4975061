#include "dieplan/planner.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "dieplan/error.hpp"

namespace dieplan {

namespace {

std::string fmt(double v) {
    std::ostringstream ss;
    ss.precision(6);
    ss << v;
    return ss.str();
}

}  // namespace

MachiningSequence build_sequence(const TriMesh& mesh, const FacetIndicators& indicators, const ToolAxis& axis,
                                 const MachiningFeature& mf, const CuttingTool& tool,
                                 const MachiningStrategy& strategy, double mesh_top,
                                 const SequenceOptions& options) {
    const auto& g = mf.geometry;
    if (g.facets.empty() || !(g.area > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "feature " + std::to_string(g.id) + " has zero extent");
    }
    if (!(strategy.pitch_mm > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "strategy pitch must be positive");
    }

    double extent = 0.0;
    if (strategy.feed_kind == FeedKind::ParallelPlanes) {
        extent = projected_extent(mesh, g.facets, axis.in_plane(strategy.feed_direction_deg + 90.0));
    } else {
        std::vector<FacetId> shallow;
        for (FacetId f : g.facets) {
            if (indicators.kappa[f] < options.shallow_kappa) {
                shallow.push_back(f);
            }
        }
        extent = (g.z_max - g.z_min) + projected_extent(mesh, shallow, axis.in_plane(g.principal_direction + 90.0));
    }
    if (!(extent > 1e-12)) {
        throw Error(ErrorCode::InvalidArgument, "feature " + std::to_string(g.id) + " has zero extent");
    }

    MachiningSequence s;
    s.feature = g.id;
    s.tool_id = tool.id;
    s.strategy = strategy;
    s.mean_height = g.mean_height;
    s.top_height = g.z_max;
    auto& e = s.estimates;
    e.swept_extent_mm = extent;
    e.pass_count = static_cast<std::size_t>(std::max(1.0, std::ceil(extent / strategy.pitch_mm - 1e-9)));
    e.mean_pass_length_mm = g.area / extent;
    e.machining_length_mm = static_cast<double>(e.pass_count) * e.mean_pass_length_mm;

    const bool planes = strategy.feed_kind == FeedKind::ParallelPlanes;
    const std::string along = planes ? "along " + fmt(strategy.feed_direction_deg) + " deg in a vertical plane"
                                     : "constant-height contour";
    auto& st = s.structure;
    st.fast_initial_approach = "rapid from parking point to " + fmt(options.safety_margin_mm) + " mm above entry";
    st.initial_trajectory = {planes ? "ramp entry along feed" : "helical entry at top level",
                             "first pass " + along,
                             planes ? "lift to transition height" : "retract at level end"};
    st.intermediate_trajectory_count = e.pass_count >= 2 ? e.pass_count - 2 : 0;
    st.intermediate_trajectory = {"link from previous pass", "intermediate pass " + along, "link to next pass"};
    st.final_trajectory = {"link from previous pass", "last pass " + along, "tangent exit"};
    st.fast_final_clearance = "rapid retract to parking point";

    const bool zigzag = strategy.sweeping_mode == SweepingMode::ZigZag;
    s.transitions.style = std::string(zigzag ? "direct link, alternate direction" : "lift and return, same direction") +
                          ", " + std::string(to_string(strategy.cutting_mode)) + " cutting";
    s.transitions.step_mm = strategy.pitch_mm;

    const double park = mesh_top + std::max(options.safety_margin_mm, options.clearance_mm);
    s.parking_point = g.centroid + axis.direction() * (park - axis.height(g.centroid));

    for (const auto& w : mf.waivers) {
        if (w.container == g.id) {
            s.interference_notes.push_back("approach ignores feature " + std::to_string(w.contained) +
                                           ": it does not exceed this feature");
        }
    }
    return s;
}

std::string_view to_string(OrderBy o) { return o == OrderBy::Tool ? "tool" : "z"; }

OrderBy parse_order_by(std::string_view s) {
    if (s == "tool") {
        return OrderBy::Tool;
    }
    if (s == "z") {
        return OrderBy::Z;
    }
    throw Error(ErrorCode::InvalidArgument, "order-by must be 'tool' or 'z'");
}

std::size_t count_tool_changes(std::span<const MachiningSequence> sequences, std::span<const std::uint32_t> order) {
    std::map<std::uint32_t, const MachiningSequence*> by_id;
    for (const auto& s : sequences) {
        by_id[s.id] = &s;
    }
    std::size_t changes = 0;
    for (std::size_t i = 1; i < order.size(); ++i) {
        if (by_id.at(order[i])->tool_id != by_id.at(order[i - 1])->tool_id) {
            ++changes;
        }
    }
    return changes;
}

MachiningProcess order_process(std::span<const MachiningSequence> sequences,
                               std::span<const ContainmentNote> waivers, OrderBy order_by) {
    std::vector<const MachiningSequence*> base;
    for (const auto& s : sequences) {
        base.push_back(&s);
    }
    auto top_down = [](const MachiningSequence* a, const MachiningSequence* b) {
        if (a->mean_height != b->mean_height) {
            return a->mean_height > b->mean_height;
        }
        return a->feature < b->feature;
    };

    MachiningProcess p;
    std::map<std::string, std::size_t> group_rank;
    if (order_by == OrderBy::Tool) {
        // Rank each tool by its topmost feature.
        std::map<std::string, const MachiningSequence*> topmost;
        for (const auto* s : base) {
            auto [it, inserted] = topmost.try_emplace(s->tool_id, s);
            const auto* t = it->second;
            if (!inserted && (s->top_height > t->top_height ||
                              (s->top_height == t->top_height && top_down(s, t)))) {
                it->second = s;
            }
        }
        std::vector<std::pair<std::string, const MachiningSequence*>> groups(topmost.begin(), topmost.end());
        std::sort(groups.begin(), groups.end(), [&top_down](const auto& a, const auto& b) {
            if (a.second->top_height != b.second->top_height) {
                return a.second->top_height > b.second->top_height;
            }
            return top_down(a.second, b.second);
        });
        for (std::size_t i = 0; i < groups.size(); ++i) {
            group_rank[groups[i].first] = i;
            p.rationale.push_back("tool group " + std::to_string(i + 1) + ": " + groups[i].first +
                                  " (topmost feature " + std::to_string(groups[i].second->feature) + " at z " +
                                  fmt(groups[i].second->top_height) + ")");
        }
        std::sort(base.begin(), base.end(), [&](const MachiningSequence* a, const MachiningSequence* b) {
            const auto ga = group_rank[a->tool_id];
            const auto gb = group_rank[b->tool_id];
            return ga != gb ? ga < gb : top_down(a, b);
        });
    } else {
        std::sort(base.begin(), base.end(), top_down);
        p.rationale.push_back("top-down order by mean feature height, tool grouping ignored");
    }

    // Waivers: container before contained, when both are sequenced.
    std::map<FeatureId, std::vector<FeatureId>> containers;
    std::map<FeatureId, bool> present;
    for (const auto* s : base) {
        present[s->feature] = true;
    }
    for (const auto& w : waivers) {
        if (present.contains(w.container) && present.contains(w.contained)) {
            containers[w.contained].push_back(w.container);
        }
    }
    std::map<FeatureId, bool> placed;
    std::vector<bool> used(base.size(), false);
    for (std::size_t step = 0; step < base.size(); ++step) {
        std::size_t pick = base.size();
        for (std::size_t i = 0; i < base.size() && pick == base.size(); ++i) {
            if (used[i]) {
                continue;
            }
            bool ready = true;
            for (FeatureId c : containers[base[i]->feature]) {
                ready = ready && (placed[c] || c == base[i]->feature);
            }
            if (ready) {
                pick = i;
            }
        }
        std::string why;
        if (pick == base.size()) {
            // Mutual waivers between coplanar flats: fall back to the base order.
            for (pick = 0; used[pick]; ++pick) {
            }
            why = " (containment cycle, base order kept)";
        }
        used[pick] = true;
        const auto* s = base[pick];
        placed[s->feature] = true;
        p.order.push_back(s->id);
        p.total_machining_length_mm += s->estimates.machining_length_mm;
        std::string note = "step " + std::to_string(step + 1) + ": feature " + std::to_string(s->feature) + " with " +
                           s->tool_id + ", mean z " + fmt(s->mean_height);
        if (!containers[s->feature].empty()) {
            note += ", after its container(s)";
        }
        p.rationale.push_back(note + why);
    }
    p.tool_change_count = count_tool_changes(sequences, p.order);
    return p;
}

}  // namespace dieplan
