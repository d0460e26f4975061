#include "dieplan/session.hpp"

#include <algorithm>

#include "dieplan/error.hpp"
#include "dieplan/serialize.hpp"

namespace dieplan {

namespace {

constexpr std::size_t kCacheEntries = 16;

std::string_view stage_name(Stage s) {
    switch (s) {
        case Stage::Map: return "map";
        case Stage::Continuity: return "continuity";
        case Stage::Segmentation: return "segmentation";
        case Stage::Association: return "association";
        case Stage::Plan: return "plan";
    }
    return "plan";
}

}  // namespace

AnalysisSession::AnalysisSession(std::string id, LoadedMesh loaded, PipelineConfig config) : id_(std::move(id)) {
    auto s = std::make_shared<SessionState>();
    update_diagnostics(loaded.mesh, config.contact.tool_axis.direction(), loaded.diagnostics);
    s->mesh = std::make_shared<const TriMesh>(std::move(loaded.mesh));
    s->diagnostics = std::move(loaded.diagnostics);
    s->config = std::move(config);
    state_ = std::move(s);
}

std::shared_ptr<const SessionState> AnalysisSession::snapshot() const {
    std::lock_guard lock(state_mutex_);
    return state_;
}

std::shared_ptr<const PipelineResult> AnalysisSession::results(const SessionState& state, const PipelineConfig& config,
                                                               Stage until) const {
    // The mesh never changes within a session, so the config fingerprint identifies the inputs.
    const std::string key = config_fingerprint(config) + "/" + std::string(stage_name(until));
    {
        std::lock_guard lock(cache_mutex_);
        if (auto it = cache_.find(key); it != cache_.end()) {
            return it->second;
        }
    }
    auto computed = std::make_shared<const PipelineResult>(run_pipeline(*state.mesh, config, until));
    std::lock_guard lock(cache_mutex_);
    auto [it, inserted] = cache_.emplace(key, computed);
    if (inserted) {
        cache_order_.push_back(key);
        if (cache_order_.size() > kCacheEntries) {
            cache_.erase(cache_order_.front());
            cache_order_.erase(cache_order_.begin());
        }
    }
    return it->second;
}

std::shared_ptr<const SessionState> AnalysisSession::update(const std::function<void(PipelineConfig&)>& edit,
                                                            const std::function<void(const SessionState&)>& check) {
    std::lock_guard writer(write_mutex_);
    const auto current = snapshot();
    auto next = std::make_shared<SessionState>(*current);
    edit(next->config);
    next->revision = current->revision + 1;
    if (check) {
        check(*next);
    }
    std::lock_guard lock(state_mutex_);
    state_ = next;
    return next;
}

nlohmann::ordered_json AnalysisSession::bundle() const {
    const auto s = snapshot();
    nlohmann::ordered_json verts = nlohmann::ordered_json::array();
    for (const Vec3& v : s->mesh->vertices()) {
        verts.push_back(v.x);
        verts.push_back(v.y);
        verts.push_back(v.z);
    }
    nlohmann::ordered_json facets = nlohmann::ordered_json::array();
    for (const auto& f : s->mesh->facets()) {
        facets.push_back(f[0]);
        facets.push_back(f[1]);
        facets.push_back(f[2]);
    }
    return {{"bundle_schema", 1},
            {"session_id", id_},
            {"revision", s->revision},
            {"config", config_to_json(s->config)},
            {"diagnostics", diagnostics_json(s->diagnostics)},
            {"mesh", {{"fingerprint", hex64(mesh_fingerprint(*s->mesh))}, {"vertices", verts}, {"facets", facets}}}};
}

std::unique_ptr<AnalysisSession> AnalysisSession::from_bundle(const nlohmann::json& b) {
    try {
        const auto& m = b.at("mesh");
        const auto flat_v = m.at("vertices").get<std::vector<double>>();
        const auto flat_f = m.at("facets").get<std::vector<VertexId>>();
        if (flat_v.size() % 3 != 0 || flat_f.size() % 3 != 0) {
            throw Error(ErrorCode::Schema, "bundle mesh arrays must hold triples");
        }
        std::vector<Vec3> verts;
        for (std::size_t i = 0; i < flat_v.size(); i += 3) {
            verts.push_back({flat_v[i], flat_v[i + 1], flat_v[i + 2]});
        }
        std::vector<std::array<VertexId, 3>> facets;
        for (std::size_t i = 0; i < flat_f.size(); i += 3) {
            for (std::size_t k = 0; k < 3; ++k) {
                if (flat_f[i + k] >= verts.size()) {
                    throw Error(ErrorCode::Schema, "bundle facet references a missing vertex");
                }
            }
            facets.push_back({flat_f[i], flat_f[i + 1], flat_f[i + 2]});
        }
        LoadedMesh loaded{TriMesh::from_indexed(std::move(verts), std::move(facets)), {}};
        const auto& d = b.at("diagnostics");
        loaded.diagnostics.facet_count = loaded.mesh.facet_count();
        loaded.diagnostics.degenerate_count = d.at("degenerate_count").get<std::size_t>();
        loaded.diagnostics.winding_flipped_count = d.at("winding_flipped_count").get<std::size_t>();
        loaded.diagnostics.merged_vertex_count = d.at("merged_vertex_count").get<std::size_t>();
        loaded.diagnostics.boundary_edge_count = loaded.mesh.boundary_edge_count();
        loaded.diagnostics.non_manifold_edges = loaded.mesh.non_manifold_edges();
        loaded.diagnostics.non_manifold_edge_count = loaded.diagnostics.non_manifold_edges.size();
        auto session = std::make_unique<AnalysisSession>(b.at("session_id").get<std::string>(), std::move(loaded),
                                                         config_from_json(b.at("config")));
        const auto rev = b.value("revision", std::uint64_t{0});
        auto s = std::make_shared<SessionState>(*session->state_);
        s->revision = rev;
        session->state_ = std::move(s);
        return session;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::Schema, std::string("session bundle: ") + e.what());
    }
}

}  // namespace dieplan
