#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>

#include <nlohmann/json.hpp>

#include "dieplan/pipeline.hpp"

namespace dieplan {

/// Immutable view of a session; readers keep it alive while an override swaps in a new one.
struct SessionState {
    std::shared_ptr<const TriMesh> mesh;
    MeshDiagnostics diagnostics;
    PipelineConfig config;
    std::uint64_t revision = 0;
};

class AnalysisSession {
public:
    AnalysisSession(std::string id, LoadedMesh loaded, PipelineConfig config);

    const std::string& id() const { return id_; }

    std::shared_ptr<const SessionState> snapshot() const;

    /// Pipeline results up to `until` for `config` (normally the snapshot's, possibly with query tweaks).
    /// Cached by config fingerprint, so any upstream change recomputes.
    std::shared_ptr<const PipelineResult> results(const SessionState& state, const PipelineConfig& config,
                                                  Stage until) const;

    /// Serialised write: `edit` receives a copy of the config, `check` may reject the result by throwing.
    /// The new snapshot replaces the old one only when both succeed.
    std::shared_ptr<const SessionState> update(const std::function<void(PipelineConfig&)>& edit,
                                               const std::function<void(const SessionState&)>& check = {});

    /// Self-contained bundle: indexed mesh and config; enough to reproduce every result.
    nlohmann::ordered_json bundle() const;
    static std::unique_ptr<AnalysisSession> from_bundle(const nlohmann::json& bundle);

private:
    std::string id_;
    mutable std::mutex state_mutex_;
    std::shared_ptr<const SessionState> state_;
    std::mutex write_mutex_;

    mutable std::mutex cache_mutex_;
    mutable std::map<std::string, std::shared_ptr<const PipelineResult>> cache_;
    mutable std::vector<std::string> cache_order_;
};

}  // namespace dieplan
