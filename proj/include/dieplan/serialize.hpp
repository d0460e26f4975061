#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "dieplan/pipeline.hpp"

namespace dieplan {

using OrderedJson = nlohmann::ordered_json;

/// Every document is dumped with this indentation so identical inputs give identical bytes.
std::string dump(const OrderedJson& doc);

std::string hex64(std::uint64_t v);
std::uint64_t fnv1a(std::string_view bytes);

OrderedJson config_to_json(const PipelineConfig& cfg);
/// Fields absent from `doc` keep the values already in `base`.
PipelineConfig config_from_json(const nlohmann::json& doc, PipelineConfig base = {});
std::string config_fingerprint(const PipelineConfig& cfg);

OrderedJson diagnostics_json(const MeshDiagnostics& d);
OrderedJson tool_json(const CuttingTool& t);
CuttingTool tool_from_json(const nlohmann::json& j);
OrderedJson strategy_json(const MachiningStrategy& s);
OrderedJson continuity_json(const RegionContinuity& c, const ContinuityProfile& profile);
OrderedJson feature_json(const GeometricFeature& g, const ContinuityProfile& profile, bool with_facets = true);
OrderedJson relation_json(const TopologicalRelation& r);
OrderedJson waiver_json(const ContainmentNote& w);

/// {config, per_facet: [{omega, kappa, class}], histogram, undercuts}
OrderedJson map_document_json(const MapDocument& doc);
/// {config, directions, whole_mesh, per_facet_residuals}
OrderedJson continuity_document_json(const PipelineResult& r, const PipelineConfig& cfg, bool per_facet = true);
/// {features, relations, waivers}
OrderedJson segmentation_document_json(const SegmentationResult& seg, const ContinuityProfile& profile);
OrderedJson association_document_json(const AssociationResult& assoc, const PipelineConfig& cfg);

/// Self-contained plan: config, technological data, features, relations, waivers,
/// bindings, junctions, sequences and the ordered process. `plan_schema` = 1.
OrderedJson plan_document_json(const TriMesh& mesh, const PipelineResult& r, const PipelineConfig& cfg);

}  // namespace dieplan
