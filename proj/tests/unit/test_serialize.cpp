#include <doctest.h>

#include <nlohmann/json.hpp>

#include "dieplan/error.hpp"
#include "dieplan/serialize.hpp"
#include "dieplan/shapes.hpp"

using namespace dieplan;

namespace {

const TriMesh& small_die() {
    static const TriMesh m = shapes::synthetic_die({.segments = 60, .arc_step_deg = 10.0});
    return m;
}

std::vector<std::string> keys_of(const OrderedJson& j) {
    std::vector<std::string> out;
    for (auto it = j.begin(); it != j.end(); ++it) {
        out.push_back(it.key());
    }
    return out;
}

}  // namespace

TEST_SUITE("serialize") {

TEST_CASE("fnv1a and hex64") {
    CHECK(fnv1a("") == 0xcbf29ce484222325ULL);
    CHECK(fnv1a("a") == 0xaf63dc4c8601ec8cULL);
    CHECK(hex64(0xabcULL) == "0000000000000abc");
}

TEST_CASE("plan bytes are identical across runs") {
    const PipelineConfig cfg;
    const auto a = dump(plan_document_json(small_die(), run_pipeline(small_die(), cfg), cfg));
    const auto b = dump(plan_document_json(small_die(), run_pipeline(small_die(), cfg), cfg));
    CHECK(a == b);
    const auto doc = nlohmann::json::parse(a);
    CHECK(doc["plan_schema"] == 1);
    CHECK(doc["summary"]["feature_count"] == doc["features"].size());
    CHECK(doc["process"]["order"].size() == doc["sequences"].size());
}

TEST_CASE("config round trip keeps the fingerprint") {
    PipelineConfig cfg;
    cfg.contact.tau_flat = 0.85;
    cfg.directions = parse_direction_spec("0:170:10");
    cfg.d_prox = 7.5;
    cfg.segmentation_overrides.split = {3};
    cfg.association_overrides.single_tool = "corner-only";
    cfg.association_overrides.feed_by_feature[2] = FeedKind::ZLevel;
    cfg.order_by = OrderBy::Z;
    const auto text = dump(config_to_json(cfg));
    const auto back = config_from_json(nlohmann::json::parse(text));
    CHECK(dump(config_to_json(back)) == text);
    CHECK(config_fingerprint(back) == config_fingerprint(cfg));
    CHECK(config_fingerprint(back) != config_fingerprint(PipelineConfig{}));
}

TEST_CASE("partial config keeps the base values") {
    const auto cfg = config_from_json(nlohmann::json::parse(R"({"contact": {"tau_flat": 0.9}})"));
    CHECK(cfg.contact.tau_flat == 0.9);
    CHECK(cfg.contact.tau_draft == PipelineConfig{}.contact.tau_draft);
    CHECK(cfg.tools.size() == PipelineConfig{}.tools.size());
}

TEST_CASE("unknown or mistyped config fields are schema errors") {
    for (const char* bad : {R"({"colour": {}})", R"({"contact": {"tau_flatt": 0.9}})", R"({"contact": {"tau_flat": "x"}})",
                            R"([1, 2])", R"({"association": {"sweeping_mode": "spiral"}})"}) {
        CAPTURE(bad);
        try {
            config_from_json(nlohmann::json::parse(bad));
            FAIL("accepted");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::Schema);
        }
    }
}

TEST_CASE("feature and relation documents") {
    const PipelineConfig cfg;
    const auto r = run_pipeline(shapes::pocket_block(40, 20, 10, 5), cfg, Stage::Segmentation);
    const auto doc = segmentation_document_json(r.segmentation, r.profile);
    CHECK(keys_of(doc) == std::vector<std::string>{"elementary_feature_count", "features", "relations", "waivers"});
    REQUIRE(doc["features"].size() == 3);
    const auto& f = doc["features"][0];
    for (const char* k : {"id", "class", "continuity", "facet_count", "area", "z_range", "depth_from_top", "mean_height",
                          "centroid", "principal_direction", "facet_ids"}) {
        CHECK_MESSAGE(f.contains(k), k);
    }
    CHECK(f["facet_ids"].size() == f["facet_count"]);
    CHECK(f["z_range"].size() == 2);
    CHECK(!feature_json(r.segmentation.features[0], r.profile, false).contains("facet_ids"));
    bool contact = false, proximity = false;
    for (const auto& rel : doc["relations"]) {
        if (rel["kind"] == "proximity") {
            proximity = true;
            CHECK(rel.contains("min_distance_mm"));
        } else {
            contact = true;
            CHECK(rel.contains("shared_edge_length_mm"));
        }
    }
    CHECK(contact);
    CHECK(proximity);
}

TEST_CASE("map document layout") {
    const auto doc = map_document_json(contact_map(shapes::unit_cube(), ContactMapConfig{}));
    CHECK(keys_of(doc) == std::vector<std::string>{"thresholds", "tool_axis", "histogram", "undercuts", "per_facet"});
    CHECK(doc["per_facet"].size() == 12);
    CHECK(keys_of(doc["per_facet"][0]) == std::vector<std::string>{"omega", "kappa", "class"});
    CHECK(doc["histogram"]["undercut"]["count"] == 2);
}

TEST_CASE("tool json round trip") {
    for (const auto& t : default_tool_library()) {
        const auto back = tool_from_json(nlohmann::json::parse(tool_json(t).dump()));
        CHECK(back == t);
    }
}

}
