#include "dieplan/service.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <regex>
#include <set>

#include <httplib.h>

#include "dieplan/error.hpp"
#include "dieplan/serialize.hpp"
#include "dieplan/stl_io.hpp"

namespace dieplan {

using json = nlohmann::json;

int http_status(ErrorCode code) {
    switch (code) {
        case ErrorCode::NotFound:
        case ErrorCode::MissingArtifact: return 404;
        case ErrorCode::NotAdjacent:
        case ErrorCode::NoTool:
        case ErrorCode::UnsupportedCriteria:
        case ErrorCode::EmptyMesh: return 422;
        case ErrorCode::StaleArtifact: return 409;
        case ErrorCode::Io: return 500;
        case ErrorCode::Format:
        case ErrorCode::InvalidArgument:
        case ErrorCode::Schema: return 400;
    }
    return 500;
}

std::string error_body(ErrorCode code, std::string_view message) {
    return dump(OrderedJson{{"error", {{"code", std::string(to_string(code))}, {"message", std::string(message)}}}});
}

int default_port() {
    if (const char* env = std::getenv("DIEPLAN_PORT")) {
        int port = 0;
        const std::string_view s(env);
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), port);
        if (ec == std::errc{} && ptr == s.data() + s.size() && port > 0 && port < 65536) {
            return port;
        }
    }
    return 8080;
}

namespace {

HttpResponse ok(const OrderedJson& doc, int status = 200) { return {status, dump(doc), "application/json"}; }

HttpResponse fail(ErrorCode code, std::string_view message) { return {http_status(code), error_body(code, message)}; }

std::optional<std::string> query_value(const std::multimap<std::string, std::string>& q, const std::string& key) {
    auto it = q.find(key);
    if (it == q.end()) {
        return std::nullopt;
    }
    return it->second;
}

double parse_number(const std::string& text, const std::string& name) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
        throw Error(ErrorCode::InvalidArgument, "query parameter " + name + " must be a number, got '" + text + "'");
    }
    return v;
}

FeatureId parse_feature(const std::string& text) {
    unsigned long v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
        throw Error(ErrorCode::InvalidArgument, "feature id must be a non-negative integer, got '" + text + "'");
    }
    return static_cast<FeatureId>(v);
}

/// Accepts the JSON override document or the shorthand form `tool=corner-only&merge=1,2&split=3`.
json parse_override_body(std::string_view body) {
    const auto first = body.find_first_not_of(" \t\r\n");
    if (first != std::string_view::npos && (body[first] == '{' || body[first] == '[')) {
        try {
            json doc = json::parse(body);
            if (!doc.is_object()) {
                throw Error(ErrorCode::Schema, "overrides: expected a JSON object");
            }
            return doc;
        } catch (const json::parse_error& e) {
            throw Error(ErrorCode::Schema, std::string("overrides: ") + e.what());
        }
    }
    json doc = json::object();
    std::size_t pos = 0;
    const std::string text(body.substr(first == std::string_view::npos ? body.size() : first));
    while (pos < text.size()) {
        std::size_t amp = text.find('&', pos);
        if (amp == std::string::npos) {
            amp = text.size();
        }
        std::string pair = text.substr(pos, amp - pos);
        while (!pair.empty() && std::isspace(static_cast<unsigned char>(pair.back()))) {
            pair.pop_back();
        }
        pos = amp + 1;
        if (pair.empty()) {
            continue;
        }
        const auto eq = pair.find('=');
        if (eq == std::string::npos) {
            throw Error(ErrorCode::Schema, "overrides: expected key=value, got '" + pair + "'");
        }
        const std::string key = pair.substr(0, eq);
        const std::string value = pair.substr(eq + 1);
        if (key == "tool") {
            doc["tool"] = value == "none" ? json(nullptr) : json(value);
        } else if (key == "merge") {
            const auto comma = value.find(',');
            if (comma == std::string::npos) {
                throw Error(ErrorCode::Schema, "overrides: merge expects 'a,b'");
            }
            doc["merge"].push_back({parse_feature(value.substr(0, comma)), parse_feature(value.substr(comma + 1))});
        } else if (key == "split") {
            doc["split"].push_back(parse_feature(value));
        } else if (key == "reset") {
            doc["reset"] = value == "true" || value == "1";
        } else {
            throw Error(ErrorCode::Schema, "overrides: unknown key '" + key + "'");
        }
    }
    return doc;
}

}  // namespace

Service::Service(ServiceOptions options) : options_(std::move(options)) {
    if (!options_.store_dir) {
        return;
    }
    std::filesystem::create_directories(*options_.store_dir);
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(*options_.store_dir)) {
        if (entry.path().extension() == ".json") {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
        auto session = AnalysisSession::from_bundle(json::parse(read_file(f)));
        const std::string& id = session->id();
        if (id.size() > 1 && id[0] == 's') {
            std::size_t n = 0;
            auto [ptr, ec] = std::from_chars(id.data() + 1, id.data() + id.size(), n);
            if (ec == std::errc{} && ptr == id.data() + id.size()) {
                next_id_ = std::max(next_id_, n + 1);
            }
        }
        sessions_.emplace(id, std::move(session));
    }
}

std::size_t Service::session_count() const {
    std::shared_lock lock(sessions_mutex_);
    return sessions_.size();
}

std::shared_ptr<AnalysisSession> Service::find(const std::string& id) const {
    std::shared_lock lock(sessions_mutex_);
    auto it = sessions_.find(id);
    if (it == sessions_.end()) {
        throw Error(ErrorCode::NotFound, "unknown session '" + id + "'");
    }
    return it->second;
}

void Service::persist(const AnalysisSession& session) const {
    if (!options_.store_dir) {
        return;
    }
    const auto target = *options_.store_dir / (session.id() + ".json");
    const auto tmp = *options_.store_dir / (session.id() + ".json.tmp");
    write_file(tmp, dump(session.bundle()));
    std::filesystem::rename(tmp, target);
}

HttpResponse Service::create_session(std::string_view body) {
    if (body.empty()) {
        throw Error(ErrorCode::Format, "request body must be an STL file");
    }
    LoadedMesh loaded = load_stl_bytes(body, options_.default_config.cleaning);
    std::shared_ptr<AnalysisSession> session;
    {
        std::unique_lock lock(sessions_mutex_);
        const std::string id = "s" + std::to_string(next_id_++);
        session = std::make_shared<AnalysisSession>(id, std::move(loaded), options_.default_config);
        sessions_.emplace(id, session);
    }
    persist(*session);
    const auto s = session->snapshot();
    return ok({{"session_id", session->id()},
               {"diagnostics", diagnostics_json(s->diagnostics)},
               {"config_fingerprint", config_fingerprint(s->config)}},
              201);
}

HttpResponse Service::overrides(AnalysisSession& session, std::string_view body) {
    const json doc = parse_override_body(body);
    static const std::set<std::string> known = {"reset", "merge",           "split",        "tool",
                                                "tool_by_feature", "strategy_by_feature", "tools", "tech", "config"};
    for (const auto& [key, value] : doc.items()) {
        if (!known.contains(key)) {
            throw Error(ErrorCode::Schema, "overrides: unknown key '" + key + "'");
        }
    }
    auto edit = [&](PipelineConfig& cfg) {
        try {
            if (doc.value("reset", false)) {
                cfg.segmentation_overrides = {};
                cfg.association_overrides = {};
            }
            if (doc.contains("config")) {
                cfg = config_from_json(doc.at("config"), cfg);
            }
            if (doc.contains("tools")) {
                cfg.tools = parse_tool_library(doc.at("tools").dump());
            }
            if (doc.contains("tech")) {
                cfg.tech = parse_technological_data(doc.at("tech").dump());
            }
            if (doc.contains("merge")) {
                for (const auto& pair : doc.at("merge")) {
                    if (!pair.is_array() || pair.size() != 2) {
                        throw Error(ErrorCode::Schema, "overrides.merge: expected [a, b] pairs");
                    }
                    cfg.segmentation_overrides.merge.emplace_back(pair[0].get<FeatureId>(), pair[1].get<FeatureId>());
                }
            }
            if (doc.contains("split")) {
                for (const auto& id : doc.at("split")) {
                    cfg.segmentation_overrides.split.push_back(id.get<FeatureId>());
                }
            }
            if (doc.contains("tool")) {
                const json& t = doc.at("tool");
                if (t.is_null()) {
                    cfg.association_overrides.single_tool.reset();
                } else {
                    cfg.association_overrides.single_tool = t.get<std::string>();
                }
            }
            if (doc.contains("tool_by_feature")) {
                for (const auto& [k, v] : doc.at("tool_by_feature").items()) {
                    cfg.association_overrides.tool_by_feature[parse_feature(k)] = v.get<std::string>();
                }
            }
            if (doc.contains("strategy_by_feature")) {
                for (const auto& [k, v] : doc.at("strategy_by_feature").items()) {
                    cfg.association_overrides.feed_by_feature[parse_feature(k)] = parse_feed_kind(v.get<std::string>());
                }
            }
        } catch (const json::exception& e) {
            throw Error(ErrorCode::Schema, std::string("overrides: ") + e.what());
        }
    };
    auto check = [&session](const SessionState& next) {
        const auto r = session.results(next, next.config, Stage::Segmentation);
        const auto& ov = next.config.association_overrides;
        const std::size_t n = r->segmentation.features.size();
        auto known_tool = [&next](const std::string& id) {
            return std::any_of(next.config.tools.begin(), next.config.tools.end(),
                               [&id](const CuttingTool& t) { return t.id == id; });
        };
        if (ov.single_tool && *ov.single_tool != "corner-only" && !known_tool(*ov.single_tool)) {
            throw Error(ErrorCode::InvalidArgument, "unknown tool id '" + *ov.single_tool + "'");
        }
        for (const auto& [f, id] : ov.tool_by_feature) {
            if (f >= n) {
                throw Error(ErrorCode::InvalidArgument, "override references unknown feature id " + std::to_string(f));
            }
            if (!known_tool(id)) {
                throw Error(ErrorCode::InvalidArgument, "unknown tool id '" + id + "'");
            }
        }
        for (const auto& [f, kind] : ov.feed_by_feature) {
            if (f >= n) {
                throw Error(ErrorCode::InvalidArgument, "override references unknown feature id " + std::to_string(f));
            }
        }
    };
    const auto next = session.update(edit, check);
    persist(session);
    return ok({{"session_id", session.id()},
               {"revision", next->revision},
               {"config_fingerprint", config_fingerprint(next->config)},
               {"config", config_to_json(next->config)}});
}

HttpResponse Service::handle(std::string_view method, std::string_view path,
                             const std::multimap<std::string, std::string>& query, std::string_view body) {
    static const std::regex session_route(R"(^/sessions/([A-Za-z0-9_-]+)(?:/([a-z-]+))?/?$)");
    try {
        const std::string p(path);
        if (p == "/health" && method == "GET") {
            return ok({{"status", "ok"}});
        }
        if (p == "/sessions" || p == "/sessions/") {
            if (method == "POST") {
                return create_session(body);
            }
            if (method == "GET") {
                OrderedJson ids = OrderedJson::array();
                std::shared_lock lock(sessions_mutex_);
                for (const auto& [id, s] : sessions_) {
                    ids.push_back(id);
                }
                return ok({{"sessions", ids}});
            }
            return fail(ErrorCode::InvalidArgument, "method not allowed");
        }
        std::smatch m;
        if (!std::regex_match(p, m, session_route)) {
            return fail(ErrorCode::NotFound, "no route for " + p);
        }
        auto session = find(m[1].str());
        const std::string resource = m[2].matched ? m[2].str() : "";
        if (resource == "overrides") {
            if (method != "POST") {
                return fail(ErrorCode::InvalidArgument, "overrides accepts POST only");
            }
            return overrides(*session, body);
        }
        if (method != "GET") {
            return fail(ErrorCode::InvalidArgument, "method not allowed");
        }
        const auto state = session->snapshot();
        PipelineConfig cfg = state->config;

        if (resource.empty() || resource == "bundle") {
            return ok(session->bundle());
        }
        if (resource == "mesh") {
            OrderedJson verts = OrderedJson::array();
            for (const Vec3& v : state->mesh->vertices()) {
                verts.push_back(v.x);
                verts.push_back(v.y);
                verts.push_back(v.z);
            }
            OrderedJson facets = OrderedJson::array();
            for (const auto& f : state->mesh->facets()) {
                facets.push_back(f[0]);
                facets.push_back(f[1]);
                facets.push_back(f[2]);
            }
            OrderedJson normals = OrderedJson::array();
            for (const Vec3& n : state->mesh->facet_normals()) {
                for (double c : {n.x, n.y, n.z}) {
                    normals.push_back(static_cast<int>(std::lround(std::clamp(c, -1.0, 1.0) * 32767.0)));
                }
            }
            return ok({{"vertex_count", state->mesh->vertex_count()},
                       {"facet_count", state->mesh->facet_count()},
                       {"vertices", verts},
                       {"facets", facets},
                       {"normal_quantization", "int16: component = round(n * 32767)"},
                       {"normals_q16", normals}});
        }
        if (resource == "contact-map") {
            if (auto v = query_value(query, "tau_draft")) {
                cfg.contact.tau_draft = parse_number(*v, "tau_draft");
            }
            if (auto v = query_value(query, "tau_flat")) {
                cfg.contact.tau_flat = parse_number(*v, "tau_flat");
            }
            validate(cfg.contact);
            return ok(map_document_json(session->results(*state, cfg, Stage::Map)->map));
        }
        if (resource == "continuity") {
            if (auto v = query_value(query, "directions")) {
                cfg.directions = parse_direction_spec(*v);
            }
            const bool per_facet = query_value(query, "per_facet").value_or("true") != "false";
            return ok(continuity_document_json(*session->results(*state, cfg, Stage::Continuity), cfg, per_facet));
        }
        if (resource == "segmentation") {
            const auto r = session->results(*state, cfg, Stage::Segmentation);
            return ok(segmentation_document_json(r->segmentation, r->profile));
        }
        if (resource == "association") {
            return ok(association_document_json(session->results(*state, cfg, Stage::Association)->association, cfg));
        }
        if (resource == "plan") {
            return ok(plan_document_json(*state->mesh, *session->results(*state, cfg, Stage::Plan), cfg));
        }
        if (resource == "config") {
            return ok(config_to_json(cfg));
        }
        return fail(ErrorCode::NotFound, "no route for " + p);
    } catch (const Error& e) {
        return fail(e.code(), e.what());
    } catch (const json::exception& e) {
        return fail(ErrorCode::Schema, e.what());
    } catch (const std::exception& e) {
        return {500, error_body(ErrorCode::Io, e.what())};
    }
}

void Service::serve(const std::string& host, int port) {
    auto server = std::make_shared<httplib::Server>();
    auto route = [this](const httplib::Request& req, httplib::Response& res) {
        std::multimap<std::string, std::string> query(req.params.begin(), req.params.end());
        const HttpResponse r = handle(req.method, req.path, query, req.body);
        res.status = r.status;
        res.set_content(r.body, r.content_type);
    };
    server->Get(".*", route);
    server->Post(".*", route);
    server->set_default_headers({{"Access-Control-Allow-Origin", "*"}});
    server->Options(".*", [](const httplib::Request&, httplib::Response& res) {
        res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
        res.set_header("Access-Control-Allow-Headers", "Content-Type");
        res.status = 204;
    });
    server->set_payload_max_length(512ull * 1024 * 1024);
    {
        std::lock_guard lock(server_mutex_);
        if (stop_requested_) {
            stop_requested_ = false;
            return;
        }
        server_ = server;
    }
    if (!server->bind_to_port(host, port)) {
        throw Error(ErrorCode::Io, "cannot listen on " + host + ":" + std::to_string(port));
    }
    if (!server->listen_after_bind()) {
        throw Error(ErrorCode::Io, "cannot listen on " + host + ":" + std::to_string(port));
    }
}

void Service::stop() {
    std::lock_guard lock(server_mutex_);
    if (auto s = std::static_pointer_cast<httplib::Server>(server_)) {
        s->stop();
        server_.reset();
    } else {
        stop_requested_ = true;
    }
}

}  // namespace dieplan
