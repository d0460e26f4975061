// Command-line front end: one subcommand per pipeline stage plus the HTTP service.
#include <cmath>
#include <csignal>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dieplan/error.hpp"
#include "dieplan/ply.hpp"
#include "dieplan/serialize.hpp"
#include "dieplan/service.hpp"
#include "dieplan/stl_io.hpp"

namespace fs = std::filesystem;
using namespace dieplan;
using json = nlohmann::json;

namespace {

struct Flags {
    std::string stl;
    std::string config_file;
    std::optional<double> tau_draft;
    std::optional<double> tau_flat;
    std::string axis;
    std::string directions;
    std::optional<double> min_region_area;
    std::optional<double> d_prox;
    std::vector<std::string> merge;
    std::vector<FeatureId> split;
    std::string tools_file;
    std::string tech_file;
    std::string single_tool;
    std::string order_by;
    std::string out;
    std::string ply;
    double ply_direction = 0.0;
    std::string segmentation;
    std::string associations;
    // serve
    std::string host = "127.0.0.1";
    int port = 0;
    std::string store;
};

Vec3 parse_axis(const std::string& text) {
    double v[3] = {};
    std::size_t pos = 0;
    for (int k = 0; k < 3; ++k) {
        const std::size_t comma = k < 2 ? text.find(',', pos) : text.size();
        if (comma == std::string::npos) {
            break;
        }
        try {
            std::size_t used = 0;
            const std::string token = text.substr(pos, comma - pos);
            v[k] = std::stod(token, &used);
            if (used != token.size()) {
                throw std::invalid_argument(token);
            }
        } catch (const std::exception&) {
            throw Error(ErrorCode::InvalidArgument, "--axis expects x,y,z, got '" + text + "'");
        }
        pos = comma + 1;
        if (k == 2) {
            return {v[0], v[1], v[2]};
        }
    }
    throw Error(ErrorCode::InvalidArgument, "--axis expects x,y,z, got '" + text + "'");
}

std::pair<FeatureId, FeatureId> parse_pair(const std::string& text) {
    const auto comma = text.find(',');
    try {
        if (comma != std::string::npos) {
            std::size_t ua = 0;
            std::size_t ub = 0;
            const std::string a = text.substr(0, comma);
            const std::string b = text.substr(comma + 1);
            const unsigned long fa = std::stoul(a, &ua);
            const unsigned long fb = std::stoul(b, &ub);
            if (ua == a.size() && ub == b.size()) {
                return {static_cast<FeatureId>(fa), static_cast<FeatureId>(fb)};
            }
        }
    } catch (const std::exception&) {
    }
    throw Error(ErrorCode::InvalidArgument, "--merge expects a,b feature ids, got '" + text + "'");
}

json read_json_file(const std::string& path, const std::string& what, ErrorCode missing = ErrorCode::Io) {
    if (!fs::exists(path)) {
        throw Error(missing, "missing " + what + ": " + path + " does not exist");
    }
    try {
        return json::parse(read_file(path));
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::Schema, what + " " + path + ": " + e.what());
    }
}

/// Defaults, then the upstream artifact's config, then --config, then individual flags.
PipelineConfig build_config(const Flags& f, const json* upstream_config) {
    PipelineConfig cfg;
    if (upstream_config) {
        cfg = config_from_json(*upstream_config, cfg);
    }
    if (!f.config_file.empty()) {
        cfg = config_from_json(read_json_file(f.config_file, "config file"), cfg);
    }
    if (f.tau_draft) {
        cfg.contact.tau_draft = *f.tau_draft;
    }
    if (f.tau_flat) {
        cfg.contact.tau_flat = *f.tau_flat;
    }
    validate(cfg.contact);
    if (!f.axis.empty()) {
        cfg.contact.tool_axis = ToolAxis(parse_axis(f.axis));
    }
    if (!f.directions.empty()) {
        cfg.directions = parse_direction_spec(f.directions);
    }
    if (f.min_region_area) {
        if (!(*f.min_region_area >= 0.0 && *f.min_region_area < 1.0)) {
            throw Error(ErrorCode::InvalidArgument, "--min-region-area must lie in [0,1)");
        }
        cfg.segmentation.min_region_area_fraction = *f.min_region_area;
    }
    if (f.d_prox) {
        if (!(*f.d_prox >= 0.0)) {
            throw Error(ErrorCode::InvalidArgument, "--d-prox must be >= 0");
        }
        cfg.d_prox = *f.d_prox;
    }
    for (const auto& m : f.merge) {
        cfg.segmentation_overrides.merge.push_back(parse_pair(m));
    }
    for (FeatureId s : f.split) {
        cfg.segmentation_overrides.split.push_back(s);
    }
    if (!f.tools_file.empty()) {
        if (!fs::exists(f.tools_file)) {
            throw Error(ErrorCode::Io, "tool library " + f.tools_file + " does not exist");
        }
        cfg.tools = parse_tool_library(read_file(f.tools_file));
    }
    if (!f.tech_file.empty()) {
        if (!fs::exists(f.tech_file)) {
            throw Error(ErrorCode::Io, "technological data " + f.tech_file + " does not exist");
        }
        cfg.tech = parse_technological_data(read_file(f.tech_file));
    }
    if (!f.single_tool.empty()) {
        if (f.single_tool == "none") {
            cfg.association_overrides.single_tool.reset();
        } else {
            cfg.association_overrides.single_tool = f.single_tool;
        }
    }
    if (!f.order_by.empty()) {
        cfg.order_by = parse_order_by(f.order_by);
    }
    return cfg;
}

void emit(const Flags& f, const std::string& text) {
    if (f.out.empty() || f.out == "-") {
        std::cout << text;
    } else {
        write_file(f.out, text);
    }
}

OrderedJson artifact(std::string_view stage, const std::string& stl, const TriMesh& mesh, const PipelineConfig& cfg,
                     const MeshDiagnostics* diag, OrderedJson payload) {
    OrderedJson inputs = {{"stl", stl}, {"mesh_fingerprint", hex64(mesh_fingerprint(mesh))}};
    if (diag) {
        inputs["diagnostics"] = diagnostics_json(*diag);
    }
    inputs["config"] = config_to_json(cfg);
    return {{"artifact", std::string(stage)},
            {"artifact_schema", 1},
            {"inputs", inputs},
            {"payload_fingerprint", hex64(fnv1a(payload.dump()))},
            {"payload", std::move(payload)}};
}

/// Reads an upstream artifact and checks its stage.
json upstream(const std::string& path, std::string_view stage, const std::string& what) {
    json a = read_json_file(path, what, ErrorCode::MissingArtifact);
    if (!a.is_object() || a.value("artifact", "") != stage || !a.contains("inputs") ||
        !a.contains("payload_fingerprint")) {
        throw Error(ErrorCode::Schema, path + " is not a " + std::string(stage) + " artifact");
    }
    return a;
}

/// The artifact must match what the current mesh and config produce.
void verify(const json& a, const TriMesh& mesh, const OrderedJson& recomputed, const std::string& what) {
    if (a.at("inputs").value("mesh_fingerprint", "") != hex64(mesh_fingerprint(mesh))) {
        throw Error(ErrorCode::StaleArtifact, what + " artifact was built from a different mesh; re-run that stage");
    }
    if (a.at("payload_fingerprint").get<std::string>() != hex64(fnv1a(recomputed.dump()))) {
        throw Error(ErrorCode::StaleArtifact,
                    what + " artifact does not match the current inputs or flags; re-run that stage");
    }
}

LoadedMesh load_input(const Flags& f, const PipelineConfig& cfg) {
    if (f.stl.empty()) {
        throw Error(ErrorCode::InvalidArgument, "an STL input path is required");
    }
    LoadedMesh lm = load_stl(f.stl, cfg.cleaning);
    update_diagnostics(lm.mesh, cfg.contact.tool_axis.direction(), lm.diagnostics);
    return lm;
}

int run_stage(const std::string& name, Flags f) {
    if (name == "ingest") {
        const PipelineConfig cfg = build_config(f, nullptr);
        const LoadedMesh lm = load_input(f, cfg);
        const BoundingBox box = lm.mesh.bounding_box();
        OrderedJson payload = {{"facet_count", lm.mesh.facet_count()},
                               {"vertex_count", lm.mesh.vertex_count()},
                               {"total_area_mm2", lm.mesh.total_area()},
                               {"bounding_box", {{"min", {box.min.x, box.min.y, box.min.z}},
                                                 {"max", {box.max.x, box.max.y, box.max.z}}}}};
        emit(f, dump(artifact("ingest", f.stl, lm.mesh, cfg, &lm.diagnostics, std::move(payload))));
        return 0;
    }
    if (name == "map" || name == "continuity" || name == "segment") {
        const PipelineConfig cfg = build_config(f, nullptr);
        const LoadedMesh lm = load_input(f, cfg);
        const Stage until = name == "map" ? Stage::Map : name == "continuity" ? Stage::Continuity : Stage::Segmentation;
        const PipelineResult r = run_pipeline(lm.mesh, cfg, until);
        OrderedJson payload;
        if (name == "map") {
            payload = map_document_json(r.map);
            if (!f.ply.empty()) {
                write_file(f.ply, export_colored_mesh(lm.mesh, r.indicators.kappa));
            }
        } else if (name == "continuity") {
            payload = continuity_document_json(r, cfg);
            if (!f.ply.empty()) {
                std::size_t d = 0;
                double best = 1e300;
                for (std::size_t k = 0; k < r.profile.directions.size(); ++k) {
                    const double gap = std::abs(r.profile.directions[k].angle_deg - f.ply_direction);
                    if (gap < best) {
                        best = gap;
                        d = k;
                    }
                }
                std::vector<double> rho(lm.mesh.facet_count());
                for (std::size_t i = 0; i < rho.size(); ++i) {
                    rho[i] = r.profile.rho(i, d);
                }
                write_file(f.ply, export_colored_mesh(lm.mesh, rho));
            }
        } else {
            payload = segmentation_document_json(r.segmentation, r.profile);
            if (!f.ply.empty()) {
                std::vector<Rgb> colors(lm.mesh.facet_count(), Rgb{128, 128, 128});
                for (const auto& g : r.segmentation.features) {
                    for (FacetId fid : g.facets) {
                        colors[fid] = palette_color(g.id);
                    }
                }
                write_file(f.ply, export_colored_mesh(lm.mesh, colors));
            }
        }
        const std::string stage = name == "segment" ? "segmentation" : name;
        emit(f, dump(artifact(stage, f.stl, lm.mesh, cfg, &lm.diagnostics, std::move(payload))));
        return 0;
    }
    if (name == "associate") {
        std::optional<json> seg;
        if (!f.segmentation.empty()) {
            seg = upstream(f.segmentation, "segmentation", "segmentation");
            if (f.stl.empty()) {
                f.stl = seg->at("inputs").value("stl", "");
            }
        }
        const PipelineConfig cfg = build_config(f, seg ? &seg->at("inputs").at("config") : nullptr);
        const LoadedMesh lm = load_input(f, cfg);
        const PipelineResult r = run_pipeline(lm.mesh, cfg, Stage::Association);
        if (seg) {
            verify(*seg, lm.mesh, segmentation_document_json(r.segmentation, r.profile), "segmentation");
        }
        emit(f, dump(artifact("association", f.stl, lm.mesh, cfg, nullptr,
                              association_document_json(r.association, cfg))));
        return 0;
    }
    if (name == "plan") {
        if (f.associations.empty()) {
            throw Error(ErrorCode::MissingArtifact,
                        "missing associations: run 'associate' first and pass its output with --associations");
        }
        const json assoc = upstream(f.associations, "association", "associations");
        if (f.stl.empty()) {
            f.stl = assoc.at("inputs").value("stl", "");
        }
        const PipelineConfig cfg = build_config(f, &assoc.at("inputs").at("config"));
        const LoadedMesh lm = load_input(f, cfg);
        const PipelineResult r = run_pipeline(lm.mesh, cfg, Stage::Plan);
        verify(assoc, lm.mesh, association_document_json(r.association, cfg), "association");
        emit(f, dump(plan_document_json(lm.mesh, r, cfg)));
        return 0;
    }
    if (name == "serve") {
        ServiceOptions opts;
        opts.default_config = build_config(f, nullptr);
        if (!f.store.empty()) {
            opts.store_dir = f.store;
        }
        Service service(std::move(opts));
        const int port = f.port > 0 ? f.port : default_port();
        std::cerr << "dieplan service on http://" << f.host << ":" << port << " (" << service.session_count()
                  << " stored sessions)\n";
        service.serve(f.host, port);
        return 0;
    }
    throw Error(ErrorCode::InvalidArgument, "unknown subcommand '" + name + "'");
}

void report(ErrorCode code, std::string_view message) { std::cerr << error_body(code, message); }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Forging-die feature decomposition and finishing process planning"};
    app.set_version_flag("--version", "dieplan 0.1.0");
    app.require_subcommand(1);
    Flags f;

    auto add_model_flags = [&f](CLI::App* sub, bool stl_required) {
        auto* stl = sub->add_option("stl", f.stl, "STL model of the die");
        if (stl_required) {
            stl->required();
        }
        sub->add_option("--config", f.config_file, "JSON config file (any subset of the config sections)");
        sub->add_option("--tau-draft", f.tau_draft, "draft threshold on omega (default 0.15)");
        sub->add_option("--tau-flat", f.tau_flat, "flat threshold on omega (default 0.8)");
        sub->add_option("--axis", f.axis, "tool axis as x,y,z (default 0,0,1)");
        sub->add_option("--directions", f.directions, "feed directions start:stop:step in degrees (default 0:90:10)");
        sub->add_option("--min-region-area", f.min_region_area, "area fraction below which regions merge (default 0.01)");
        sub->add_option("--d-prox", f.d_prox, "proximity distance in mm (default: largest tool diameter)");
        sub->add_option("--merge", f.merge, "merge two adjacent features: a,b (repeatable)");
        sub->add_option("--split", f.split, "split a feature into its contact-class components (repeatable)");
        sub->add_option("--tools", f.tools_file, "tool library JSON");
        sub->add_option("--tech", f.tech_file, "technological data JSON");
        sub->add_option("--single-tool", f.single_tool, "'corner-only' or a tool id for every feature ('none' clears)");
        sub->add_option("--order-by", f.order_by, "sequence ordering: tool or z")->check(CLI::IsMember({"tool", "z"}));
        sub->add_option("--out,-o", f.out, "output file (default stdout)");
    };

    auto* ingest = app.add_subcommand("ingest", "load and clean an STL model, report diagnostics");
    add_model_flags(ingest, true);
    auto* map = app.add_subcommand("map", "contact map (omega, kappa, contact class per facet)");
    add_model_flags(map, true);
    map->add_option("--ply", f.ply, "PLY coloured by kappa");
    auto* continuity = app.add_subcommand("continuity", "feed-direction continuity residuals");
    add_model_flags(continuity, true);
    continuity->add_option("--ply", f.ply, "PLY coloured by the residual of one direction");
    continuity->add_option("--ply-direction", f.ply_direction, "direction shown in the PLY (degrees)");
    auto* segment = app.add_subcommand("segment", "geometric features, relations and containment waivers");
    add_model_flags(segment, true);
    segment->add_option("--ply", f.ply, "PLY coloured by feature");
    auto* associate = app.add_subcommand("associate", "tool and strategy per machining feature");
    add_model_flags(associate, false);
    associate->add_option("--segmentation", f.segmentation, "segmentation artifact to check against");
    auto* plan = app.add_subcommand("plan", "ordered machining process");
    add_model_flags(plan, false);
    plan->add_option("--associations", f.associations, "association artifact (required)");
    auto* serve = app.add_subcommand("serve", "HTTP service for the map studio");
    serve->add_option("--config", f.config_file, "JSON config file used for new sessions");
    serve->add_option("--host", f.host, "bind address");
    serve->add_option("--port", f.port, "port (default $DIEPLAN_PORT or 8080)");
    serve->add_option("--store", f.store, "directory holding one JSON bundle per session");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        report(ErrorCode::InvalidArgument, e.what());
        return 2;
    }

    try {
        return run_stage(app.get_subcommands().front()->get_name(), f);
    } catch (const Error& e) {
        report(e.code(), e.what());
        return 1;
    } catch (const json::exception& e) {
        report(ErrorCode::Schema, e.what());
        return 1;
    } catch (const std::exception& e) {
        report(ErrorCode::Io, e.what());
        return 1;
    }
}
