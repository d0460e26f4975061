#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <nlohmann/json.hpp>

#include "dieplan/error.hpp"
#include "dieplan/serialize.hpp"
#include "dieplan/shapes.hpp"
#include "dieplan/stl_io.hpp"

namespace py = pybind11;
using namespace dieplan;

namespace {

// Owned by the module attribute; kept for the translator, which cannot capture.
PyObject* error_type = nullptr;

PipelineConfig config_of(const std::string& config_json) {
    if (config_json.empty()) {
        return {};
    }
    try {
        return config_from_json(nlohmann::json::parse(config_json));
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorCode::Schema, std::string("config: ") + e.what());
    }
}

TriMesh from_arrays(py::array_t<double, py::array::c_style | py::array::forcecast> vertices,
                    py::array_t<std::int64_t, py::array::c_style | py::array::forcecast> facets) {
    if (vertices.ndim() != 2 || vertices.shape(1) != 3 || facets.ndim() != 2 || facets.shape(1) != 3) {
        throw Error(ErrorCode::InvalidArgument, "expected vertices (n, 3) and facets (m, 3)");
    }
    const auto v = vertices.unchecked<2>();
    const auto f = facets.unchecked<2>();
    std::vector<Vec3> verts;
    verts.reserve(v.shape(0));
    for (py::ssize_t i = 0; i < v.shape(0); ++i) {
        verts.push_back({v(i, 0), v(i, 1), v(i, 2)});
    }
    std::vector<std::array<VertexId, 3>> tris;
    tris.reserve(f.shape(0));
    for (py::ssize_t i = 0; i < f.shape(0); ++i) {
        std::array<VertexId, 3> t{};
        for (int k = 0; k < 3; ++k) {
            if (f(i, k) < 0 || f(i, k) >= v.shape(0)) {
                throw Error(ErrorCode::InvalidArgument, "facet " + std::to_string(i) + " references a missing vertex");
            }
            t[k] = static_cast<VertexId>(f(i, k));
        }
        tris.push_back(t);
    }
    return TriMesh::from_indexed(std::move(verts), std::move(tris));
}

py::array_t<double> vec_array(std::span<const Vec3> vs) {
    py::array_t<double> out({static_cast<py::ssize_t>(vs.size()), py::ssize_t{3}});
    auto o = out.mutable_unchecked<2>();
    for (std::size_t i = 0; i < vs.size(); ++i) {
        o(i, 0) = vs[i].x;
        o(i, 1) = vs[i].y;
        o(i, 2) = vs[i].z;
    }
    return out;
}

template <typename T>
py::array_t<T> to_array(const std::vector<T>& v) {
    return py::array_t<T>(static_cast<py::ssize_t>(v.size()), v.data());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Contact maps, feature segmentation and finishing plans for forging-die meshes";

    error_type = py::exception<Error>(m, "DieplanError", PyExc_ValueError).release().ptr();
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) {
                std::rethrow_exception(p);
            }
        } catch (const Error& e) {
            const auto type = py::reinterpret_borrow<py::object>(error_type);
            py::object exc = type(py::str(std::string(to_string(e.code())) + ": " + e.what()));
            exc.attr("code") = std::string(to_string(e.code()));
            PyErr_SetObject(error_type, exc.ptr());
        }
    });

    py::class_<TriMesh>(m, "Mesh")
        .def(py::init(&from_arrays), py::arg("vertices"), py::arg("facets"))
        .def_static(
            "from_stl_bytes", [](py::bytes data) { return load_stl_bytes(std::string(data)).mesh; }, py::arg("data"))
        .def_static(
            "from_stl", [](const std::string& path) { return load_stl(path).mesh; }, py::arg("path"))
        .def_property_readonly("facet_count", &TriMesh::facet_count)
        .def_property_readonly("vertex_count", &TriMesh::vertex_count)
        .def_property_readonly("vertices", [](const TriMesh& t) { return vec_array(t.vertices()); })
        .def_property_readonly("facets",
                               [](const TriMesh& t) {
                                   py::array_t<std::uint32_t> out(
                                       {static_cast<py::ssize_t>(t.facet_count()), py::ssize_t{3}});
                                   auto o = out.mutable_unchecked<2>();
                                   for (std::size_t i = 0; i < t.facet_count(); ++i) {
                                       for (int k = 0; k < 3; ++k) {
                                           o(i, k) = t.facets()[i][k];
                                       }
                                   }
                                   return out;
                               })
        .def_property_readonly("normals", [](const TriMesh& t) { return vec_array(t.facet_normals()); })
        .def_property_readonly("areas",
                               [](const TriMesh& t) {
                                   return to_array(std::vector<double>(t.facet_areas().begin(), t.facet_areas().end()));
                               })
        .def_property_readonly("fingerprint", [](const TriMesh& t) { return hex64(mesh_fingerprint(t)); })
        .def("to_stl_bytes", [](const TriMesh& t) { return py::bytes(write_stl_binary(t)); })
        .def("__repr__", [](const TriMesh& t) {
            return "<dieplan.Mesh " + std::to_string(t.facet_count()) + " facets>";
        });

    m.def(
        "indicators",
        [](const TriMesh& mesh, const std::string& config_json) {
            const auto cfg = config_of(config_json);
            const auto doc = run_contact_map(mesh, cfg);
            std::vector<std::int8_t> cls;
            for (auto c : doc.indicators.contact_class) {
                cls.push_back(static_cast<std::int8_t>(c));
            }
            py::dict out;
            out["omega"] = to_array(doc.indicators.omega);
            out["kappa"] = to_array(doc.indicators.kappa);
            out["contact_class"] = to_array(cls);
            return out;
        },
        py::arg("mesh"), py::arg("config_json") = "",
        "Per-facet omega, kappa and contact class (0 flat, 1 draft, 2 transition, 3 undercut).");

    auto stage_doc = [](Stage until) {
        return [until](const TriMesh& mesh, const std::string& config_json) {
            const auto cfg = config_of(config_json);
            py::gil_scoped_release release;
            const auto r = run_pipeline(mesh, cfg, until);
            switch (until) {
                case Stage::Map: return dump(map_document_json(r.map));
                case Stage::Continuity: return dump(continuity_document_json(r, cfg));
                case Stage::Segmentation: return dump(segmentation_document_json(r.segmentation, r.profile));
                case Stage::Association: return dump(association_document_json(r.association, cfg));
                case Stage::Plan: return dump(plan_document_json(mesh, r, cfg));
            }
            return std::string();
        };
    };
    m.def("contact_map_json", stage_doc(Stage::Map), py::arg("mesh"), py::arg("config_json") = "");
    m.def("continuity_json", stage_doc(Stage::Continuity), py::arg("mesh"), py::arg("config_json") = "");
    m.def("segmentation_json", stage_doc(Stage::Segmentation), py::arg("mesh"), py::arg("config_json") = "");
    m.def("association_json", stage_doc(Stage::Association), py::arg("mesh"), py::arg("config_json") = "");
    m.def("plan_json", stage_doc(Stage::Plan), py::arg("mesh"), py::arg("config_json") = "");

    m.def(
        "default_config_json", [] { return dump(config_to_json(PipelineConfig{})); },
        "Every config section with its default value.");

    m.def(
        "compute_pitch",
        [](const std::string& tip_type, double diameter, double corner_radius, double scallop_um) {
            CuttingTool t{"tool", parse_tip_type(tip_type), diameter, corner_radius, 4 * diameter, 3 * diameter, ""};
            validate(t);
            return compute_pitch(t, scallop_um);
        },
        py::arg("tip_type"), py::arg("diameter"), py::arg("corner_radius"), py::arg("scallop_um"),
        "Step-over in mm leaving the given scallop height.");

    m.def(
        "synthetic_die",
        [](std::size_t segments, double arc_step_deg) {
            shapes::DieParams p;
            p.segments = segments;
            p.arc_step_deg = arc_step_deg;
            return shapes::synthetic_die(p);
        },
        py::arg("segments") = 180, py::arg("arc_step_deg") = 5.0, "Benchmark forging-die mesh.");

#ifdef DIEPLAN_VERSION
    m.attr("__version__") = DIEPLAN_VERSION;
#else
    m.attr("__version__") = "dev";
#endif
}
