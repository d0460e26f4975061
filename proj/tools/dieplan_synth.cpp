// Writes the generated benchmark meshes as STL files.
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "dieplan/shapes.hpp"
#include "dieplan/stl_io.hpp"

using namespace dieplan;

int main(int argc, char** argv) {
    CLI::App app{"Write the generated benchmark meshes as STL files"};
    std::string out = ".";
    bool text = false;
    app.add_option("dir", out, "output directory");
    app.add_flag("--text", text, "ASCII STL instead of binary");
    CLI11_PARSE(app, argc, argv);
    const std::filesystem::path dir = out;
    std::filesystem::create_directories(dir);
    const std::pair<const char*, TriMesh> meshes[] = {
        {"synthetic_die.stl", shapes::synthetic_die()},
        {"plane.stl", shapes::plane_grid(80.0, 40.0, 40, 20)},
        {"cylinder_wall.stl", shapes::cylinder_wall(20.0, 30.0, 120, 15)},
        {"cone_band.stl", shapes::cone_band(30.0, 10.0, 45.0, 120, 10)},
        {"hemisphere.stl", shapes::hemisphere(20.0, 1.0)},
        {"ramp_30.stl", shapes::ramp(30.0, 70.0, 40.0, 20)},
        {"unit_cube.stl", shapes::unit_cube()},
    };
    for (const auto& [name, mesh] : meshes) {
        const auto path = dir / name;
        write_file(path, text ? write_stl_text(mesh, name) : write_stl_binary(mesh));
        std::cout << path.string() << ": " << mesh.facet_count() << " facets\n";
    }
    return 0;
}
