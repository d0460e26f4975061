#include "dieplan/ply.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "dieplan/error.hpp"

namespace dieplan {

namespace {

constexpr std::array<std::array<double, 3>, 5> kRainbowKnots{{
    {0.0, 0.0, 1.0},
    {0.0, 1.0, 1.0},
    {0.0, 1.0, 0.0},
    {1.0, 1.0, 0.0},
    {1.0, 0.0, 0.0},
}};

constexpr std::array<Rgb, 12> kPalette{{
    {31, 119, 180},
    {255, 127, 14},
    {44, 160, 44},
    {214, 39, 40},
    {148, 103, 189},
    {140, 86, 75},
    {227, 119, 194},
    {127, 127, 127},
    {188, 189, 34},
    {23, 190, 207},
    {174, 199, 232},
    {255, 187, 120},
}};

std::uint8_t to_byte(double c) { return static_cast<std::uint8_t>(std::lround(std::clamp(c, 0.0, 1.0) * 255.0)); }

void append_double(std::string& out, double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    out.append(buf, ptr);
}

}  // namespace

ColorScale parse_color_scale(std::string_view name) {
    if (name == "rainbow") {
        return ColorScale::Rainbow;
    }
    if (name == "gray" || name == "grey") {
        return ColorScale::Gray;
    }
    throw Error(ErrorCode::InvalidArgument, "unknown colour scale '" + std::string(name) + "'");
}

Rgb scale_color(ColorScale scale, double value) {
    const double t = std::isfinite(value) ? std::clamp(value, 0.0, 1.0) : 0.0;
    if (scale == ColorScale::Gray) {
        const auto g = to_byte(t);
        return {g, g, g};
    }
    const double pos = t * 4.0;
    const auto seg = std::min<std::size_t>(static_cast<std::size_t>(pos), 3);
    const double u = pos - static_cast<double>(seg);
    Rgb out{};
    for (int c = 0; c < 3; ++c) {
        out[c] = to_byte(kRainbowKnots[seg][c] * (1.0 - u) + kRainbowKnots[seg + 1][c] * u);
    }
    return out;
}

Rgb palette_color(std::size_t index) { return kPalette[index % kPalette.size()]; }

std::string export_colored_mesh(const TriMesh& mesh, std::span<const double> facet_scalars, ColorScale scale) {
    if (facet_scalars.size() != mesh.facet_count()) {
        throw Error(ErrorCode::InvalidArgument, "scalar count " + std::to_string(facet_scalars.size()) +
                                                    " does not match facet count " +
                                                    std::to_string(mesh.facet_count()));
    }
    std::vector<Rgb> colors;
    colors.reserve(facet_scalars.size());
    for (double s : facet_scalars) {
        colors.push_back(scale_color(scale, s));
    }
    return export_colored_mesh(mesh, colors);
}

std::string export_colored_mesh(const TriMesh& mesh, std::span<const Rgb> facet_colors) {
    if (facet_colors.size() != mesh.facet_count()) {
        throw Error(ErrorCode::InvalidArgument, "colour count " + std::to_string(facet_colors.size()) +
                                                    " does not match facet count " +
                                                    std::to_string(mesh.facet_count()));
    }
    std::string out;
    out += "ply\nformat ascii 1.0\ncomment dieplan colored mesh\n";
    out += "element vertex " + std::to_string(mesh.vertex_count()) + "\n";
    out += "property double x\nproperty double y\nproperty double z\n";
    out += "element face " + std::to_string(mesh.facet_count()) + "\n";
    out += "property list uchar int vertex_indices\n";
    out += "property uchar red\nproperty uchar green\nproperty uchar blue\n";
    out += "end_header\n";
    for (const Vec3& p : mesh.vertices()) {
        append_double(out, p.x);
        out += ' ';
        append_double(out, p.y);
        out += ' ';
        append_double(out, p.z);
        out += '\n';
    }
    for (FacetId f = 0; f < mesh.facet_count(); ++f) {
        const auto& t = mesh.facets()[f];
        const Rgb c = facet_colors[f];
        out += "3 " + std::to_string(t[0]) + ' ' + std::to_string(t[1]) + ' ' + std::to_string(t[2]) + ' ' +
               std::to_string(c[0]) + ' ' + std::to_string(c[1]) + ' ' + std::to_string(c[2]) + '\n';
    }
    return out;
}

PlyMesh read_ply(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t vertex_count = 0;
    std::size_t face_count = 0;
    if (!std::getline(in, line) || line != "ply") {
        throw Error(ErrorCode::Format, "PLY: missing magic");
    }
    while (std::getline(in, line) && line != "end_header") {
        std::istringstream ls(line);
        std::string kw, kind;
        ls >> kw;
        if (kw == "format" && line != "format ascii 1.0") {
            throw Error(ErrorCode::Format, "PLY: only ascii 1.0 is supported");
        }
        if (kw == "element") {
            std::size_t n = 0;
            ls >> kind >> n;
            (kind == "vertex" ? vertex_count : face_count) = n;
        }
    }
    std::vector<Vec3> vertices(vertex_count);
    for (auto& p : vertices) {
        if (!(in >> p.x >> p.y >> p.z)) {
            throw Error(ErrorCode::Format, "PLY: truncated vertex list");
        }
    }
    std::vector<std::array<VertexId, 3>> facets(face_count);
    std::vector<Rgb> colors(face_count);
    for (std::size_t f = 0; f < face_count; ++f) {
        int n = 0;
        int r = 0, g = 0, b = 0;
        if (!(in >> n) || n != 3 || !(in >> facets[f][0] >> facets[f][1] >> facets[f][2] >> r >> g >> b)) {
            throw Error(ErrorCode::Format, "PLY: malformed face " + std::to_string(f));
        }
        for (VertexId v : facets[f]) {
            if (v >= vertex_count) {
                throw Error(ErrorCode::Format, "PLY: face " + std::to_string(f) + " references missing vertex");
            }
        }
        colors[f] = {static_cast<std::uint8_t>(r), static_cast<std::uint8_t>(g), static_cast<std::uint8_t>(b)};
    }
    return {TriMesh::from_indexed(std::move(vertices), std::move(facets)), std::move(colors)};
}

}  // namespace dieplan
