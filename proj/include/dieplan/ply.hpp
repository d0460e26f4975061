#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>

#include "dieplan/mesh.hpp"

namespace dieplan {

using Rgb = std::array<std::uint8_t, 3>;

enum class ColorScale {
    Rainbow,  // blue -> cyan -> green -> yellow -> red, knots at 0, .25, .5, .75, 1
    Gray,     // black -> white
};

ColorScale parse_color_scale(std::string_view name);

/// Colour of `value` (clamped to [0,1]); channels are round(255 * c).
Rgb scale_color(ColorScale scale, double value);

/// Fixed 12-entry palette cycled by feature id.
Rgb palette_color(std::size_t index);

/// ASCII PLY with double vertices and per-face uchar red/green/blue.
std::string export_colored_mesh(const TriMesh& mesh, std::span<const double> facet_scalars,
                                ColorScale scale = ColorScale::Rainbow);
std::string export_colored_mesh(const TriMesh& mesh, std::span<const Rgb> facet_colors);

struct PlyMesh {
    TriMesh mesh;
    std::vector<Rgb> face_colors;
};

/// Reads the ASCII PLY layout written by `export_colored_mesh`.
PlyMesh read_ply(std::string_view text);

}  // namespace dieplan
