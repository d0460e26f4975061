#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "dieplan/mesh.hpp"

namespace dieplan {

enum class StlFormat { Binary, Text };

/// Detects binary vs text STL and returns the raw triangles.
/// Binary wins whenever the byte count matches 84 + 50 * n, even with a "solid" header.
std::vector<RawTriangle> parse_stl(std::string_view bytes, StlFormat* detected = nullptr);

LoadedMesh load_stl(const std::filesystem::path& path, const CleaningOptions& cleaning = {});
LoadedMesh load_stl_bytes(std::string_view bytes, const CleaningOptions& cleaning = {});

std::string write_stl_text(const TriMesh& mesh, std::string_view name = "dieplan");
std::string write_stl_binary(const TriMesh& mesh);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace dieplan
