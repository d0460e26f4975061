#include "dieplan/stl_io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstring>
#include <fstream>
#include <sstream>

#include "dieplan/error.hpp"

namespace dieplan {

namespace {

constexpr std::size_t kHeaderSize = 80;
constexpr std::size_t kRecordSize = 50;

float read_f32(const char* p) {
    float v;
    std::memcpy(&v, p, sizeof v);
    return v;
}

std::uint32_t read_u32(const char* p) {
    std::uint32_t v;
    std::memcpy(&v, p, sizeof v);
    return v;
}

bool binary_size_matches(std::string_view bytes) {
    if (bytes.size() < kHeaderSize + 4) {
        return false;
    }
    const std::uint64_t n = read_u32(bytes.data() + kHeaderSize);
    return bytes.size() == kHeaderSize + 4 + n * kRecordSize;
}

std::vector<RawTriangle> parse_binary(std::string_view bytes) {
    const std::uint32_t n = read_u32(bytes.data() + kHeaderSize);
    std::vector<RawTriangle> out;
    out.reserve(n);
    const char* p = bytes.data() + kHeaderSize + 4;
    for (std::uint32_t i = 0; i < n; ++i, p += kRecordSize) {
        RawTriangle t;
        t.stored_normal = {read_f32(p), read_f32(p + 4), read_f32(p + 8)};
        for (int k = 0; k < 3; ++k) {
            const char* q = p + 12 + 12 * k;
            t.corners[k] = {read_f32(q), read_f32(q + 4), read_f32(q + 8)};
        }
        out.push_back(t);
    }
    return out;
}

class TextCursor {
public:
    explicit TextCursor(std::string_view s) : s_(s) {}

    std::string_view word() {
        skip_space();
        const std::size_t start = pos_;
        while (pos_ < s_.size() && !std::isspace(static_cast<unsigned char>(s_[pos_]))) {
            ++pos_;
        }
        return s_.substr(start, pos_ - start);
    }

    void skip_line() {
        while (pos_ < s_.size() && s_[pos_] != '\n') {
            ++pos_;
        }
    }

    double number() {
        const std::string_view w = word();
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(w.data(), w.data() + w.size(), v);
        if (ec != std::errc{} || ptr != w.data() + w.size()) {
            throw Error(ErrorCode::Format, "text STL: expected number at offset " + std::to_string(pos_) +
                                               ", got '" + std::string(w) + "'");
        }
        return v;
    }

    void expect(std::string_view keyword) {
        const std::string_view w = word();
        if (w != keyword) {
            throw Error(ErrorCode::Format, "text STL: expected '" + std::string(keyword) + "' at offset " +
                                               std::to_string(pos_) + ", got '" + std::string(w) + "'");
        }
    }

    bool at_end() {
        skip_space();
        return pos_ >= s_.size();
    }

private:
    void skip_space() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) {
            ++pos_;
        }
    }

    std::string_view s_;
    std::size_t pos_ = 0;
};

std::vector<RawTriangle> parse_text(std::string_view bytes) {
    TextCursor cur(bytes);
    cur.expect("solid");
    cur.skip_line();
    std::vector<RawTriangle> out;
    while (true) {
        if (cur.at_end()) {
            throw Error(ErrorCode::Format, "text STL: missing 'endsolid'");
        }
        const std::string_view w = cur.word();
        if (w == "endsolid") {
            break;
        }
        if (w != "facet") {
            throw Error(ErrorCode::Format, "text STL: expected 'facet', got '" + std::string(w) + "'");
        }
        RawTriangle t;
        cur.expect("normal");
        const double nx = cur.number();
        const double ny = cur.number();
        const double nz = cur.number();
        t.stored_normal = {nx, ny, nz};
        cur.expect("outer");
        cur.expect("loop");
        for (int k = 0; k < 3; ++k) {
            cur.expect("vertex");
            const double x = cur.number();
            const double y = cur.number();
            const double z = cur.number();
            t.corners[k] = {x, y, z};
        }
        cur.expect("endloop");
        cur.expect("endfacet");
        out.push_back(t);
    }
    return out;
}

bool starts_with_solid(std::string_view bytes) {
    std::size_t i = 0;
    while (i < bytes.size() && std::isspace(static_cast<unsigned char>(bytes[i]))) {
        ++i;
    }
    return bytes.substr(i, 5) == "solid";
}

void append_number(std::string& out, double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    out.append(buf, ptr);
}

}  // namespace

std::vector<RawTriangle> parse_stl(std::string_view bytes, StlFormat* detected) {
    if (binary_size_matches(bytes)) {
        if (detected) {
            *detected = StlFormat::Binary;
        }
        return parse_binary(bytes);
    }
    if (!starts_with_solid(bytes)) {
        throw Error(ErrorCode::Format, "unrecognised STL: no 'solid' header and size does not match a binary record count");
    }
    try {
        auto tris = parse_text(bytes);
        if (detected) {
            *detected = StlFormat::Text;
        }
        return tris;
    } catch (const Error& e) {
        throw Error(ErrorCode::Format, std::string("ambiguous STL header: starts with 'solid' but is neither valid text nor "
                                                   "size-consistent binary (") +
                                           e.what() + ")");
    }
}

LoadedMesh load_stl_bytes(std::string_view bytes, const CleaningOptions& cleaning) {
    const auto tris = parse_stl(bytes);
    return build_mesh(tris, cleaning);
}

LoadedMesh load_stl(const std::filesystem::path& path, const CleaningOptions& cleaning) {
    return load_stl_bytes(read_file(path), cleaning);
}

std::string write_stl_text(const TriMesh& mesh, std::string_view name) {
    std::string out = "solid " + std::string(name) + "\n";
    for (FacetId f = 0; f < mesh.facet_count(); ++f) {
        const Vec3 n = mesh.facet_normals()[f];
        out += "  facet normal ";
        append_number(out, n.x);
        out += ' ';
        append_number(out, n.y);
        out += ' ';
        append_number(out, n.z);
        out += "\n    outer loop\n";
        for (const Vec3& p : mesh.corners(f)) {
            out += "      vertex ";
            append_number(out, p.x);
            out += ' ';
            append_number(out, p.y);
            out += ' ';
            append_number(out, p.z);
            out += '\n';
        }
        out += "    endloop\n  endfacet\n";
    }
    out += "endsolid " + std::string(name) + "\n";
    return out;
}

std::string write_stl_binary(const TriMesh& mesh) {
    std::string out(kHeaderSize, '\0');
    const char header[] = "dieplan binary STL";
    std::memcpy(out.data(), header, sizeof header - 1);
    const auto n = static_cast<std::uint32_t>(mesh.facet_count());
    out.append(reinterpret_cast<const char*>(&n), 4);
    auto put = [&out](double v) {
        const auto f = static_cast<float>(v);
        out.append(reinterpret_cast<const char*>(&f), 4);
    };
    for (FacetId f = 0; f < n; ++f) {
        const Vec3 nrm = mesh.facet_normals()[f];
        put(nrm.x);
        put(nrm.y);
        put(nrm.z);
        for (const Vec3& p : mesh.corners(f)) {
            put(p.x);
            put(p.y);
            put(p.z);
        }
        out.append(2, '\0');
    }
    return out;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::Io, "cannot read file '" + path.string() + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error(ErrorCode::Io, "cannot write file '" + path.string() + "'");
    }
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
}

}  // namespace dieplan
