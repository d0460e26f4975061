#include "dieplan/shapes.hpp"

#include <cmath>
#include <numbers>

#include "dieplan/error.hpp"

namespace dieplan::shapes {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

using Profile = std::vector<std::array<double, 2>>;

void quad(std::vector<std::array<VertexId, 3>>& facets, VertexId a, VertexId b, VertexId c, VertexId d) {
    facets.push_back({a, b, c});
    facets.push_back({a, c, d});
}

void append_line(Profile& out, std::array<double, 2> to, double max_edge) {
    const auto from = out.back();
    const double len = std::hypot(to[0] - from[0], to[1] - from[1]);
    const auto n = static_cast<std::size_t>(std::max(1.0, std::ceil(len / max_edge - 1e-9)));
    for (std::size_t k = 1; k <= n; ++k) {
        const double t = static_cast<double>(k) / static_cast<double>(n);
        out.push_back({from[0] + (to[0] - from[0]) * t, from[1] + (to[1] - from[1]) * t});
    }
}

/// Polyline through `corners` with circular fillets of `radii[i]` at interior corner i (0 = sharp).
Profile filleted_polyline(const Profile& corners, const std::vector<double>& radii, double arc_step_deg,
                          double max_edge) {
    Profile out{corners.front()};
    for (std::size_t i = 1; i + 1 < corners.size(); ++i) {
        const auto& p = corners[i - 1];
        const auto& c = corners[i];
        const auto& q = corners[i + 1];
        const double r = radii[i];
        if (r <= 0.0) {
            append_line(out, c, max_edge);
            continue;
        }
        double u[2] = {c[0] - p[0], c[1] - p[1]};
        double v[2] = {q[0] - c[0], q[1] - c[1]};
        const double lu = std::hypot(u[0], u[1]);
        const double lv = std::hypot(v[0], v[1]);
        u[0] /= lu, u[1] /= lu, v[0] /= lv, v[1] /= lv;
        const double turn = std::atan2(u[0] * v[1] - u[1] * v[0], u[0] * v[0] + u[1] * v[1]);
        const double d = r * std::tan(std::abs(turn) / 2.0);
        const std::array<double, 2> t1{c[0] - u[0] * d, c[1] - u[1] * d};
        append_line(out, t1, max_edge);
        const double side = turn > 0.0 ? 1.0 : -1.0;
        const double centre[2] = {t1[0] - u[1] * r * side, t1[1] + u[0] * r * side};
        const double a0 = std::atan2(t1[1] - centre[1], t1[0] - centre[0]);
        const auto steps =
            static_cast<std::size_t>(std::max(1.0, std::ceil(std::abs(turn) / (arc_step_deg * kDeg) - 1e-9)));
        for (std::size_t k = 1; k <= steps; ++k) {
            const double a = a0 + turn * static_cast<double>(k) / static_cast<double>(steps);
            out.push_back({centre[0] + r * std::cos(a), centre[1] + r * std::sin(a)});
        }
    }
    append_line(out, corners.back(), max_edge);
    return out;
}

}  // namespace

TriMesh plane_grid(double size_x, double size_y, std::size_t nx, std::size_t ny, double z) {
    if (nx == 0 || ny == 0) {
        throw Error(ErrorCode::InvalidArgument, "plane grid needs at least one cell");
    }
    std::vector<Vec3> verts;
    for (std::size_t j = 0; j <= ny; ++j) {
        for (std::size_t i = 0; i <= nx; ++i) {
            verts.push_back({size_x * static_cast<double>(i) / static_cast<double>(nx),
                             size_y * static_cast<double>(j) / static_cast<double>(ny), z});
        }
    }
    std::vector<std::array<VertexId, 3>> facets;
    const auto id = [nx](std::size_t i, std::size_t j) { return static_cast<VertexId>(j * (nx + 1) + i); };
    for (std::size_t j = 0; j < ny; ++j) {
        for (std::size_t i = 0; i < nx; ++i) {
            quad(facets, id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1));
        }
    }
    return TriMesh::from_indexed(std::move(verts), std::move(facets));
}

TriMesh revolve(const std::vector<std::array<double, 2>>& profile, std::size_t segments) {
    if (profile.size() < 2 || segments < 3) {
        throw Error(ErrorCode::InvalidArgument, "revolve needs two profile points and three segments");
    }
    std::vector<Vec3> verts;
    std::vector<VertexId> ring_start;
    for (std::size_t i = 0; i < profile.size(); ++i) {
        const auto [r, z] = profile[i];
        ring_start.push_back(static_cast<VertexId>(verts.size()));
        if (r <= 0.0) {
            if (i + 1 != profile.size()) {
                throw Error(ErrorCode::InvalidArgument, "only the last profile point may lie on the axis");
            }
            verts.push_back({0.0, 0.0, z});
            continue;
        }
        for (std::size_t j = 0; j < segments; ++j) {
            const double t = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(segments);
            verts.push_back({r * std::cos(t), r * std::sin(t), z});
        }
    }
    std::vector<std::array<VertexId, 3>> facets;
    for (std::size_t i = 0; i + 1 < profile.size(); ++i) {
        const bool apex = profile[i + 1][0] <= 0.0;
        for (std::size_t j = 0; j < segments; ++j) {
            const std::size_t jn = (j + 1) % segments;
            const VertexId a = ring_start[i] + static_cast<VertexId>(j);
            const VertexId b = ring_start[i] + static_cast<VertexId>(jn);
            if (apex) {
                facets.push_back({a, b, ring_start[i + 1]});
            } else {
                quad(facets, a, b, ring_start[i + 1] + static_cast<VertexId>(jn),
                     ring_start[i + 1] + static_cast<VertexId>(j));
            }
        }
    }
    return TriMesh::from_indexed(std::move(verts), std::move(facets));
}

TriMesh cylinder_wall(double radius, double height, std::size_t segments, std::size_t rings) {
    Profile p;
    for (std::size_t k = 0; k <= rings; ++k) {
        p.push_back({radius, height * static_cast<double>(k) / static_cast<double>(rings)});
    }
    return revolve(p, segments);
}

TriMesh cone_band(double base_radius, double height, double normal_tilt_deg, std::size_t segments, std::size_t rings) {
    const double inward = height / std::tan(normal_tilt_deg * kDeg);
    if (inward >= base_radius) {
        throw Error(ErrorCode::InvalidArgument, "cone band would cross the axis");
    }
    Profile p;
    for (std::size_t k = 0; k <= rings; ++k) {
        const double t = static_cast<double>(k) / static_cast<double>(rings);
        p.push_back({base_radius - inward * t, height * t});
    }
    return revolve(p, segments);
}

TriMesh hemisphere(double radius, double step_deg) {
    const auto rings = static_cast<std::size_t>(std::lround(90.0 / step_deg));
    const auto segments = static_cast<std::size_t>(std::lround(360.0 / step_deg));
    Profile p;
    for (std::size_t k = 0; k <= rings; ++k) {
        const double polar = (90.0 - step_deg * static_cast<double>(k)) * kDeg;
        p.push_back({k == rings ? 0.0 : radius * std::sin(polar), radius * std::cos(polar)});
    }
    return revolve(p, segments);
}

TriMesh ramp(double azimuth_deg, double slope_deg, double size, std::size_t n) {
    const TriMesh flat = plane_grid(size, size, n, n);
    const Vec3 centre{size / 2.0, size / 2.0, 0.0};
    const double az = azimuth_deg * kDeg;
    return transformed(transformed(flat, {0, 0, 1}, 0.0, -centre), {-std::sin(az), std::cos(az), 0.0},
                       slope_deg * kDeg);
}

TriMesh unit_cube() {
    std::vector<Vec3> v;
    for (int k = 0; k < 8; ++k) {
        v.push_back({double(k & 1), double((k >> 1) & 1), double((k >> 2) & 1)});
    }
    std::vector<std::array<VertexId, 3>> f;
    quad(f, 0, 2, 3, 1);  // z = 0, facing -Z
    quad(f, 4, 5, 7, 6);  // z = 1
    quad(f, 0, 1, 5, 4);  // y = 0
    quad(f, 2, 6, 7, 3);  // y = 1
    quad(f, 0, 4, 6, 2);  // x = 0
    quad(f, 1, 3, 7, 5);  // x = 1
    return TriMesh::from_indexed(std::move(v), std::move(f));
}

TriMesh tetrahedron() {
    std::vector<Vec3> v{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    std::vector<std::array<VertexId, 3>> f{{0, 2, 1}, {0, 1, 3}, {0, 3, 2}, {1, 2, 3}};
    return TriMesh::from_indexed(std::move(v), std::move(f));
}

TriMesh planar_fan(std::size_t n, double radius) {
    if (n == 0) {
        throw Error(ErrorCode::InvalidArgument, "fan needs at least one triangle");
    }
    // Spread over 300 degrees so the fan never closes on itself.
    std::vector<Vec3> v{{0, 0, 0}};
    for (std::size_t k = 0; k <= n; ++k) {
        const double t = 300.0 * kDeg * static_cast<double>(k) / static_cast<double>(n);
        v.push_back({radius * std::cos(t), radius * std::sin(t), 0.0});
    }
    std::vector<std::array<VertexId, 3>> f;
    for (std::size_t k = 0; k < n; ++k) {
        f.push_back({0, static_cast<VertexId>(k + 1), static_cast<VertexId>(k + 2)});
    }
    return TriMesh::from_indexed(std::move(v), std::move(f));
}

TriMesh pocket_block(double size, double pocket, double depth, double draft_deg) {
    const double h = size / 2.0;
    const double p = pocket / 2.0;
    const double q = p - depth * std::tan(draft_deg * kDeg);
    if (!(q > 0.0 && p < h)) {
        throw Error(ErrorCode::InvalidArgument, "pocket does not fit the block");
    }
    std::vector<Vec3> v{{-h, -h, 0}, {h, -h, 0},  {h, h, 0},  {-h, h, 0},            // outer top
                        {-p, -p, 0}, {p, -p, 0},  {p, p, 0},  {-p, p, 0},            // pocket rim
                        {-q, -q, -depth}, {q, -q, -depth}, {q, q, -depth}, {-q, q, -depth}};  // floor
    std::vector<std::array<VertexId, 3>> f;
    for (VertexId k = 0; k < 4; ++k) {
        const VertexId n = (k + 1) % 4;
        quad(f, k, n, 4 + n, 4 + k);      // top ring
        quad(f, 4 + k, 4 + n, 8 + n, 8 + k);  // drafted wall
    }
    quad(f, 8, 9, 10, 11);
    return TriMesh::from_indexed(std::move(v), std::move(f));
}

TriMesh synthetic_die(const DieParams& d) {
    const double t = std::tan(d.draft_deg * kDeg);
    const double flank_top = d.pocket_radius + (d.top - d.bottom) * t;
    const double neck_foot = d.dome_radius + (d.dome_center - d.bottom) * t;
    if (!(flank_top + d.edge_fillet < d.outer_radius && neck_foot + d.foot_fillet + d.floor_fillet < d.pocket_radius &&
          d.dome_center > d.bottom && d.dome_center + d.dome_radius < d.top)) {
        throw Error(ErrorCode::InvalidArgument, "die parameters do not describe a valid cavity");
    }
    const Profile corners{{d.outer_radius, d.top},
                          {flank_top, d.top},
                          {d.pocket_radius, d.bottom},
                          {neck_foot, d.bottom},
                          {d.dome_radius, d.dome_center}};
    Profile p = filleted_polyline(corners, {0.0, d.edge_fillet, d.floor_fillet, d.foot_fillet, 0.0}, d.arc_step_deg,
                                  d.max_edge);
    const auto steps = static_cast<std::size_t>(std::ceil(90.0 / d.arc_step_deg - 1e-9));
    for (std::size_t k = 1; k <= steps; ++k) {
        const double polar = (90.0 - 90.0 * static_cast<double>(k) / static_cast<double>(steps)) * kDeg;
        p.push_back({k == steps ? 0.0 : d.dome_radius * std::sin(polar), d.dome_center + d.dome_radius * std::cos(polar)});
    }
    return revolve(p, d.segments);
}

std::vector<RawTriangle> to_triangles(const TriMesh& mesh) {
    std::vector<RawTriangle> out;
    out.reserve(mesh.facet_count());
    for (FacetId f = 0; f < mesh.facet_count(); ++f) {
        out.push_back({mesh.corners(f), mesh.facet_normals()[f]});
    }
    return out;
}

TriMesh transformed(const TriMesh& mesh, const Vec3& axis, double angle, const Vec3& translation) {
    const Vec3 u = normalized(axis);
    std::vector<Vec3> verts;
    verts.reserve(mesh.vertex_count());
    for (const Vec3& p : mesh.vertices()) {
        verts.push_back((angle == 0.0 ? p : rotate(p, u, angle)) + translation);
    }
    const auto f = mesh.facets();
    return TriMesh::from_indexed(std::move(verts), {f.begin(), f.end()});
}

}  // namespace dieplan::shapes
