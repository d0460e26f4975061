#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "dieplan/mesh.hpp"

namespace dieplan::shapes {

/// Horizontal nx*ny grid of squares split in two, normal +Z.
TriMesh plane_grid(double size_x, double size_y, std::size_t nx, std::size_t ny, double z = 0.0);

/// Open vertical cylinder around +Z with outward normals.
TriMesh cylinder_wall(double radius, double height, std::size_t segments, std::size_t rings);

/// Open cone band whose outward normal makes `normal_tilt_deg` with +Z; the band spans heights [0, height].
TriMesh cone_band(double base_radius, double height, double normal_tilt_deg, std::size_t segments, std::size_t rings);

/// Upper hemisphere centred at the origin, polar and azimuth steps of `step_deg`.
TriMesh hemisphere(double radius, double step_deg = 1.0);

/// Square plane whose normal tilts `slope_deg` from +Z towards azimuth `azimuth_deg`.
TriMesh ramp(double azimuth_deg, double slope_deg, double size, std::size_t n);

TriMesh unit_cube();
TriMesh tetrahedron();

/// `n` triangles around a shared centre vertex (open fan, n >= 1).
TriMesh planar_fan(std::size_t n, double radius = 10.0);

/// Closed-top block with a rectangular pocket whose walls are drafted; coarse, for small-instance checks.
TriMesh pocket_block(double size, double pocket, double depth, double draft_deg);

/// Surface of revolution from a (radius, height) profile ordered outside-in; the last point may
/// sit on the axis, in which case it is closed by a fan. Normals face +Z on horizontal runs.
TriMesh revolve(const std::vector<std::array<double, 2>>& profile, std::size_t segments);

struct DieParams {
    double outer_radius = 95.0;
    double top = 40.0;              // parting plane height
    double bottom = 2.0;            // cavity floor height
    double pocket_radius = 60.0;    // flank foot radius
    double draft_deg = 5.0;
    double edge_fillet = 4.0;       // parting plane to flank, convex
    double floor_fillet = 1.0;      // flank to floor, concave
    double dome_radius = 22.0;
    double dome_center = 15.0;      // hemisphere centre height; the drafted neck runs floor -> centre
    double foot_fillet = 5.0;       // floor to neck, concave
    std::size_t segments = 180;
    double arc_step_deg = 5.0;
    double max_edge = 4.0;          // subdivision of straight profile runs
};

/// Forging-die benchmark: flat parting plane, filleted edge into a drafted flank, flat cavity floor,
/// and a central dome on a drafted neck.
TriMesh synthetic_die(const DieParams& params = {});

/// Facets as raw triangles carrying their normals (for writing or re-cleaning).
std::vector<RawTriangle> to_triangles(const TriMesh& mesh);

/// Applies `rotation` (Rodrigues about unit `axis` by `angle` radians) then `translation` to every vertex.
TriMesh transformed(const TriMesh& mesh, const Vec3& axis, double angle, const Vec3& translation = {});

}  // namespace dieplan::shapes
