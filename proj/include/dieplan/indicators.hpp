#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "dieplan/mesh.hpp"
#include "dieplan/tooling.hpp"
#include "dieplan/vec.hpp"

namespace dieplan {

/// Unit tool-axis direction `a`. Plane H is the plane through the origin orthogonal to it.
class ToolAxis {
public:
    ToolAxis() = default;
    /// Normalises `direction`; throws on a zero vector.
    explicit ToolAxis(const Vec3& direction);

    const Vec3& direction() const { return dir_; }
    /// The vector as given, before normalisation (serialised form).
    const Vec3& requested() const { return requested_; }

    /// Orthonormal basis of plane H; angle 0 lies along `h_basis()[0]`.
    /// For the default +Z axis this is (+X, +Y).
    const std::array<Vec3, 2>& h_basis() const { return basis_; }

    /// Height of a point measured along the axis.
    double height(const Vec3& p) const { return dot(p, dir_); }

    /// Unit vector in plane H at `angle_deg` from the first basis vector.
    Vec3 in_plane(double angle_deg) const;

    /// Azimuth in [0,360) of the projection of `v` onto plane H.
    double azimuth_deg(const Vec3& v) const;

private:
    Vec3 requested_{0.0, 0.0, 1.0};
    Vec3 dir_{0.0, 0.0, 1.0};
    std::array<Vec3, 2> basis_{Vec3{1.0, 0.0, 0.0}, Vec3{0.0, 1.0, 0.0}};
};

enum class ContactClass { Flat, Draft, Transition, Undercut };

std::string_view to_string(ContactClass c);
ContactClass parse_contact_class(std::string_view name);

struct ContactMapConfig {
    double tau_draft = 0.15;
    double tau_flat = 0.8;
    ToolAxis tool_axis;
};

/// Throws when 0 <= tau_draft < tau_flat <= 1 does not hold.
void validate(const ContactMapConfig& cfg);

/// Per-facet orientation indicator omega = n.a in [-1,1], contact-area indicator
/// kappa = |n - omega a| in [0,1], and the contact class once classified.
struct FacetIndicators {
    std::vector<double> omega;
    std::vector<double> kappa;
    std::vector<ContactClass> contact_class;

    std::size_t size() const { return omega.size(); }
};

FacetIndicators compute_indicators(const TriMesh& mesh, const ToolAxis& axis);

ContactClass classify_omega(double omega, double tau_draft, double tau_flat);

FacetIndicators classify_contact(FacetIndicators indicators, const ContactMapConfig& cfg);

struct ClassHistogram {
    std::array<std::size_t, 4> counts{};  // indexed by ContactClass
    std::array<double, 4> areas{};

    std::size_t count(ContactClass c) const { return counts[static_cast<std::size_t>(c)]; }
    double area(ContactClass c) const { return areas[static_cast<std::size_t>(c)]; }
};

struct MapDocument {
    ContactMapConfig config;
    FacetIndicators indicators;
    ClassHistogram histogram;
    std::vector<FacetId> undercuts;
};

MapDocument contact_map(const TriMesh& mesh, const FacetIndicators& indicators, const ContactMapConfig& cfg);

/// Convenience: indicators, classification and map in one call.
MapDocument contact_map(const TriMesh& mesh, const ContactMapConfig& cfg);

/// Radius at which the tool tip touches a surface of the given kappa; sets the effective cutting speed.
double effective_radius(double kappa, const CuttingTool& tool);

}  // namespace dieplan
