#include "dieplan/indicators.hpp"

#include <cmath>
#include <numbers>

#include "dieplan/error.hpp"

namespace dieplan {

ToolAxis::ToolAxis(const Vec3& direction) {
    const double n = norm(direction);
    if (!(n > 0.0) || !std::isfinite(n)) {
        throw Error(ErrorCode::InvalidArgument, "tool axis must be a non-zero finite vector");
    }
    requested_ = direction;
    dir_ = direction / n;
    // First basis vector: +X projected onto H, or +Y when the axis is close to X.
    Vec3 seed = std::abs(dir_.x) < 0.9 ? Vec3{1.0, 0.0, 0.0} : Vec3{0.0, 1.0, 0.0};
    const Vec3 e1 = normalized(seed - dir_ * dot(seed, dir_));
    const Vec3 e2 = normalized(cross(dir_, e1));
    basis_ = {e1, e2};
}

Vec3 ToolAxis::in_plane(double angle_deg) const {
    const double t = angle_deg * std::numbers::pi / 180.0;
    return basis_[0] * std::cos(t) + basis_[1] * std::sin(t);
}

double ToolAxis::azimuth_deg(const Vec3& v) const {
    double a = std::atan2(dot(v, basis_[1]), dot(v, basis_[0])) * 180.0 / std::numbers::pi;
    if (a < 0.0) {
        a += 360.0;
    }
    return a >= 360.0 ? a - 360.0 : a;
}

std::string_view to_string(ContactClass c) {
    switch (c) {
        case ContactClass::Flat: return "flat";
        case ContactClass::Draft: return "draft";
        case ContactClass::Transition: return "transition";
        case ContactClass::Undercut: return "undercut";
    }
    return "unknown";
}

ContactClass parse_contact_class(std::string_view name) {
    for (auto c : {ContactClass::Flat, ContactClass::Draft, ContactClass::Transition, ContactClass::Undercut}) {
        if (to_string(c) == name) {
            return c;
        }
    }
    throw Error(ErrorCode::InvalidArgument, "unknown contact class '" + std::string(name) + "'");
}

void validate(const ContactMapConfig& cfg) {
    if (!(cfg.tau_draft >= 0.0 && cfg.tau_draft < cfg.tau_flat && cfg.tau_flat <= 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "thresholds must satisfy 0 <= tau_draft < tau_flat <= 1 (got " +
                                                    std::to_string(cfg.tau_draft) + ", " +
                                                    std::to_string(cfg.tau_flat) + ")");
    }
}

FacetIndicators compute_indicators(const TriMesh& mesh, const ToolAxis& axis) {
    const Vec3& a = axis.direction();
    FacetIndicators out;
    const auto normals = mesh.facet_normals();
    out.omega.resize(normals.size());
    out.kappa.resize(normals.size());
    for (std::size_t f = 0; f < normals.size(); ++f) {
        double omega = dot(normals[f], a);
        // Snap round-off on vertical walls so they are never reported as undercuts.
        if (std::abs(omega) < 1e-12) {
            omega = 0.0;
        }
        out.omega[f] = omega;
        out.kappa[f] = norm(normals[f] - a * omega);
    }
    return out;
}

ContactClass classify_omega(double omega, double tau_draft, double tau_flat) {
    if (omega < 0.0) {
        return ContactClass::Undercut;
    }
    if (omega >= tau_flat) {
        return ContactClass::Flat;
    }
    if (omega <= tau_draft) {
        return ContactClass::Draft;
    }
    return ContactClass::Transition;
}

FacetIndicators classify_contact(FacetIndicators indicators, const ContactMapConfig& cfg) {
    validate(cfg);
    indicators.contact_class.resize(indicators.omega.size());
    for (std::size_t f = 0; f < indicators.omega.size(); ++f) {
        indicators.contact_class[f] = classify_omega(indicators.omega[f], cfg.tau_draft, cfg.tau_flat);
    }
    return indicators;
}

MapDocument contact_map(const TriMesh& mesh, const FacetIndicators& indicators, const ContactMapConfig& cfg) {
    if (indicators.contact_class.size() != mesh.facet_count()) {
        throw Error(ErrorCode::InvalidArgument, "contact map needs classified indicators for every facet");
    }
    MapDocument doc{cfg, indicators, {}, {}};
    const auto areas = mesh.facet_areas();
    for (std::size_t f = 0; f < indicators.size(); ++f) {
        const auto k = static_cast<std::size_t>(indicators.contact_class[f]);
        ++doc.histogram.counts[k];
        doc.histogram.areas[k] += areas[f];
        if (indicators.contact_class[f] == ContactClass::Undercut) {
            doc.undercuts.push_back(static_cast<FacetId>(f));
        }
    }
    return doc;
}

MapDocument contact_map(const TriMesh& mesh, const ContactMapConfig& cfg) {
    return contact_map(mesh, classify_contact(compute_indicators(mesh, cfg.tool_axis), cfg), cfg);
}

double effective_radius(double kappa, const CuttingTool& tool) {
    if (!(kappa >= 0.0 && kappa <= 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "kappa must lie in [0,1]");
    }
    const double half = tool.diameter / 2.0;
    switch (tool.tip_type) {
        case TipType::BallNose: return half * kappa;
        case TipType::CornerEnd: return (half - tool.corner_radius) + tool.corner_radius * kappa;
        case TipType::FlatEnd: return half;
    }
    throw Error(ErrorCode::InvalidArgument, "unknown tool type");
}

}  // namespace dieplan
