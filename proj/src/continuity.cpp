#include "dieplan/continuity.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "dieplan/error.hpp"

namespace dieplan {

FeedDirection FeedDirection::from_angle(double angle_deg, const ToolAxis& axis) {
    if (!(angle_deg >= 0.0 && angle_deg < 180.0)) {
        throw Error(ErrorCode::InvalidArgument, "feed direction angle must lie in [0,180)");
    }
    return {angle_deg, axis.in_plane(angle_deg)};
}

std::vector<FeedDirection> default_directions(const ToolAxis& axis) { return direction_range(0.0, 90.0, 10.0, axis); }

std::vector<FeedDirection> direction_range(double start, double stop, double step, const ToolAxis& axis) {
    if (!(step > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "direction step must be positive");
    }
    if (!(start >= 0.0) || stop < start) {
        throw Error(ErrorCode::InvalidArgument, "direction range is empty");
    }
    const double span = std::min(stop, 180.0) - start;
    if (span / step > 3600.0) {
        throw Error(ErrorCode::InvalidArgument, "direction range has more than 3600 directions");
    }
    if (span < 0.0) {
        throw Error(ErrorCode::InvalidArgument, "direction range is empty");
    }
    const auto count = static_cast<std::size_t>(std::floor(span / step + 1e-9)) + 1;
    std::vector<FeedDirection> out;
    for (std::size_t i = 0; i < count; ++i) {
        const double angle = start + static_cast<double>(i) * step;
        if (angle >= 180.0 - 1e-9) {
            break;
        }
        out.push_back(FeedDirection::from_angle(angle, axis));
    }
    if (out.empty()) {
        throw Error(ErrorCode::InvalidArgument, "direction range is empty");
    }
    return out;
}

std::vector<FeedDirection> parse_directions(std::string_view range, const ToolAxis& axis) {
    auto bad = [&range] {
        return Error(ErrorCode::InvalidArgument, "directions must be start:stop:step, got '" + std::string(range) + "'");
    };
    double parts[3] = {};
    std::size_t n = 0;
    std::size_t pos = 0;
    while (true) {
        const std::size_t colon = range.find(':', pos);
        const std::string_view token = range.substr(pos, colon == std::string_view::npos ? range.npos : colon - pos);
        if (n == 3) {
            throw bad();
        }
        auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), parts[n]);
        if (token.empty() || ec != std::errc{} || ptr != token.data() + token.size()) {
            throw bad();
        }
        ++n;
        if (colon == std::string_view::npos) {
            break;
        }
        pos = colon + 1;
    }
    if (n != 3) {
        throw bad();
    }
    return direction_range(parts[0], parts[1], parts[2], axis);
}

bool ContinuityProfile::circular() const {
    const std::size_t n = directions.size();
    if (n < 2) {
        return false;
    }
    const double step = directions[1].angle_deg - directions[0].angle_deg;
    for (std::size_t i = 1; i < n; ++i) {
        if (std::abs(directions[i].angle_deg - directions[i - 1].angle_deg - step) > 1e-9) {
            return false;
        }
    }
    return std::abs(step * static_cast<double>(n) - 180.0) < 1e-9;
}

ContinuityProfile continuity_residuals(const TriMesh& mesh, const FacetIndicators& indicators,
                                       std::span<const FeedDirection> directions, const ToolAxis& axis) {
    if (directions.empty()) {
        throw Error(ErrorCode::InvalidArgument, "at least one feed direction is required");
    }
    const Vec3& a = axis.direction();
    for (const auto& d : directions) {
        if (std::abs(dot(d.vector, a)) > 1e-9 || std::abs(norm(d.vector) - 1.0) > 1e-9) {
            throw Error(ErrorCode::InvalidArgument, "feed direction " + std::to_string(d.angle_deg) +
                                                        " deg is not a unit vector orthogonal to the tool axis");
        }
    }
    ContinuityProfile p;
    p.directions.assign(directions.begin(), directions.end());
    const std::size_t nf = mesh.facet_count();
    const std::size_t nd = directions.size();
    p.residual.resize(nf * nd);
    p.kappa = indicators.kappa;
    p.area.assign(mesh.facet_areas().begin(), mesh.facet_areas().end());
    p.undercut.resize(nf);
    const auto normals = mesh.facet_normals();
    for (std::size_t f = 0; f < nf; ++f) {
        const double omega = indicators.omega[f];
        p.undercut[f] = omega < 0.0;
        const Vec3 n_h = normals[f] - a * omega;
        for (std::size_t d = 0; d < nd; ++d) {
            p.residual[f * nd + d] = std::max(0.0, indicators.kappa[f] - std::abs(dot(n_h, directions[d].vector)));
        }
    }
    return p;
}

std::string_view to_string(ContinuityKind kind) {
    switch (kind) {
        case ContinuityKind::Indifferent: return "indifferent";
        case ContinuityKind::Oriented: return "oriented";
        case ContinuityKind::ZLevel: return "z_level";
        case ContinuityKind::Undefined: return "undefined";
    }
    return "unknown";
}

ContinuityKind parse_continuity_kind(std::string_view name) {
    for (auto k : {ContinuityKind::Indifferent, ContinuityKind::Oriented, ContinuityKind::ZLevel,
                   ContinuityKind::Undefined}) {
        if (to_string(k) == name) {
            return k;
        }
    }
    throw Error(ErrorCode::InvalidArgument, "unknown continuity kind '" + std::string(name) + "'");
}

RegionContinuity summarize_region(std::span<const FacetId> region, const ContinuityProfile& profile,
                                  const ContinuityParams& params) {
    const std::size_t nd = profile.directions.size();
    RegionContinuity out;
    out.coverage.assign(nd, 0.0);
    out.mean_residual.assign(nd, 0.0);
    double kappa_sum = 0.0;
    for (FacetId f : region) {
        if (profile.undercut[f]) {
            continue;
        }
        const double w = profile.area[f];
        out.area += w;
        kappa_sum += w * profile.kappa[f];
        for (std::size_t d = 0; d < nd; ++d) {
            const double rho = profile.rho(f, d);
            out.mean_residual[d] += w * rho;
            if (rho <= params.epsilon_pp) {
                out.coverage[d] += w;
            }
        }
    }
    if (out.area <= 0.0) {
        return out;
    }
    out.kappa_mean = kappa_sum / out.area;
    double var = 0.0;
    for (FacetId f : region) {
        if (!profile.undercut[f]) {
            const double dk = profile.kappa[f] - out.kappa_mean;
            var += profile.area[f] * dk * dk;
        }
    }
    out.kappa_stddev = std::sqrt(var / out.area);
    for (std::size_t d = 0; d < nd; ++d) {
        out.coverage[d] /= out.area;
        out.mean_residual[d] /= out.area;
    }
    return out;
}

RegionContinuity classify_continuity(std::span<const FacetId> region, const ContinuityProfile& profile,
                                     const ContinuityParams& params) {
    RegionContinuity s = summarize_region(region, profile, params);
    const std::size_t nd = profile.directions.size();
    if (s.area <= 0.0 || nd == 0) {
        return s;
    }
    std::vector<bool> pass(nd);
    std::size_t npass = 0;
    for (std::size_t d = 0; d < nd; ++d) {
        pass[d] = s.coverage[d] >= params.coverage_min;
        npass += pass[d] ? 1 : 0;
    }
    if (npass == nd) {
        s.cls.kind = ContinuityKind::Indifferent;
        return s;
    }
    if (npass > 0) {
        // Count runs of passing directions; on a closed half circle the last run may join the first.
        std::size_t runs = 0;
        std::size_t start = 0;
        for (std::size_t d = 0; d < nd; ++d) {
            const bool prev = d == 0 ? (profile.circular() && pass[nd - 1]) : pass[d - 1];
            if (pass[d] && !prev) {
                ++runs;
                start = d;
            }
        }
        if (runs == 1 && npass - 1 <= params.max_band_steps) {
            std::size_t best = start;
            for (std::size_t k = 0; k < npass; ++k) {
                const std::size_t d = (start + k) % nd;
                s.cls.band_deg.push_back(profile.directions[d].angle_deg);
                const bool better =
                    s.coverage[d] > s.coverage[best] ||
                    (s.coverage[d] == s.coverage[best] &&
                     (s.mean_residual[d] < s.mean_residual[best] ||
                      (s.mean_residual[d] == s.mean_residual[best] &&
                       profile.directions[d].angle_deg < profile.directions[best].angle_deg)));
                if (better) {
                    best = d;
                }
            }
            s.cls.kind = ContinuityKind::Oriented;
            s.cls.direction_deg = profile.directions[best].angle_deg;
            return s;
        }
    }
    if (s.kappa_stddev <= params.epsilon_z && s.kappa_mean >= params.tau_zmin) {
        s.cls.kind = ContinuityKind::ZLevel;
        return s;
    }
    s.cls.kind = ContinuityKind::Undefined;
    return s;
}

}  // namespace dieplan
