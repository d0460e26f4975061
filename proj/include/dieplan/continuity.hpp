#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dieplan/indicators.hpp"

namespace dieplan {

/// Undirected feed direction in plane H; `vector` is derived from `angle_deg`.
struct FeedDirection {
    double angle_deg = 0.0;  // [0,180)
    Vec3 vector;

    static FeedDirection from_angle(double angle_deg, const ToolAxis& axis);
};

/// {0,10,...,90} degrees.
std::vector<FeedDirection> default_directions(const ToolAxis& axis = {});

/// Inclusive arithmetic sequence "start:stop:step", angles >= 180 dropped.
std::vector<FeedDirection> parse_directions(std::string_view range, const ToolAxis& axis = {});
std::vector<FeedDirection> direction_range(double start, double stop, double step, const ToolAxis& axis = {});

/// rho(facet, f) = kappa - |n_H . f| for every facet and tested direction.
struct ContinuityProfile {
    std::vector<FeedDirection> directions;
    std::vector<double> residual;  // facet-major: residual[f * directions.size() + d]
    std::vector<double> kappa;
    std::vector<double> area;
    std::vector<bool> undercut;

    std::size_t facet_count() const { return kappa.size(); }
    double rho(std::size_t facet, std::size_t direction) const { return residual[facet * directions.size() + direction]; }

    /// True when the direction set closes the half circle ([0,180) evenly spaced).
    bool circular() const;
};

ContinuityProfile continuity_residuals(const TriMesh& mesh, const FacetIndicators& indicators,
                                       std::span<const FeedDirection> directions, const ToolAxis& axis = {});

struct ContinuityParams {
    double epsilon_pp = 0.05;     // in-plane residual tolerance
    double coverage_min = 0.95;   // area fraction
    double epsilon_z = 0.05;      // max kappa standard deviation for Z-level
    double tau_zmin = 0.3;        // min kappa mean for Z-level
    std::size_t max_band_steps = 2;
};

enum class ContinuityKind { Indifferent, Oriented, ZLevel, Undefined };

std::string_view to_string(ContinuityKind kind);
ContinuityKind parse_continuity_kind(std::string_view name);

struct ContinuityClass {
    ContinuityKind kind = ContinuityKind::Undefined;
    double direction_deg = 0.0;      // Oriented only
    std::vector<double> band_deg;    // Oriented only: qualifying directions, grid order

    bool operator==(const ContinuityClass&) const = default;
};

/// Area-weighted statistics of a facet region; undercut facets are skipped.
struct RegionContinuity {
    ContinuityClass cls;
    std::vector<double> coverage;       // per direction
    std::vector<double> mean_residual;  // per direction
    double kappa_mean = 0.0;
    double kappa_stddev = 0.0;
    double area = 0.0;
};

RegionContinuity summarize_region(std::span<const FacetId> region, const ContinuityProfile& profile,
                                  const ContinuityParams& params);

/// Indifferent > Oriented (one contiguous band, width <= max_band_steps) > ZLevel > Undefined.
/// The reported Oriented direction has maximal coverage, then minimal mean residual, then smallest angle.
RegionContinuity classify_continuity(std::span<const FacetId> region, const ContinuityProfile& profile,
                                     const ContinuityParams& params);

}  // namespace dieplan
