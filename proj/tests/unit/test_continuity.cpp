#include <doctest.h>

#include <cmath>
#include <numbers>
#include <numeric>

#include "dieplan/continuity.hpp"
#include "dieplan/error.hpp"
#include "dieplan/shapes.hpp"
#include "unit/helpers.hpp"

using namespace dieplan;

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

struct Prepared {
    TriMesh mesh;
    FacetIndicators ind;
    ContinuityProfile profile;
};

Prepared prepare(TriMesh m, const std::vector<FeedDirection>& dirs = default_directions()) {
    auto ind = compute_indicators(m, ToolAxis{});
    auto profile = continuity_residuals(m, ind, dirs);
    return {std::move(m), std::move(ind), std::move(profile)};
}

std::vector<FacetId> all_facets(const TriMesh& m) {
    std::vector<FacetId> out(m.facet_count());
    std::iota(out.begin(), out.end(), 0u);
    return out;
}

RegionContinuity classify_all(const Prepared& p) { return classify_continuity(all_facets(p.mesh), p.profile, {}); }

}  // namespace

TEST_SUITE("continuity") {

TEST_CASE("default direction set is 0..90 by 10") {
    const auto d = default_directions();
    REQUIRE(d.size() == 10);
    for (std::size_t i = 0; i < d.size(); ++i) {
        CHECK(d[i].angle_deg == 10.0 * i);
    }
}

TEST_CASE("direction range parsing") {
    auto angles = [](const std::vector<FeedDirection>& ds) {
        std::vector<double> out;
        for (const auto& d : ds) {
            out.push_back(d.angle_deg);
        }
        return out;
    };
    CHECK(angles(parse_directions("0:180:30")) == std::vector<double>{0, 30, 60, 90, 120, 150});
    CHECK(angles(parse_directions("0:0:10")) == std::vector<double>{0});
    CHECK(angles(parse_directions("0:90:10")).size() == 10);
    for (const char* bad : {"0:90", "0:90:0", "a:b:c", "10:0:5", "0:90:10:1", "", "0:90:-5", "200:300:10"}) {
        CHECK_THROWS_AS(parse_directions(bad), Error);
    }
}

TEST_CASE("ramp in the XZ plane: zero residual along X, kappa along Y") {
    const auto p = prepare(shapes::ramp(0.0, 40.0, 20.0, 4), direction_range(0, 90, 90));
    for (std::size_t f = 0; f < p.mesh.facet_count(); ++f) {
        CHECK(p.profile.rho(f, 0) == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(p.profile.rho(f, 1) == doctest::Approx(p.ind.kappa[f]).epsilon(1e-12));
    }
}

TEST_CASE("ramp toward 30 deg seen from 10 deg") {
    const auto p = prepare(shapes::ramp(30.0, 40.0, 20.0, 4), direction_range(10, 10, 10));
    for (std::size_t f = 0; f < p.mesh.facet_count(); ++f) {
        const double expected = p.ind.kappa[f] * (1.0 - std::abs(std::cos(20.0 * kDeg)));
        CHECK(std::abs(p.profile.rho(f, 0) - expected) < 1e-12);
    }
}

TEST_CASE("the four reference continuity classes") {
    SUBCASE("plane is indifferent") {
        CHECK(classify_all(prepare(shapes::plane_grid(80, 40, 20, 10))).cls.kind == ContinuityKind::Indifferent);
    }
    SUBCASE("ramp toward 30 deg is oriented at 30") {
        const auto c = classify_all(prepare(shapes::ramp(30.0, 70.0, 40.0, 10)));
        CHECK(c.cls.kind == ContinuityKind::Oriented);
        CHECK(c.cls.direction_deg == 30.0);
    }
    SUBCASE("hemisphere blend band is undefined") {
        const auto p = prepare(shapes::hemisphere(20.0, 2.0));
        const auto cls = classify_contact(p.ind, ContactMapConfig{}).contact_class;
        std::vector<FacetId> band;
        for (FacetId f = 0; f < p.mesh.facet_count(); ++f) {
            if (cls[f] == ContactClass::Transition) {
                band.push_back(f);
            }
        }
        REQUIRE(!band.empty());
        CHECK(classify_continuity(band, p.profile, {}).cls.kind == ContinuityKind::Undefined);
    }
    SUBCASE("cylinder wall is z-level") {
        CHECK(classify_all(prepare(shapes::cylinder_wall(20, 30, 120, 5))).cls.kind == ContinuityKind::ZLevel);
    }
}

TEST_CASE("residual bounds") {
    const auto m = testing::random_soup(5, 300);
    const auto p = prepare(m, direction_range(0, 170, 10));
    const double bound = 2.0 - std::sqrt(2.0);
    for (std::size_t f = 0; f < m.facet_count(); ++f) {
        const double k = p.ind.kappa[f];
        for (std::size_t d = 0; d < 18; ++d) {
            CHECK(p.profile.rho(f, d) >= 0.0);
            CHECK(p.profile.rho(f, d) <= k + 1e-15);
            const std::size_t perp = (d + 9) % 18;
            CHECK(p.profile.rho(f, d) + p.profile.rho(f, perp) >= k * bound - 1e-12);
        }
    }
}

TEST_CASE("indifferent implies every direction passes coverage") {
    for (const auto& m : {shapes::plane_grid(10, 10, 4, 4), shapes::ramp(10.0, 2.0, 10.0, 4)}) {
        const auto p = prepare(m);
        const auto c = classify_all(p);
        REQUIRE(c.cls.kind == ContinuityKind::Indifferent);
        for (double cov : c.coverage) {
            CHECK(cov >= ContinuityParams{}.coverage_min);
        }
    }
}

TEST_CASE("rotating by one grid step shifts the oriented direction") {
    const auto dirs = direction_range(0, 170, 10);
    for (double az : {30.0, 100.0, 170.0}) {
        const auto m = shapes::ramp(az, 70.0, 40.0, 6);
        const auto a = classify_all(prepare(m, dirs));
        const auto b = classify_all(prepare(shapes::transformed(m, {0, 0, 1}, 10.0 * kDeg), dirs));
        REQUIRE(a.cls.kind == ContinuityKind::Oriented);
        REQUIRE(b.cls.kind == ContinuityKind::Oriented);
        CHECK(a.cls.direction_deg == std::fmod(az, 180.0));
        CHECK(b.cls.direction_deg == std::fmod(az + 10.0, 180.0));
        for (std::size_t d = 0; d < dirs.size(); ++d) {
            CHECK(std::abs(a.coverage[d] - b.coverage[(d + 1) % dirs.size()]) < 1e-9);
        }
    }
}

TEST_CASE("band wider than the limit is not oriented") {
    // A gentle slope keeps residuals small over many directions but not all of them.
    const auto c = classify_all(prepare(shapes::ramp(30.0, 20.0, 40.0, 6)));
    CHECK(c.cls.kind != ContinuityKind::Oriented);
}

TEST_CASE("oriented band wraps around on a closed half circle") {
    const auto c = classify_all(prepare(shapes::ramp(0.0, 70.0, 40.0, 6), direction_range(0, 170, 10)));
    CHECK(c.cls.kind == ContinuityKind::Oriented);
    CHECK(c.cls.direction_deg == 0.0);
    CHECK(c.cls.band_deg == std::vector<double>{170.0, 0.0, 10.0});
}

TEST_CASE("undercut facets are ignored") {
    const auto p = prepare(shapes::unit_cube());
    std::vector<FacetId> undercuts;
    for (FacetId f = 0; f < 12; ++f) {
        if (p.profile.undercut[f]) {
            undercuts.push_back(f);
        }
    }
    CHECK(classify_continuity(undercuts, p.profile, {}).cls.kind == ContinuityKind::Undefined);
}

TEST_CASE("feed direction must be orthogonal unit vector") {
    const auto m = shapes::plane_grid(1, 1, 1, 1);
    const auto ind = compute_indicators(m, ToolAxis{});
    std::vector<FeedDirection> bad{{0.0, Vec3{0, 0, 1}}};
    CHECK_THROWS_AS(continuity_residuals(m, ind, bad), Error);
    CHECK_THROWS_AS(continuity_residuals(m, ind, std::vector<FeedDirection>{}), Error);
}

}
