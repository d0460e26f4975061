#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "dieplan/error.hpp"
#include "dieplan/indicators.hpp"
#include "dieplan/shapes.hpp"
#include "oracles/oracles.hpp"
#include "unit/helpers.hpp"

using namespace dieplan;

namespace {

TriMesh single_facet(const Vec3& n) {
    // Triangle in the plane orthogonal to n, wound so its normal is n.
    const Vec3 t = std::abs(n.z) < 0.9 ? normalized(cross(n, {0, 0, 1})) : normalized(cross(n, {1, 0, 0}));
    const Vec3 s = cross(n, t);
    return TriMesh::from_indexed({Vec3{}, t, s}, {{0, 1, 2}});
}

}  // namespace

TEST_SUITE("indicators") {

TEST_CASE("indicator values for basic normals") {
    struct Case {
        Vec3 n;
        double omega, kappa;
    };
    const double h = std::sqrt(2.0) / 2.0;
    for (const auto& c : {Case{{0, 0, 1}, 1.0, 0.0}, Case{{1, 0, 0}, 0.0, 1.0}, Case{{h, 0, h}, 0.70710678, 0.70710678}}) {
        const auto ind = compute_indicators(single_facet(c.n), ToolAxis{});
        CHECK(ind.omega[0] == doctest::Approx(c.omega).epsilon(1e-8));
        CHECK(ind.kappa[0] == doctest::Approx(c.kappa).epsilon(1e-8));
    }
}

TEST_CASE("omega thresholds") {
    CHECK(classify_omega(0.9, 0.15, 0.8) == ContactClass::Flat);
    CHECK(classify_omega(0.10, 0.15, 0.8) == ContactClass::Draft);
    CHECK(classify_omega(0.5, 0.15, 0.8) == ContactClass::Transition);
    CHECK(classify_omega(-0.2, 0.15, 0.8) == ContactClass::Undercut);
    // Boundaries are inclusive on the flat and draft sides.
    CHECK(classify_omega(0.8, 0.15, 0.8) == ContactClass::Flat);
    CHECK(classify_omega(0.15, 0.15, 0.8) == ContactClass::Draft);
    CHECK(classify_omega(0.0, 0.15, 0.8) == ContactClass::Draft);
}

TEST_CASE("threshold validation") {
    ContactMapConfig cfg;
    cfg.tau_draft = 0.8;
    cfg.tau_flat = 0.8;
    CHECK_THROWS_AS(validate(cfg), Error);
    cfg.tau_draft = -0.1;
    cfg.tau_flat = 0.5;
    CHECK_THROWS_AS(validate(cfg), Error);
    cfg.tau_draft = 0.1;
    cfg.tau_flat = 1.1;
    CHECK_THROWS_AS(validate(cfg), Error);
    CHECK_THROWS_AS(ToolAxis(Vec3{0, 0, 0}), Error);
}

TEST_CASE("analytic meshes classify uniformly") {
    const ContactMapConfig cfg;
    const auto plane = contact_map(shapes::plane_grid(80, 40, 20, 10), cfg);
    CHECK(plane.histogram.count(ContactClass::Flat) == 400);
    const auto cyl = shapes::cylinder_wall(20, 30, 72, 6);
    CHECK(contact_map(cyl, cfg).histogram.count(ContactClass::Draft) == cyl.facet_count());
    const auto cone = shapes::cone_band(30, 10, 45, 72, 5);
    CHECK(contact_map(cone, cfg).histogram.count(ContactClass::Transition) == cone.facet_count());
}

TEST_CASE("hemisphere classes follow the analytic polar angle") {
    const ContactMapConfig cfg;
    const auto m = shapes::hemisphere(20.0, 1.0);
    const auto doc = contact_map(m, cfg);
    std::array<std::size_t, 4> oracle_counts{};
    std::size_t disagreements_far_from_boundary = 0;
    const double b1 = std::acos(0.8) * 180 / std::numbers::pi;
    const double b2 = std::acos(0.15) * 180 / std::numbers::pi;
    for (FacetId f = 0; f < m.facet_count(); ++f) {
        const Vec3 c = m.facet_centroids()[f];
        const double polar = std::acos(c.z / norm(c)) * 180 / std::numbers::pi;
        const int expected = oracle::sphere_class(polar, 0.15, 0.8);
        ++oracle_counts[expected];
        const bool near = std::abs(polar - b1) <= 2.0 || std::abs(polar - b2) <= 2.0;
        if (!near && static_cast<int>(doc.indicators.contact_class[f]) != expected) {
            ++disagreements_far_from_boundary;
        }
    }
    CHECK(disagreements_far_from_boundary == 0);
    for (auto c : {ContactClass::Flat, ContactClass::Draft, ContactClass::Transition}) {
        CHECK(doc.histogram.count(c) > 0);
    }
    CHECK(doc.histogram.count(ContactClass::Undercut) == 0);
}

TEST_CASE("omega squared plus kappa squared is one") {
    for (std::uint64_t seed = 11; seed < 14; ++seed) {
        const auto m = testing::random_soup(seed, 2000);
        const auto ind = compute_indicators(m, ToolAxis(normalized(Vec3{0.2, 0.1, 1.0})));
        for (std::size_t f = 0; f < ind.size(); ++f) {
            CHECK(std::abs(ind.omega[f] * ind.omega[f] + ind.kappa[f] * ind.kappa[f] - 1.0) < 1e-9);
        }
    }
}

TEST_CASE("indicators are invariant under rotation about the tool axis") {
    const auto m = testing::random_soup(21, 1000);
    const auto base = compute_indicators(m, ToolAxis{});
    for (double angle : {0.3, 1.7, 4.0}) {
        const auto r = compute_indicators(shapes::transformed(m, {0, 0, 1}, angle, {3, 4, 0}), ToolAxis{});
        for (std::size_t f = 0; f < base.size(); ++f) {
            CHECK(std::abs(r.omega[f] - base.omega[f]) < 1e-9);
            CHECK(std::abs(r.kappa[f] - base.kappa[f]) < 1e-9);
        }
    }
}

TEST_CASE("tilted tool axis sees the same classes as a rotated mesh") {
    const auto m = shapes::pocket_block(40, 20, 10, 5);
    const Vec3 axis = normalized(Vec3{1, 0, 1});
    // Rotate the tilted axis onto +Z and the mesh with it.
    const Vec3 about = normalized(cross(axis, {0, 0, 1}));
    const double angle = std::acos(axis.z);
    const auto rotated = shapes::transformed(m, about, angle);
    const auto a = compute_indicators(m, ToolAxis(axis));
    const auto b = compute_indicators(rotated, ToolAxis{});
    for (std::size_t f = 0; f < a.size(); ++f) {
        CHECK(std::abs(a.omega[f] - b.omega[f]) < 1e-9);
        CHECK(std::abs(a.kappa[f] - b.kappa[f]) < 1e-9);
    }
}

TEST_CASE("raising tau_flat never grows Flat; lowering tau_draft never grows Draft") {
    const auto m = shapes::synthetic_die({.segments = 60, .arc_step_deg = 10.0});
    const auto ind = compute_indicators(m, ToolAxis{});
    std::size_t prev_flat = m.facet_count() + 1;
    for (double tf = 0.5; tf <= 1.0; tf += 0.05) {
        ContactMapConfig cfg;
        cfg.tau_draft = 0.1;
        cfg.tau_flat = tf;
        const auto n = contact_map(m, classify_contact(ind, cfg), cfg).histogram.count(ContactClass::Flat);
        CHECK(n <= prev_flat);
        prev_flat = n;
    }
    std::size_t prev_draft = m.facet_count() + 1;
    for (double td = 0.45; td >= 0.0; td -= 0.05) {
        ContactMapConfig cfg;
        cfg.tau_draft = td;
        cfg.tau_flat = 0.8;
        const auto n = contact_map(m, classify_contact(ind, cfg), cfg).histogram.count(ContactClass::Draft);
        CHECK(n <= prev_draft);
        prev_draft = n;
    }
}

TEST_CASE("undercuts are listed") {
    const auto doc = contact_map(shapes::unit_cube(), ContactMapConfig{});
    CHECK(doc.histogram.count(ContactClass::Undercut) == 2);
    CHECK(doc.undercuts.size() == 2);
    CHECK(doc.histogram.count(ContactClass::Flat) == 2);
    CHECK(doc.histogram.count(ContactClass::Draft) == 8);
}

TEST_CASE("effective radius") {
    const CuttingTool ball{"b", TipType::BallNose, 10, 5, 60, 40, "carbide"};
    CHECK(effective_radius(0.0, ball) == 0.0);
    // Sphere of radius 5 tangent to a 45 deg plane: contact point lies 5 sin 45 from the axis.
    CHECK(effective_radius(0.70710678, ball) == doctest::Approx(5.0 * std::sin(std::numbers::pi / 4)).epsilon(1e-6));
    CHECK(effective_radius(0.70710678, ball) == doctest::Approx(3.5355).epsilon(1e-4));
    const CuttingTool corner{"c", TipType::CornerEnd, 10, 2, 60, 40, "carbide"};
    CHECK(effective_radius(1.0, corner) == 5.0);
    CHECK(effective_radius(0.0, corner) == 3.0);
    CHECK_THROWS_AS(effective_radius(1.5, ball), Error);
}

}
