// Independent reference implementations used by the tests.
// Brute force on purpose: quadratic loops, no shared helpers with the library beyond the mesh container.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <set>
#include <utility>
#include <vector>

#include "dieplan/mesh.hpp"

namespace oracle {

using dieplan::TriMesh;
using dieplan::Vec3;

// Stepover for which two circles of radius `r` leave a cusp of height `h` (both mm), by bisection
// on the cusp height h(p) = r - sqrt(r^2 - (p/2)^2), which is increasing in p on [0, 2r].
inline double two_circle_pitch(double r, double h) {
    auto cusp = [r](double p) { return r - std::sqrt(std::max(0.0, r * r - 0.25 * p * p)); };
    double lo = 0.0, hi = 2.0 * r;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (cusp(mid) < h ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

// Cusp height by direct sampling: max over x in [0, p] of the lower envelope of two circles.
inline double sampled_cusp(double r, double p, int samples = 20001) {
    double worst = 0.0;
    for (int i = 0; i < samples; ++i) {
        const double x = p * i / (samples - 1);
        auto depth = [r](double dx) { return r - std::sqrt(std::max(0.0, r * r - dx * dx)); };
        worst = std::max(worst, std::min(depth(x), depth(p - x)));
    }
    return worst;
}

struct Edge {
    std::uint32_t a, b;  // a < b
    double length;
};

// Every facet pair sharing exactly two vertex indices.
inline std::vector<Edge> brute_adjacency(const TriMesh& mesh) {
    std::vector<Edge> out;
    const auto facets = mesh.facets();
    for (std::uint32_t i = 0; i < facets.size(); ++i) {
        for (std::uint32_t j = i + 1; j < facets.size(); ++j) {
            std::vector<std::uint32_t> shared;
            for (auto u : facets[i]) {
                for (auto v : facets[j]) {
                    if (u == v) {
                        shared.push_back(u);
                    }
                }
            }
            if (shared.size() == 2) {
                out.push_back({i, j, dieplan::distance(mesh.vertex(shared[0]), mesh.vertex(shared[1]))});
            }
        }
    }
    return out;
}

enum Cls { Flat = 0, Draft = 1, Transition = 2, Undercut = 3 };
enum Cont { Indifferent = 0, Oriented = 1, ZLevel = 2, Undefined = 3 };

struct Params {
    double tau_draft = 0.15;
    double tau_flat = 0.8;
    std::vector<double> directions_deg{0, 10, 20, 30, 40, 50, 60, 70, 80, 90};
    double epsilon_pp = 0.05;
    double coverage_min = 0.95;
    double epsilon_z = 0.05;
    double tau_zmin = 0.3;
    std::size_t max_band_steps = 2;
    double min_region_fraction = 0.01;
    double d_prox = 10.0;
    double epsilon_conv = 1e-6;
};

struct Region {
    std::vector<std::uint32_t> facets;  // ascending
    int cls = Flat;
    int cont = Undefined;
    double direction = 0.0;
    double kappa_mean = 0.0;
};

struct Relation {
    std::uint32_t a, b;
    int kind;  // 0 concave, 1 convex, 2 tangent, 3 proximity
};

struct Segmentation {
    std::vector<int> cls;
    std::vector<Region> elementary;
    std::vector<Region> features;
    std::vector<Relation> relations;
};

// Tool axis +Z throughout.
class BruteSegmenter {
public:
    BruteSegmenter(const TriMesh& mesh, Params p) : mesh_(mesh), p_(std::move(p)), edges_(brute_adjacency(mesh)) {
        const auto n = mesh.facet_count();
        omega_.resize(n);
        kappa_.resize(n);
        cls_.resize(n);
        for (std::size_t f = 0; f < n; ++f) {
            const Vec3 nf = mesh.facet_normals()[f];
            double w = nf.z;
            if (std::abs(w) < 1e-12) {
                w = 0.0;
            }
            omega_[f] = w;
            kappa_[f] = dieplan::norm(nf - Vec3{0, 0, 1} * w);
            cls_[f] = w < 0.0 ? Undercut : w >= p_.tau_flat ? Flat : w <= p_.tau_draft ? Draft : Transition;
        }
    }

    Segmentation run() {
        Segmentation out;
        out.cls = cls_;
        out.elementary = elementary();
        out.features = grouped(out.elementary);
        out.relations = relations(out.features);
        return out;
    }

    // Contact classes of the elementary features, before any small-region merge.
    std::vector<std::vector<std::uint32_t>> class_components() const {
        std::vector<int> label(mesh_.facet_count(), -1);
        int next = 0;
        for (std::uint32_t f = 0; f < mesh_.facet_count(); ++f) {
            if (cls_[f] == Undercut || label[f] >= 0) {
                continue;
            }
            // Flood by repeated sweeps over the edge list until nothing changes.
            label[f] = next;
            bool grew = true;
            while (grew) {
                grew = false;
                for (const auto& e : edges_) {
                    if (cls_[e.a] != cls_[e.b]) {
                        continue;
                    }
                    if (label[e.a] == next && label[e.b] < 0) {
                        label[e.b] = next;
                        grew = true;
                    } else if (label[e.b] == next && label[e.a] < 0) {
                        label[e.a] = next;
                        grew = true;
                    }
                }
            }
            ++next;
        }
        std::vector<std::vector<std::uint32_t>> comps(next);
        for (std::uint32_t f = 0; f < mesh_.facet_count(); ++f) {
            if (label[f] >= 0) {
                comps[label[f]].push_back(f);
            }
        }
        return comps;
    }

    /// Class and continuity of an arbitrary facet set, labelled with the class of its first facet.
    Region region_of(std::vector<std::uint32_t> facets) const {
        Region r;
        r.cls = cls_[facets.front()];
        r.facets = std::move(facets);
        classify(r);
        return r;
    }

private:
    double area_of(const std::vector<std::uint32_t>& facets) const {
        double a = 0.0;
        for (auto f : facets) {
            a += mesh_.facet_areas()[f];
        }
        return a;
    }

    double rho(std::uint32_t f, double angle_deg) const {
        const double t = angle_deg * std::numbers::pi / 180.0;
        const Vec3 dir{1.0 * std::cos(t) + 0.0 * std::sin(t), 0.0 * std::cos(t) + 1.0 * std::sin(t), 0.0};
        const Vec3 nh = mesh_.facet_normals()[f] - Vec3{0, 0, 1} * omega_[f];
        return std::max(0.0, kappa_[f] - std::abs(dieplan::dot(nh, dir)));
    }

    void classify(Region& r) const {
        const std::size_t nd = p_.directions_deg.size();
        double area = 0.0, ksum = 0.0;
        std::vector<double> cover(nd, 0.0), resid(nd, 0.0);
        for (auto f : r.facets) {
            if (omega_[f] < 0.0) {
                continue;
            }
            const double w = mesh_.facet_areas()[f];
            area += w;
            ksum += w * kappa_[f];
            for (std::size_t d = 0; d < nd; ++d) {
                const double q = rho(f, p_.directions_deg[d]);
                resid[d] += w * q;
                if (q <= p_.epsilon_pp) {
                    cover[d] += w;
                }
            }
        }
        r.cont = Undefined;
        if (area <= 0.0) {
            return;
        }
        r.kappa_mean = ksum / area;
        double var = 0.0;
        for (auto f : r.facets) {
            if (omega_[f] >= 0.0) {
                const double dk = kappa_[f] - r.kappa_mean;
                var += mesh_.facet_areas()[f] * dk * dk;
            }
        }
        const double sd = std::sqrt(var / area);
        std::vector<std::size_t> passing;
        for (std::size_t d = 0; d < nd; ++d) {
            cover[d] /= area;
            resid[d] /= area;
            if (cover[d] >= p_.coverage_min) {
                passing.push_back(d);
            }
        }
        if (passing.size() == nd) {
            r.cont = Indifferent;
            return;
        }
        if (!passing.empty() && passing.size() - 1 <= p_.max_band_steps) {
            // Contiguous: some start s such that s, s+1, ... (mod nd when the grid closes 180) are exactly the passing set.
            const double step = nd > 1 ? p_.directions_deg[1] - p_.directions_deg[0] : 0.0;
            const bool closed = nd > 1 && std::abs(step * nd - 180.0) < 1e-9;
            bool contiguous = false;
            for (std::size_t s = 0; s < nd && !contiguous; ++s) {
                std::set<std::size_t> run;
                bool ok = true;
                for (std::size_t k = 0; k < passing.size(); ++k) {
                    if (!closed && s + k >= nd) {
                        ok = false;
                        break;
                    }
                    run.insert((s + k) % nd);
                }
                contiguous = ok && run == std::set<std::size_t>(passing.begin(), passing.end());
            }
            if (contiguous) {
                std::vector<std::size_t> order = passing;
                std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
                    if (cover[x] != cover[y]) return cover[x] > cover[y];
                    if (resid[x] != resid[y]) return resid[x] < resid[y];
                    return p_.directions_deg[x] < p_.directions_deg[y];
                });
                r.cont = Oriented;
                r.direction = p_.directions_deg[order.front()];
                return;
            }
        }
        if (sd <= p_.epsilon_z && r.kappa_mean >= p_.tau_zmin) {
            r.cont = ZLevel;
        }
    }

    // Boundary length between every pair of labelled regions, summed over the brute edge list.
    std::map<std::pair<int, int>, double> boundaries(const std::vector<int>& label) const {
        std::map<std::pair<int, int>, double> out;
        for (const auto& e : edges_) {
            const int a = label[e.a], b = label[e.b];
            if (a >= 0 && b >= 0 && a != b) {
                out[{std::min(a, b), std::max(a, b)}] += e.length;
            }
        }
        return out;
    }

    std::vector<int> labels(const std::vector<Region>& rs) const {
        std::vector<int> label(mesh_.facet_count(), -1);
        for (std::size_t i = 0; i < rs.size(); ++i) {
            for (auto f : rs[i].facets) {
                label[f] = static_cast<int>(i);
            }
        }
        return label;
    }

    static void sort_by_first(std::vector<Region>& rs) {
        std::sort(rs.begin(), rs.end(), [](const Region& a, const Region& b) { return a.facets.front() < b.facets.front(); });
    }

    std::vector<Region> elementary() const {
        std::vector<Region> rs;
        std::vector<std::uint32_t> reachable;
        for (std::uint32_t f = 0; f < mesh_.facet_count(); ++f) {
            if (cls_[f] != Undercut) {
                reachable.push_back(f);
            }
        }
        for (auto& c : class_components()) {
            rs.push_back({c, cls_[c.front()]});
        }
        const double threshold = p_.min_region_fraction * area_of(reachable);
        for (;;) {
            sort_by_first(rs);
            const auto bnd = boundaries(labels(rs));
            int victim = -1;
            for (int i = 0; i < static_cast<int>(rs.size()); ++i) {
                bool has_neighbour = false;
                for (const auto& [k, len] : bnd) {
                    has_neighbour = has_neighbour || k.first == i || k.second == i;
                }
                if (!has_neighbour || area_of(rs[i].facets) >= threshold) {
                    continue;
                }
                if (victim < 0 || area_of(rs[i].facets) < area_of(rs[victim].facets)) {
                    victim = i;  // ties keep the earlier one, which has the smaller first facet
                }
            }
            if (victim < 0) {
                break;
            }
            double longest = 0.0;
            for (const auto& [k, len] : bnd) {
                if (k.first == victim || k.second == victim) {
                    longest = std::max(longest, len);
                }
            }
            int host = -1;
            for (const auto& [k, len] : bnd) {
                const int other = k.first == victim ? k.second : k.second == victim ? k.first : -1;
                if (other >= 0 && len >= longest * (1.0 - 1e-9) && (host < 0 || other < host)) {
                    host = other;
                }
            }
            auto& h = rs[host].facets;
            h.insert(h.end(), rs[victim].facets.begin(), rs[victim].facets.end());
            std::sort(h.begin(), h.end());
            rs.erase(rs.begin() + victim);
        }
        sort_by_first(rs);
        for (auto& r : rs) {
            classify(r);
        }
        return rs;
    }

    bool compatible(const Region& a, const Region& b) const {
        if (a.cls != b.cls || a.cont != b.cont) {
            return false;
        }
        switch (a.cont) {
            case Indifferent: return true;
            case Oriented: return a.direction == b.direction;
            case ZLevel: return std::abs(a.kappa_mean - b.kappa_mean) <= p_.epsilon_z;
            default: return false;
        }
    }

    std::vector<Region> grouped(std::vector<Region> rs) const {
        for (bool again = true; again;) {
            again = false;
            sort_by_first(rs);
            for (const auto& [k, len] : boundaries(labels(rs))) {
                const Region& a = rs[k.first];
                const Region& b = rs[k.second];
                if (!compatible(a, b)) {
                    continue;
                }
                Region u{a.facets, a.cls};
                u.facets.insert(u.facets.end(), b.facets.begin(), b.facets.end());
                std::sort(u.facets.begin(), u.facets.end());
                classify(u);
                if (u.cont != a.cont || (u.cont == Oriented && u.direction != a.direction)) {
                    continue;
                }
                rs[k.first] = u;
                rs.erase(rs.begin() + k.second);
                again = true;
                break;
            }
        }
        sort_by_first(rs);
        return rs;
    }

    std::vector<Relation> relations(const std::vector<Region>& rs) const {
        const auto label = labels(rs);
        std::vector<Relation> out;
        for (std::uint32_t i = 0; i < rs.size(); ++i) {
            for (std::uint32_t j = i + 1; j < rs.size(); ++j) {
                double lens[3] = {0, 0, 0};
                bool contact = false;
                for (const auto& e : edges_) {
                    const bool ij = (label[e.a] == static_cast<int>(i) && label[e.b] == static_cast<int>(j)) ||
                                    (label[e.a] == static_cast<int>(j) && label[e.b] == static_cast<int>(i));
                    if (!ij) {
                        continue;
                    }
                    contact = true;
                    // e.a < e.b: the lower facet is the reference.
                    const Vec3 toward = mesh_.facet_centroids()[e.b] - mesh_.facet_centroids()[e.a];
                    const double s = dieplan::dot(mesh_.facet_normals()[e.a], toward);
                    lens[s < -p_.epsilon_conv ? 1 : s > p_.epsilon_conv ? 0 : 2] += e.length;
                }
                if (contact) {
                    const double tol = 1e-9 * (lens[0] + lens[1] + lens[2]);
                    int kind = 2;
                    if (lens[0] > lens[1] + tol && lens[0] > lens[2] + tol) {
                        kind = 0;
                    } else if (lens[1] > lens[0] + tol && lens[1] > lens[2] + tol) {
                        kind = 1;
                    }
                    out.push_back({i, j, kind});
                    continue;
                }
                double best = INFINITY;
                for (auto f : rs[i].facets) {
                    for (auto g : rs[j].facets) {
                        for (auto u : mesh_.facets()[f]) {
                            for (auto v : mesh_.facets()[g]) {
                                best = std::min(best, dieplan::distance(mesh_.vertex(u), mesh_.vertex(v)));
                            }
                        }
                    }
                }
                if (best <= p_.d_prox) {
                    out.push_back({i, j, 3});
                }
            }
        }
        return out;
    }

    const TriMesh& mesh_;
    Params p_;
    std::vector<Edge> edges_;
    std::vector<double> omega_, kappa_;
    std::vector<int> cls_;
};

// Contact class of a sphere facet from the polar angle of its centroid direction (+Z axis).
inline int sphere_class(double polar_deg, double tau_draft, double tau_flat) {
    const double w = std::cos(polar_deg * std::numbers::pi / 180.0);
    return w < 0.0 ? Undercut : w >= tau_flat ? Flat : w <= tau_draft ? Draft : Transition;
}

}  // namespace oracle
