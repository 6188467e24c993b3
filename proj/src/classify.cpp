#include "necklace/classify.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <set>

#include "necklace/errors.hpp"
#include "necklace/topology.hpp"
#include "necklace/util.hpp"

namespace necklace {

namespace {

// Membership walk z_node in F_{w}, starting from a node state.
Tri node_in(const IncidenceAutomaton& aut, int node_state, std::initializer_list<int> word) {
    std::vector<int> w(word);
    return aut.walk(node_state, w.data(), w.size());
}

}  // namespace

GoodReport is_good(const NecklaceSystem& sys, const IncidenceAutomaton& aut) {
    GoodReport r;
    bool unknown = false;
    for (int k = 1; k <= sys.n(); ++k) {
        int b0 = sys.prev(k);  // z_{k-1} (z_0 == z_n)
        int b1 = k;
        for (int j = 1; j <= sys.n(); ++j) {
            Tri t0 = node_in(aut, aut.node_state[b0 - 1], {k, j});
            Tri t1 = node_in(aut, aut.node_state[b1 - 1], {k, j});
            Tri both = tri_and(t0, t1);
            if (both == Tri::Yes)
                r.witnesses.push_back({k, j});
            else if (both == Tri::Unknown)
                unknown = true;
        }
    }
    if (!r.witnesses.empty())
        r.status = Status::Refuted;
    else
        r.status = unknown ? Status::Unknown : Status::Verified;
    return r;
}

StableReport is_stable(const NecklaceSystem& sys, const IncidenceAutomaton& aut) {
    StableReport r;
    bool unknown = false;
    bool all_ok = true;
    for (int k = 1; k <= sys.n(); ++k) {
        int b0 = sys.prev(k), b1 = k;
        std::vector<int> touching;
        bool k_unknown = false;
        for (int j = 1; j <= sys.n(); ++j) {
            Tri t0 = node_in(aut, aut.node_state[b0 - 1], {k, j});
            Tri t1 = node_in(aut, aut.node_state[b1 - 1], {k, j});
            if (t0 == Tri::Yes || t1 == Tri::Yes)
                touching.push_back(j);
            else if (t0 == Tri::Unknown || t1 == Tri::Unknown)
                k_unknown = true;
        }
        r.contact_counts.push_back(static_cast<int>(touching.size()));
        r.contact_digits.push_back(touching);
        if (touching.size() < 2) {
            if (k_unknown)
                unknown = true;
            else
                all_ok = false;
        }
    }
    if (!all_ok)
        r.status = Status::Refuted;
    else
        r.status = unknown ? Status::Unknown : Status::Verified;
    return r;
}

RamifyReport bounded_ramification(const NecklaceSystem& sys, const IncidenceAutomaton& aut,
                                  int M) {
    RamifyReport r;
    bool any_unbounded = false, any_unknown = false;
    for (int k = 1; k <= sys.n(); ++k) {
        RamifyNodeInfo info;
        info.k = k;
        RamificationSequence seq = ramification_sequence(sys, aut, NodeRef{Word{}, k}, M);
        info.counts = seq.counts;
        if (!seq.exact) r.exact = false;
        if (aut.closed) {
            info.bounded = aut.bounded_paths(aut.node_state[k - 1]);
        } else {
            // Window evidence on the observed counts.
            std::size_t half = info.counts.size() / 2;
            bool constant_tail = true, increasing_tail = true;
            for (std::size_t i = half; i + 1 < info.counts.size(); ++i) {
                if (info.counts[i] != info.counts[i + 1]) constant_tail = false;
                if (info.counts[i] >= info.counts[i + 1]) increasing_tail = false;
            }
            info.bounded = Tri::Unknown;
            info.growth = constant_tail   ? "bounded-evidence (window)"
                          : increasing_tail ? "unbounded-evidence (window)"
                                            : "undetermined (window)";
            r.exact = false;
        }
        if (info.growth.empty()) {
            if (info.bounded == Tri::Yes)
                info.growth = "constant " + std::to_string(info.counts.empty()
                                                               ? 1
                                                               : info.counts.back());
            else if (info.bounded == Tri::No) {
                bool doubling = true;
                for (std::size_t i = 0; i + 1 < info.counts.size(); ++i)
                    if (info.counts[i + 1] != 2 * info.counts[i]) doubling = false;
                info.growth = doubling ? "doubling (2^m)" : "unbounded";
            }
        }
        if (info.bounded == Tri::No) any_unbounded = true;
        if (info.bounded == Tri::Unknown) any_unknown = true;
        r.nodes.push_back(std::move(info));
    }
    if (any_unbounded)
        r.status = Status::Refuted;
    else if (any_unknown)
        r.status = Status::Unknown;
    else
        r.status = Status::Verified;
    if (!r.exact) r.note = "automaton not closed; counts are depth-limited evidence";
    return r;
}

// ---------------------------------------------------------------------------
// Property I via route enumeration over the child cycle of each F_k.
// ---------------------------------------------------------------------------

namespace {

// 1-level chains (digit arcs) inside base between two targets, returning all
// valid candidates ordered by preference.
std::vector<std::vector<int>> piece_arcs(const NecklaceSystem& sys, const Target& x,
                                         const Target& u, const Word& base) {
    auto digit_set = [&](const Target& t) {
        std::vector<int> out;
        for (int d = 1; d <= sys.n(); ++d)
            if (t.contains(base.appended(d)) == Tri::Yes) out.push_back(d);
        return out;
    };
    std::vector<int> dx = digit_set(x), du = digit_set(u);
    std::vector<std::vector<int>> arcs;
    for (int d : dx)
        if (std::find(du.begin(), du.end(), d) != du.end()) arcs.push_back({d});
    for (int a : dx)
        for (int b : du)
            for (int dir : {+1, -1}) {
                std::vector<int> arc{a};
                int cur = a;
                while (cur != b && arc.size() <= static_cast<std::size_t>(sys.n())) {
                    cur = dir > 0 ? sys.next(cur) : sys.prev(cur);
                    arc.push_back(cur);
                }
                if (cur != b || arc.size() >= static_cast<std::size_t>(sys.n())) continue;
                bool ok = true;
                for (std::size_t i = 1; i < arc.size() && ok; ++i)
                    if (std::find(dx.begin(), dx.end(), arc[i]) != dx.end()) ok = false;
                for (std::size_t i = 0; i + 1 < arc.size() && ok; ++i)
                    if (std::find(du.begin(), du.end(), arc[i]) != du.end()) ok = false;
                if (ok) arcs.push_back(arc);
            }
    std::stable_sort(arcs.begin(), arcs.end(),
                     [](const std::vector<int>& l, const std::vector<int>& r) {
                         return l.size() < r.size();
                     });
    return arcs;
}

// Is there a 1-level chain inside `base` from x to the node target `w`
// whose pieces all avoid every point in `avoid`?
bool avoided_piece_exists(const NecklaceSystem& sys, const Target& x, const Target& w,
                          const Word& base, const std::vector<const Target*>& avoid) {
    for (const auto& arc : piece_arcs(sys, x, w, base)) {
        bool ok = true;
        for (int d : arc) {
            Word piece = base.appended(d);
            for (const Target* s : avoid)
                if (s->contains(piece) != Tri::No) ok = false;
            if (!ok) break;
        }
        if (ok) return true;
    }
    return false;
}

// Disjoint pair of chains inside `base`: from x to node a and from node b to
// u, sharing no pieces and with all cross pairs non-touching.
bool disjoint_piece_pair_exists(const NecklaceSystem& sys, const IncidenceAutomaton& aut,
                                const Target& x, const Target& a, const Target& b,
                                const Target& u, const Word& base) {
    auto arcs_xa = piece_arcs(sys, x, a, base);
    auto arcs_bu = piece_arcs(sys, b, u, base);
    for (const auto& arc1 : arcs_xa)
        for (const auto& arc2 : arcs_bu) {
            bool ok = true;
            for (int d1 : arc1) {
                for (int d2 : arc2) {
                    if (d1 == d2) {
                        ok = false;
                        break;
                    }
                    Word w1 = base.appended(d1), w2 = base.appended(d2);
                    CopyIntersection ci = copy_contact(sys, aut, w1, w2);
                    if (ci.kind != CopyIntersection::Kind::Disjoint) {
                        ok = false;
                        break;
                    }
                }
                if (!ok) break;
            }
            if (ok) return true;
        }
    return false;
}

}  // namespace

PropertyIReport check_property_I(const NecklaceSystem& sys, const IncidenceAutomaton& aut) {
    PropertyIReport rep;
    bool any_refuted = false, any_unknown = false;

    for (int k = 1; k <= sys.n(); ++k) {
        PropertyIReport::PerK pk;
        pk.k = k;
        Target b0 = Target::node(sys, aut, NodeRef{Word{}, sys.prev(k)});
        Target b1 = Target::node(sys, aut, NodeRef{Word{}, k});
        Word base{std::vector<int>{k}};

        // Containing children and main-node flags.
        std::vector<int> din, dout;
        for (int d = 1; d <= sys.n(); ++d) {
            if (b0.contains(base.appended(d)) == Tri::Yes) din.push_back(d);
            if (b1.contains(base.appended(d)) == Tri::Yes) dout.push_back(d);
        }
        auto is_main_of_k = [&](const Point& p) {
            for (int l = 1; l <= sys.n(); ++l)
                if (dist(p, sys.map(k)(sys.node(l))) <= sys.node_tolerance) return true;
            return false;
        };
        bool main0 = is_main_of_k(b0.point());
        bool main1 = is_main_of_k(b1.point());

        bool verified = false;
        std::string method;

        // Routes over the child cycle of F_k.
        for (int cin : din) {
            for (int cout : dout) {
                for (int dir : {+1, -1}) {
                    if (verified) break;
                    std::vector<int> route{cin};
                    int cur = cin;
                    while (cur != cout && route.size() <= static_cast<std::size_t>(sys.n())) {
                        cur = dir > 0 ? sys.next(cur) : sys.prev(cur);
                        route.push_back(cur);
                    }
                    if (cur != cout) continue;
                    if (route.size() > static_cast<std::size_t>(sys.n())) continue;
                    if (cin == cout && route.size() > 1) continue;
                    std::size_t r = route.size();

                    // Junction nodes between consecutive route children.
                    std::vector<Target> junctions;
                    bool degenerate = false;
                    for (std::size_t s = 0; s + 1 < r; ++s) {
                        int nd = sys.node_between(route[s], route[s + 1]);
                        Target j = Target::node(sys, aut, NodeRef{base, nd});
                        if (dist(j.point(), b0.point()) <= sys.node_tolerance ||
                            dist(j.point(), b1.point()) <= sys.node_tolerance)
                            degenerate = true;
                        junctions.push_back(std::move(j));
                    }
                    if (degenerate) continue;

                    int mains = static_cast<int>(junctions.size()) + (main0 ? 1 : 0) +
                                (main1 ? 1 : 0);
                    if (mains < 2) continue;

                    if (r == 1) {
                        verified = true;  // both endpoints are its own contact nodes
                        method = "single-child arc through two boundary contact nodes";
                        break;
                    }

                    // Wrap contact between the first and last route children.
                    std::optional<Target> wrap;
                    if (r >= 3 && sys.adjacent(route.front(), route.back())) {
                        int nd = sys.node_between(route.front(), route.back());
                        wrap = Target::node(sys, aut, NodeRef{base, nd});
                    }

                    std::vector<const Target*> avoid_first, avoid_last;
                    if (wrap) {
                        avoid_first.push_back(&*wrap);
                        avoid_last.push_back(&*wrap);
                    }
                    Word first_child = base.appended(route.front());
                    Word last_child = base.appended(route.back());
                    if (b1.contains(first_child) == Tri::Yes) avoid_first.push_back(&b1);
                    if (b0.contains(last_child) == Tri::Yes) avoid_last.push_back(&b0);

                    bool piece1 = avoided_piece_exists(sys, b0, junctions.front(), first_child,
                                                       avoid_first);
                    bool piece2 = avoided_piece_exists(sys, junctions.back(), b1, last_child,
                                                       avoid_last);
                    // Intermediate children only need any arc, which exists.
                    if (piece1 && piece2) {
                        verified = true;
                        method = "route through " + std::to_string(r) +
                                 " children with " + std::to_string(mains) + " contact nodes";
                    }
                }
                if (verified) break;
            }
            if (verified) break;
        }

        // Exit-and-return construction when both boundary nodes sit in one
        // child and no plain route worked.
        bool structural_dead_end = false;
        if (!verified && din.size() == 1 && dout.size() == 1 && din == dout && !main0 && !main1) {
            int c = din.front();
            Word child = base.appended(c);
            int left = sys.prev(c), right = sys.next(c);
            Target a = Target::node(sys, aut, NodeRef{base, sys.node_between(c, left)});
            Target b = Target::node(sys, aut, NodeRef{base, sys.node_between(c, right)});
            // Two orientations of exit/reentry.
            if (disjoint_piece_pair_exists(sys, aut, b0, a, b, b1, child) ||
                disjoint_piece_pair_exists(sys, aut, b0, b, a, b1, child)) {
                verified = true;
                method = "exit-and-return arc through both child boundary nodes";
            } else {
                structural_dead_end = true;
            }
        }

        if (verified) {
            pk.status = Status::Verified;
            pk.method = method;
        } else if (structural_dead_end) {
            pk.status = Status::Refuted;
            pk.method = "boundary pair confined to one child; no one-level construction";
            any_refuted = true;
        } else {
            pk.status = Status::Unknown;
            pk.method = "no one-level construction found";
            any_unknown = true;
        }
        rep.detail.push_back(std::move(pk));
    }

    if (any_refuted)
        rep.status = Status::Refuted;
    else if (any_unknown)
        rep.status = Status::Unknown;
    else
        rep.status = Status::Verified;
    return rep;
}

ClassificationReport classify_system(const NecklaceSystem& sys, const IncidenceAutomaton& aut,
                                     int ramify_depth) {
    ClassificationReport r;
    r.good = is_good(sys, aut);
    r.stable = is_stable(sys, aut);
    r.ramification = bounded_ramification(sys, aut, ramify_depth);
    r.property_i = check_property_I(sys, aut);
    return r;
}

// ---------------------------------------------------------------------------
// Polygon predicates with an epsilon band.
// ---------------------------------------------------------------------------

namespace {

double cross(Point o, Point a, Point b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

// -1 outside, 0 within band of the boundary, +1 strictly inside.
int point_vs_polygon(const std::vector<Point>& poly, Point p, double eps) {
    std::size_t n = poly.size();
    bool inside = false;
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        Point a = poly[j], b = poly[i];
        // Distance to segment.
        Vec2 ab = b - a;
        double len2 = ab.dot(ab);
        double t = len2 > 0 ? std::clamp((p - a).dot(ab) / len2, 0.0, 1.0) : 0.0;
        if (dist(p, a + ab * t) <= eps) return 0;
        if ((a.y > p.y) != (b.y > p.y)) {
            double xint = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
            if (p.x < xint) inside = !inside;
        }
    }
    return inside ? +1 : -1;
}

// Proper (transversal, interior) crossing of segments, outside the band.
bool segments_cross(Point a, Point b, Point c, Point d, double eps) {
    double d1 = cross(c, d, a), d2 = cross(c, d, b);
    double d3 = cross(a, b, c), d4 = cross(a, b, d);
    double scale_cd = dist(c, d), scale_ab = dist(a, b);
    if (scale_cd == 0 || scale_ab == 0) return false;
    // Signed distances of endpoints from each line.
    double e1 = d1 / scale_cd, e2 = d2 / scale_cd, e3 = d3 / scale_ab, e4 = d4 / scale_ab;
    return ((e1 > eps && e2 < -eps) || (e1 < -eps && e2 > eps)) &&
           ((e3 > eps && e4 < -eps) || (e3 < -eps && e4 > eps));
}

bool polygons_properly_cross(const std::vector<Point>& P, const std::vector<Point>& Q,
                             double eps) {
    for (std::size_t i = 0; i < P.size(); ++i)
        for (std::size_t j = 0; j < Q.size(); ++j)
            if (segments_cross(P[i], P[(i + 1) % P.size()], Q[j], Q[(j + 1) % Q.size()], eps))
                return true;
    return false;
}

std::vector<Point> sample_points(const std::vector<Point>& poly) {
    std::vector<Point> pts = poly;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        Point a = poly[i], b = poly[(i + 1) % poly.size()];
        pts.push_back((a + b) * 0.5);
    }
    Point centroid{0, 0};
    for (const Point& p : poly) centroid += p;
    pts.push_back(centroid * (1.0 / poly.size()));
    return pts;
}

bool polygon_is_simple(const std::vector<Point>& poly, double eps) {
    if (poly.size() < 3) return false;
    for (std::size_t i = 0; i < poly.size(); ++i)
        for (std::size_t j = i + 1; j < poly.size(); ++j) {
            if (i == j || (i == 0 && j + 1 == poly.size())) continue;
            if (j == i + 1) continue;
            if (segments_cross(poly[i], poly[(i + 1) % poly.size()], poly[j],
                               poly[(j + 1) % poly.size()], eps))
                return false;
        }
    return true;
}

}  // namespace

double polygon_area(const PolygonWitness& poly) {
    double a = 0;
    std::size_t n = poly.vertices.size();
    for (std::size_t i = 0; i < n; ++i) {
        Point p = poly.vertices[i], q = poly.vertices[(i + 1) % n];
        a += p.x * q.y - q.x * p.y;
    }
    return std::fabs(a) * 0.5;
}

OscReport check_osc_witness(const NecklaceSystem& sys, const PolygonWitness& witness,
                            double tol) {
    OscReport rep;
    const auto& V = witness.vertices;
    if (V.size() < 3) throw InputError("witness polygon needs at least 3 vertices");
    double diam = 0;
    for (std::size_t i = 0; i < V.size(); ++i)
        for (std::size_t j = i + 1; j < V.size(); ++j) diam = std::max(diam, dist(V[i], V[j]));
    double eps = tol * std::max(1.0, diam);
    if (!polygon_is_simple(V, eps)) throw InputError("witness polygon is not simple");

    std::vector<std::vector<Point>> images;
    for (int k = 1; k <= sys.n(); ++k) {
        std::vector<Point> img;
        for (Point p : V) img.push_back(sys.map(k)(p));
        images.push_back(std::move(img));
    }

    bool ambiguous = false;
    // (a) containment of each image in the witness.
    for (int k = 0; k < sys.n(); ++k) {
        bool outside = false, strictly_inside = false;
        for (Point p : sample_points(images[k])) {
            int side = point_vs_polygon(V, p, eps);
            if (side < 0) outside = true;
            if (side > 0) strictly_inside = true;
        }
        if (outside || polygons_properly_cross(V, images[k], eps)) {
            rep.status = Status::Refuted;
            rep.note = "image of map " + std::to_string(k + 1) + " is not inside the witness";
            return rep;
        }
        if (!strictly_inside) ambiguous = true;
    }
    // (b) pairwise interior disjointness of the images.
    for (int a = 0; a < sys.n(); ++a)
        for (int b = a + 1; b < sys.n(); ++b) {
            bool strict_overlap = false;
            for (Point p : sample_points(images[a]))
                if (point_vs_polygon(images[b], p, eps) > 0) strict_overlap = true;
            for (Point p : sample_points(images[b]))
                if (point_vs_polygon(images[a], p, eps) > 0) strict_overlap = true;
            if (strict_overlap || polygons_properly_cross(images[a], images[b], eps)) {
                rep.status = Status::Refuted;
                rep.note = "images of maps " + std::to_string(a + 1) + " and " +
                           std::to_string(b + 1) + " overlap";
                return rep;
            }
        }

    rep.status = ambiguous ? Status::Unknown : Status::Verified;
    if (ambiguous)
        rep.note = "containment holds only up to the tolerance band";
    else
        rep.note = "images nest into the witness with pairwise disjoint interiors";
    return rep;
}

// ---------------------------------------------------------------------------
// Raster complement analysis.
// ---------------------------------------------------------------------------

namespace {

struct Raster {
    int w = 0, h = 0;
    double x0 = 0, y0 = 0, cell = 0;
    std::vector<char> occupied;  // outer cover of the attractor

    int idx(int x, int y) const { return y * w + x; }
    Point center(int x, int y) const {
        return {x0 + (x + 0.5) * cell, y0 + (y + 0.5) * cell};
    }
};

// Mark pixels intersecting outer enclosures of pieces, refining while a
// piece's enclosure is wider than a pixel.
void rasterize(const NecklaceSystem& sys, Raster& r, const AffineMap& m, double radius) {
    Ball b{m(sys.enclosure.center), radius};
    if (radius > 0.5 * r.cell) {
        for (int d = 1; d <= sys.n(); ++d)
            rasterize(sys, r, compose(m, sys.map(d)),
                      radius * sys.map(d).linear.op_norm());
        return;
    }
    int xlo = static_cast<int>(std::floor((b.center.x - b.radius - r.x0) / r.cell));
    int xhi = static_cast<int>(std::floor((b.center.x + b.radius - r.x0) / r.cell));
    int ylo = static_cast<int>(std::floor((b.center.y - b.radius - r.y0) / r.cell));
    int yhi = static_cast<int>(std::floor((b.center.y + b.radius - r.y0) / r.cell));
    for (int y = std::max(0, ylo); y <= std::min(r.h - 1, yhi); ++y)
        for (int x = std::max(0, xlo); x <= std::min(r.w - 1, xhi); ++x)
            r.occupied[r.idx(x, y)] = 1;
}

Raster build_raster(const NecklaceSystem& sys, int resolution) {
    if (resolution < 16 || resolution > 8192)
        throw InputError("raster resolution must lie in [16, 8192]");
    Raster r;
    double pad = sys.enclosure.radius * 0.05;
    double span = 2 * (sys.enclosure.radius + pad);
    r.w = r.h = resolution;
    r.cell = span / resolution;
    r.x0 = sys.enclosure.center.x - sys.enclosure.radius - pad;
    r.y0 = sys.enclosure.center.y - sys.enclosure.radius - pad;
    r.occupied.assign(static_cast<std::size_t>(r.w) * r.h, 0);
    rasterize(sys, r, AffineMap{}, sys.enclosure.radius);
    return r;
}

// 4-connected flood from all frame pixels over free cells.
std::vector<int> label_components(const Raster& r, int& n_bounded,
                                  std::vector<std::vector<std::pair<int, int>>>& comp_pixels) {
    std::vector<int> label(r.occupied.size(), -1);  // -1 unvisited free/occupied
    std::deque<std::pair<int, int>> queue;
    auto push = [&](int x, int y, int lab) {
        if (x < 0 || y < 0 || x >= r.w || y >= r.h) return;
        int i = r.idx(x, y);
        if (r.occupied[i] || label[i] != -1) return;
        label[i] = lab;
        queue.push_back({x, y});
    };
    // Outer region: label 0.
    for (int x = 0; x < r.w; ++x) {
        push(x, 0, 0);
        push(x, r.h - 1, 0);
    }
    for (int y = 0; y < r.h; ++y) {
        push(0, y, 0);
        push(r.w - 1, y, 0);
    }
    while (!queue.empty()) {
        auto [x, y] = queue.front();
        queue.pop_front();
        int lab = label[r.idx(x, y)];
        push(x + 1, y, lab);
        push(x - 1, y, lab);
        push(x, y + 1, lab);
        push(x, y - 1, lab);
    }
    // Remaining free pixels: bounded components.
    int next = 1;
    for (int y = 0; y < r.h; ++y)
        for (int x = 0; x < r.w; ++x) {
            int i = r.idx(x, y);
            if (r.occupied[i] || label[i] != -1) continue;
            int lab = next++;
            comp_pixels.push_back({});
            push(x, y, lab);
            while (!queue.empty()) {
                auto [cx, cy] = queue.front();
                queue.pop_front();
                comp_pixels[lab - 1].push_back({cx, cy});
                push(cx + 1, cy, lab);
                push(cx - 1, cy, lab);
                push(cx, cy + 1, lab);
                push(cx, cy - 1, lab);
            }
        }
    n_bounded = next - 1;
    return label;
}

}  // namespace

ComplementAnalysis complement_components(const NecklaceSystem& sys, int resolution) {
    Raster r = build_raster(sys, resolution);
    ComplementAnalysis out;
    out.resolution = resolution;
    out.note = "resolution-limited outer-cover analysis";
    int n_bounded = 0;
    std::vector<std::vector<std::pair<int, int>>> comp_pixels;
    label_components(r, n_bounded, comp_pixels);
    for (const auto& pixels : comp_pixels) {
        if (pixels.size() < 4) continue;
        ++out.bounded_components;
        out.pixel_areas.push_back(static_cast<int>(pixels.size()));
        // Deterministic interior seed: first pixel whose 4 neighbors are in
        // the same component, else the first pixel.
        std::set<std::pair<int, int>> inset(pixels.begin(), pixels.end());
        std::pair<int, int> seed = pixels.front();
        for (const auto& [x, y] : pixels) {
            if (inset.count({x + 1, y}) && inset.count({x - 1, y}) && inset.count({x, y + 1}) &&
                inset.count({x, y - 1})) {
                seed = {x, y};
                break;
            }
        }
        out.seeds.push_back(r.center(seed.first, seed.second));
    }
    return out;
}

PolygonWitness build_osc_witness_from_component(const NecklaceSystem& sys, Point seed,
                                                int resolution) {
    Raster r = build_raster(sys, resolution);
    int sx = static_cast<int>(std::floor((seed.x - r.x0) / r.cell));
    int sy = static_cast<int>(std::floor((seed.y - r.y0) / r.cell));
    if (sx < 0 || sy < 0 || sx >= r.w || sy >= r.h)
        throw InputError("seed lies outside the rasterized region");
    if (r.occupied[r.idx(sx, sy)])
        throw InputError("seed pixel meets the attractor cover; choose an interior point");

    int n_bounded = 0;
    std::vector<std::vector<std::pair<int, int>>> comp_pixels;
    std::vector<int> label = label_components(r, n_bounded, comp_pixels);
    int lab = label[r.idx(sx, sy)];
    if (lab <= 0) throw InputError("seed lies in the unbounded complement component");

    // Directed boundary edges on the cell-corner grid, component on the left.
    std::set<std::pair<int, int>> cells(comp_pixels[lab - 1].begin(),
                                        comp_pixels[lab - 1].end());
    auto in_comp = [&](int x, int y) { return cells.count({x, y}) > 0; };
    using Corner = std::pair<int, int>;
    std::map<Corner, std::vector<Corner>> outgoing;
    for (const auto& [x, y] : cells) {
        if (!in_comp(x, y - 1)) outgoing[{x, y}].push_back({x + 1, y});
        if (!in_comp(x + 1, y)) outgoing[{x + 1, y}].push_back({x + 1, y + 1});
        if (!in_comp(x, y + 1)) outgoing[{x + 1, y + 1}].push_back({x, y + 1});
        if (!in_comp(x - 1, y)) outgoing[{x, y + 1}].push_back({x, y});
    }
    // Outer loop starts at the lexicographically smallest corner.
    Corner start = outgoing.begin()->first;
    std::vector<Point> poly;
    Corner prev{start.first - 1, start.second};  // fake incoming direction +x
    Corner cur = start;
    int guard = 8 * static_cast<int>(cells.size()) + 16;
    do {
        poly.push_back({r.x0 + cur.first * r.cell, r.y0 + cur.second * r.cell});
        auto it = outgoing.find(cur);
        if (it == outgoing.end() || it->second.empty())
            throw Error("component outline walk did not close");
        Corner next = it->second.front();
        if (it->second.size() > 1) {
            // Diagonal contact: pick the sharpest left turn to stay on the
            // outer loop.
            auto angle = [&](Corner c) {
                double inx = cur.first - prev.first, iny = cur.second - prev.second;
                double ox = c.first - cur.first, oy = c.second - cur.second;
                return std::atan2(inx * oy - iny * ox, inx * ox + iny * oy);
            };
            for (const Corner& c : it->second)
                if (angle(c) > angle(next)) next = c;
        }
        prev = cur;
        cur = next;
        if (--guard <= 0) throw Error("component outline walk did not close");
    } while (cur != start);

    // Drop collinear corner chains.
    PolygonWitness w;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        Point prev = poly[(i + poly.size() - 1) % poly.size()];
        Point cur = poly[i];
        Point nxt = poly[(i + 1) % poly.size()];
        if (std::fabs(cross(prev, cur, nxt)) > 1e-18) w.vertices.push_back(cur);
    }
    if (w.vertices.size() < 3) throw Error("degenerate component outline");
    return w;
}

}  // namespace necklace
