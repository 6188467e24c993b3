#include "necklace/system.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <unordered_map>

#include "necklace/errors.hpp"
#include "necklace/util.hpp"
#include "contact.hpp"

namespace necklace {

Ball attractor_enclosure(const std::vector<AffineMap>& maps) {
    Point c0 = fixed_point(maps.front());
    double cmax = 0.0, dmax = 0.0;
    for (const auto& m : maps) {
        cmax = std::max(cmax, m.linear.op_norm());
        dmax = std::max(dmax, dist(m(c0), c0));
    }
    return {c0, dmax / (1.0 - cmax)};
}

Ball copy_enclosure(const NecklaceSystem& sys, const Word& w) {
    Ball b = sys.enclosure;
    AffineMap m;
    double factor = 1.0;
    for (int d : w.digits) {
        m = compose(m, sys.map(d));
        factor *= sys.map(d).linear.op_norm();
    }
    return {m(b.center), factor * b.radius};
}

std::vector<Point> sample_attractor(const NecklaceSystem& sys, int depth, std::size_t budget) {
    if (budget == 0) budget = point_budget();
    double count = std::pow(static_cast<double>(sys.n()), depth);
    if (count > static_cast<double>(budget))
        throw BudgetError("sample_attractor: " + std::to_string(sys.n()) + "^" +
                          std::to_string(depth) + " points exceed budget " +
                          std::to_string(budget));
    std::vector<Point> pts;
    pts.reserve(static_cast<std::size_t>(count));
    // DFS in lexicographic word order with incremental composition.
    struct Frame {
        AffineMap m;
        int digit;
    };
    std::vector<Frame> stack;
    stack.push_back({AffineMap{}, 0});
    while (!stack.empty()) {
        Frame& f = stack.back();
        if (static_cast<int>(stack.size()) - 1 == depth) {
            pts.push_back(f.m(sys.enclosure.center));
            stack.pop_back();
            continue;
        }
        if (f.digit >= sys.n()) {
            stack.pop_back();
            continue;
        }
        ++f.digit;
        stack.push_back({compose(f.m, sys.map(f.digit)), 0});
    }
    return pts;
}

namespace {

std::int64_t quant(double v, double cell) { return std::llround(v / cell); }

struct PointKey {
    std::int64_t x, y;
    bool operator==(const PointKey& o) const { return x == o.x && y == o.y; }
};
struct PointKeyHash {
    std::size_t operator()(const PointKey& k) const {
        return std::hash<std::int64_t>()(k.x * 1000003 ^ k.y);
    }
};

Tri point_in_attractor_rec(const NecklaceSystem& sys, Point q, double tol, int depth,
                           std::vector<Point>& path,
                           std::unordered_map<PointKey, Tri, PointKeyHash>& memo) {
    if (!sys.enclosure.contains(q, tol)) return Tri::No;
    for (const Point& v : path)
        if (dist(q, v) <= tol) return Tri::Yes;  // inverse orbit revisits itself
    if (depth <= 0) return Tri::Unknown;

    double cell = std::max(tol, 1e-13);
    PointKey key{quant(q.x, cell), quant(q.y, cell)};
    if (auto it = memo.find(key); it != memo.end()) return it->second;

    path.push_back(q);
    bool unknown = false;
    Tri result = Tri::No;
    for (int d = 1; d <= sys.n(); ++d) {
        Point qi = inverse(sys.map(d))(q);
        Tri t = point_in_attractor_rec(sys, qi, tol, depth - 1, path, memo);
        if (t == Tri::Yes) {
            result = Tri::Yes;
            break;
        }
        if (t == Tri::Unknown) unknown = true;
    }
    path.pop_back();
    if (result != Tri::Yes && unknown) result = Tri::Unknown;
    // Cache only definite answers; Unknown depends on the remaining depth.
    if (result != Tri::Unknown) memo.emplace(key, result);
    return result;
}

}  // namespace

Tri point_in_attractor(const NecklaceSystem& sys, Point p, double tol, int max_depth) {
    std::vector<Point> path;
    std::unordered_map<PointKey, Tri, PointKeyHash> memo;
    return point_in_attractor_rec(sys, p, tol, max_depth, path, memo);
}

Tri point_in_piece(const NecklaceSystem& sys, Point p, int digit, double tol, int max_depth) {
    Ball piece = map_ball(sys.map(digit), sys.enclosure);
    if (!piece.contains(p, tol)) return Tri::No;
    return point_in_attractor(sys, inverse(sys.map(digit))(p), tol, max_depth);
}

std::vector<Point> main_nodes(const NecklaceSystem& sys, double tol) {
    std::vector<Point> nodes(sys.n());
    std::string err;
    parallel_for(static_cast<std::size_t>(sys.n()), [&](std::size_t i) {
        int k = static_cast<int>(i) + 1;
        auto res = detail::pair_contact(sys, k, sys.next(k), tol);
        if (res.outcome == detail::PairContact::Outcome::Disjoint) {
            err = "adjacent pieces " + std::to_string(k) + "," + std::to_string(sys.next(k)) +
                  " do not intersect";
            return;
        }
        if (res.outcome == detail::PairContact::Outcome::Budget) {
            err = "contact descent for pieces " + std::to_string(k) + "," +
                  std::to_string(sys.next(k)) + " exceeded the state budget";
            return;
        }
        if (res.points.size() != 1 || res.spread > tol) {
            err = "contact of pieces " + std::to_string(k) + "," + std::to_string(sys.next(k)) +
                  " did not resolve to a single point (spread " + fmt12(res.spread) + ")";
            return;
        }
        nodes[i] = res.points.front();
    });
    if (!err.empty()) throw AmbiguityError(err);
    return nodes;
}

NecklaceSystem make_system(std::vector<AffineMap> maps, const SystemOptions& opts) {
    if (maps.size() < 3)
        throw InvalidSystemError("a necklace needs at least 3 maps, got " +
                                 std::to_string(maps.size()));
    for (std::size_t i = 0; i < maps.size(); ++i) {
        double n = maps[i].linear.op_norm();
        if (!(n < 1.0))
            throw NotContractiveError("map " + std::to_string(i + 1) + ": operator norm " +
                                      fmt12(n) + " is not < 1");
        if (maps[i].linear.det() == 0.0)
            throw SingularMatrixError("map " + std::to_string(i + 1) + ": singular linear part");
        if (!maps[i].translation.finite())
            throw InvalidSystemError("map " + std::to_string(i + 1) + ": non-finite translation");
    }
    NecklaceSystem sys;
    sys.maps = std::move(maps);
    sys.enclosure = attractor_enclosure(sys.maps);
    sys.node_tolerance = opts.node_tolerance_rel * std::max(1.0, sys.enclosure.radius);
    try {
        sys.nodes = main_nodes(sys, sys.node_tolerance);
        sys.nodes_valid = true;
    } catch (const Error& e) {
        sys.nodes_valid = false;
        sys.nodes_error = e.what();
        if (opts.require_nodes) throw;
    }
    return sys;
}

NecklaceVerdict validate_necklace(const NecklaceSystem& sys, int depth, double tol) {
    NecklaceVerdict v;
    v.depth = depth;
    v.tolerance = tol;
    v.min_gap = std::numeric_limits<double>::infinity();

    // Effort scales with depth: allow more relative states before giving up.
    std::size_t budget = std::max<std::size_t>(4000, static_cast<std::size_t>(depth) * 5000);

    struct PairResult {
        PairWitness witness;
        bool ok = false;
        bool unknown = false;
        double gap = std::numeric_limits<double>::infinity();
    };
    std::vector<std::pair<int, int>> pairs;
    for (int a = 1; a <= sys.n(); ++a)
        for (int b = a + 1; b <= sys.n(); ++b) pairs.push_back({a, b});
    std::vector<PairResult> results(pairs.size());

    parallel_for(pairs.size(), [&](std::size_t i) {
        auto [a, b] = pairs[i];
        PairResult& r = results[i];
        r.witness.a = a;
        r.witness.b = b;
        auto res = detail::pair_contact(sys, a, b, tol, budget);
        if (sys.adjacent(a, b)) {
            switch (res.outcome) {
                case detail::PairContact::Outcome::Contact:
                    if (res.points.size() == 1 && res.spread <= tol) {
                        r.ok = true;
                        r.witness.points = res.points;
                    } else {
                        r.witness.kind = PairWitness::Kind::AdjacentMultiContact;
                        r.witness.points = res.points;
                        r.witness.separation = res.spread;
                    }
                    break;
                case detail::PairContact::Outcome::Disjoint:
                    r.witness.kind = PairWitness::Kind::AdjacentDisjoint;
                    r.witness.separation = res.margin;
                    break;
                default:
                    r.unknown = true;
            }
        } else {
            switch (res.outcome) {
                case detail::PairContact::Outcome::Disjoint:
                    r.ok = true;
                    r.gap = res.margin;
                    break;
                case detail::PairContact::Outcome::Contact:
                    r.witness.kind = PairWitness::Kind::NonAdjacentContact;
                    r.witness.points = res.points;
                    r.witness.separation = -res.eps;
                    break;
                default:
                    r.unknown = true;
            }
        }
    });

    bool any_unknown = false;
    for (const auto& r : results) {
        if (r.ok) {
            v.min_gap = std::min(v.min_gap, r.gap);
            continue;
        }
        if (r.unknown) {
            any_unknown = true;
            PairWitness w;
            w.a = r.witness.a;
            w.b = r.witness.b;
            w.kind = PairWitness::Kind::Undecided;
            v.witnesses.push_back(w);
            continue;
        }
        v.witnesses.push_back(r.witness);
    }
    if (!std::isfinite(v.min_gap)) v.min_gap = 0.0;

    bool any_refuted = std::any_of(v.witnesses.begin(), v.witnesses.end(), [](const PairWitness& w) {
        return w.kind != PairWitness::Kind::Undecided;
    });
    if (any_refuted)
        v.status = Status::Refuted;
    else if (any_unknown)
        v.status = Status::Unknown;
    else
        v.status = Status::Verified;
    return v;
}

}  // namespace necklace
