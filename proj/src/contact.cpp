#include "contact.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <unordered_map>
#include <vector>

namespace necklace::detail {
namespace {

// ---------------------------------------------------------------------------
// Support-function machinery. Used when the relative-state descent does not
// close (pieces meeting at a point with exponentially many addresses, e.g.
// shared fixed points). All quantities are certified outer bounds.
// ---------------------------------------------------------------------------

class SupportFace {
  public:
    explicit SupportFace(const NecklaceSystem& sys) : sys_(sys) {
        scale_ = std::max(1.0, sys.enclosure.radius);
    }

    // Sound upper bound for max_{x in F} <x,u>, |u| = 1. Directions form a
    // lazily discovered graph under normalized adjoint pullbacks. Children
    // are materialized only when they can carry the maximum and still
    // influence a query direction beyond 1e-13; everything else contributes
    // its enclosure bound, so every stage yields valid bounds.
    double upper(Vec2 u) {
        int idx = ensure(u, 1.0);
        converge();
        return cells_[idx].value;
    }

    // Genuine attained value (greedy descent).
    double lower(Vec2 u) { return cells_[ensure(u, 0.0)].attained; }

    // Ball containing {x in F : <x,u> >= lower(u) - eps}.
    Ball face(Vec2 u, double eps) {
        face_guard_.clear();
        return face_rec(u, eps, 0);
    }

  private:
    struct Child {
        int idx;
        double s, t;
    };
    struct Cell {
        Vec2 dir;
        double value;         // current upper bound
        double attained;      // lower bound
        double weight = 0.0;  // max path weight from a query direction
        double expanded_weight = 0.0;
        double ball_term = -std::numeric_limits<double>::infinity();
        bool expanded = false;
        std::vector<Child> kids;
    };

    const NecklaceSystem& sys_;
    double scale_ = 1.0;
    std::vector<Cell> cells_;
    std::unordered_map<std::int64_t, int> index_;
    std::map<std::pair<std::int64_t, int>, Ball> face_memo_;
    std::vector<std::pair<std::int64_t, int>> face_guard_;
    bool dirty_ = false;

    static constexpr double kCell = 1e-10;
    static constexpr std::size_t kMaxCells = 120000;

    Vec2 pullback(int digit, Vec2 u) const {
        const Mat2& A = sys_.map(digit).linear;
        return {A.a * u.x + A.c * u.y, A.b * u.x + A.d * u.y};  // A^T u
    }

    static std::int64_t quant(Vec2 u) {
        auto qx = static_cast<std::int64_t>(std::llround(u.x / kCell));
        auto qy = static_cast<std::int64_t>(std::llround(u.y / kCell));
        return qx * 2000000007LL + qy;
    }

    double ball_bound(Vec2 u) const {
        return u.dot(sys_.enclosure.center) + sys_.enclosure.radius;
    }

    double greedy_lower(Vec2 u) const {
        AffineMap m;
        double best = u.dot(sys_.enclosure.center);
        for (int step = 0; step < 80; ++step) {
            int pick = 1;
            double pick_val = -std::numeric_limits<double>::infinity();
            for (int d = 1; d <= sys_.n(); ++d) {
                AffineMap cand = compose(m, sys_.map(d));
                double val = u.dot(cand(sys_.enclosure.center)) +
                             cand.linear.op_norm() * sys_.enclosure.radius;
                if (val > pick_val) {
                    pick_val = val;
                    pick = d;
                }
            }
            m = compose(m, sys_.map(pick));
            best = std::max(best, u.dot(m(sys_.enclosure.center)));
        }
        return best;
    }

    int ensure(Vec2 u, double weight) {
        std::int64_t k = quant(u);
        if (auto it = index_.find(k); it != index_.end()) {
            Cell& c = cells_[it->second];
            if (weight > c.weight) {
                c.weight = weight;
                dirty_ = true;
            }
            return it->second;
        }
        Cell c;
        c.dir = u;
        c.value = ball_bound(u);
        c.attained = greedy_lower(u);
        c.weight = weight;
        cells_.push_back(std::move(c));
        index_.emplace(k, static_cast<int>(cells_.size()) - 1);
        dirty_ = true;
        return static_cast<int>(cells_.size()) - 1;
    }

    // Materialize the children that might carry the maximum and still matter
    // for some query; the rest are folded into a constant enclosure term.
    void expand(int idx) {
        double slack = 1e-12 * scale_;
        double wthresh = 1e-13;
        cells_[idx].expanded = true;
        cells_[idx].expanded_weight = cells_[idx].weight;
        cells_[idx].kids.clear();
        Vec2 u = cells_[idx].dir;
        double attained = cells_[idx].attained;
        double weight = cells_[idx].weight;
        double ball_term = -std::numeric_limits<double>::infinity();
        for (int d = 1; d <= sys_.n(); ++d) {
            Vec2 v = pullback(d, u);
            double s = v.norm();
            if (s <= 0) continue;
            Vec2 vn = v * (1.0 / s);
            double td = u.dot(sys_.map(d).translation);
            double cheap;
            if (auto it = index_.find(quant(vn)); it != index_.end())
                cheap = cells_[it->second].value;
            else
                cheap = ball_bound(vn);
            if (td + s * cheap < attained - slack) continue;  // cannot carry the max
            if (weight * s < wthresh || cells_.size() >= kMaxCells) {
                ball_term = std::max(ball_term, td + s * ball_bound(vn));
                continue;
            }
            int child = ensure(vn, weight * s);
            cells_[idx].kids.push_back({child, s, td});
        }
        cells_[idx].ball_term = ball_term;
    }

    // One value/weight sweep; every iterate stays a valid bound.
    double sweep_once() {
        double delta = 0;
        for (auto& c : cells_) {
            if (!c.expanded) continue;
            double best = c.ball_term;
            for (const Child& k : c.kids) {
                best = std::max(best, k.t + k.s * cells_[k.idx].value);
                if (c.weight * k.s > cells_[k.idx].weight)
                    cells_[k.idx].weight = c.weight * k.s;
            }
            if (best < c.value) {
                delta = std::max(delta, c.value - best);
                c.value = best;
            }
        }
        return delta;
    }

    void converge() {
        if (!dirty_) return;
        for (int round = 0; round < 220; ++round) {
            for (int sweep = 0; sweep < 6; ++sweep) sweep_once();
            // Weight bumps may make previously folded children relevant.
            std::size_t before = cells_.size();
            bool reopened = false;
            for (std::size_t i = 0; i < before && cells_.size() < kMaxCells; ++i) {
                Cell& c = cells_[i];
                if (!c.expanded && c.weight > 0) {
                    expand(static_cast<int>(i));
                    reopened = true;
                } else if (c.expanded && c.weight > 8 * c.expanded_weight &&
                           c.weight > 1e-13) {
                    expand(static_cast<int>(i));
                    reopened = true;
                }
            }
            if (!reopened && cells_.size() == before) break;
        }
        int polish = 0;
        double last_delta = 0;
        for (; polish < 300; ++polish)
            if ((last_delta = sweep_once()) < 1e-16 * scale_) break;
        if (std::getenv("NECKLACE_DEBUG"))
            std::fprintf(stderr, "[support] cells=%zu polish=%d last_delta=%.3g\n",
                         cells_.size(), polish, last_delta);
        dirty_ = false;
    }

    int octave(double eps) const {
        double rel = std::max(eps / scale_, 1e-15);
        int o = static_cast<int>(std::ceil(std::log2(rel * 1e15)));
        return std::max(0, o);
    }

    Ball face_rec(Vec2 u, double eps, int depth) {
        if (eps > 0.35 * scale_ || depth > 140) return sys_.enclosure;
        std::pair<std::int64_t, int> key{quant(u), octave(eps)};
        if (auto it = face_memo_.find(key); it != face_memo_.end()) return it->second;
        for (const auto& g : face_guard_)
            if (g == key) return sys_.enclosure;  // cycle: sound fallback
        face_guard_.push_back(key);
        // Round eps up to its octave edge so memoized entries stay sound for
        // any eps within the band.
        double eps_r = std::min(0.35 * scale_, std::pow(2.0, key.second) * 1e-15 * scale_);
        double L = lower(u);
        bool first = true;
        Ball acc = sys_.enclosure;
        for (int d = 1; d <= sys_.n(); ++d) {
            Vec2 v = pullback(d, u);
            double s = v.norm();
            if (s == 0) continue;
            Vec2 vn = v * (1.0 / s);
            double reach = u.dot(sys_.map(d).translation) + s * upper(vn);
            if (reach < L - eps_r) continue;  // child cannot meet the cap
            double child_L = lower(vn);
            double child_eps = (s * child_L + u.dot(sys_.map(d).translation) - L + eps_r) / s;
            child_eps = std::max(child_eps, 0.0);
            Ball piece = map_ball(sys_.map(d), face_rec(vn, child_eps, depth + 1));
            if (first) {
                acc = piece;
                first = false;
            } else {
                double dd = dist(acc.center, piece.center);
                double r = 0.5 * (dd + acc.radius + piece.radius);
                if (r <= acc.radius) {
                } else if (r <= piece.radius) {
                    acc = piece;
                } else {
                    double t = (r - acc.radius) / (dd > 0 ? dd : 1.0);
                    acc = Ball{acc.center + (piece.center - acc.center) * t, r};
                }
            }
        }
        face_guard_.pop_back();
        if (first) acc = sys_.enclosure;  // numeric slop: stay conservative
        face_memo_[key] = acc;
        return acc;
    }
};

struct StateKey {
    std::int64_t v[6];
    bool operator==(const StateKey& o) const {
        for (int i = 0; i < 6; ++i)
            if (v[i] != o.v[i]) return false;
        return true;
    }
};

struct StateKeyHash {
    std::size_t operator()(const StateKey& k) const {
        std::uint64_t h = 1469598103934665603ull;
        for (int i = 0; i < 6; ++i) {
            h ^= static_cast<std::uint64_t>(k.v[i]);
            h *= 1099511628211ull;
        }
        return static_cast<std::size_t>(h);
    }
};

struct Edge {
    bool sigma_side;  // true: refined the sigma side by `digit`
    int digit;
    int target;
};

struct State {
    AffineMap g;  // f_sigma^-1 o f_tau
    std::vector<Edge> edges;
    bool productive = false;
};

struct CoverBall {
    Point c;
    double r;
};

struct ZoomOut {
    bool touched = false;
    Point z;
    double radius = 0.0;
};

// Ball-gap descent toward the closest approach of two pieces. Evidence only;
// a certification pass follows.
ZoomOut greedy_zoom(const NecklaceSystem& sys, int a, int b, double eps_target) {
    const Ball& enc = sys.enclosure;
    AffineMap fu = sys.map(a), fv = sys.map(b);
    for (int iter = 0; iter < 600; ++iter) {
        Ball bu = map_ball(fu, enc), bv = map_ball(fv, enc);
        if (std::max(bu.radius, bv.radius) <= eps_target) break;
        bool refine_u = bu.radius >= bv.radius;
        const Ball& other = refine_u ? bv : bu;
        int best_d = 1;
        double best_gap = std::numeric_limits<double>::infinity();
        for (int d = 1; d <= sys.n(); ++d) {
            AffineMap cand = compose(refine_u ? fu : fv, sys.map(d));
            double gap = ball_gap(map_ball(cand, enc), other);
            if (gap < best_gap) {
                best_gap = gap;
                best_d = d;
            }
        }
        if (refine_u)
            fu = compose(fu, sys.map(best_d));
        else
            fv = compose(fv, sys.map(best_d));
    }
    Ball bu = map_ball(fu, enc), bv = map_ball(fv, enc);
    ZoomOut out;
    out.radius = std::max(bu.radius, bv.radius);
    out.z = (bu.center + bv.center) * 0.5;
    out.touched = ball_gap(bu, bv) <= 4.0 * out.radius;
    return out;
}

Vec2 snap_direction(Vec2 u) {
    // Snap to exact multiples of 15 degrees when nearly aligned, so support
    // bounds of axis-touching pieces come out exact.
    double ang = std::atan2(u.y, u.x);
    const double step = 3.14159265358979323846 / 12.0;
    double snapped = std::round(ang / step) * step;
    if (std::fabs(ang - snapped) < 1e-6) return {std::cos(snapped), std::sin(snapped)};
    return u;
}

}  // namespace

PairContact pair_contact(const NecklaceSystem& sys, int digit_a, int digit_b,
                         double tol, std::size_t max_states) {
    PairContact out;
    const Ball& enc = sys.enclosure;
    const double scale = std::max(1.0, enc.radius);
    const double qcell = 1e-9 * scale;
    const double slack = 1e-12 * scale;

    auto quantize = [&](const AffineMap& g) {
        StateKey k;
        k.v[0] = static_cast<std::int64_t>(std::llround(g.linear.a / 1e-9));
        k.v[1] = static_cast<std::int64_t>(std::llround(g.linear.b / 1e-9));
        k.v[2] = static_cast<std::int64_t>(std::llround(g.linear.c / 1e-9));
        k.v[3] = static_cast<std::int64_t>(std::llround(g.linear.d / 1e-9));
        k.v[4] = static_cast<std::int64_t>(std::llround(g.translation.x / qcell));
        k.v[5] = static_cast<std::int64_t>(std::llround(g.translation.y / qcell));
        return k;
    };

    // Relative separation of F and g(F) as seen through the outer balls;
    // alive while <= slack.
    auto rel_gap = [&](const AffineMap& g) {
        Ball img = map_ball(g, enc);
        return dist(enc.center, img.center) - enc.radius - img.radius;
    };

    std::vector<State> states;
    std::unordered_map<StateKey, int, StateKeyHash> index;
    double min_prune_gap = std::numeric_limits<double>::infinity();

    AffineMap g0 = compose(inverse(sys.map(digit_a)), sys.map(digit_b));
    if (rel_gap(g0) > slack) {
        out.outcome = PairContact::Outcome::Disjoint;
        out.margin = rel_gap(g0);
        return out;
    }
    states.push_back({g0, {}, false});
    index.emplace(quantize(g0), 0);

    // Certification for contacts whose relative-state descent does not
    // close: a separating direction pins the contact to the support faces of
    // the two pieces, and the face enclosure certifies the singleton.
    auto support_certificate = [&]() -> bool {
        ZoomOut zoom =
            greedy_zoom(sys, digit_a, digit_b, std::min(1e-13 * scale, tol * 1e-3));
        if (!zoom.touched) return false;
        SupportFace sf(sys);
        Ball ba = map_ball(sys.map(digit_a), enc), bb = map_ball(sys.map(digit_b), enc);
        auto unit = [](Vec2 v) -> std::optional<Vec2> {
            double n = v.norm();
            if (n <= 0) return std::nullopt;
            return v * (1.0 / n);
        };
        std::vector<Vec2> dirs;
        for (auto cand : {unit(bb.center - ba.center), unit(zoom.z - ba.center),
                          unit(bb.center - zoom.z)}) {
            if (!cand) continue;
            dirs.push_back(snap_direction(*cand));
            dirs.push_back(*cand);
        }
        auto piece_dir = [&](int digit, Vec2 u) {
            const Mat2& A = sys.map(digit).linear;
            return Vec2{A.a * u.x + A.c * u.y, A.b * u.x + A.d * u.y};
        };
        const bool dbg = std::getenv("NECKLACE_DEBUG") != nullptr;
        for (Vec2 u : dirs) {
            Vec2 va = piece_dir(digit_a, u), vb = piece_dir(digit_b, -u);
            double sa = va.norm(), sb = vb.norm();
            if (sa <= 0 || sb <= 0) continue;
            double Ma = u.dot(sys.map(digit_a).translation) + sa * sf.upper(va * (1.0 / sa));
            double mb = -((-u).dot(sys.map(digit_b).translation) +
                          sb * sf.upper(vb * (1.0 / sb)));
            double delta = Ma - mb;  // slab thickness holding the contact
            if (dbg)
                std::fprintf(stderr, "[cert %d,%d] u=(%.4f,%.4f) Ma=%.12g mb=%.12g delta=%.3g\n",
                             digit_a, digit_b, u.x, u.y, Ma, mb, delta);
            if (delta < 0 || delta > 1e-7 * scale) continue;
            // Cap of piece a at the cut: {x in F_a : <x,u> >= mb - slack}.
            double slack = 1e-12 * scale;
            Vec2 van = va * (1.0 / sa);
            double cut_rel = (mb - slack - u.dot(sys.map(digit_a).translation)) / sa;
            double eps_rel = sf.lower(van) - cut_rel;
            if (eps_rel < 0) eps_rel = 0;
            Ball cap = map_ball(sys.map(digit_a), sf.face(van, eps_rel));
            if (dbg)
                std::fprintf(stderr, "[cert %d,%d]   eps_rel=%.3g cap r=%.3g center=(%.6f,%.6f) zoom=(%.6f,%.6f)\n",
                             digit_a, digit_b, eps_rel, cap.radius, cap.center.x, cap.center.y,
                             zoom.z.x, zoom.z.y);
            if (2.0 * cap.radius <= tol && dist(cap.center, zoom.z) <= tol) {
                out.outcome = PairContact::Outcome::Contact;
                out.points = {zoom.z};
                out.spread = 0.0;
                out.eps = std::max(cap.radius, zoom.radius);
                out.cover_balls = 1;
                return true;
            }
        }
        return false;
    };

    // BFS over alive relative states.
    for (std::size_t qi = 0; qi < states.size(); ++qi) {
        if (states.size() > max_states) {
            out.states = static_cast<int>(states.size());
            if (support_certificate()) return out;
            out.outcome = PairContact::Outcome::Budget;
            return out;
        }
        AffineMap g = states[qi].g;
        bool refine_sigma = g.linear.op_norm() <= 1.0 + 1e-12;
        for (int d = 1; d <= sys.n(); ++d) {
            AffineMap child = refine_sigma ? compose(inverse(sys.map(d)), g)
                                           : compose(g, sys.map(d));
            double gap = rel_gap(child);
            if (gap > slack) {
                if (gap < min_prune_gap) min_prune_gap = gap;
                continue;
            }
            StateKey key = quantize(child);
            auto it = index.find(key);
            int target;
            if (it == index.end()) {
                target = static_cast<int>(states.size());
                states.push_back({child, {}, false});
                index.emplace(key, target);
            } else {
                target = it->second;
            }
            states[qi].edges.push_back({refine_sigma, d, target});
        }
    }
    out.states = static_cast<int>(states.size());

    // Productive states: those from which some cycle is reachable. Iterative
    // removal of states with no alive successors.
    {
        std::vector<int> live_out(states.size());
        std::vector<std::vector<int>> preds(states.size());
        for (std::size_t i = 0; i < states.size(); ++i) {
            live_out[i] = static_cast<int>(states[i].edges.size());
            for (const Edge& e : states[i].edges) preds[e.target].push_back(static_cast<int>(i));
        }
        std::vector<int> dead_queue;
        std::vector<char> dead(states.size(), 0);
        for (std::size_t i = 0; i < states.size(); ++i)
            if (live_out[i] == 0) {
                dead[i] = 1;
                dead_queue.push_back(static_cast<int>(i));
            }
        for (std::size_t qi = 0; qi < dead_queue.size(); ++qi) {
            for (int p : preds[dead_queue[qi]]) {
                if (dead[p]) continue;
                int remaining = 0;
                for (const Edge& e : states[p].edges)
                    if (!dead[e.target]) ++remaining;
                if (remaining == 0) {
                    dead[p] = 1;
                    dead_queue.push_back(p);
                }
            }
        }
        for (std::size_t i = 0; i < states.size(); ++i) states[i].productive = !dead[i];
        for (auto& s : states) {
            std::vector<Edge> kept;
            for (const Edge& e : s.edges)
                if (states[e.target].productive) kept.push_back(e);
            s.edges.swap(kept);
        }
    }

    if (!states[0].productive) {
        out.outcome = PairContact::Outcome::Disjoint;
        out.margin = std::isfinite(min_prune_gap) ? min_prune_gap : 0.0;
        return out;
    }

    // Limit-set enclosure per productive state, in that state's sigma frame:
    // L(s) = union over sigma-edges of f_i(L(s')) and tau-edges of L(s').
    std::vector<Ball> cur(states.size(), enc), nxt(states.size());
    double root_r = enc.radius;
    for (int iter = 0; iter < 600; ++iter) {
        for (std::size_t i = 0; i < states.size(); ++i) {
            if (!states[i].productive) continue;
            bool first = true;
            Ball acc;
            for (const Edge& e : states[i].edges) {
                Ball piece = e.sigma_side ? map_ball(sys.map(e.digit), cur[e.target])
                                          : cur[e.target];
                if (first) {
                    acc = piece;
                    first = false;
                } else {
                    // Enclosing ball of two balls.
                    double d = dist(acc.center, piece.center);
                    double r = 0.5 * (d + acc.radius + piece.radius);
                    if (r <= acc.radius) {
                        // piece inside acc
                    } else if (r <= piece.radius) {
                        acc = piece;
                    } else {
                        double t = (r - acc.radius) / (d > 0 ? d : 1.0);
                        acc = Ball{acc.center + (piece.center - acc.center) * t, r};
                    }
                }
            }
            nxt[i] = acc;
        }
        cur.swap(nxt);
        root_r = cur[0].radius;
        if (root_r < 1e-13 * scale) break;
    }

    // Contact cover in world coordinates: unroll the alive graph from the
    // root a bounded number of sigma-steps, leaving each frontier state's
    // current enclosure in place.
    struct Item {
        AffineMap frame;  // world map of the sigma frame
        int state;
        int depth;
    };
    std::vector<CoverBall> cover;
    std::vector<Item> frontier{{sys.map(digit_a), 0, 0}};
    const int max_depth = 48;
    const std::size_t max_cover = 4096;
    while (!frontier.empty()) {
        std::vector<Item> next_frontier;
        for (const Item& it : frontier) {
            Ball local = cur[it.state];
            Ball world = {it.frame(local.center), it.frame.linear.op_norm() * local.radius};
            if (it.depth >= max_depth || world.radius <= 1e-12 * scale ||
                cover.size() + frontier.size() > max_cover) {
                cover.push_back({world.center, world.radius});
                continue;
            }
            bool expanded = false;
            for (const Edge& e : states[it.state].edges) {
                AffineMap f = e.sigma_side ? compose(it.frame, sys.map(e.digit)) : it.frame;
                next_frontier.push_back({f, e.target, it.depth + 1});
                expanded = true;
            }
            if (!expanded) cover.push_back({world.center, world.radius});
        }
        frontier.swap(next_frontier);
        if (cover.size() > max_cover) break;
    }

    // Deduplicate cover balls into representative points.
    double eps = 0.0;
    for (const CoverBall& b : cover) eps = std::max(eps, b.r);
    double link = std::max(4.0 * eps, 0.25 * tol);
    std::vector<Point> reps;
    for (const CoverBall& b : cover) {
        bool merged = false;
        for (Point& p : reps)
            if (dist(p, b.c) <= link) {
                merged = true;
                break;
            }
        if (!merged) reps.push_back(b.c);
    }
    double spread = 0.0;
    for (std::size_t i = 0; i < reps.size(); ++i)
        for (std::size_t j = i + 1; j < reps.size(); ++j)
            spread = std::max(spread, dist(reps[i], reps[j]));

    out.outcome = PairContact::Outcome::Contact;
    out.points = std::move(reps);
    out.spread = spread;
    out.eps = eps;
    out.cover_balls = static_cast<int>(cover.size());
    return out;
}

}  // namespace necklace::detail
