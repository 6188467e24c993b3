#include "necklace/topology.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "necklace/classify.hpp"
#include "necklace/errors.hpp"
#include "necklace/util.hpp"

namespace necklace {

namespace {

// Digits d with the point inside F_{base d}.
std::vector<int> digit_set(const NecklaceSystem& sys, const Target& t, const Word& base) {
    std::vector<int> out;
    for (int d = 1; d <= sys.n(); ++d) {
        Tri r = t.contains(base.appended(d));
        if (r == Tri::Unknown) throw BudgetError("membership of " + t.label() + " unresolved");
        if (r == Tri::Yes) out.push_back(d);
    }
    return out;
}

bool set_has(const std::vector<int>& v, int d) {
    return std::find(v.begin(), v.end(), d) != v.end();
}

// Cyclic arc of digits from a to b walking in direction dir (+1/-1),
// inclusive; length capped at n.
std::vector<int> cycle_arc(const NecklaceSystem& sys, int a, int b, int dir) {
    std::vector<int> arc{a};
    int cur = a;
    for (int steps = 0; steps < sys.n(); ++steps) {
        if (cur == b) break;
        cur = dir > 0 ? sys.next(cur) : sys.prev(cur);
        arc.push_back(cur);
    }
    return arc;
}

// All valid single-level chains (digit arcs) inside `base` between the two
// endpoints, given their digit sets. A valid arc starts in a piece holding x
// and no other arc piece holds x; symmetrically for u.
std::vector<std::vector<int>> arc_candidates(const NecklaceSystem& sys,
                                             const std::vector<int>& dx,
                                             const std::vector<int>& du) {
    std::vector<std::vector<int>> out;
    // Shared piece: single-copy chain.
    for (int d : dx)
        if (set_has(du, d)) {
            out.push_back({d});
            return out;  // minimal chain always preferred
        }
    for (int a : dx)
        for (int b : du)
            for (int dir : {+1, -1}) {
                std::vector<int> arc = cycle_arc(sys, a, b, dir);
                if (arc.back() != b || arc.size() >= static_cast<std::size_t>(sys.n()) + 1)
                    continue;
                if (arc.size() == static_cast<std::size_t>(sys.n()))
                    continue;  // full cycle: ends touch, not a chain
                bool ok = true;
                for (std::size_t i = 1; i < arc.size() && ok; ++i)
                    if (set_has(dx, arc[i])) ok = false;
                for (std::size_t i = 0; i + 1 < arc.size() && ok; ++i)
                    if (set_has(du, arc[i])) ok = false;
                if (ok) out.push_back(arc);
            }
    // Deterministic preference: shorter, then lower starting digit, then the
    // +1 direction (insertion order covers it).
    std::stable_sort(out.begin(), out.end(),
                     [](const std::vector<int>& l, const std::vector<int>& r) {
                         if (l.size() != r.size()) return l.size() < r.size();
                         return l.front() < r.front();
                     });
    return out;
}

Chain one_level_chain(const NecklaceSystem& sys, const Target& x, const Target& u,
                      const Word& base) {
    std::vector<int> dx = digit_set(sys, x, base);
    std::vector<int> du = digit_set(sys, u, base);
    if (dx.empty() || du.empty())
        throw Error("chain endpoint lies outside the requested piece");
    auto arcs = arc_candidates(sys, dx, du);
    if (arcs.empty()) throw Error("no valid chain between the endpoints in " + base.str());
    const std::vector<int>& arc = arcs.front();
    Chain c;
    c.level = static_cast<int>(base.level()) + 1;
    for (int d : arc) c.words.push_back(base.appended(d));
    for (std::size_t i = 0; i + 1 < arc.size(); ++i) {
        int nd = sys.node_between(arc[i], arc[i + 1]);
        c.connections.push_back(NodeRef{base, nd});
    }
    return c;
}

}  // namespace

Chain build_chain(const NecklaceSystem& sys, const IncidenceAutomaton& aut, const Target& x,
                  const Target& u, int level, std::size_t budget) {
    if (budget == 0) budget = point_budget();
    Chain chain = one_level_chain(sys, x, u, Word{});
    for (int k = 2; k <= level; ++k) {
        Chain refined;
        refined.level = k;
        for (std::size_t j = 0; j < chain.words.size(); ++j) {
            // Entry/exit targets of piece j.
            Target entry = j == 0 ? x : Target::node(sys, aut, chain.connections[j - 1]);
            Target exit = j + 1 == chain.words.size()
                              ? u
                              : Target::node(sys, aut, chain.connections[j]);
            Chain sub = one_level_chain(sys, entry, exit, chain.words[j]);
            refined.words.insert(refined.words.end(), sub.words.begin(), sub.words.end());
            refined.connections.insert(refined.connections.end(), sub.connections.begin(),
                                       sub.connections.end());
            if (j + 1 < chain.words.size()) refined.connections.push_back(chain.connections[j]);
        }
        chain = std::move(refined);
        if (chain.words.size() > budget)
            throw BudgetError("chain at level " + std::to_string(k) + " has " +
                              std::to_string(chain.words.size()) + " pieces, over budget");
    }
    chain.connection_points.clear();
    for (const NodeRef& ref : chain.connections)
        chain.connection_points.push_back(sys.word_map(ref.base)(sys.node(ref.index)));
    return chain;
}

std::vector<Point> approximate_arc(const NecklaceSystem& sys, const IncidenceAutomaton& aut,
                                   const Target& x, const Target& u, int depth) {
    Chain chain = build_chain(sys, aut, x, u, depth);
    std::vector<Point> poly;
    poly.reserve(chain.connection_points.size() + 2);
    poly.push_back(x.point());
    for (const Point& p : chain.connection_points) poly.push_back(p);
    poly.push_back(u.point());
    return poly;
}

// ---------------------------------------------------------------------------
// Cut-point scan on the contracted piece graph.
// ---------------------------------------------------------------------------

namespace {

struct ScanVertex {
    Word word;
    int level;
};

struct UnionFind {
    std::vector<int> parent;
    int add() {
        parent.push_back(static_cast<int>(parent.size()));
        return parent.back();
    }
    int find(int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    bool unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        parent[std::max(a, b)] = std::min(a, b);
        return true;
    }
};

}  // namespace

CutVerdict cut_point_scan(const NecklaceSystem& sys, const IncidenceAutomaton& aut,
                          const Target& target, int M) {
    CutVerdict v;
    v.target_label = target.label();
    v.point = target.point();
    v.depth_scanned = M;

    // Address sets per level.
    std::vector<std::set<Word>> addr(M + 1);
    for (int m = 0; m <= M; ++m) {
        auto words = target.addresses(m);
        if (!words) {
            v.kind = CutVerdict::Kind::Unknown;
            v.note = "address sets unresolved (automaton not closed)";
            return v;
        }
        addr[m] = std::set<Word>(words->begin(), words->end());
    }

    std::vector<ScanVertex> verts;
    UnionFind uf;
    std::vector<char> old_root;  // per vertex id: root contains pre-level vertices
    int last_merge_level = 0;

    // Trace states for the periodicity certificate (single-address targets):
    // per vertex, the automaton state after consuming the target address up
    // to the current level; -1 when dead or not applicable.
    const bool traceable = target.single_address() && target.is_periodic() && aut.closed;
    std::vector<int> trace;

    // Per level: live (trace state, component root) pairs.
    std::vector<std::vector<std::pair<int, int>>> sigma_history;

    for (int m = 1; m <= M; ++m) {
        std::size_t first_new = verts.size();
        // New vertices: off-address children of level-(m-1) address words.
        for (const Word& parent : addr[m - 1]) {
            for (int d = 1; d <= sys.n(); ++d) {
                Word w = parent.appended(d);
                if (addr[m].count(w)) continue;
                verts.push_back({w, m});
                uf.add();
                trace.push_back(-2);  // computed below
            }
        }
        // Mark pre-existing roots.
        std::vector<char> root_is_old(verts.size(), 0);
        for (std::size_t i = 0; i < first_new; ++i) root_is_old[uf.find(static_cast<int>(i))] = 1;

        bool merged_here = false;
        for (std::size_t i = first_new; i < verts.size(); ++i) {
            for (std::size_t j = 0; j < i; ++j) {
                const Word& wa = verts[i].word;
                const Word& wb = verts[j].word;
                std::size_t cp = common_prefix_len(wa, wb);
                if (cp == wa.level() || cp == wb.level()) continue;  // nested: impossible
                if (!sys.adjacent(wa[cp], wb[cp])) continue;
                CopyIntersection ci = copy_contact(sys, aut, wa, wb);
                if (ci.kind == CopyIntersection::Kind::Unknown) {
                    v.kind = CutVerdict::Kind::Unknown;
                    v.note = "piece intersection unresolved at level " + std::to_string(m);
                    return v;
                }
                if (ci.kind != CopyIntersection::Kind::SharedNode) continue;
                int ra = uf.find(static_cast<int>(i)), rb = uf.find(static_cast<int>(j));
                if (ra == rb) continue;
                bool both_old = root_is_old[ra] && root_is_old[rb];
                if (both_old) merged_here = true;
                uf.unite(ra, rb);
                int r = uf.find(ra);
                root_is_old[r] = root_is_old[ra] | root_is_old[rb];
            }
        }
        if (merged_here) last_merge_level = m;

        int comps = 0;
        for (std::size_t i = 0; i < verts.size(); ++i)
            if (uf.find(static_cast<int>(i)) == static_cast<int>(i)) ++comps;
        v.component_history.push_back(comps);

        // Trace states for the certificate.
        if (traceable) {
            for (std::size_t i = 0; i < verts.size(); ++i) {
                if (verts[i].level == m && trace[i] == -2) {
                    int j = verts[i].level;
                    int off_digit = verts[i].word.digits.back();
                    int a_j = target.address_digit(j - 1);
                    if (!sys.adjacent(off_digit, a_j)) {
                        trace[i] = -1;
                    } else {
                        int nd = sys.node_between(off_digit, a_j);
                        int st = aut.node_state[nd - 1];
                        auto nxt = aut.step(st, a_j);
                        trace[i] = nxt ? *nxt : -1;
                    }
                } else if (verts[i].level < m && trace[i] >= 0) {
                    auto nxt = aut.step(trace[i], target.address_digit(m - 1));
                    trace[i] = nxt ? *nxt : -1;
                }
            }
            // Raw (state, root) pairs; canonicalized at comparison time.
            std::vector<std::pair<int, int>> sig;
            for (std::size_t i = 0; i < verts.size(); ++i) {
                if (trace[i] < 0) continue;
                sig.push_back({trace[i], uf.find(static_cast<int>(i))});
            }
            sigma_history.push_back(sig);
        } else {
            sigma_history.push_back({});
        }
    }

    int final_count = v.component_history.back();
    if (final_count <= 1) {
        v.kind = CutVerdict::Kind::NoCutUpToDepth;
        if (last_merge_level > 0)
            v.note = "transient splits re-joined by level " + std::to_string(last_merge_level);
        return v;
    }

    // Candidate anchor: first level after the last merge from which the
    // component count stays >= 2.
    int anchor = 0;
    for (int m = std::max(1, last_merge_level + 1); m <= M; ++m) {
        bool ok = true;
        for (int mm = m; mm <= M; ++mm)
            if (v.component_history[mm - 1] < 2) ok = false;
        if (ok) {
            anchor = m;
            break;
        }
    }
    if (anchor == 0) {
        v.kind = CutVerdict::Kind::NoCutUpToDepth;
        return v;
    }
    v.kind = CutVerdict::Kind::CutCandidate;

    if (!traceable) return v;

    // Periodicity certificate: find m1 >= anchor past the pre-period and a
    // multiple of the address period t with identical trace/component
    // signatures; the structure then repeats forever and the separation is
    // permanent.
    const int t = target.period_len();
    auto canonical = [&](int m, const std::map<int, int>& root_map) {
        // Pairs (state, mapped component), sorted and deduplicated.
        std::vector<std::pair<int, int>> out;
        for (const auto& [st, r] : sigma_history[m - 1]) {
            auto it = root_map.find(r);
            out.push_back({st, it == root_map.end() ? -1 : it->second});
        }
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    };

    for (int m1 = std::max(anchor, target.preperiod_len() + 1); m1 <= M; ++m1) {
        for (int m2 = m1 + t; m2 <= M; m2 += t) {
            if (v.component_history[m1 - 1] != v.component_history[m2 - 1]) continue;
            bool merged_between = last_merge_level > m1;
            if (merged_between) continue;
            // Collect live (state, root) multisets and try all bijections of
            // the root sets (component counts here are tiny).
            std::vector<int> roots1, roots2;
            {
                std::set<int> r1, r2;
                for (auto& [s, r] : sigma_history[m1 - 1]) r1.insert(r);
                for (auto& [s, r] : sigma_history[m2 - 1]) r2.insert(r);
                roots1.assign(r1.begin(), r1.end());
                roots2.assign(r2.begin(), r2.end());
            }
            if (roots1.size() != roots2.size() || roots1.size() > 7) continue;
            std::vector<int> perm(roots2.size());
            std::iota(perm.begin(), perm.end(), 0);
            bool found = false;
            do {
                std::map<int, int> map1, map2;
                for (std::size_t i = 0; i < roots1.size(); ++i) {
                    map1[roots1[i]] = static_cast<int>(i);
                    map2[roots2[perm[i]]] = static_cast<int>(i);
                }
                if (canonical(m1, map1) == canonical(m2, map2)) {
                    found = true;
                    break;
                }
            } while (std::next_permutation(perm.begin(), perm.end()));
            if (found) {
                v.kind = CutVerdict::Kind::CutCertified;
                v.certificate = CutCertificate{m1, m2 - m1, v.component_history[m1 - 1]};
                return v;
            }
        }
    }
    return v;
}

GlobalScanResult global_cut_point_search(const NecklaceSystem& sys, const IncidenceAutomaton& aut,
                                         int candidate_level, int M) {
    GlobalScanResult out;
    StableReport stable = is_stable(sys, aut);
    if (stable.status != Status::Verified)
        out.caveat =
            "system not verified stable: cut points may exist outside the scanned node orbit";

    // Candidate targets: node images f_w(z_k), |w| <= level, deduplicated
    // metrically; the shallowest representative is kept.
    std::vector<Target> targets;
    std::vector<Point> seen;
    auto consider = [&](const NodeRef& ref) {
        Target t = Target::node(sys, aut, ref);
        for (const Point& p : seen)
            if (dist(p, t.point()) <= sys.node_tolerance) {
                ++out.deduplicated;
                return;
            }
        seen.push_back(t.point());
        targets.push_back(std::move(t));
    };
    std::vector<Word> bases{Word{}};
    for (int l = 1; l <= candidate_level; ++l) {
        std::vector<Word> next_bases;
        for (const Word& b : bases)
            if (static_cast<int>(b.level()) == l - 1)
                for (int d = 1; d <= sys.n(); ++d) next_bases.push_back(b.appended(d));
        bases.insert(bases.end(), next_bases.begin(), next_bases.end());
    }
    std::sort(bases.begin(), bases.end(), [](const Word& a, const Word& b) {
        if (a.level() != b.level()) return a.level() < b.level();
        return a < b;
    });
    for (const Word& b : bases)
        for (int k = 1; k <= sys.n(); ++k) consider(NodeRef{b, k});

    out.verdicts.resize(targets.size());
    parallel_for(targets.size(), [&](std::size_t i) {
        out.verdicts[i] = cut_point_scan(sys, aut, targets[i], M);
    });
    return out;
}

}  // namespace necklace
