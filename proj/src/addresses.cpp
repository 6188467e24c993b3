#include "necklace/addresses.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>

#include "necklace/errors.hpp"
#include "necklace/util.hpp"

namespace necklace {

namespace {

// First contact node within tolerance of p, or 0.
int coincident_node(const NecklaceSystem& sys, Point p) {
    for (int l = 1; l <= sys.n(); ++l)
        if (dist(p, sys.node(l)) <= sys.node_tolerance) return l;
    return 0;
}

}  // namespace

const Target::Step& Target::step(std::size_t i) const {
    if (period_len_ == 0 || i < static_cast<std::size_t>(preperiod_len_)) return steps_[i];
    std::size_t j = preperiod_len_ + (i - preperiod_len_) % period_len_;
    return steps_[j];
}

int Target::address_digit(std::size_t i) const { return step(i).expect; }

Target Target::node(const NecklaceSystem& sys, const IncidenceAutomaton& a, NodeRef ref) {
    Target t;
    t.aut_ = &a;
    t.label_ = ref.str();
    t.single_address_ = false;
    const std::size_t L = ref.base.level();
    // Suffix images f_{base[d..]}(z_k), d = 0..L.
    std::vector<Point> pts(L + 1);
    pts[L] = sys.node(ref.index);
    for (std::size_t d = L; d-- > 0;) pts[d] = sys.map(ref.base[d])(pts[d + 1]);
    t.point_ = pts[0];
    t.steps_.resize(L + 1);
    for (std::size_t d = 0; d <= L; ++d) {
        int l = coincident_node(sys, pts[d]);
        if (d == L) l = ref.index;  // the node itself
        t.steps_[d].splice = l ? a.node_state[l - 1] : -1;
        t.steps_[d].expect = d < L ? ref.base[d] : 0;
    }
    t.preperiod_len_ = static_cast<int>(L) + 1;
    t.period_len_ = 0;
    return t;
}

Target Target::periodic(const NecklaceSystem& sys, const IncidenceAutomaton& a, Word preperiod,
                        Word period) {
    if (period.empty()) throw InputError("periodic target needs a nonempty period");
    Target t;
    t.aut_ = &a;
    if (preperiod.empty())
        t.label_ = period.str() + "*";
    else
        t.label_ = preperiod.str() + "(" + period.str() + ")*";

    const std::size_t P = preperiod.level(), Q = period.level();
    std::vector<Point> pts(P + Q);
    for (std::size_t j = 0; j < Q; ++j) {
        Word rot;
        for (std::size_t i = 0; i < Q; ++i) rot.digits.push_back(period[(j + i) % Q]);
        pts[P + j] = fixed_point(sys.word_map(rot));
    }
    for (std::size_t d = P; d-- > 0;) {
        Point nxt = d + 1 < P ? pts[d + 1] : pts[P];
        pts[d] = sys.map(preperiod[d])(nxt);
    }
    t.point_ = pts[0];
    t.steps_.resize(P + Q);
    bool spliced = false;
    for (std::size_t d = 0; d < P + Q; ++d) {
        int l = coincident_node(sys, pts[d]);
        t.steps_[d].splice = l ? a.node_state[l - 1] : -1;
        t.steps_[d].expect =
            d < P ? preperiod[d] : period[(d - P) % Q];
        if (l) spliced = true;
    }
    t.preperiod_len_ = static_cast<int>(P);
    t.period_len_ = static_cast<int>(Q);
    t.single_address_ = !spliced;
    return t;
}

std::optional<std::pair<int, int>> Target::splice_info() const {
    // step() wraps beyond the table, so one full scan covers every distinct
    // peel position.
    for (std::size_t j = 0; j < steps_.size(); ++j)
        if (step(j).splice >= 0) return std::make_pair(static_cast<int>(j), step(j).splice);
    return std::nullopt;
}

Tri Target::contains(const Word& w) const {
    for (std::size_t i = 0;; ++i) {
        if (i == w.level()) return Tri::Yes;
        const Step& s = step(i);
        if (s.splice >= 0)
            return aut_->walk(s.splice, w.digits.data() + i, w.level() - i);
        if (w[i] != s.expect) return Tri::No;
    }
}

std::optional<std::vector<Word>> Target::addresses(int m, std::size_t budget) const {
    Word prefix;
    for (int i = 0; i < m; ++i) {
        const Step& s = step(i);
        if (s.splice >= 0) {
            if (!aut_->closed) return std::nullopt;
            std::vector<Word> tails = aut_->enumerate(s.splice, m - i, budget);
            std::vector<Word> out;
            out.reserve(tails.size());
            for (const Word& t : tails) out.push_back(prefix.concat(t));
            return out;
        }
        prefix.digits.push_back(s.expect);
    }
    return std::vector<Word>{prefix};
}

CopyIntersection copy_contact(const NecklaceSystem& sys, const IncidenceAutomaton& a,
                              const Word& wa, const Word& wb) {
    std::size_t cp = common_prefix_len(wa, wb);
    if (cp == wa.level() || cp == wb.level())
        throw Error("copy_contact requires non-nested words");
    int da = wa[cp], db = wb[cp];
    CopyIntersection out;
    if (!sys.adjacent(da, db)) {
        out.kind = CopyIntersection::Kind::Disjoint;
        return out;
    }
    int nd = sys.node_between(da, db);
    int st = a.node_state[nd - 1];
    Tri ta = a.walk(st, wa.digits.data() + cp, wa.level() - cp);
    Tri tb = a.walk(st, wb.digits.data() + cp, wb.level() - cp);
    Tri both = tri_and(ta, tb);
    if (both == Tri::Yes) {
        out.kind = CopyIntersection::Kind::SharedNode;
        out.node = NodeRef{wa.prefix(cp), nd};
    } else if (both == Tri::No) {
        out.kind = CopyIntersection::Kind::Disjoint;
    } else {
        out.kind = CopyIntersection::Kind::Unknown;
    }
    return out;
}

CopyIntersection copy_intersection(const NecklaceSystem& sys, const IncidenceAutomaton& a,
                                   const Word& wa, const Word& wb) {
    if (wa.level() != wb.level()) throw InputError("copy_intersection expects same-level words");
    if (wa == wb) throw InputError("copy_intersection expects distinct words");
    return copy_contact(sys, a, wa, wb);
}

namespace {

// Depth-limited metric fallback used when the automaton is not closed.
void metric_addresses_rec(const NecklaceSystem& sys, Point q, int m, Word& prefix,
                          std::vector<Word>& out) {
    if (m == 0) {
        out.push_back(prefix);
        return;
    }
    for (int d = 1; d <= sys.n(); ++d) {
        if (point_in_piece(sys, q, d, sys.node_tolerance) != Tri::Yes) continue;
        prefix.digits.push_back(d);
        metric_addresses_rec(sys, inverse(sys.map(d))(q), m - 1, prefix, out);
        prefix.digits.pop_back();
    }
}

std::vector<Word> metric_addresses(const NecklaceSystem& sys, Point p, int m) {
    std::vector<Word> out;
    Word prefix;
    metric_addresses_rec(sys, p, m, prefix, out);
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

AddressSet address_set(const NecklaceSystem& sys, const IncidenceAutomaton& a,
                       const NodeRef& ref, int m) {
    AddressSet s;
    s.level = m;
    Target t = Target::node(sys, a, ref);
    if (auto words = t.addresses(m)) {
        s.words = std::move(*words);
    } else {
        s.words = metric_addresses(sys, t.point(), m);
    }
    return s;
}

RamificationSequence ramification_sequence(const NecklaceSystem& sys, const IncidenceAutomaton& a,
                                           const NodeRef& ref, int M) {
    RamificationSequence r;
    Target t = Target::node(sys, a, ref);
    auto splice = t.splice_info();
    if (a.closed && splice) {
        auto [offset, state] = *splice;
        bool definite = true;
        std::vector<std::uint64_t> counts =
            a.path_counts(state, std::max(0, M - offset), &definite);
        if (definite) {
            for (int m = 1; m <= M; ++m)
                r.counts.push_back(m < offset ? 1 : counts[m - offset]);
            r.exact = true;
            return r;
        }
    }
    r.exact = false;
    for (int m = 1; m <= M; ++m)
        r.counts.push_back(metric_addresses(sys, t.point(), m).size());
    return r;
}

CopyGraph copy_graph(const NecklaceSystem& sys, const IncidenceAutomaton& a, int m,
                     const std::vector<Word>& exclude, std::size_t budget) {
    if (budget == 0) budget = 40000;
    double count = std::pow(static_cast<double>(sys.n()), m);
    if (count > static_cast<double>(budget))
        throw BudgetError("copy_graph: " + std::to_string(sys.n()) + "^" + std::to_string(m) +
                          " words exceed budget " + std::to_string(budget));

    std::set<Word> excluded(exclude.begin(), exclude.end());
    CopyGraph g;
    {
        // Lexicographic enumeration of all level-m words.
        std::vector<int> digits(m, 1);
        while (true) {
            Word cand{std::vector<int>(digits.begin(), digits.end())};
            if (!excluded.count(cand)) g.words.push_back(cand);
            int pos = m - 1;
            while (pos >= 0 && digits[pos] == sys.n()) {
                digits[pos] = 1;
                --pos;
            }
            if (pos < 0) break;
            ++digits[pos];
        }
    }

    const std::size_t V = g.words.size();
    std::vector<std::vector<int>> adj(V);
    std::vector<char> unknown_flag(V, 0);
    parallel_for(V, [&](std::size_t i) {
        for (std::size_t j = i + 1; j < V; ++j) {
            std::size_t cp = common_prefix_len(g.words[i], g.words[j]);
            if (!sys.adjacent(g.words[i][cp], g.words[j][cp])) continue;
            CopyIntersection ci = copy_contact(sys, a, g.words[i], g.words[j]);
            if (ci.kind == CopyIntersection::Kind::SharedNode)
                adj[i].push_back(static_cast<int>(j));
            else if (ci.kind == CopyIntersection::Kind::Unknown)
                unknown_flag[i] = 1;
        }
    });
    for (std::size_t i = 0; i < V; ++i) {
        if (unknown_flag[i]) g.definite = false;
        for (int j : adj[i]) g.edges.push_back({static_cast<int>(i), j});
    }

    // Connected components (union-find).
    std::vector<int> parent(V);
    for (std::size_t i = 0; i < V; ++i) parent[i] = static_cast<int>(i);
    std::function<int(int)> find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (auto [i, j] : g.edges) {
        int ri = find(i), rj = find(j);
        if (ri != rj) parent[std::max(ri, rj)] = std::min(ri, rj);
    }
    g.component.resize(V);
    std::vector<int> label(V, -1);
    int next_label = 0;
    for (std::size_t i = 0; i < V; ++i) {
        int r = find(static_cast<int>(i));
        if (label[r] < 0) label[r] = next_label++;
        g.component[i] = label[r];
    }
    g.n_components = next_label;
    return g;
}

}  // namespace necklace
