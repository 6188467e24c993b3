#include "necklace/automaton.hpp"

#include <algorithm>
#include <limits>

#include "necklace/errors.hpp"

namespace necklace {

std::vector<std::uint64_t> IncidenceAutomaton::path_counts(int state, int max_m,
                                                           bool* definite) const {
    const std::uint64_t cap = 1ull << 62;
    bool def = true;
    std::vector<std::uint64_t> cur(states.size(), 1), nxt(states.size());
    std::vector<std::uint64_t> out;
    out.reserve(max_m + 1);
    out.push_back(1);
    for (int m = 1; m <= max_m; ++m) {
        for (std::size_t s = 0; s < states.size(); ++s) {
            std::uint64_t total = 0;
            for (auto [d, t] : states[s].next) {
                (void)d;
                total += cur[t];
                if (total > cap) total = cap;
            }
            if (!states[s].complete) def = false;
            nxt[s] = total;
        }
        cur.swap(nxt);
        out.push_back(cur[state]);
    }
    if (definite) *definite = def && closed;
    return out;
}

std::vector<Word> IncidenceAutomaton::enumerate(int state, int m, std::size_t budget) const {
    std::vector<Word> out;
    Word scratch;
    scratch.digits.reserve(m);
    struct Frame {
        int state;
        std::size_t edge;
    };
    std::vector<Frame> stack{{state, 0}};
    while (!stack.empty()) {
        Frame& f = stack.back();
        if (static_cast<int>(stack.size()) - 1 == m) {
            if (out.size() >= budget) throw BudgetError("address enumeration exceeded budget");
            out.push_back(scratch);
            stack.pop_back();
            if (!scratch.digits.empty()) scratch.digits.pop_back();
            continue;
        }
        const auto& next = states[f.state].next;
        if (f.edge >= next.size()) {
            stack.pop_back();
            if (!scratch.digits.empty()) scratch.digits.pop_back();
            continue;
        }
        auto [d, t] = next[f.edge++];
        scratch.digits.push_back(d);
        stack.push_back({t, 0});
    }
    std::sort(out.begin(), out.end());
    return out;
}

Tri IncidenceAutomaton::bounded_paths(int state) const {
    if (!closed) return Tri::Unknown;
    // Reachable set.
    std::vector<char> seen(states.size(), 0);
    std::vector<int> stack{state};
    seen[state] = 1;
    while (!stack.empty()) {
        int s = stack.back();
        stack.pop_back();
        for (auto [d, t] : states[s].next) {
            (void)d;
            if (!seen[t]) {
                seen[t] = 1;
                stack.push_back(t);
            }
        }
    }
    // A state lies on a cycle iff it stays alive under repeated removal of
    // states with no successors within the reachable set... all states have
    // out-degree >= 1 here, so instead find states that can reach themselves.
    int ns = n_states();
    for (int s = 0; s < ns; ++s) {
        if (!seen[s] || states[s].next.size() < 2) continue;
        // Can s reach itself?
        std::vector<char> vis(ns, 0);
        std::vector<int> st;
        for (auto [d, t] : states[s].next) {
            (void)d;
            if (!vis[t]) {
                vis[t] = 1;
                st.push_back(t);
            }
        }
        bool cycles = false;
        while (!st.empty()) {
            int u = st.back();
            st.pop_back();
            if (u == s) {
                cycles = true;
                break;
            }
            for (auto [d, t] : states[u].next) {
                (void)d;
                if (!vis[t]) {
                    vis[t] = 1;
                    st.push_back(t);
                }
            }
        }
        if (cycles) return Tri::No;  // branching state on a cycle: unbounded
    }
    return Tri::Yes;
}

IncidenceAutomaton build_incidence_automaton(const NecklaceSystem& sys,
                                             const AutomatonOptions& opts) {
    if (!sys.nodes_valid)
        throw InvalidSystemError("incidence automaton needs resolved nodes: " + sys.nodes_error);
    IncidenceAutomaton a;
    a.merge_tolerance = opts.merge_tolerance_rel * std::max(1.0, sys.enclosure.radius);
    a.min_state_gap = std::numeric_limits<double>::infinity();

    auto find_or_add = [&](Point p) {
        for (std::size_t i = 0; i < a.states.size(); ++i) {
            double d = dist(a.states[i].p, p);
            if (d <= a.merge_tolerance) return static_cast<int>(i);
        }
        a.states.push_back({p, {}, true});
        return static_cast<int>(a.states.size()) - 1;
    };

    for (int k = 1; k <= sys.n(); ++k) a.node_state.push_back(find_or_add(sys.node(k)));

    bool budget_hit = false;
    std::size_t qi = 0;
    for (; qi < a.states.size(); ++qi) {
        if (static_cast<int>(a.states.size()) > opts.max_states) {
            budget_hit = true;
            break;
        }
        Point p = a.states[qi].p;
        int out_degree = 0;
        for (int d = 1; d <= sys.n(); ++d) {
            Tri in = point_in_piece(sys, p, d, a.merge_tolerance, opts.membership_depth);
            if (in == Tri::Unknown) {
                a.states[qi].complete = false;
                continue;
            }
            if (in == Tri::No) continue;
            Point q = inverse(sys.map(d))(p);
            int t = find_or_add(q);
            a.states[qi].next.push_back({d, t});
            ++out_degree;
        }
        if (out_degree == 0 || out_degree > 2)
            throw InvalidSystemError("state point (" + fmt12(p.x) + "," + fmt12(p.y) +
                                     ") lies in " + std::to_string(out_degree) +
                                     " first-level pieces; not a necklace contact structure");
    }
    if (budget_hit)
        for (std::size_t s = qi; s < a.states.size(); ++s) a.states[s].complete = false;

    a.closed = !budget_hit &&
               std::all_of(a.states.begin(), a.states.end(),
                           [](const IncidenceAutomaton::State& s) { return s.complete; });

    for (std::size_t i = 0; i < a.states.size(); ++i)
        for (std::size_t j = i + 1; j < a.states.size(); ++j)
            a.min_state_gap = std::min(a.min_state_gap, dist(a.states[i].p, a.states[j].p));
    if (!std::isfinite(a.min_state_gap)) a.min_state_gap = 0.0;
    return a;
}

}  // namespace necklace
