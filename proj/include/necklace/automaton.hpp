#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "necklace/system.hpp"
#include "necklace/util.hpp"
#include "necklace/word.hpp"

namespace necklace {

// Finite machine on attractor points reached from the contact nodes by
// inverse maps. A transition (p, d) -> f_d^-1(p) exists for each first-level
// piece d containing p; length-m paths from a node's state therefore
// enumerate exactly the m-level addresses of that node. Out-degrees are 1 or
// 2 and transitions are digit-deterministic.
struct IncidenceAutomaton {
    struct State {
        Point p;
        std::vector<std::pair<int, int>> next;  // (digit, state), digit-sorted
        bool complete = true;  // all memberships of p were decidable
    };

    std::vector<State> states;
    std::vector<int> node_state;  // index k-1 -> state of z_k
    double merge_tolerance = 0.0;
    bool closed = false;       // all states expanded and complete
    double min_state_gap = 0;  // smallest distance between distinct states

    int n_states() const { return static_cast<int>(states.size()); }

    std::optional<int> step(int state, int digit) const {
        for (auto [d, t] : states[state].next)
            if (d == digit) return t;
        return std::nullopt;
    }

    // Does some address of the state's point start with this word?
    Tri walk(int state, const int* digits, std::size_t len) const {
        int cur = state;
        for (std::size_t i = 0; i < len; ++i) {
            auto nxt = step(cur, digits[i]);
            if (!nxt) return states[cur].complete ? Tri::No : Tri::Unknown;
            cur = *nxt;
        }
        return Tri::Yes;
    }
    Tri walk(int state, const Word& w) const { return walk(state, w.digits.data(), w.level()); }

    // Number of length-m paths per m = 0..max_m (c_m of the state's point).
    // Saturates at 2^62. definite=false when an incomplete state was touched.
    std::vector<std::uint64_t> path_counts(int state, int max_m, bool* definite = nullptr) const;

    // All words spelled by length-m paths, lexicographically sorted.
    std::vector<Word> enumerate(int state, int m, std::size_t budget = 1 << 20) const;

    // Exact boundedness of the path-count sequence from `state`: bounded iff
    // no reachable state inside a cycle has two outgoing transitions.
    // Requires a closed automaton; Unknown otherwise.
    Tri bounded_paths(int state) const;
};

struct AutomatonOptions {
    double merge_tolerance_rel = 1e-9;
    int max_states = 4096;
    int membership_depth = 96;
};

IncidenceAutomaton build_incidence_automaton(const NecklaceSystem& sys,
                                             const AutomatonOptions& opts = {});

}  // namespace necklace
