#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "necklace/automaton.hpp"
#include "necklace/system.hpp"
#include "necklace/word.hpp"

namespace necklace {

// The point f_base(z_k).
struct NodeRef {
    Word base;
    int index = 1;  // k in 1..n

    std::string str() const { return base.str() + ":" + std::to_string(index); }
    bool operator==(const NodeRef&) const = default;
};

// A point of the attractor with enough symbolic structure to answer
// "is this point inside the piece addressed by w" exactly (up to the node
// tolerance): either the image of a contact node under a finite word, or a
// point given by an eventually periodic address.
class Target {
  public:
    static Target node(const NecklaceSystem& sys, const IncidenceAutomaton& a, NodeRef ref);
    static Target periodic(const NecklaceSystem& sys, const IncidenceAutomaton& a, Word preperiod,
                           Word period);

    const Point& point() const { return point_; }
    const std::string& label() const { return label_; }

    // Membership of the point in F_w.
    Tri contains(const Word& w) const;

    // The m-level addresses (words w with the point inside F_w).
    // Fails with Unknown only on unclosed automata.
    std::optional<std::vector<Word>> addresses(int m, std::size_t budget = 1 << 20) const;

    // True when the point has exactly one address at every level (no step of
    // the peel coincides with a contact node).
    bool single_address() const { return single_address_; }

    // For periodic targets: pre-period and period lengths.
    int preperiod_len() const { return preperiod_len_; }
    int period_len() const { return period_len_; }
    bool is_periodic() const { return period_len_ > 0; }

    // Digit of the unique address at position i (0-based); single-address
    // targets only.
    int address_digit(std::size_t i) const;

    // First peel position whose point coincides with a contact node, with
    // that node's automaton state. Always present for node targets.
    std::optional<std::pair<int, int>> splice_info() const;

  private:
    const IncidenceAutomaton* aut_ = nullptr;
    Point point_;
    std::string label_;
    // Peel table: entry d describes the point after stripping d leading
    // digits. splice >= 0: that point coincides with a contact-node state and
    // resolution continues in the automaton. Otherwise expect holds the next
    // digit of the address.
    struct Step {
        int splice = -1;
        int expect = 0;
    };
    std::vector<Step> steps_;
    int preperiod_len_ = 0;  // wrap point of steps_ for periodic targets
    int period_len_ = 0;     // 0 for node targets (steps_ end in a splice)
    bool single_address_ = false;

    const Step& step(std::size_t i) const;
};

// Result of intersecting two distinct pieces.
struct CopyIntersection {
    enum class Kind { Disjoint, SharedNode, Unknown };
    Kind kind = Kind::Unknown;
    NodeRef node;  // valid for SharedNode
};

// Exact combinatorial intersection of F_a and F_b for non-nested words:
// reduce by the common prefix, check cyclic adjacency of the split digits,
// then test that the shared node's address set contains both suffixes.
CopyIntersection copy_contact(const NecklaceSystem& sys, const IncidenceAutomaton& a,
                              const Word& wa, const Word& wb);

// Same-level variant (the public operation).
CopyIntersection copy_intersection(const NecklaceSystem& sys, const IncidenceAutomaton& a,
                                   const Word& wa, const Word& wb);

struct AddressSet {
    int level = 0;
    std::vector<Word> words;
};

AddressSet address_set(const NecklaceSystem& sys, const IncidenceAutomaton& a,
                       const NodeRef& ref, int m);

// c_1..c_M for the point. exact=false when the automaton could not certify.
struct RamificationSequence {
    std::vector<std::uint64_t> counts;
    bool exact = true;
};
RamificationSequence ramification_sequence(const NecklaceSystem& sys, const IncidenceAutomaton& a,
                                           const NodeRef& ref, int M);

struct CopyGraph {
    std::vector<Word> words;        // vertices, lexicographic
    std::vector<int> component;     // per vertex
    int n_components = 0;
    std::vector<std::pair<int, int>> edges;
    bool definite = true;  // false when some intersection test was Unknown
};

// Adjacency graph of all level-m pieces minus the excluded words.
CopyGraph copy_graph(const NecklaceSystem& sys, const IncidenceAutomaton& a, int m,
                     const std::vector<Word>& exclude, std::size_t budget = 0);

}  // namespace necklace
