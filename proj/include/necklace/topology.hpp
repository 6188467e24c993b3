#pragma once

#include <optional>
#include <string>
#include <vector>

#include "necklace/addresses.hpp"
#include "necklace/system.hpp"

namespace necklace {

// Ordered run of same-level pieces in which consecutive members share a
// single point (the connections) and all other pairs are disjoint.
struct Chain {
    int level = 0;
    std::vector<Word> words;
    std::vector<NodeRef> connections;       // size = words.size() - 1
    std::vector<Point> connection_points;   // same order
};

// Level-k chain between two symbolically-presented points. Refinement from
// level 1 upward; connections of level k persist into level k+1.
Chain build_chain(const NecklaceSystem& sys, const IncidenceAutomaton& aut, const Target& x,
                  const Target& u, int level, std::size_t budget = 0);

// Polyline x, ordered connections of the depth-level chain, u.
std::vector<Point> approximate_arc(const NecklaceSystem& sys, const IncidenceAutomaton& aut,
                                   const Target& x, const Target& u, int depth);

struct CutCertificate {
    int anchor_level = 0;
    int period = 0;       // levels per repetition of the surrounding structure
    int components = 0;
};

struct CutVerdict {
    enum class Kind { NoCutUpToDepth, CutCandidate, CutCertified, Unknown };
    Kind kind = Kind::Unknown;
    std::string target_label;
    Point point;
    int depth_scanned = 0;
    std::vector<int> component_history;  // components of U_m, m = 1..M
    std::optional<CutCertificate> certificate;
    std::string note;
};

inline const char* to_string(CutVerdict::Kind k) {
    switch (k) {
        case CutVerdict::Kind::NoCutUpToDepth: return "NoCutUpToDepth";
        case CutVerdict::Kind::CutCandidate: return "CutCandidate";
        case CutVerdict::Kind::CutCertified: return "CutCertified";
        default: return "Unknown";
    }
}

// Connectivity scan of U_m = union of the m-level pieces avoiding the target
// point, for m = 1..M, on the contracted graph whose vertices are the
// maximal pieces disjoint from the target. Component counts equal those of
// the full m-level piece graph.
CutVerdict cut_point_scan(const NecklaceSystem& sys, const IncidenceAutomaton& aut,
                          const Target& target, int M);

struct GlobalScanResult {
    std::vector<CutVerdict> verdicts;
    std::string caveat;  // set when the candidate restriction is unsound
    int deduplicated = 0;
};

// Scans every node image f_w(z_k) with |w| <= candidate_level, metrically
// deduplicated (shallowest representative kept).
GlobalScanResult global_cut_point_search(const NecklaceSystem& sys, const IncidenceAutomaton& aut,
                                         int candidate_level, int M);

}  // namespace necklace
