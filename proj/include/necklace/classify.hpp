#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "necklace/addresses.hpp"
#include "necklace/system.hpp"
#include "necklace/verdict.hpp"

namespace necklace {

// "Good": no child piece F_{kj} contains both boundary nodes of F_k.
struct GoodReport {
    Status status = Status::Unknown;
    std::vector<std::pair<int, int>> witnesses;  // (k, j) refutations
};

// "Stable": every F_k has at least two children touching its boundary pair.
struct StableReport {
    Status status = Status::Unknown;
    std::vector<int> contact_counts;               // per k
    std::vector<std::vector<int>> contact_digits;  // per k, the touching j's
};

struct RamifyNodeInfo {
    int k = 0;
    std::vector<std::uint64_t> counts;  // c_1..c_M
    Tri bounded = Tri::Unknown;
    std::string growth;
};

struct RamifyReport {
    Status status = Status::Unknown;
    bool exact = true;  // automaton-certified (vs window evidence)
    std::vector<RamifyNodeInfo> nodes;
    std::string note;
};

struct PropertyIReport {
    struct PerK {
        int k = 0;
        Status status = Status::Unknown;
        std::string method;
    };
    Status status = Status::Unknown;
    std::vector<PerK> detail;
};

struct ClassificationReport {
    GoodReport good;
    StableReport stable;
    RamifyReport ramification;
    PropertyIReport property_i;
};

GoodReport is_good(const NecklaceSystem& sys, const IncidenceAutomaton& aut);
StableReport is_stable(const NecklaceSystem& sys, const IncidenceAutomaton& aut);
RamifyReport bounded_ramification(const NecklaceSystem& sys, const IncidenceAutomaton& aut, int M);

// Each F_k must admit an arc between its boundary nodes passing through at
// least two of its own contact nodes. Constructions are capped at one
// refinement level inside each child piece.
PropertyIReport check_property_I(const NecklaceSystem& sys, const IncidenceAutomaton& aut);

ClassificationReport classify_system(const NecklaceSystem& sys, const IncidenceAutomaton& aut,
                                     int ramify_depth = 8);

// ---------------------------------------------------------------------------
// Open-set-condition witnesses and complement analysis.
// ---------------------------------------------------------------------------

struct PolygonWitness {
    std::vector<Point> vertices;  // simple polygon; the open set is its interior
};

struct OscReport {
    Status status = Status::Unknown;
    std::string note;
};

// Checks (a) each map sends the open polygon into it and (b) the images have
// pairwise disjoint interiors. Predicates carry an epsilon band; answers
// inside the band degrade to Unknown.
OscReport check_osc_witness(const NecklaceSystem& sys, const PolygonWitness& witness,
                            double tol = 1e-9);

struct ComplementAnalysis {
    int resolution = 0;
    int bounded_components = 0;           // with pixel area >= 4
    std::vector<Point> seeds;             // one interior point per component
    std::vector<int> pixel_areas;
    std::string note;                     // always flagged resolution-limited
};

// Rasterizes an outer cover of the attractor and flood-fills the complement
// from the frame.
ComplementAnalysis complement_components(const NecklaceSystem& sys, int resolution);

// Pixel-boundary outline of the bounded complement component containing
// `seed`, as a polygon candidate for check_osc_witness or visualization.
PolygonWitness build_osc_witness_from_component(const NecklaceSystem& sys, Point seed,
                                                int resolution = 1024);

double polygon_area(const PolygonWitness& poly);

}  // namespace necklace
