#pragma once

#include <optional>
#include <string>
#include <vector>

#include "necklace/geometry.hpp"
#include "necklace/util.hpp"
#include "necklace/verdict.hpp"
#include "necklace/word.hpp"

namespace necklace {

// Ordered cyclic family of n >= 3 contractions together with a certified
// attractor enclosure and (when resolvable) the n contact nodes z_1..z_n,
// where z_k is the single point shared by the k-th and (k+1)-th first-level
// pieces (cyclically; z_0 == z_n).
struct NecklaceSystem {
    std::vector<AffineMap> maps;
    Ball enclosure;
    std::vector<Point> nodes;  // z_1..z_n when nodes_valid
    bool nodes_valid = false;
    std::string nodes_error;
    double node_tolerance = 0.0;
    std::string name;

    int n() const { return static_cast<int>(maps.size()); }
    const AffineMap& map(int digit) const { return maps[digit - 1]; }

    int next(int digit) const { return digit % n() + 1; }
    int prev(int digit) const { return digit == 1 ? n() : digit - 1; }
    bool adjacent(int a, int b) const { return a != b && (next(a) == b || next(b) == a); }

    // Node shared by adjacent digits a,b: z_a if b follows a, z_b otherwise.
    int node_between(int a, int b) const {
        if (next(a) == b) return a;
        if (next(b) == a) return b;
        return 0;
    }

    // z_k for k in 0..n (z_0 == z_n).
    Point node(int k) const { return nodes[(k == 0 ? n() : k) - 1]; }

    AffineMap word_map(const Word& w) const {
        AffineMap m;  // identity
        for (int d : w.digits) m = compose(m, map(d));
        return m;
    }
};

struct SystemOptions {
    double node_tolerance_rel = 1e-9;  // relative to enclosure radius
    bool require_nodes = false;        // throw when node descent fails
};

// Validates map invariants (n >= 3, contractive, invertible), computes the
// enclosure and attempts the node descent.
NecklaceSystem make_system(std::vector<AffineMap> maps, const SystemOptions& opts = {});

// Invariant ball: center at the fixed point of the first map, radius
// max_k |f_k(c0) - c0| / (1 - max_k c_k). Every map sends it into itself.
Ball attractor_enclosure(const std::vector<AffineMap>& maps);

// Enclosure of the piece addressed by w: center f_w(c0), radius r0 times the
// product of the factors along w.
Ball copy_enclosure(const NecklaceSystem& sys, const Word& w);

// {f_w(c0) : |w| = depth} in lexicographic word order.
std::vector<Point> sample_attractor(const NecklaceSystem& sys, int depth,
                                    std::size_t budget = 0);

struct PairWitness {
    enum class Kind {
        NonAdjacentContact,   // provably (within enclosure error) intersecting
        AdjacentDisjoint,     // adjacent pieces certified separated
        AdjacentMultiContact, // adjacent pieces meet in >= 2 spots
        Undecided             // budget exhausted
    };
    int a = 0, b = 0;
    Kind kind = Kind::Undecided;
    std::vector<Point> points;  // contact evidence
    double separation = 0.0;    // signed gap where meaningful
};

struct NecklaceVerdict {
    Status status = Status::Unknown;
    int depth = 0;
    double tolerance = 0.0;
    std::vector<PairWitness> witnesses;  // nonempty when Refuted
    double min_gap = 0.0;                // smallest certified gap over disjoint pairs
    std::string note;
};

// Checks the cyclic intersection pattern: adjacent pieces meet in a single
// point (up to tol), all other pairs are disjoint.
NecklaceVerdict validate_necklace(const NecklaceSystem& sys, int depth, double tol);

// Contact points z_1..z_n via certified pair descent.
std::vector<Point> main_nodes(const NecklaceSystem& sys, double tol);

// Membership of a point in the attractor / in a first-level piece,
// certified by inverse-orbit descent with outer ball pruning.
Tri point_in_attractor(const NecklaceSystem& sys, Point p, double tol, int max_depth = 96);
Tri point_in_piece(const NecklaceSystem& sys, Point p, int digit, double tol, int max_depth = 96);

}  // namespace necklace
