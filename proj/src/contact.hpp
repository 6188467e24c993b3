#pragma once

#include <vector>

#include "necklace/system.hpp"

namespace necklace::detail {

// Certified analysis of the intersection of two first-level pieces.
//
// The descent works on relative states g = f_sigma^-1 o f_tau; the outer
// ball test F vs g(F) is position-free, so the reachable state set stays
// finite on self-similar and rigid self-affine systems even when the number
// of concrete touching word pairs grows exponentially with depth. A state
// graph cycle certifies a genuine shared point (the nested enclosures on
// both sides contract to the same limit); a cycle-free alive graph
// certifies disjointness.
struct PairContact {
    enum class Outcome { Disjoint, Contact, Budget };
    Outcome outcome = Outcome::Budget;

    std::vector<Point> points;  // world-coordinate contact representatives
    double spread = 0.0;        // max pairwise distance of the cover
    double eps = 0.0;           // residual radius of the cover balls
    double margin = 0.0;        // Disjoint: min relative gap at pruning
    int states = 0;
    int cover_balls = 0;
};

PairContact pair_contact(const NecklaceSystem& sys, int digit_a, int digit_b,
                         double tol, std::size_t max_states = 20000);

}  // namespace necklace::detail
