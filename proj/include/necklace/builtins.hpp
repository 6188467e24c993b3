#pragma once

#include <string>
#include <vector>

#include "necklace/system.hpp"

namespace necklace {

// Built-in example systems:
//   fig1a      - 3 similitudes of ratio 1/2 at triangle vertices
//   fig1b      - 6 similitudes of ratio 1/3 at hexagon vertices
//   ex21       - 24-map loop (4 corner maps of ratio 1/3, 20 of ratio 1/15)
//                with translations solved from its contact constraints
//   ex23L      - 3-map system with one reflecting similitude
//   ex23R      - 6-map self-affine ring, parameter alpha in (0, sqrt(3)/6);
//                accepts "ex23R" (alpha = 0.2) or "ex23R(0.25)"
NecklaceSystem builtin(const std::string& name);

std::vector<std::string> builtin_names();

// The solved translations of ex21 (as x+iy pairs), exposed for inspection.
std::vector<Point> ex21_translations();

// Max residual over the 24 contact constraints of ex21.
double ex21_constraint_residual();

}  // namespace necklace
