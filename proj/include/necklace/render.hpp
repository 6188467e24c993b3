#pragma once

#include <string>
#include <vector>

#include "necklace/system.hpp"
#include "necklace/word.hpp"

namespace necklace {

struct RenderOptions {
    int depth = 6;
    int width = 800;
    int height = 800;
    std::string fill = "#1f4e79";
    std::string stroke = "none";
    std::string highlight_fill = "#d64541";
    bool mark_nodes = false;
    std::vector<Word> highlight;  // pieces drawn last in the accent color
    std::size_t budget = 0;       // 0: global default
};

// Deterministic SVG: each depth-level piece drawn as the affine image of a
// 16-gon inscribed in the enclosure; byte-identical for identical inputs.
std::string render_svg(const NecklaceSystem& sys, const RenderOptions& opts);

}  // namespace necklace
