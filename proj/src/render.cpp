#include "necklace/render.hpp"

#include <cmath>

#include "necklace/errors.hpp"
#include "necklace/util.hpp"

namespace necklace {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Viewport {
    double x0, y0, scale, height;
    Point to_px(Point p) const {
        // SVG y grows downward.
        return {(p.x - x0) * scale, height - (p.y - y0) * scale};
    }
};

void polygon_tag(std::string& out, const std::vector<Point>& pts, const Viewport& vp,
                 const std::string& fill, const std::string& stroke) {
    out += "<polygon points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) {
        Point q = vp.to_px(pts[i]);
        if (i) out += ' ';
        out += fmt6(q.x);
        out += ',';
        out += fmt6(q.y);
    }
    out += "\" fill=\"" + fill + "\" stroke=\"" + stroke + "\"/>\n";
}

}  // namespace

std::string render_svg(const NecklaceSystem& sys, const RenderOptions& opts) {
    std::size_t budget = opts.budget ? opts.budget : point_budget();
    double copies = std::pow(static_cast<double>(sys.n()), opts.depth);
    if (copies > static_cast<double>(budget))
        throw BudgetError("render depth " + std::to_string(opts.depth) + " needs " +
                          fmt12(copies) + " pieces; lower --depth or raise the budget");

    // Base polygon: 16-gon inscribed in the enclosure.
    std::vector<Point> base;
    for (int i = 0; i < 16; ++i) {
        double th = 2.0 * kPi * i / 16.0;
        base.push_back(sys.enclosure.center +
                       Vec2{std::cos(th), std::sin(th)} * sys.enclosure.radius);
    }

    Viewport vp;
    {
        double pad = 0.05 * sys.enclosure.radius;
        double span = 2 * (sys.enclosure.radius + pad);
        vp.x0 = sys.enclosure.center.x - sys.enclosure.radius - pad;
        vp.y0 = sys.enclosure.center.y - sys.enclosure.radius - pad;
        vp.scale = std::min(opts.width, opts.height) / span;
        vp.height = opts.height;
    }

    std::string svg;
    svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(opts.width) +
           "\" height=\"" + std::to_string(opts.height) + "\" viewBox=\"0 0 " +
           std::to_string(opts.width) + " " + std::to_string(opts.height) + "\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    // Depth-level pieces in lexicographic order; highlighted words afterward.
    std::vector<Word> regular, accent;
    {
        std::vector<int> digits(opts.depth, 1);
        bool done = opts.depth == 0;
        if (opts.depth == 0) regular.push_back(Word{});
        while (!done) {
            Word w{std::vector<int>(digits.begin(), digits.end())};
            bool hl = false;
            for (const Word& h : opts.highlight) {
                if (h.level() <= w.level() && w.prefix(h.level()) == h) hl = true;
            }
            (hl ? accent : regular).push_back(w);
            int pos = opts.depth - 1;
            while (pos >= 0 && digits[pos] == sys.n()) {
                digits[pos] = 1;
                --pos;
            }
            if (pos < 0)
                done = true;
            else
                ++digits[pos];
        }
    }
    for (const Word& w : regular) {
        AffineMap m = sys.word_map(w);
        std::vector<Point> pts;
        for (Point p : base) pts.push_back(m(p));
        polygon_tag(svg, pts, vp, opts.fill, opts.stroke);
    }
    for (const Word& w : accent) {
        AffineMap m = sys.word_map(w);
        std::vector<Point> pts;
        for (Point p : base) pts.push_back(m(p));
        polygon_tag(svg, pts, vp, opts.highlight_fill, opts.stroke);
    }

    if (opts.mark_nodes && sys.nodes_valid) {
        for (int k = 1; k <= sys.n(); ++k) {
            Point q = vp.to_px(sys.node(k));
            svg += "<circle cx=\"" + fmt6(q.x) + "\" cy=\"" + fmt6(q.y) +
                   "\" r=\"3\" fill=\"black\"/>\n";
        }
    }
    svg += "</svg>\n";
    return svg;
}

}  // namespace necklace
