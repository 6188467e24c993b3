#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "necklace/addresses.hpp"
#include "necklace/builtins.hpp"
#include "necklace/classify.hpp"
#include "necklace/errors.hpp"
#include "necklace/render.hpp"
#include "necklace/system.hpp"
#include "necklace/system_file.hpp"
#include "necklace/topology.hpp"
#include "necklace/util.hpp"
#include "necklace/verdict.hpp"

namespace nk = necklace;

namespace {

nk::NecklaceSystem load_input(const std::string& spec) {
    for (const std::string& b : nk::builtin_names())
        if (spec == b || spec.rfind(b + "(", 0) == 0) return nk::builtin(spec);
    return nk::load_system_file(spec);
}

std::string point_str(nk::Point p) {
    return "(" + nk::fmt12(p.x) + ", " + nk::fmt12(p.y) + ")";
}

// "1,13:24" -> NodeRef; bare "24" means an empty base word.
nk::NodeRef parse_node_ref(const std::string& text, int n) {
    nk::NodeRef ref;
    auto colon = text.rfind(':');
    std::string base = colon == std::string::npos ? "" : text.substr(0, colon);
    std::string idx = colon == std::string::npos ? text : text.substr(colon + 1);
    ref.base = nk::Word::parse(base, n);
    try {
        ref.index = std::stoi(idx);
    } catch (...) {
        throw nk::InputError("bad node index '" + idx + "'");
    }
    if (ref.index < 1 || ref.index > n)
        throw nk::InputError("node index " + idx + " out of range 1.." + std::to_string(n));
    return ref;
}

// "1,13*" or "2,4(1,13)*" -> (preperiod, period).
std::pair<nk::Word, nk::Word> parse_point_address(const std::string& text, int n) {
    if (text.empty() || text.back() != '*')
        throw nk::InputError("point address must end with '*', e.g. \"1,13*\"");
    std::string body = text.substr(0, text.size() - 1);
    auto open = body.find('(');
    if (open == std::string::npos) return {nk::Word{}, nk::Word::parse(body, n)};
    if (body.back() != ')') throw nk::InputError("unbalanced parentheses in point address");
    std::string pre = body.substr(0, open);
    std::string per = body.substr(open + 1, body.size() - open - 2);
    return {nk::Word::parse(pre, n), nk::Word::parse(per, n)};
}

void print_cut_verdict(const nk::CutVerdict& v) {
    std::cout << "target: " << v.target_label << "  point: " << point_str(v.point) << "\n";
    std::cout << "  status: " << nk::to_string(v.kind) << "  depth: " << v.depth_scanned << "\n";
    std::cout << "  components:";
    for (int c : v.component_history) std::cout << " " << c;
    std::cout << "\n";
    if (v.certificate)
        std::cout << "  certificate: anchor level " << v.certificate->anchor_level << ", period "
                  << v.certificate->period << ", components " << v.certificate->components
                  << "\n";
    if (!v.note.empty()) std::cout << "  note: " << v.note << "\n";
}

int to_exit(nk::Status s) { return nk::exit_code(s); }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"necklace: analysis of ring-like iterated function systems"};
    app.require_subcommand(1);

    std::string input;
    int depth = 6;
    double tol = 1e-6;
    int ramify_depth = 8;
    int level = 1;
    std::string node_arg, point_arg, from_arg, to_arg, out_path, highlight_arg;
    bool scan_all = false;
    int render_depth = 6, width = 800, height = 800;
    bool mark_nodes = false;

    auto* validate = app.add_subcommand("validate", "verify the cyclic intersection pattern");
    validate->add_option("input", input)->required();
    validate->add_option("--depth", depth);
    validate->add_option("--tol", tol);

    auto* classify = app.add_subcommand("classify", "structural classification report");
    classify->add_option("input", input)->required();
    classify->add_option("--depth", depth);
    classify->add_option("--ramify-depth", ramify_depth);

    auto* nodes = app.add_subcommand("nodes", "contact nodes with coordinates and addresses");
    nodes->add_option("input", input)->required();

    auto* ramify = app.add_subcommand("ramify", "piece counts c_1..c_M at a node image");
    ramify->add_option("input", input)->required();
    ramify->add_option("--node", node_arg)->required();
    ramify->add_option("--depth", ramify_depth);

    auto* cutscan = app.add_subcommand("cutscan", "cut-point detection at node images");
    cutscan->add_option("input", input)->required();
    cutscan->add_option("--node", node_arg);
    cutscan->add_option("--point-address", point_arg);
    cutscan->add_flag("--all", scan_all);
    cutscan->add_option("--level", level);
    cutscan->add_option("--depth", depth);

    auto* chain = app.add_subcommand("chain", "piece chain between two node images");
    chain->add_option("input", input)->required();
    chain->add_option("--from", from_arg)->required();
    chain->add_option("--to", to_arg)->required();
    chain->add_option("--level", level);

    auto* render = app.add_subcommand("render", "deterministic SVG of the attractor");
    render->add_option("input", input)->required();
    render->add_option("--depth", render_depth);
    render->add_option("--out", out_path)->required();
    render->add_option("--highlight", highlight_arg,
                       "pieces to accent: words like 1,13 separated by ';'");
    render->add_option("--width", width);
    render->add_option("--height", height);
    render->add_flag("--mark-nodes", mark_nodes);

    CLI11_PARSE(app, argc, argv);

    try {
        if (validate->parsed()) {
            nk::NecklaceSystem sys = load_input(input);
            nk::NecklaceVerdict v = nk::validate_necklace(sys, depth, tol);
            std::cout << "system: " << (sys.name.empty() ? input : sys.name)
                      << "  n: " << sys.n() << "\n";
            std::cout << "status: " << nk::to_string(v.status) << "\n";
            std::cout << "depth: " << v.depth << "  tol: " << nk::fmt12(v.tolerance) << "\n";
            if (v.status == nk::Status::Verified)
                std::cout << "min-gap: " << nk::fmt12(v.min_gap) << "\n";
            for (const auto& w : v.witnesses) {
                std::cout << "witness: pieces " << w.a << "," << w.b << " ";
                switch (w.kind) {
                    case nk::PairWitness::Kind::NonAdjacentContact:
                        std::cout << "intersect (separation " << nk::fmt12(w.separation) << ")";
                        break;
                    case nk::PairWitness::Kind::AdjacentDisjoint:
                        std::cout << "are disjoint (gap " << nk::fmt12(w.separation) << ")";
                        break;
                    case nk::PairWitness::Kind::AdjacentMultiContact:
                        std::cout << "meet in multiple spots (spread " << nk::fmt12(w.separation)
                                  << ")";
                        break;
                    default:
                        std::cout << "undecided at this depth";
                }
                std::cout << "\n";
                for (const auto& p : w.points) std::cout << "  at " << point_str(p) << "\n";
            }
            return to_exit(v.status);
        }

        if (classify->parsed()) {
            nk::NecklaceSystem sys = load_input(input);
            nk::IncidenceAutomaton aut = nk::build_incidence_automaton(sys);
            nk::ClassificationReport r = nk::classify_system(sys, aut, ramify_depth);
            std::cout << "system: " << (sys.name.empty() ? input : sys.name)
                      << "  n: " << sys.n() << "\n";
            std::cout << "automaton: " << aut.n_states() << " states, "
                      << (aut.closed ? "closed" : "not closed")
                      << ", min-state-gap " << nk::fmt12(aut.min_state_gap) << "\n";
            std::cout << "good: " << nk::to_string(r.good.status);
            for (auto [k, j] : r.good.witnesses) std::cout << "  (k=" << k << " j=" << j << ")";
            std::cout << "\n";
            std::cout << "stable: " << nk::to_string(r.stable.status) << "  contact-counts:";
            for (std::size_t k = 0; k < r.stable.contact_counts.size(); ++k)
                std::cout << " k" << (k + 1) << "=" << r.stable.contact_counts[k];
            std::cout << "\n";
            std::cout << "bounded-ramification: " << nk::to_string(r.ramification.status)
                      << (r.ramification.exact ? "" : "  (evidence only)") << "\n";
            for (const auto& node : r.ramification.nodes) {
                std::cout << "  z" << node.k << ": c =";
                for (auto c : node.counts) std::cout << " " << c;
                std::cout << "  [" << node.growth << "]\n";
            }
            std::cout << "property-I: " << nk::to_string(r.property_i.status) << "\n";
            for (const auto& pk : r.property_i.detail)
                std::cout << "  k" << pk.k << ": " << nk::to_string(pk.status) << " ("
                          << pk.method << ")\n";
            nk::Status overall = nk::Status::Verified;
            for (nk::Status s : {r.good.status, r.stable.status, r.ramification.status,
                                 r.property_i.status}) {
                if (s == nk::Status::Refuted) overall = nk::Status::Refuted;
                if (s == nk::Status::Unknown && overall == nk::Status::Verified)
                    overall = nk::Status::Unknown;
            }
            return to_exit(overall);
        }

        if (nodes->parsed()) {
            nk::NecklaceSystem sys = load_input(input);
            if (!sys.nodes_valid) throw nk::InvalidSystemError(sys.nodes_error);
            nk::IncidenceAutomaton aut = nk::build_incidence_automaton(sys);
            for (int k = 1; k <= sys.n(); ++k) {
                nk::AddressSet s = nk::address_set(sys, aut, nk::NodeRef{nk::Word{}, k}, 3);
                std::cout << "z" << k << ": " << point_str(sys.node(k)) << "  addresses[3]:";
                for (const auto& w : s.words) std::cout << " " << w.str();
                std::cout << "\n";
            }
            return 0;
        }

        if (ramify->parsed()) {
            nk::NecklaceSystem sys = load_input(input);
            nk::IncidenceAutomaton aut = nk::build_incidence_automaton(sys);
            nk::NodeRef ref = parse_node_ref(node_arg, sys.n());
            nk::RamificationSequence seq =
                nk::ramification_sequence(sys, aut, ref, ramify_depth);
            std::cout << "node: " << ref.str() << (seq.exact ? "" : "  (evidence only)") << "\n";
            std::cout << "c:";
            for (auto c : seq.counts) std::cout << " " << c;
            std::cout << "\n";
            return 0;
        }

        if (cutscan->parsed()) {
            nk::NecklaceSystem sys = load_input(input);
            nk::IncidenceAutomaton aut = nk::build_incidence_automaton(sys);
            std::vector<nk::CutVerdict> verdicts;
            std::string caveat;
            if (scan_all) {
                nk::GlobalScanResult res = nk::global_cut_point_search(sys, aut, level, depth);
                verdicts = res.verdicts;
                caveat = res.caveat;
            } else if (!point_arg.empty()) {
                auto [pre, per] = parse_point_address(point_arg, sys.n());
                nk::Target t = nk::Target::periodic(sys, aut, pre, per);
                verdicts.push_back(nk::cut_point_scan(sys, aut, t, depth));
            } else if (!node_arg.empty()) {
                nk::NodeRef ref = parse_node_ref(node_arg, sys.n());
                nk::Target t = nk::Target::node(sys, aut, ref);
                verdicts.push_back(nk::cut_point_scan(sys, aut, t, depth));
            } else {
                throw nk::InputError("cutscan needs --node, --point-address, or --all");
            }
            if (!caveat.empty()) std::cout << "caveat: " << caveat << "\n";
            bool any_cut = false, any_unknown = false;
            for (const auto& v : verdicts) {
                print_cut_verdict(v);
                if (v.kind == nk::CutVerdict::Kind::CutCertified ||
                    v.kind == nk::CutVerdict::Kind::CutCandidate)
                    any_cut = true;
                if (v.kind == nk::CutVerdict::Kind::Unknown) any_unknown = true;
            }
            return any_cut ? 2 : (any_unknown ? 3 : 0);
        }

        if (chain->parsed()) {
            nk::NecklaceSystem sys = load_input(input);
            nk::IncidenceAutomaton aut = nk::build_incidence_automaton(sys);
            nk::Target x = nk::Target::node(sys, aut, parse_node_ref(from_arg, sys.n()));
            nk::Target u = nk::Target::node(sys, aut, parse_node_ref(to_arg, sys.n()));
            nk::Chain c = nk::build_chain(sys, aut, x, u, level);
            std::cout << "level: " << c.level << "  pieces: " << c.words.size() << "\n";
            for (std::size_t i = 0; i < c.words.size(); ++i) {
                std::cout << "piece: " << c.words[i].str() << "\n";
                if (i < c.connections.size())
                    std::cout << "connection: " << c.connections[i].str() << " at "
                              << point_str(c.connection_points[i]) << "\n";
            }
            return 0;
        }

        if (render->parsed()) {
            nk::NecklaceSystem sys = load_input(input);
            nk::RenderOptions opts;
            opts.depth = render_depth;
            opts.width = width;
            opts.height = height;
            opts.mark_nodes = mark_nodes;
            if (!highlight_arg.empty()) {
                std::size_t pos = 0;
                while (pos <= highlight_arg.size()) {
                    std::size_t next = highlight_arg.find(';', pos);
                    if (next == std::string::npos) next = highlight_arg.size();
                    std::string tok = highlight_arg.substr(pos, next - pos);
                    if (!tok.empty()) opts.highlight.push_back(nk::Word::parse(tok, sys.n()));
                    pos = next + 1;
                }
            }
            std::string svg = nk::render_svg(sys, opts);
            std::ofstream out(out_path, std::ios::binary);
            if (!out) throw nk::InputError("cannot write '" + out_path + "'");
            out << svg;
            std::cout << "wrote " << out_path << " (" << svg.size() << " bytes)\n";
            return 0;
        }
    } catch (const nk::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
