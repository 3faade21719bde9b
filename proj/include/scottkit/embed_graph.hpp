#ifndef SCOTTKIT_EMBED_GRAPH_HPP
#define SCOTTKIT_EMBED_GRAPH_HPP

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "scottkit/config.hpp"
#include "scottkit/json_io.hpp"
#include "scottkit/structure.hpp"
#include "scottkit/trees.hpp"

namespace scottkit {

/**
 * Tree-to-graph coding. Each tree node a gets a representative vertex r(a)
 * pendant on a private triangle. Each successor pair (a, a') — with the root
 * a successor of itself — gets a vertex q(a,a') pendant on a private square,
 * a 2-edge chain from r(a) to q, and a 3-edge chain from r(a') to q. Chain
 * "length" counts edges; the reading is isolated here so the decoder only
 * ever matches what the encoder emits.
 */
namespace gadget {

enum Kind : int {
    node_rep = 0,       // r(a)
    node_triangle = 1,  // 3 vertices, index 0 attaches to r(a)
    succ_rep = 2,       // q(a,a')
    succ_square = 3,    // 4-cycle, index 0 attaches to q
    chain2 = 4,         // interior vertex of the 2-edge chain r(a) .. q
    chain3 = 5,         // 2 interior vertices of the 3-edge chain r(a') .. q
};

/// Injective pairing (gadget kind, source ids, index) -> vertex id; image
/// structures are reproducible bit for bit.
inline ElementId vertex(Kind kind, ElementId a, ElementId b, int index) {
    ElementId c2 = (a + b) * (a + b + 1) / 2 + b;   // Cantor pairing
    bool pair_kind = kind >= succ_rep;
    int slot = 0;
    switch (kind) {
        case node_rep: slot = 0; break;
        case node_triangle: slot = 1 + index; break;         // 1..3
        case succ_rep: slot = 0; break;
        case succ_square: slot = 1 + index; break;           // 1..4
        case chain2: slot = 5; break;
        case chain3: slot = 6 + index; break;                // 6..7
        default: throw InvalidInput("bad gadget kind");
    }
    return c2 * 32 + (pair_kind ? 16 : 0) + slot;
}

inline ElementId node_rep_vertex(ElementId a) { return vertex(node_rep, a, a, 0); }

/// Emits the node gadget for a: r(a) joined to a private triangle.
inline void emit_node(ElementId a, std::set<std::pair<ElementId, ElementId>>& edges) {
    ElementId r = node_rep_vertex(a);
    ElementId t0 = vertex(node_triangle, a, a, 0);
    ElementId t1 = vertex(node_triangle, a, a, 1);
    ElementId t2 = vertex(node_triangle, a, a, 2);
    edges.insert({r, t0});
    edges.insert({t0, t1});
    edges.insert({t1, t2});
    edges.insert({t0, t2});
}

/// Emits the successor gadget for (a, a'): q(a,a') joined to a private
/// square, with the 2-chain to r(a) and the 3-chain to r(a').
inline void emit_succ(ElementId a, ElementId a2, std::set<std::pair<ElementId, ElementId>>& edges) {
    ElementId q = vertex(succ_rep, a, a2, 0);
    ElementId s0 = vertex(succ_square, a, a2, 0);
    ElementId s1 = vertex(succ_square, a, a2, 1);
    ElementId s2 = vertex(succ_square, a, a2, 2);
    ElementId s3 = vertex(succ_square, a, a2, 3);
    edges.insert({q, s0});
    edges.insert({s0, s1});
    edges.insert({s1, s2});
    edges.insert({s2, s3});
    edges.insert({s0, s3});
    ElementId c = vertex(chain2, a, a2, 0);
    edges.insert({node_rep_vertex(a), c});
    edges.insert({c, q});
    ElementId d0 = vertex(chain3, a, a2, 0);
    ElementId d1 = vertex(chain3, a, a2, 1);
    edges.insert({node_rep_vertex(a2), d0});
    edges.insert({d0, d1});
    edges.insert({d1, q});
}

} // namespace gadget

/**
 * The coding as a monotone diagram operator over the tree signature
 * {S, root}: any fact mentioning a contributes a's node gadget, a positive
 * S(a,a') fact contributes the successor gadget, and a positive root(a)
 * fact contributes the self-successor gadget. Negative facts contribute
 * nothing beyond the node gadgets of their mentioned elements.
 */
inline DiagramOperator tree_graph_operator() {
    DiagramOperator op;
    op.name = "tree-graph";
    op.source_signature = tree_signature();
    op.target_signature = graph_signature();
    op.apply = [](const AtomicDiagram& fragment) {
        if (!fragment.consistent())
            throw InvalidInput("inconsistent input fragment");
        std::set<std::pair<ElementId, ElementId>> edges;
        for (ElementId a : fragment.mentioned()) gadget::emit_node(a, edges);
        for (const auto& f : fragment.facts) {
            if (!f.positive) continue;
            if (f.symbol == "S") gadget::emit_succ(f.tuple[0], f.tuple[1], edges);
            else if (f.symbol == "root") gadget::emit_succ(f.tuple[0], f.tuple[0], edges);
        }
        AtomicDiagram out;
        for (auto [u, v] : edges) {
            out.facts.insert(DiagramFact{"E", {u, v}, true});
            out.facts.insert(DiagramFact{"E", {v, u}, true});
        }
        return out;
    };
    return op;
}

/// Image graph of a tree: 12 vertices per node, all gadget elements distinct.
inline FiniteStructure encode_tree(const FiniteTree& t) {
    return apply_operator(tree_graph_operator(), tree_to_structure(t));
}

/// Representative vertex of a tree node inside encode_tree(t).
inline ElementId encoded_node_vertex(const FiniteTree& t, const TreeNode& node) {
    auto it = t.nodes().find(node);
    if (it == t.nodes().end()) throw InvalidInput("node is not in the tree");
    ElementId a = static_cast<ElementId>(std::distance(t.nodes().begin(), it));
    return gadget::node_rep_vertex(a);
}

namespace embed_graph_detail {

struct Neighbors {
    std::map<ElementId, std::set<ElementId>> adj;

    explicit Neighbors(const FiniteStructure& g) {
        for (ElementId v : g.universe) adj[v];
        for (const auto& e : g.relations[0]) adj[e[0]].insert(e[1]);
    }
    int deg(ElementId v) const { return static_cast<int>(adj.at(v).size()); }
};

} // namespace embed_graph_detail

/**
 * Decoder by finite pattern matching: a vertex is a node representative when
 * it hangs off a private triangle, and a' is a successor of a when some
 * square-marked q has a 2-chain to r(a) and a 3-chain to r(a'). The root is
 * the unique self-successor. Every vertex must be consumed by exactly one
 * gadget role; anything else is not a valid image.
 */
inline FiniteTree decode_graph(const FiniteStructure& g) {
    using embed_graph_detail::Neighbors;
    if (g.signature != graph_signature()) throw InvalidInput("expected a graph");
    if (g.universe.empty()) return FiniteTree{};
    Neighbors nb(g);
    for (const auto& e : g.relations[0])
        if (!g.holds(0, {e[1], e[0]}) || e[0] == e[1])
            throw DecodeError("image must be a simple undirected graph");

    std::map<ElementId, std::string> role;
    auto claim = [&](ElementId v, const std::string& what) {
        if (!role.emplace(v, what).second)
            throw DecodeError("vertex in two gadget roles");
    };

    // triangles: 3-cliques whose degrees are (3,2,2); the degree-3 corner
    // attaches to the node representative
    std::vector<ElementId> reps;
    for (ElementId u : g.universe) {
        for (ElementId v : nb.adj[u]) {
            if (v <= u) continue;
            for (ElementId w : nb.adj[u]) {
                if (w <= v || !nb.adj[v].count(w)) continue;
                // triangle u < v < w
                std::vector<ElementId> tri{u, v, w};
                std::vector<ElementId> outside;
                for (ElementId x : tri)
                    for (ElementId y : nb.adj[x])
                        if (y != u && y != v && y != w) outside.push_back(y);
                if (outside.size() != 1)
                    throw DecodeError("triangle with unexpected attachments");
                for (ElementId x : tri) claim(x, "triangle");
                reps.push_back(outside.front());
            }
        }
    }
    for (ElementId r : reps) claim(r, "rep");
    std::set<ElementId> rep_set(reps.begin(), reps.end());
    if (rep_set.size() != reps.size()) throw DecodeError("representative shared by two triangles");

    // squares: chordless 4-cycles with degrees (3,2,2,2); the degree-3
    // corner attaches to q
    std::vector<ElementId> qs;
    for (ElementId a : g.universe) {
        if (role.count(a)) continue;
        for (ElementId b : nb.adj[a]) {
            if (b <= a || role.count(b)) continue;
            for (ElementId c : nb.adj[b]) {
                if (c <= a || c == a || role.count(c) || nb.adj[a].count(c)) continue;
                for (ElementId d : nb.adj[c]) {
                    if (d <= b || d == a || d == b || role.count(d)) continue;
                    if (!nb.adj[a].count(d) || nb.adj[b].count(d)) continue;
                    // chordless 4-cycle a-b-c-d
                    std::vector<ElementId> sq{a, b, c, d};
                    std::vector<ElementId> outside;
                    for (ElementId x : sq)
                        for (ElementId y : nb.adj[x])
                            if (std::find(sq.begin(), sq.end(), y) == sq.end()) outside.push_back(y);
                    if (outside.size() != 1)
                        throw DecodeError("square with unexpected attachments");
                    for (ElementId x : sq) claim(x, "square");
                    qs.push_back(outside.front());
                }
            }
        }
    }
    for (ElementId q : qs) claim(q, "succ-rep");

    // from each q, one chain of 2 edges reaches r(a), one of 3 edges r(a')
    std::vector<std::pair<ElementId, ElementId>> succ;   // (parent, child)
    for (ElementId q : qs) {
        std::vector<ElementId> ends;
        ElementId parent = -1, child = -1;
        for (ElementId x : nb.adj[q]) {
            if (role.count(x) && role[x] == "square") continue;
            // walk away from q through degree-2 interior vertices
            if (nb.deg(x) != 2) throw DecodeError("chain interior has wrong degree");
            ElementId prev = q, cur = x;
            int steps = 1;
            while (!rep_set.count(cur)) {
                claim(cur, "chain");
                ElementId nxt = -1;
                for (ElementId y : nb.adj[cur])
                    if (y != prev) nxt = y;
                if (nxt < 0) throw DecodeError("chain ends before a representative");
                prev = cur;
                cur = nxt;
                ++steps;
                if (steps > 3) throw DecodeError("chain too long");
            }
            if (steps == 2) {
                if (parent >= 0) throw DecodeError("two 2-chains at one successor gadget");
                parent = cur;
            } else if (steps == 3) {
                if (child >= 0) throw DecodeError("two 3-chains at one successor gadget");
                child = cur;
            } else {
                throw DecodeError("chain of unexpected length");
            }
        }
        if (parent < 0 || child < 0) throw DecodeError("successor gadget missing a chain");
        succ.push_back({parent, child});
    }

    for (ElementId v : g.universe)
        if (!role.count(v)) throw DecodeError("vertex belongs to no gadget");

    // root: the unique self-successor
    ElementId root = -1;
    std::map<ElementId, ElementId> parent_of;
    for (auto [p, c] : succ) {
        if (p == c) {
            if (root >= 0) throw DecodeError("two self-successors");
            root = p;
        } else {
            if (parent_of.count(c)) throw DecodeError("node with two parents");
            parent_of[c] = p;
        }
    }
    if (root < 0) throw DecodeError("no self-successor found");
    if (parent_of.count(root)) throw DecodeError("root has a parent");
    if (parent_of.size() + 1 != reps.size()) throw DecodeError("orphan node representative");

    // rebuild: children ordered by ascending representative id
    std::map<ElementId, std::vector<ElementId>> kids;
    for (auto [c, p] : parent_of) kids[p].push_back(c);
    std::set<TreeNode> nodes;
    std::vector<std::pair<ElementId, TreeNode>> stack{{root, {}}};
    std::size_t visited = 0;
    while (!stack.empty()) {
        auto [v, seq] = stack.back();
        stack.pop_back();
        ++visited;
        nodes.insert(seq);
        auto it = kids.find(v);
        if (it == kids.end()) continue;
        std::sort(it->second.begin(), it->second.end());
        for (std::size_t i = 0; i < it->second.size(); ++i) {
            TreeNode child = seq;
            child.push_back(static_cast<int>(i));
            stack.push_back({it->second[i], child});
        }
    }
    if (visited != reps.size()) throw DecodeError("successor relation is not a tree");
    return FiniteTree(std::move(nodes));
}

/// DOT export with one color per gadget kind, via the vertex id scheme.
inline std::string encoded_tree_to_dot(const FiniteStructure& g) {
    auto color = [](ElementId v) -> std::string {
        bool pair_kind = (v % 32) >= 16;
        int slot = static_cast<int>(v % 16);
        if (!pair_kind) return slot == 0 ? "gold" : "tomato";
        if (slot == 0) return "skyblue";
        if (slot <= 4) return "seagreen";
        return "gray";
    };
    return structure_to_dot(g, color);
}

} // namespace scottkit

#endif // SCOTTKIT_EMBED_GRAPH_HPP
