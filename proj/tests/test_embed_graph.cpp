#include <catch2/catch.hpp>

#include <random>

#include "scottkit/embed_graph.hpp"
#include "scottkit/enumerate.hpp"
#include "scottkit/isomorphism.hpp"

using namespace scottkit;

namespace {

FiniteTree tree_of(std::initializer_list<TreeNode> nodes) {
    FiniteTree t;
    for (const auto& n : nodes) t.insert(n);
    return t;
}

FiniteTree normalize(const FiniteTree& t) {
    return structure_to_tree(tree_to_structure(t));
}

// Independent oracle for the image edge count: walk the gadget inventory
// instead of the emitted structure. Per node: 3 triangle edges + 1 pendant.
// Per successor pair (one per node, the root pairing with itself): 4 square
// edges + 1 pendant + 2-edge chain + 3-edge chain.
std::size_t edge_count_oracle(const FiniteTree& t) {
    std::size_t nodes = t.size();
    std::size_t pairs = nodes;
    return nodes * (3 + 1) + pairs * (4 + 1 + 2 + 3);
}

std::size_t undirected_edge_count(const FiniteStructure& g) {
    return g.relations[0].size() / 2;
}

} // namespace

TEST_CASE("empty tree encodes to the empty graph", "[embed-graph]") {
    auto g = encode_tree(FiniteTree{});
    CHECK(g.universe.empty());
}

TEST_CASE("one-node tree encodes to a 12-vertex graph", "[embed-graph]") {
    auto g = encode_tree(tree_of({{}}));
    CHECK(g.universe.size() == 12);
    CHECK(undirected_edge_count(g) == edge_count_oracle(tree_of({{}})));
}

TEST_CASE("two-node chain encodes to 24 vertices", "[embed-graph]") {
    auto t = tree_of({{}, {0}});
    auto g = encode_tree(t);
    CHECK(g.universe.size() == 24);
}

TEST_CASE("vertex count is exactly 12 per node, edges match the gadget oracle", "[embed-graph]") {
    for (const auto& t : all_rooted_trees(5)) {
        auto g = encode_tree(t);
        CHECK(g.universe.size() == 12 * t.size());
        CHECK(undirected_edge_count(g) == edge_count_oracle(t));
    }
}

TEST_CASE("decode round trip is the identity on canonical trees", "[embed-graph]") {
    for (const auto& t : all_rooted_trees(5))
        CHECK(decode_graph(encode_tree(t)) == t);
}

TEST_CASE("decode normalizes sparse child indices", "[embed-graph]") {
    auto t = tree_of({{}, {4}, {4, 7}});
    CHECK(decode_graph(encode_tree(t)) == normalize(t));
}

TEST_CASE("decode survives relabeling of the image", "[embed-graph]") {
    std::mt19937 rng(5150);
    for (const auto& t : all_rooted_trees(4)) {
        auto g = encode_tree(t);
        std::vector<ElementId> shuffled = g.universe;
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        std::map<ElementId, ElementId> m;
        for (std::size_t i = 0; i < shuffled.size(); ++i) m[g.universe[i]] = shuffled[i];
        FiniteStructure h(g.signature, g.universe);
        for (const auto& e : g.relations[0]) h.relations[0].insert({m[e[0]], m[e[1]]});
        auto back = decode_graph(h);
        CHECK(isomorphic(tree_to_structure(back), tree_to_structure(t)).has_value());
    }
}

TEST_CASE("a raw triangle is not a valid image", "[embed-graph]") {
    auto tri = make_graph(3, {{0, 1}, {1, 2}, {0, 2}});
    CHECK_THROWS_AS(decode_graph(tri), DecodeError);
}

TEST_CASE("a gadget-free graph is not a valid image", "[embed-graph]") {
    auto p = make_graph(4, {{0, 1}, {1, 2}, {2, 3}});
    CHECK_THROWS_AS(decode_graph(p), DecodeError);
}

TEST_CASE("iso-preservation across all rooted trees with up to 5 nodes", "[embed-graph]") {
    auto trees = all_rooted_trees(5);
    CHECK(trees.size() == 17);   // exhaustive generation, deduplicated by type
    std::vector<FiniteStructure> images;
    for (const auto& t : trees) images.push_back(encode_tree(t));
    for (std::size_t i = 0; i < trees.size(); ++i)
        for (std::size_t j = i; j < trees.size(); ++j) {
            bool src = isomorphic(tree_to_structure(trees[i]), tree_to_structure(trees[j])).has_value();
            bool img = isomorphic(images[i], images[j]).has_value();
            CHECK(src == img);
        }
}

TEST_CASE("orbit correspondence on node representatives, trees up to 4 nodes", "[embed-graph]") {
    for (const auto& t : all_rooted_trees(4)) {
        auto a = tree_to_structure(t);
        auto g = encode_tree(t);
        std::vector<TreeNode> nodes(t.nodes().begin(), t.nodes().end());
        for (std::size_t i = 0; i < nodes.size(); ++i)
            for (std::size_t j = 0; j < nodes.size(); ++j) {
                bool src = same_orbit(a, {static_cast<ElementId>(i)}, {static_cast<ElementId>(j)});
                bool img = same_orbit(g, {encoded_node_vertex(t, nodes[i])},
                                      {encoded_node_vertex(t, nodes[j])});
                CHECK(src == img);
            }
    }
}

TEST_CASE("operator: a lone root fact yields the 12-vertex partial diagram", "[embed-graph]") {
    auto op = tree_graph_operator();
    AtomicDiagram frag;
    frag.facts.insert(DiagramFact{"root", {0}, true});
    auto image = op.apply(frag);
    CHECK(image.mentioned().size() == 12);
}

TEST_CASE("operator: empty fragment maps to the empty fragment", "[embed-graph]") {
    auto op = tree_graph_operator();
    CHECK(op.apply(AtomicDiagram{}).facts.empty());
}

TEST_CASE("operator output through apply_operator equals encode_tree", "[embed-graph]") {
    for (const auto& t : all_rooted_trees(4))
        CHECK(apply_operator(tree_graph_operator(), tree_to_structure(t)) == encode_tree(t));
}

TEST_CASE("operator is monotone on random fragment chains", "[embed-graph]") {
    std::mt19937 rng(1123);
    auto op = tree_graph_operator();
    auto trees = all_rooted_trees(4);
    std::uniform_int_distribution<std::size_t> pick(0, trees.size() - 1);
    for (int trial = 0; trial < 60; ++trial) {
        auto full = complete_diagram(tree_to_structure(trees[pick(rng)]));
        std::vector<DiagramFact> facts(full.facts.begin(), full.facts.end());
        std::shuffle(facts.begin(), facts.end(), rng);
        AtomicDiagram small, big;
        std::uniform_int_distribution<std::size_t> cut(0, facts.size());
        std::size_t c1 = cut(rng), c2 = cut(rng);
        if (c1 > c2) std::swap(c1, c2);
        for (std::size_t i = 0; i < c1; ++i) small.facts.insert(facts[i]);
        for (std::size_t i = 0; i < c2; ++i) big.facts.insert(facts[i]);
        CHECK(op.apply(small).subset_of(op.apply(big)));
    }
}

TEST_CASE("subtree fragments map into the whole tree's image", "[embed-graph]") {
    auto whole = tree_of({{}, {0}, {1}, {0, 0}});
    auto sub = tree_of({{}, {0}, {0, 0}});
    auto op = tree_graph_operator();
    auto whole_img = op.apply(complete_diagram(tree_to_structure(whole)));
    // the subtree's facts, phrased over the whole tree's element ids
    AtomicDiagram frag;
    frag.facts.insert(DiagramFact{"root", {0}, true});
    frag.facts.insert(DiagramFact{"S", {0, 1}, true});   // [] -> [0]
    frag.facts.insert(DiagramFact{"S", {1, 2}, true});   // [0] -> [0,0]
    CHECK(op.apply(frag).subset_of(whole_img));
    (void)sub;
}

TEST_CASE("inconsistent fragments are rejected", "[embed-graph]") {
    auto op = tree_graph_operator();
    AtomicDiagram bad;
    bad.facts.insert(DiagramFact{"S", {0, 1}, true});
    bad.facts.insert(DiagramFact{"S", {0, 1}, false});
    CHECK_THROWS_AS(op.apply(bad), InvalidInput);
}

TEST_CASE("DOT export colors gadget kinds", "[embed-graph]") {
    auto g = encode_tree(tree_of({{}}));
    auto dot = encoded_tree_to_dot(g);
    CHECK(dot.find("gold") != std::string::npos);
    CHECK(dot.find("seagreen") != std::string::npos);
}
