#include <catch2/catch.hpp>

#include <map>
#include <queue>

#include "scottkit/enumerate.hpp"
#include "scottkit/isomorphism.hpp"
#include "scottkit/trees.hpp"

using namespace scottkit;

namespace {

FiniteTree tree_of(std::initializer_list<TreeNode> nodes) {
    FiniteTree t;
    for (const auto& n : nodes) t.insert(n);
    return t;
}

// Oracle: iterative bottom-up rank evaluation, level by level, no recursion.
std::map<TreeNode, int> ranks_bottom_up(const FiniteTree& t) {
    std::map<TreeNode, int> rk;
    for (std::size_t lvl = t.depth() + 1; lvl-- > 0;) {
        for (const auto& node : t.level(lvl)) {
            int best = -1;
            for (const auto& c : t.children(node)) best = std::max(best, rk.at(c));
            rk[node] = best + 1;
        }
    }
    return rk;
}

// Independent generator: breadth-first, ranks descending, indices interleaved
// across copies. Realizes the same spec; only node numbering differs.
FiniteTree generate_rank_homogeneous_naive(const FiniteLevelSpec& spec, int k) {
    struct Item { TreeNode node; int rank; };
    std::set<TreeNode> nodes;
    std::queue<Item> q;
    q.push({TreeNode{}, *spec[0].begin()});
    while (!q.empty()) {
        auto [node, rank] = q.front();
        q.pop();
        nodes.insert(node);
        if (rank == 0) continue;
        std::vector<int> admissible(spec[node.size() + 1].begin(), spec[node.size() + 1].end());
        std::reverse(admissible.begin(), admissible.end());
        int idx = 0;
        for (int copy = 0; copy < k; ++copy)
            for (int beta : admissible) {
                if (beta >= rank) continue;
                TreeNode child = node;
                child.push_back(idx++);
                q.push({child, beta});
            }
    }
    return FiniteTree(std::move(nodes));
}

bool trees_isomorphic(const FiniteTree& a, const FiniteTree& b) {
    return isomorphic(tree_to_structure(a), tree_to_structure(b)).has_value();
}

} // namespace

TEST_CASE("leaves have rank 0", "[trees]") {
    auto t = tree_of({{}, {0}});
    CHECK(tree_rank(t, {0}) == 0);
}

TEST_CASE("rank of a 3-chain root is 2", "[trees]") {
    auto t = tree_of({{}, {0}, {0, 0}});
    CHECK(tree_rank(t, {}) == 2);
}

TEST_CASE("rank is the least strict upper bound of child ranks", "[trees]") {
    // root with a leaf child (rank 0) and a 3-chain child (rank 2)
    auto t = tree_of({{}, {0}, {1}, {1, 0}, {1, 0, 0}});
    CHECK(tree_rank(t, {1}) == 2);
    CHECK(tree_rank(t, {}) == 3);
}

TEST_CASE("absent node is an error", "[trees]") {
    auto t = tree_of({{}});
    CHECK_THROWS_AS(tree_rank(t, {7}), InvalidInput);
}

TEST_CASE("tree_rank agrees with the bottom-up oracle on all trees up to 7 nodes", "[trees]") {
    auto trees = all_rooted_trees(7);
    CHECK(trees.size() == 1 + 1 + 2 + 4 + 9 + 20 + 48);
    for (const auto& t : trees) {
        auto oracle = ranks_bottom_up(t);
        for (const auto& node : t.nodes())
            CHECK(tree_rank(t, node) == oracle.at(node));
    }
}

TEST_CASE("rank spectra", "[trees]") {
    auto one = tree_of({{}});
    CHECK(rank_spectrum(one, 0) == std::map<int, int>{{0, 1}});

    auto full2 = tree_of({{}, {0}, {1}, {0, 0}, {0, 1}, {1, 0}, {1, 1}});
    CHECK(rank_spectrum(full2, 1) == std::map<int, int>{{1, 2}});

    // mixed depth: one leaf child, one 2-chain child
    auto mixed = tree_of({{}, {0}, {1}, {1, 0}});
    CHECK(rank_spectrum(mixed, 0) == std::map<int, int>{{2, 1}});
    CHECK(rank_spectrum(mixed, 1) == std::map<int, int>{{0, 1}, {1, 1}});
    CHECK(rank_spectrum(mixed, 2) == std::map<int, int>{{0, 1}});
}

TEST_CASE("every finite-tree-derived spec is thin", "[trees]") {
    for (const auto& t : all_rooted_trees(6))
        CHECK(is_thin(LevelSpec::from_tree(t)));
}

TEST_CASE("a level meeting blocks cofinally is not thin", "[trees]") {
    LevelSpec s;
    s.levels.resize(2);
    s.levels[0].elements.insert(SmallOrdinal{0, 0});
    s.levels[1].cofinal_blocks = true;                 // all of {w*k : k} ...
    s.levels[1].elements.insert(SmallOrdinal{0, 0});
    s.levels[1].elements.insert(SmallOrdinal{0, 1});   // ... plus 2 finite ranks
    CHECK_FALSE(is_thin(s));
}

TEST_CASE("two full blocks at level 2 give type w*2, which is thin there", "[trees]") {
    LevelSpec s;
    s.levels.resize(3);
    s.levels[0].elements.insert(SmallOrdinal{0, 0});
    s.levels[1].full_blocks.insert(0);
    s.levels[2].full_blocks.insert(0);   // all finite ranks
    s.levels[2].full_blocks.insert(1);   // all w+k
    CHECK(is_thin(s));
    // the same set one level earlier is too wide
    LevelSpec bad;
    bad.levels.resize(2);
    bad.levels[0].elements.insert(SmallOrdinal{0, 0});
    bad.levels[1].full_blocks.insert(0);
    bad.levels[1].full_blocks.insert(1);
    CHECK_FALSE(is_thin(bad));
}

TEST_CASE("rank homogeneity: vacuous and exact cases", "[trees]") {
    CHECK(is_rank_homogeneous_k(tree_of({{}}), 5, 3));

    auto star3 = tree_of({{}, {0}, {1}, {2}});
    CHECK(is_rank_homogeneous_k(star3, 3, 2));
    CHECK_FALSE(is_rank_homogeneous_k(star3, 4, 2));

    // root with one leaf and one 2-chain: rank-0 multiplicity under the root is 1
    auto mixed = tree_of({{}, {0}, {1}, {1, 0}});
    CHECK(is_rank_homogeneous_k(mixed, 1, 3));
    CHECK_FALSE(is_rank_homogeneous_k(mixed, 2, 3));
}

TEST_CASE("homogeneity is monotone downward in k", "[trees]") {
    for (const auto& t : all_rooted_trees(6))
        for (int k = 1; k <= 3; ++k)
            if (is_rank_homogeneous_k(t, k + 1, 4))
                CHECK(is_rank_homogeneous_k(t, k, 4));
}

TEST_CASE("generator: root with 3 leaves", "[trees]") {
    FiniteLevelSpec spec{{1}, {0}};
    auto t = generate_rank_homogeneous(spec, 3, 1);
    CHECK(t.size() == 4);
    CHECK(t.children({}).size() == 3);
}

TEST_CASE("generator: ranks {2},{0,1},{0} with k=2", "[trees]") {
    FiniteLevelSpec spec{{2}, {0, 1}, {0}};
    auto t = generate_rank_homogeneous(spec, 2, 2);
    auto kids = t.children({});
    REQUIRE(kids.size() == 4);
    int leaves = 0, inner = 0;
    for (const auto& c : kids)
        (tree_rank(t, c) == 0 ? leaves : inner)++;
    CHECK(leaves == 2);
    CHECK(inner == 2);
    for (const auto& c : kids)
        if (tree_rank(t, c) == 1) CHECK(t.children(c).size() == 2);
}

TEST_CASE("generator is deterministic", "[trees]") {
    FiniteLevelSpec spec{{2}, {0, 1}, {0}};
    CHECK(generate_rank_homogeneous(spec, 2, 2) == generate_rank_homogeneous(spec, 2, 2));
}

TEST_CASE("generator soundness: output passes homogeneity and reproduces the spec", "[trees]") {
    std::vector<FiniteLevelSpec> specs = {
        {{1}, {0}},
        {{2}, {0, 1}, {0}},
        {{3}, {0, 1, 2}, {0, 1}, {0}},
        {{2}, {1}, {0}},
        {{3}, {2}, {0, 1}, {0}},
    };
    for (const auto& spec : specs)
        for (int k = 1; k <= 3; ++k) {
            auto t = generate_rank_homogeneous(spec, k, spec.size() - 1);
            CHECK(is_rank_homogeneous_k(t, k, spec.size() - 1));
            for (std::size_t n = 0; n < spec.size(); ++n) {
                std::set<int> got;
                for (const auto& [r, cnt] : rank_spectrum(t, n)) got.insert(r);
                CHECK(got == spec[n]);
            }
        }
}

TEST_CASE("finite homogeneity fact: independent generators build isomorphic trees", "[trees]") {
    std::vector<FiniteLevelSpec> specs = {
        {{1}, {0}},
        {{2}, {0, 1}, {0}},
        {{2}, {1}, {0}},
        {{3}, {0, 1, 2}, {0, 1}, {0}},
        {{3}, {1, 2}, {0, 1}, {0}},
    };
    for (const auto& spec : specs)
        for (int k = 1; k <= 3; ++k) {
            auto a = generate_rank_homogeneous(spec, k, spec.size() - 1);
            auto b = generate_rank_homogeneous_naive(spec, k);
            CHECK(trees_isomorphic(a, b));
        }
}

TEST_CASE("unrealizable specs are rejected", "[trees]") {
    CHECK_THROWS_AS(generate_rank_homogeneous({{2}, {0}}, 2, 1), InvalidInput);            // needs rank 1 below
    CHECK_THROWS_AS(generate_rank_homogeneous({{1}, {0, 1}}, 2, 1), InvalidInput);         // rank 1 unreachable
    CHECK_THROWS_AS(generate_rank_homogeneous({{1, 2}, {0, 1}, {0}}, 2, 2), InvalidInput); // two root ranks
    CHECK_THROWS_AS(generate_rank_homogeneous({{1}, {0}}, 0, 1), InvalidInput);            // k must be positive
}

TEST_CASE("tree/structure conversion round trips", "[trees]") {
    for (const auto& t : all_rooted_trees(5)) {
        auto a = tree_to_structure(t);
        a.validate();
        CHECK(structure_to_tree(a) == t);
    }
}

TEST_CASE("tree JSON round trips", "[trees]") {
    for (const auto& t : all_rooted_trees(5))
        CHECK(tree_from_json(tree_to_json(t)) == t);
}

TEST_CASE("prefix closure is enforced", "[trees]") {
    std::set<TreeNode> bad{{}, {0, 0}};
    CHECK_THROWS_AS(FiniteTree(std::move(bad)), InvalidInput);
}
