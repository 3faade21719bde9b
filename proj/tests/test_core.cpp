#include <catch2/catch.hpp>

#include <algorithm>
#include <random>

#include "scottkit/isomorphism.hpp"
#include "scottkit/json_io.hpp"
#include "scottkit/structure.hpp"

using namespace scottkit;

namespace {

// Brute-force oracle: does some bijection preserve all relations both ways?
// Checks every permutation directly, no pruning.
std::vector<std::vector<int>> brute_isomorphisms(const FiniteStructure& A, const FiniteStructure& B) {
    std::vector<std::vector<int>> out;
    if (A.size() != B.size()) return out;
    std::vector<int> perm(A.size());
    std::iota(perm.begin(), perm.end(), 0);
    do {
        bool ok = true;
        for (std::size_t s = 0; s < A.relations.size() && ok; ++s) {
            if (A.relations[s].size() != B.relations[s].size()) { ok = false; break; }
            for (const auto& t : A.relations[s]) {
                Tuple img(t.size());
                for (std::size_t p = 0; p < t.size(); ++p)
                    img[p] = B.universe[perm[A.index_of(t[p])]];
                if (!B.relations[s].count(img)) { ok = false; break; }
            }
        }
        if (ok) out.push_back(perm);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
}

FiniteStructure random_binary_structure(std::mt19937& rng, int max_n) {
    std::uniform_int_distribution<int> nd(1, max_n);
    int n = nd(rng);
    std::vector<ElementId> univ(n);
    std::iota(univ.begin(), univ.end(), 0);
    FiniteStructure a(Signature{{RelSym{"R", 2, false}}}, univ);
    std::bernoulli_distribution edge(0.4);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (edge(rng)) a.relations[0].insert({i, j});
    return a;
}

FiniteStructure relabel(const FiniteStructure& a, const std::vector<int>& perm,
                        ElementId offset) {
    std::vector<ElementId> univ(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) univ[i] = offset + static_cast<ElementId>(i);
    FiniteStructure b(a.signature, univ);
    for (std::size_t s = 0; s < a.relations.size(); ++s)
        for (const auto& t : a.relations[s]) {
            Tuple img(t.size());
            for (std::size_t p = 0; p < t.size(); ++p)
                img[p] = offset + perm[a.index_of(t[p])];
            b.relations[s].insert(img);
        }
    return b;
}

bool map_preserves(const FiniteStructure& A, const FiniteStructure& B,
                   const std::map<ElementId, ElementId>& w) {
    for (std::size_t s = 0; s < A.relations.size(); ++s) {
        if (A.relations[s].size() != B.relations[s].size()) return false;
        for (const auto& t : A.relations[s]) {
            Tuple img(t.size());
            for (std::size_t p = 0; p < t.size(); ++p) img[p] = w.at(t[p]);
            if (!B.relations[s].count(img)) return false;
        }
    }
    return true;
}

FiniteStructure path_graph(int n) {
    std::vector<std::pair<ElementId, ElementId>> e;
    for (int i = 0; i + 1 < n; ++i) e.push_back({i, i + 1});
    return make_graph(n, e);
}

FiniteStructure star_graph(int leaves) {
    std::vector<std::pair<ElementId, ElementId>> e;
    for (int i = 1; i <= leaves; ++i) e.push_back({0, i});
    return make_graph(leaves + 1, e);
}

FiniteStructure cycle_graph(int n) {
    std::vector<std::pair<ElementId, ElementId>> e;
    for (int i = 0; i < n; ++i) e.push_back({i, (i + 1) % n});
    return make_graph(n, e);
}

int graph_distance(const FiniteStructure& g, ElementId u, ElementId v) {
    if (u == v) return 0;
    std::vector<ElementId> frontier{u};
    std::set<ElementId> seen{u};
    int d = 0;
    while (!frontier.empty()) {
        ++d;
        std::vector<ElementId> next;
        for (ElementId x : frontier)
            for (ElementId y : g.universe)
                if (graph_has_edge(g, x, y) && seen.insert(y).second) {
                    if (y == v) return d;
                    next.push_back(y);
                }
        frontier = next;
    }
    return -1;
}

} // namespace

TEST_CASE("single-vertex graphs are isomorphic via the unique witness", "[core]") {
    auto a = make_graph(1, {});
    auto w = isomorphic(a, a);
    REQUIRE(w.has_value());
    CHECK(w->at(0) == 0);
}

TEST_CASE("P3 and the 2-leaf star are the same graph", "[core]") {
    auto p3 = path_graph(3);
    auto k12 = star_graph(2);
    auto w = isomorphic(p3, k12);
    REQUIRE(w.has_value());
    CHECK(map_preserves(p3, k12, *w));
}

TEST_CASE("P4 vs K1,3: no bijection works", "[core]") {
    auto p4 = path_graph(4);
    auto k13 = star_graph(3);
    // oracle first: all 24 bijections, none preserves
    CHECK(brute_isomorphisms(p4, k13).empty());
    CHECK_FALSE(isomorphic(p4, k13).has_value());
}

TEST_CASE("isomorphic is deterministic", "[core]") {
    auto p3 = path_graph(3);
    auto k12 = star_graph(2);
    auto w1 = isomorphic(p3, k12);
    auto w2 = isomorphic(p3, k12);
    REQUIRE(w1.has_value());
    CHECK(*w1 == *w2);
}

TEST_CASE("automorphisms of the edgeless 3-set are all 6 permutations", "[core]") {
    auto a = make_graph(3, {});
    CHECK(automorphisms(a).size() == 6);
}

TEST_CASE("a directed 3-chain is rigid", "[core]") {
    std::vector<ElementId> univ{0, 1, 2};
    FiniteStructure a(Signature{{RelSym{"S", 2, false}}}, univ);
    a.relations[0].insert({0, 1});
    a.relations[0].insert({1, 2});
    auto auts = automorphisms(a);
    REQUIRE(auts.size() == 1);
    CHECK(auts[0] == std::vector<int>{0, 1, 2});
}

TEST_CASE("the 4-cycle has 8 automorphisms", "[core]") {
    auto c4 = cycle_graph(4);
    auto expected = brute_isomorphisms(c4, c4);   // oracle: filter all 24 permutations
    CHECK(expected.size() == 8);
    auto auts = automorphisms(c4);
    CHECK(auts.size() == 8);
    CHECK(auts == expected);   // both listings sorted lexicographically
}

TEST_CASE("orbits: edgeless 2-set has one 1-orbit", "[core]") {
    auto a = make_graph(2, {});
    auto o = orbits(a, 1);
    REQUIRE(o.size() == 1);
    CHECK(o[0].size() == 2);
}

TEST_CASE("orbits: 2-chain order is rigid, two 1-orbits", "[core]") {
    auto a = make_chain_order(2);
    auto o = orbits(a, 1);
    CHECK(o.size() == 2);
}

TEST_CASE("orbits of 4-cycle pairs are classified by distance", "[core]") {
    auto c4 = cycle_graph(4);
    auto o = orbits(c4, 2);
    REQUIRE(o.size() == 3);
    for (const auto& cell : o) {
        int d = graph_distance(c4, cell.front()[0], cell.front()[1]);
        for (const auto& t : cell)
            CHECK(graph_distance(c4, t[0], t[1]) == d);
    }
}

TEST_CASE("orbit partition matches brute force over all permutations, |A| <= 6", "[core]") {
    std::mt19937 rng(20240811);
    for (int trial = 0; trial < 25; ++trial) {
        auto a = random_binary_structure(rng, 5);
        auto auts = brute_isomorphisms(a, a);
        for (int k = 1; k <= 2; ++k) {
            auto part = orbits(a, k);
            // brute-force same-orbit relation
            auto cell_of = [&](const Tuple& t) {
                for (std::size_t c = 0; c < part.size(); ++c)
                    if (std::binary_search(part[c].begin(), part[c].end(), t)) return c;
                return part.size();
            };
            auto tuples = all_tuples(a, k);
            for (const auto& s : tuples)
                for (const auto& t : tuples) {
                    bool brute = false;
                    for (const auto& g : auts) {
                        Tuple img(s.size());
                        for (std::size_t p = 0; p < s.size(); ++p)
                            img[p] = a.universe[g[a.index_of(s[p])]];
                        if (img == t) { brute = true; break; }
                    }
                    CHECK(brute == (cell_of(s) == cell_of(t)));
                }
        }
    }
}

TEST_CASE("isomorphism is an equivalence with invertible, composable witnesses", "[core]") {
    std::mt19937 rng(77001);
    for (int trial = 0; trial < 40; ++trial) {
        auto a = random_binary_structure(rng, 5);
        // reflexive
        auto wa = isomorphic(a, a);
        REQUIRE(wa.has_value());
        CHECK(map_preserves(a, a, *wa));

        std::vector<int> perm(a.size());
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng);
        auto b = relabel(a, perm, 100);
        std::shuffle(perm.begin(), perm.end(), rng);
        auto c = relabel(a, perm, 200);

        auto wab = isomorphic(a, b);
        auto wbc = isomorphic(b, c);
        REQUIRE(wab.has_value());
        REQUIRE(wbc.has_value());

        // symmetric: the inverse witness preserves
        std::map<ElementId, ElementId> inv;
        for (auto [x, y] : *wab) inv[y] = x;
        CHECK(map_preserves(b, a, inv));

        // transitive: composition preserves
        std::map<ElementId, ElementId> comp;
        for (auto [x, y] : *wab) comp[x] = wbc->at(y);
        CHECK(map_preserves(a, c, comp));
    }
}

TEST_CASE("pointed isomorphism respects the forced tuple", "[core]") {
    auto a = make_chain_order(2);
    CHECK(same_orbit(a, {0}, {0}));
    CHECK_FALSE(same_orbit(a, {0}, {1}));
    auto c4 = cycle_graph(4);
    CHECK(same_orbit(c4, {0, 1}, {1, 2}));
    CHECK_FALSE(same_orbit(c4, {0, 1}, {0, 2}));
}

TEST_CASE("same_orbit agrees with the orbit partition", "[core]") {
    std::mt19937 rng(31337);
    for (int trial = 0; trial < 15; ++trial) {
        auto a = random_binary_structure(rng, 4);
        auto part = orbits(a, 2);
        for (const auto& cell : part) {
            CHECK(same_orbit(a, cell.front(), cell.back()));
            for (const auto& other : part)
                if (&other != &cell)
                    CHECK_FALSE(same_orbit(a, cell.front(), other.front()));
        }
    }
}

TEST_CASE("signature mismatch is rejected", "[core]") {
    auto g = make_graph(2, {});
    auto o = make_chain_order(2);
    CHECK_THROWS_AS(isomorphic(g, o), InvalidInput);
}

TEST_CASE("structure JSON round trip is exact", "[core]") {
    std::mt19937 rng(424242);
    for (int trial = 0; trial < 20; ++trial) {
        auto a = random_binary_structure(rng, 5);
        auto j = structure_to_json(a);
        auto b = structure_from_json(j);
        CHECK(a == b);
        CHECK(structure_to_json(b) == j);
    }
}

TEST_CASE("functional symbols are validated as graphs of maps", "[core]") {
    std::vector<ElementId> univ{0, 1};
    FiniteStructure a(Signature{{RelSym{"f", 2, true}}}, univ);
    a.relations[0].insert({0, 1});
    CHECK_THROWS_AS(a.validate(), InvalidInput);   // not total
    a.relations[0].insert({1, 0});
    CHECK_NOTHROW(a.validate());
    a.relations[0].insert({1, 1});
    CHECK_THROWS_AS(a.validate(), InvalidInput);   // not single-valued
}

TEST_CASE("DOT export emits undirected edges for symmetric relations", "[core]") {
    auto p3 = path_graph(3);
    auto dot = structure_to_dot(p3);
    CHECK(dot.find("graph G {") == 0);
    CHECK(dot.find("n0 -- n1") != std::string::npos);
    CHECK(dot.find("->") == std::string::npos);
}
