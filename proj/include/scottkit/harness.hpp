#ifndef SCOTTKIT_HARNESS_HPP
#define SCOTTKIT_HARNESS_HPP

#include <json.hpp>

#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "scottkit/embed_graph.hpp"
#include "scottkit/embed_order.hpp"
#include "scottkit/field.hpp"
#include "scottkit/isomorphism.hpp"
#include "scottkit/json_io.hpp"
#include "scottkit/order_family.hpp"
#include "scottkit/structure.hpp"

namespace scottkit {

/**
 * An embedding packaged for the sweep properties: an image-level
 * isomorphism verdict on pairs of sources, a decode round trip, and a
 * same-orbit verdict for the images of two tuples of one source.
 */
struct EmbeddingUnderTest {
    std::string name;
    std::function<bool(const FiniteStructure&, const FiniteStructure&)> images_isomorphic;
    std::function<std::optional<FiniteStructure>(const FiniteStructure&)> round_trip;
    std::function<bool(const FiniteStructure&, const Tuple&, const Tuple&)> image_same_orbit;
};

struct SweepReport {
    std::string embedding;
    std::string property;
    std::size_t instances = 0;
    std::size_t checks = 0;
    std::size_t failures = 0;
    nlohmann::json counterexample;   // first failure in instance order
    nlohmann::json details;          // per-index verdicts, where the property has them

    bool ok() const { return failures == 0; }

    nlohmann::json to_json() const {
        nlohmann::json j{{"embedding", embedding},
                         {"property", property},
                         {"instances", instances},
                         {"checks", checks},
                         {"failures", failures},
                         {"passed", ok()},
                         {"counterexample", counterexample}};
        if (!details.is_null()) j["details"] = details;
        return j;
    }
};

// ---- the three shipped embeddings ----

/// Trees (as {S, root} structures) into undirected graphs.
inline EmbeddingUnderTest make_tree_graph_embedding(Budgets budgets = Budgets{}) {
    EmbeddingUnderTest e;
    e.name = "tree-graph";
    e.images_isomorphic = [budgets](const FiniteStructure& a, const FiniteStructure& b) {
        return isomorphic(encode_tree(structure_to_tree(a)),
                          encode_tree(structure_to_tree(b)), budgets)
            .has_value();
    };
    e.round_trip = [](const FiniteStructure& a) -> std::optional<FiniteStructure> {
        try {
            return tree_to_structure(decode_graph(encode_tree(structure_to_tree(a))));
        } catch (const DecodeError&) {
            return std::nullopt;
        }
    };
    e.image_same_orbit = [budgets](const FiniteStructure& a, const Tuple& s, const Tuple& t) {
        FiniteTree tree = structure_to_tree(a);
        auto g = encode_tree(tree);
        std::vector<TreeNode> order(tree.nodes().begin(), tree.nodes().end());
        auto lift = [&](const Tuple& u) {
            Tuple out;
            for (ElementId v : u) out.push_back(encoded_node_vertex(tree, order.at(v)));
            return out;
        };
        return same_orbit(g, lift(s), lift(t), budgets);
    };
    return e;
}

/// Graphs into fields of the given characteristic. The image comparison runs
/// through the decoder, and image orbits are decided by the symmetries of
/// the presentation itself (label permutations fixing the radical set).
inline EmbeddingUnderTest make_graph_field_embedding(long characteristic) {
    EmbeddingUnderTest e;
    e.name = characteristic == 0 ? "graph-field" : "graph-field-p" + std::to_string(characteristic);
    e.images_isomorphic = [characteristic](const FiniteStructure& a, const FiniteStructure& b) {
        return isomorphic(decode_field(build_field(a, characteristic)),
                          decode_field(build_field(b, characteristic)))
            .has_value();
    };
    e.round_trip = [characteristic](const FiniteStructure& a) -> std::optional<FiniteStructure> {
        return decode_field(build_field(a, characteristic));
    };
    e.image_same_orbit = [characteristic](const FiniteStructure& a, const Tuple& s, const Tuple& t) {
        FieldPresentation f = build_field(a, characteristic);
        std::set<std::pair<int, int>> edges(f.radicals.begin(), f.radicals.end());
        std::vector<int> perm(f.vertex_count);
        std::iota(perm.begin(), perm.end(), 0);
        // a presentation symmetry permutes the b_i and carries the radical
        // labels onto themselves
        do {
            bool keeps = true;
            for (auto [i, j] : f.radicals) {
                int pi = perm[i], pj = perm[j];
                if (pi > pj) std::swap(pi, pj);
                if (!edges.count({pi, pj})) { keeps = false; break; }
            }
            if (!keeps) continue;
            bool maps = true;
            for (std::size_t x = 0; x < s.size(); ++x)
                if (perm[a.index_of(s[x])] != a.index_of(t[x])) { maps = false; break; }
            if (maps) return true;
        } while (std::next_permutation(perm.begin(), perm.end()));
        return false;
    };
    return e;
}

namespace harness_detail {

/// Block sizes realized by the canonical elements of all tuples up to the
/// graph size; a complete isomorphism invariant for the order image, since
/// the all-vertices tuple types are realized.
inline std::set<long> realized_block_sizes(const FiniteStructure& g) {
    std::set<long> sizes;
    std::vector<Tuple> tuples;
    Tuple cur;
    std::function<void(void)> walk = [&]() {
        if (!cur.empty()) tuples.push_back(cur);
        if (cur.size() == g.size()) return;
        for (ElementId v : g.universe) {
            cur.push_back(v);
            walk();
            cur.pop_back();
        }
    };
    walk();
    for (const auto& t : tuples) sizes.insert(type_tail_bound(g, t));
    return sizes;
}

} // namespace harness_detail

/// Graphs into linear orders. The infinite image is handled through its
/// canonical fragment elements: isomorphism comparison by realized
/// block-size spectra, decoding by reading edges off pair-type block sizes,
/// and image orbits through singleton back-and-forth family maps.
inline EmbeddingUnderTest make_graph_order_embedding(DensePartition& dp = DensePartition::shared(),
                                                     Budgets budgets = Budgets{}) {
    EmbeddingUnderTest e;
    e.name = "graph-order";
    e.images_isomorphic = [](const FiniteStructure& a, const FiniteStructure& b) {
        return harness_detail::realized_block_sizes(a) == harness_detail::realized_block_sizes(b);
    };
    e.round_trip = [&dp](const FiniteStructure& a) -> std::optional<FiniteStructure> {
        // an edge shows as the block size of the distinct-adjacent pair type
        TuplePattern edge_pattern;
        edge_pattern.n = 2;
        edge_pattern.distinct = {true};
        edge_pattern.edge = {true};
        long edge_size = atomic_type_index(edge_pattern) + 1;
        std::vector<std::pair<ElementId, ElementId>> edges;
        for (std::size_t i = 0; i < a.size(); ++i)
            for (std::size_t j = i + 1; j < a.size(); ++j) {
                auto x = f_map(a, {a.universe[i], a.universe[j]}, dp);
                if (discrete_block(a, x, dp).second == edge_size)
                    edges.push_back({static_cast<ElementId>(i), static_cast<ElementId>(j)});
            }
        return make_graph(a.size(), edges);
    };
    e.image_same_orbit = [&dp, budgets](const FiniteStructure& a, const Tuple& s, const Tuple& t) {
        if (s.size() != t.size()) return false;
        for (const auto& perm : automorphisms(a, budgets)) {
            std::map<ElementId, ElementId> f;
            for (std::size_t i = 0; i < a.size(); ++i) f[a.universe[i]] = a.universe[perm[i]];
            OrderBackForthFamily fam(a, a, f, dp);
            OrderBackForthFamily::PartialMap p{{f_map(a, s, dp), f_map(a, t, dp)}};
            if (fam.contains(p)) return true;
        }
        return false;
    };
    return e;
}

// ---- sweep properties ----

/**
 * For every pair of instances, the sources are isomorphic exactly when the
 * images are; each instance must also decode back to an isomorphic copy of
 * itself. A failing sweep carries the first counterexample in instance
 * order.
 */
inline SweepReport check_iso_preservation(const EmbeddingUnderTest& e,
                                          const std::vector<FiniteStructure>& instances,
                                          const Budgets& budgets = Budgets{}) {
    SweepReport r;
    r.embedding = e.name;
    r.property = "iso-preservation";
    r.instances = instances.size();
    for (std::size_t i = 0; i < instances.size(); ++i) {
        ++r.checks;
        auto back = e.round_trip(instances[i]);
        if (!back || !isomorphic(instances[i], *back, budgets)) {
            if (r.failures++ == 0)
                r.counterexample = {{"instance", i},
                                    {"reason", "decode round trip failed"},
                                    {"source", structure_to_json(instances[i])}};
        }
    }
    for (std::size_t i = 0; i < instances.size(); ++i)
        for (std::size_t j = i; j < instances.size(); ++j) {
            ++r.checks;
            bool src = isomorphic(instances[i], instances[j], budgets).has_value();
            bool img = e.images_isomorphic(instances[i], instances[j]);
            if (src != img) {
                if (r.failures++ == 0)
                    r.counterexample = {{"pair", {i, j}},
                                        {"source_isomorphic", src},
                                        {"image_isomorphic", img}};
            }
        }
    return r;
}

/**
 * For all pairs of k-tuples of A, same source orbit exactly when the image
 * tuples share an orbit; source orbits come from the complete automorphism
 * listing.
 */
inline SweepReport check_orbit_correspondence(const EmbeddingUnderTest& e,
                                              const FiniteStructure& a, int k,
                                              const Budgets& budgets = Budgets{}) {
    SweepReport r;
    r.embedding = e.name;
    r.property = "orbit-correspondence";
    r.instances = 1;
    auto part = orbits(a, k, budgets);
    std::map<Tuple, std::size_t> cell;
    for (std::size_t c = 0; c < part.size(); ++c)
        for (const auto& t : part[c]) cell[t] = c;
    auto tuples = all_tuples(a, k);
    for (const auto& s : tuples)
        for (const auto& t : tuples) {
            ++r.checks;
            bool src = cell.at(s) == cell.at(t);
            bool img = e.image_same_orbit(a, s, t);
            if (src != img) {
                if (r.failures++ == 0)
                    r.counterexample = {{"tuples", {s, t}},
                                        {"source_same_orbit", src},
                                        {"image_same_orbit", img}};
            }
        }
    return r;
}

/**
 * Pushes an indexed family through the embedding and compares the verdict
 * vectors: C_n isomorphic to the target exactly when the images are.
 */
inline SweepReport transfer_family(const EmbeddingUnderTest& e,
                                   const std::vector<FiniteStructure>& family,
                                   const FiniteStructure& target,
                                   const Budgets& budgets = Budgets{}) {
    SweepReport r;
    r.embedding = e.name;
    r.property = "family-transfer";
    r.instances = family.size();
    nlohmann::json verdicts = nlohmann::json::array();
    for (std::size_t n = 0; n < family.size(); ++n) {
        ++r.checks;
        bool src = isomorphic(family[n], target, budgets).has_value();
        bool img = e.images_isomorphic(family[n], target);
        verdicts.push_back({{"n", n}, {"source", src}, {"image", img}});
        if (src != img) {
            if (r.failures++ == 0)
                r.counterexample = {{"n", n}, {"source", src}, {"image", img}};
        }
    }
    r.details = verdicts;
    return r;
}

} // namespace scottkit

#endif // SCOTTKIT_HARNESS_HPP
