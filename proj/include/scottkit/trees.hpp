#ifndef SCOTTKIT_TREES_HPP
#define SCOTTKIT_TREES_HPP

#include <json.hpp>

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "scottkit/config.hpp"
#include "scottkit/structure.hpp"

namespace scottkit {

using TreeNode = std::vector<int>;   // finite sequence of naturals; empty = root

/// Prefix-closed finite set of finite sequences of naturals.
class FiniteTree {
public:
    FiniteTree() = default;
    explicit FiniteTree(std::set<TreeNode> nodes) : nodes_(std::move(nodes)) { validate(); }

    const std::set<TreeNode>& nodes() const { return nodes_; }
    std::size_t size() const { return nodes_.size(); }
    bool empty() const { return nodes_.empty(); }
    bool contains(const TreeNode& n) const { return nodes_.count(n) > 0; }

    void insert(const TreeNode& n) {
        TreeNode prefix;
        nodes_.insert(prefix);
        for (int step : n) {
            prefix.push_back(step);
            nodes_.insert(prefix);
        }
    }

    std::vector<TreeNode> children(const TreeNode& n) const {
        std::vector<TreeNode> out;
        auto it = nodes_.upper_bound(n);
        for (; it != nodes_.end(); ++it) {
            const TreeNode& m = *it;
            if (m.size() <= n.size() ||
                !std::equal(n.begin(), n.end(), m.begin())) break;
            if (m.size() == n.size() + 1) out.push_back(m);
        }
        return out;
    }

    std::vector<TreeNode> level(std::size_t n) const {
        std::vector<TreeNode> out;
        for (const auto& m : nodes_)
            if (m.size() == n) out.push_back(m);
        return out;
    }

    std::size_t depth() const {
        std::size_t d = 0;
        for (const auto& m : nodes_) d = std::max(d, m.size());
        return d;
    }

    void validate() const {
        for (const auto& n : nodes_) {
            if (n.empty()) continue;
            TreeNode parent(n.begin(), n.end() - 1);
            if (!nodes_.count(parent))
                throw InvalidInput("tree is not prefix-closed");
        }
    }

    friend bool operator==(const FiniteTree& a, const FiniteTree& b) { return a.nodes_ == b.nodes_; }
    friend bool operator!=(const FiniteTree& a, const FiniteTree& b) { return !(a == b); }

private:
    std::set<TreeNode> nodes_;
};

/// Ordinal rank of a node: 0 for leaves, otherwise the least strict upper
/// bound of the child ranks (max + 1 on finite trees).
inline int tree_rank(const FiniteTree& t, const TreeNode& sigma) {
    if (!t.contains(sigma)) throw InvalidInput("node is not in the tree");
    int best = -1;
    for (const auto& c : t.children(sigma)) best = std::max(best, tree_rank(t, c));
    return best + 1;
}

/// Multiset of ranks of the level-n nodes, as rank -> multiplicity.
inline std::map<int, int> rank_spectrum(const FiniteTree& t, std::size_t n) {
    std::map<int, int> out;
    for (const auto& node : t.level(n)) ++out[tree_rank(t, node)];
    return out;
}

// ---- ordinals below omega^2 and level specifications ----

/// omega*limit + finite, with the induced total order.
struct SmallOrdinal {
    long limit = 0;
    long finite = 0;

    friend bool operator<(const SmallOrdinal& x, const SmallOrdinal& y) {
        if (x.limit != y.limit) return x.limit < y.limit;
        return x.finite < y.finite;
    }
    friend bool operator==(const SmallOrdinal& x, const SmallOrdinal& y) {
        return x.limit == y.limit && x.finite == y.finite;
    }
};

/**
 * The rank set of one tree level, finitely described. `elements` lists
 * explicit ordinals; `full_blocks` marks blocks {w*a+k : all k} present in
 * full; `cofinal_blocks` marks a set meeting every block cofinally (order
 * type w^2). `has_inf` is an annotation for harness scenarios only; no
 * computation consumes it.
 */
struct LevelRanks {
    std::set<SmallOrdinal> elements;
    std::set<long> full_blocks;
    bool cofinal_blocks = false;
    bool has_inf = false;
};

struct LevelSpec {
    std::vector<LevelRanks> levels;

    static LevelSpec from_tree(const FiniteTree& t) {
        LevelSpec s;
        s.levels.resize(t.empty() ? 0 : t.depth() + 1);
        for (std::size_t n = 0; n < s.levels.size(); ++n)
            for (const auto& [rank, count] : rank_spectrum(t, n))
                s.levels[n].elements.insert(SmallOrdinal{0, rank});
        return s;
    }
};

/**
 * Order type of the downward closure of a level's rank set, as a
 * SmallOrdinal; nullopt encodes w^2 (a set meeting blocks cofinally).
 */
inline std::optional<SmallOrdinal> level_order_type(const LevelRanks& s) {
    for (const auto& e : s.elements)
        if (e.limit < 0 || e.finite < 0) throw InvalidInput("ordinal outside omega^2");
    if (s.cofinal_blocks) return std::nullopt;
    SmallOrdinal type{0, 0};
    for (long a : s.full_blocks) type = std::max(type, SmallOrdinal{a + 1, 0});
    for (const auto& e : s.elements) type = std::max(type, SmallOrdinal{e.limit, e.finite + 1});
    return type;
}

/**
 * Thinness: at every level n >= 1 the rank set has order type at most w*n.
 * Level 0 holds at most the root's single rank and carries no constraint;
 * on finite trees the check is degenerate and always true.
 */
inline bool is_thin(const LevelSpec& spec) {
    for (std::size_t n = 1; n < spec.levels.size(); ++n) {
        auto type = level_order_type(spec.levels[n]);
        if (!type) return false;                    // w^2 > w*n
        if (type->limit > static_cast<long>(n)) return false;
        if (type->limit == static_cast<long>(n) && type->finite > 0) return false;
    }
    return true;
}

/**
 * Truncated rank-homogeneity: for each node s at level n < depth and each
 * rank a occurring among level-(n+1) nodes with a < rk(s), s has at least k
 * children of rank a. "Infinitely many" becomes "at least k" at desk scale.
 */
inline bool is_rank_homogeneous_k(const FiniteTree& t, int k, std::size_t depth) {
    if (t.empty()) return true;
    std::size_t max_level = std::min(depth, t.depth());
    for (std::size_t n = 0; n < max_level; ++n) {
        std::map<int, int> next_spectrum = rank_spectrum(t, n + 1);
        for (const auto& node : t.level(n)) {
            int r = tree_rank(t, node);
            std::map<int, int> child_count;
            for (const auto& c : t.children(node)) ++child_count[tree_rank(t, c)];
            for (const auto& [alpha, mult] : next_spectrum) {
                if (alpha >= r) continue;
                auto it = child_count.find(alpha);
                if (it == child_count.end() || it->second < k) return false;
            }
        }
    }
    return true;
}

/// Finite-rank level specification consumed by the generator.
using FiniteLevelSpec = std::vector<std::set<int>>;

/// Realizability of a finite-rank spec: a single root rank, a rank a > 0 at
/// level n needs a-1 at level n+1, leaves only at the last level, and every
/// listed rank must be reachable from some admissible parent.
inline void check_realizable(const FiniteLevelSpec& spec, std::size_t depth) {
    if (spec.empty()) throw InvalidInput("spec has no levels");
    if (spec.size() > depth + 1) throw InvalidInput("spec deeper than the depth bound");
    if (spec[0].size() != 1) throw InvalidInput("level 0 must hold exactly the root rank");
    for (std::size_t n = 0; n < spec.size(); ++n) {
        for (int a : spec[n]) {
            if (a < 0) throw InvalidInput("negative rank");
            if (a > 0) {
                if (n + 1 >= spec.size() || !spec[n + 1].count(a - 1))
                    throw InvalidInput("rank " + std::to_string(a) + " at level " +
                                       std::to_string(n) + " needs rank " + std::to_string(a - 1) +
                                       " at the next level");
            }
        }
        if (n > 0) {
            for (int b : spec[n]) {
                bool reachable = false;
                for (int a : spec[n - 1]) reachable = reachable || a > b;
                if (!reachable)
                    throw InvalidInput("rank " + std::to_string(b) + " at level " +
                                       std::to_string(n) + " has no admissible parent");
            }
        }
    }
}

/**
 * Canonical rank-homogeneous tree realizing exactly the spec's ranks at
 * each level, every admissible child rank with multiplicity exactly k.
 * Children are ordered by rank then index, so equal inputs rebuild the
 * identical tree.
 */
inline FiniteTree generate_rank_homogeneous(const FiniteLevelSpec& spec, int k, std::size_t depth,
                                            const Budgets& budgets = Budgets{}) {
    if (k < 1) throw InvalidInput("multiplicity k must be positive");
    check_realizable(spec, depth);
    std::set<TreeNode> nodes;
    std::size_t count = 0;
    // (node, level, target rank) work list, depth-first
    std::vector<std::pair<TreeNode, int>> stack{{TreeNode{}, *spec[0].begin()}};
    while (!stack.empty()) {
        auto [node, rank] = stack.back();
        stack.pop_back();
        if (++count > budgets.tree_node_cap) throw BudgetError("generated tree exceeds the node cap");
        std::size_t lvl = node.size();
        nodes.insert(node);
        if (rank == 0) continue;
        int idx = 0;
        for (int beta : spec[lvl + 1]) {
            if (beta >= rank) break;
            for (int copy = 0; copy < k; ++copy) {
                TreeNode child = node;
                child.push_back(idx++);
                stack.push_back({child, beta});
            }
        }
    }
    return FiniteTree(std::move(nodes));
}

// ---- conversions ----

/// Tree as a structure over {S: successor, root: unary}; element i is the
/// i-th node in lexicographic node order, so the root is element 0.
inline FiniteStructure tree_to_structure(const FiniteTree& t) {
    std::vector<TreeNode> order(t.nodes().begin(), t.nodes().end());
    std::map<TreeNode, ElementId> id;
    for (std::size_t i = 0; i < order.size(); ++i) id[order[i]] = static_cast<ElementId>(i);
    std::vector<ElementId> univ(order.size());
    for (std::size_t i = 0; i < order.size(); ++i) univ[i] = static_cast<ElementId>(i);
    FiniteStructure a(tree_signature(), univ);
    for (const auto& n : order) {
        if (n.empty()) {
            a.relations[1].insert({id[n]});
            continue;
        }
        TreeNode parent(n.begin(), n.end() - 1);
        a.relations[0].insert({id[parent], id[n]});
    }
    return a;
}

/// Inverse of tree_to_structure up to child renumbering: children are
/// ordered by ascending element id and renumbered 0,1,2,...
inline FiniteTree structure_to_tree(const FiniteStructure& a) {
    if (a.signature != tree_signature()) throw InvalidInput("expected the tree signature");
    if (a.universe.empty()) return FiniteTree{};
    if (a.relations[1].size() != 1) throw InvalidInput("expected exactly one root");
    ElementId root = a.relations[1].begin()->front();
    std::map<ElementId, std::vector<ElementId>> kids;
    std::map<ElementId, int> indeg;
    for (const auto& t : a.relations[0]) {
        kids[t[0]].push_back(t[1]);
        ++indeg[t[1]];
    }
    for (const auto& [child, d] : indeg)
        if (d > 1) throw InvalidInput("node with two parents");
    if (indeg.count(root)) throw InvalidInput("root has a parent");

    std::set<TreeNode> nodes;
    std::size_t visited = 0;
    std::vector<std::pair<ElementId, TreeNode>> stack{{root, {}}};
    while (!stack.empty()) {
        auto [e, seq] = stack.back();
        stack.pop_back();
        ++visited;
        nodes.insert(seq);
        auto it = kids.find(e);
        if (it == kids.end()) continue;
        std::sort(it->second.begin(), it->second.end());
        for (std::size_t i = 0; i < it->second.size(); ++i) {
            TreeNode child = seq;
            child.push_back(static_cast<int>(i));
            stack.push_back({it->second[i], child});
        }
    }
    if (visited != a.universe.size()) throw InvalidInput("successor relation is not a tree");
    return FiniteTree(std::move(nodes));
}

inline nlohmann::json tree_to_json(const FiniteTree& t) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& n : t.nodes()) j.push_back(n);
    return j;
}

inline FiniteTree tree_from_json(const nlohmann::json& j) {
    std::set<TreeNode> nodes;
    for (const auto& n : j) nodes.insert(n.get<TreeNode>());
    return FiniteTree(std::move(nodes));
}

} // namespace scottkit

#endif // SCOTTKIT_TREES_HPP
