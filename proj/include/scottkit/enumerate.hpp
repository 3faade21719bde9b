#ifndef SCOTTKIT_ENUMERATE_HPP
#define SCOTTKIT_ENUMERATE_HPP

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <vector>

#include "scottkit/structure.hpp"
#include "scottkit/trees.hpp"

namespace scottkit {

namespace enum_detail {

// canonical rooted tree value: children sorted by their own encodings
struct CTree {
    std::vector<CTree> kids;

    std::vector<int> encode() const {
        // balanced-parentheses encoding, children in sorted order
        std::vector<int> out{1};
        std::vector<std::vector<int>> parts;
        for (const auto& k : kids) parts.push_back(k.encode());
        std::sort(parts.begin(), parts.end());
        for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
        out.push_back(0);
        return out;
    }
    friend bool operator<(const CTree& a, const CTree& b) { return a.encode() < b.encode(); }
    friend bool operator==(const CTree& a, const CTree& b) { return a.encode() == b.encode(); }
};

// all canonical rooted trees with exactly n nodes
inline const std::vector<CTree>& ctrees_exact(int n) {
    static std::vector<std::vector<CTree>> cache{{}, {CTree{}}};
    while (static_cast<int>(cache.size()) <= n) {
        int m = static_cast<int>(cache.size());
        // choose a multiset of subtrees with sizes summing to m-1; enforce a
        // non-increasing (size, index) sequence to avoid duplicates
        std::vector<CTree> result;
        std::vector<CTree> kids;
        std::function<void(int, int, int)> pick = [&](int remaining, int max_size, int max_index) {
            if (remaining == 0) {
                CTree t;
                t.kids = kids;
                result.push_back(t);
                return;
            }
            for (int s = std::min(remaining, max_size); s >= 1; --s) {
                const auto& pool = cache[s];
                int start = static_cast<int>(pool.size()) - 1;
                if (s == max_size) start = std::min(start, max_index);
                for (int i = start; i >= 0; --i) {
                    kids.push_back(pool[i]);
                    pick(remaining - s, s, i);
                    kids.pop_back();
                }
            }
        };
        pick(m - 1, m - 1, 0x7fffffff);
        std::sort(result.begin(), result.end());
        result.erase(std::unique(result.begin(), result.end()), result.end());
        cache.push_back(std::move(result));
    }
    return cache[n];
}

inline void ctree_to_finite(const CTree& c, const TreeNode& at, std::set<TreeNode>& out) {
    out.insert(at);
    std::vector<std::pair<std::vector<int>, const CTree*>> keyed;
    for (const auto& k : c.kids) keyed.push_back({k.encode(), &k});
    std::sort(keyed.begin(), keyed.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t i = 0; i < keyed.size(); ++i) {
        TreeNode child = at;
        child.push_back(static_cast<int>(i));
        ctree_to_finite(*keyed[i].second, child, out);
    }
}

} // namespace enum_detail

/// Every rooted tree with 1..max_nodes nodes, one representative per
/// isomorphism type, smaller trees first; deterministic order.
inline std::vector<FiniteTree> all_rooted_trees(int max_nodes) {
    std::vector<FiniteTree> out;
    for (int n = 1; n <= max_nodes; ++n)
        for (const auto& c : enum_detail::ctrees_exact(n)) {
            std::set<TreeNode> nodes;
            enum_detail::ctree_to_finite(c, {}, nodes);
            out.push_back(FiniteTree(std::move(nodes)));
        }
    return out;
}

/// Every simple graph on exactly n vertices, one representative per
/// isomorphism type (canonical = minimal edge bitmask over all relabelings).
inline std::vector<FiniteStructure> all_graphs_exact(int n) {
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) pairs.push_back({i, j});
    const int m = static_cast<int>(pairs.size());
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<std::vector<int>> perms;
    do { perms.push_back(perm); } while (std::next_permutation(perm.begin(), perm.end()));

    auto apply = [&](std::uint64_t mask, const std::vector<int>& p) {
        std::uint64_t out = 0;
        for (int e = 0; e < m; ++e) {
            if (!(mask >> e & 1)) continue;
            int a = p[pairs[e].first], b = p[pairs[e].second];
            if (a > b) std::swap(a, b);
            for (int f = 0; f < m; ++f)
                if (pairs[f].first == a && pairs[f].second == b) { out |= 1ull << f; break; }
        }
        return out;
    };

    std::vector<FiniteStructure> out;
    for (std::uint64_t mask = 0; mask < (1ull << m); ++mask) {
        bool minimal = true;
        for (const auto& p : perms)
            if (apply(mask, p) < mask) { minimal = false; break; }
        if (!minimal) continue;
        std::vector<std::pair<ElementId, ElementId>> edges;
        for (int e = 0; e < m; ++e)
            if (mask >> e & 1) edges.push_back({pairs[e].first, pairs[e].second});
        out.push_back(make_graph(n, edges));
    }
    return out;
}

inline std::vector<FiniteStructure> all_graphs_up_to(int max_n) {
    std::vector<FiniteStructure> out;
    for (int n = 1; n <= max_n; ++n)
        for (auto& g : all_graphs_exact(n)) out.push_back(std::move(g));
    return out;
}

/// Every structure with one binary relation on exactly n elements, one
/// representative per isomorphism type (loops and asymmetry allowed).
inline std::vector<FiniteStructure> all_binary_structures_exact(int n) {
    const int m = n * n;
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<std::vector<int>> perms;
    do { perms.push_back(perm); } while (std::next_permutation(perm.begin(), perm.end()));

    auto apply = [&](std::uint64_t mask, const std::vector<int>& p) {
        std::uint64_t out = 0;
        for (int e = 0; e < m; ++e)
            if (mask >> e & 1) out |= 1ull << (p[e / n] * n + p[e % n]);
        return out;
    };

    std::vector<FiniteStructure> out;
    std::vector<ElementId> univ(n);
    std::iota(univ.begin(), univ.end(), 0);
    for (std::uint64_t mask = 0; mask < (1ull << m); ++mask) {
        bool minimal = true;
        for (const auto& p : perms)
            if (apply(mask, p) < mask) { minimal = false; break; }
        if (!minimal) continue;
        FiniteStructure a(Signature{{RelSym{"R", 2, false}}}, univ);
        for (int e = 0; e < m; ++e)
            if (mask >> e & 1) a.relations[0].insert({e / n, e % n});
        out.push_back(std::move(a));
    }
    return out;
}

} // namespace scottkit

#endif // SCOTTKIT_ENUMERATE_HPP
