#ifndef SCOTTKIT_ISOMORPHISM_HPP
#define SCOTTKIT_ISOMORPHISM_HPP

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <vector>

#include "scottkit/config.hpp"
#include "scottkit/structure.hpp"

namespace scottkit {

namespace iso_detail {

/// Incidence index: for each universe position, the tuples it occurs in.
struct Incidence {
    const FiniteStructure* a = nullptr;
    // per element index: (symbol, tuple pointer)
    std::vector<std::vector<std::pair<int, const Tuple*>>> at;

    explicit Incidence(const FiniteStructure& s) : a(&s), at(s.size()) {
        for (std::size_t sym = 0; sym < s.relations.size(); ++sym)
            for (const auto& t : s.relations[sym]) {
                std::vector<int> seen;
                for (ElementId e : t) {
                    int i = s.index_of(e);
                    if (std::find(seen.begin(), seen.end(), i) == seen.end()) {
                        at[i].push_back({static_cast<int>(sym), &t});
                        seen.push_back(i);
                    }
                }
            }
    }
};

/// One refinement token: symbol, mask of positions held by the element,
/// colors of the tuple components.
using Token = std::vector<int>;

inline void element_signature(const FiniteStructure& s, const Incidence& inc,
                              const std::vector<int>& colors, int i,
                              std::vector<Token>& out) {
    out.clear();
    ElementId self = s.universe[i];
    for (auto [sym, t] : inc.at[i]) {
        Token tok;
        tok.push_back(sym);
        int mask = 0;
        for (std::size_t p = 0; p < t->size(); ++p)
            if ((*t)[p] == self) mask |= 1 << p;
        tok.push_back(mask);
        for (ElementId e : *t) tok.push_back(colors[s.index_of(e)]);
        out.push_back(std::move(tok));
    }
    std::sort(out.begin(), out.end());
}

/**
 * Joint color refinement of two structures until stable. Individualized
 * elements carry forced distinct colors through `seedA`/`seedB` (-1 for
 * unforced). Returns false as soon as the color multisets diverge, which
 * refutes any isomorphism extending the forced map.
 */
inline bool joint_refine(const FiniteStructure& A, const Incidence& incA,
                         const FiniteStructure& B, const Incidence& incB,
                         const std::vector<int>& seedA, const std::vector<int>& seedB,
                         std::vector<int>& colA, std::vector<int>& colB) {
    const std::size_t nA = A.size(), nB = B.size();
    colA.assign(nA, 0);
    colB.assign(nB, 0);
    for (std::size_t i = 0; i < nA; ++i)
        if (seedA[i] >= 0) colA[i] = seedA[i] + 1;
    for (std::size_t i = 0; i < nB; ++i)
        if (seedB[i] >= 0) colB[i] = seedB[i] + 1;

    for (std::size_t round = 0; round <= nA + nB; ++round) {
        // full signature = (current color, sorted incidence tokens)
        std::vector<std::pair<std::vector<Token>, int>> sigA(nA), sigB(nB);
        std::vector<Token> buf;
        for (std::size_t i = 0; i < nA; ++i) {
            element_signature(A, incA, colA, static_cast<int>(i), buf);
            sigA[i] = {buf, colA[i]};
        }
        for (std::size_t i = 0; i < nB; ++i) {
            element_signature(B, incB, colB, static_cast<int>(i), buf);
            sigB[i] = {buf, colB[i]};
        }
        // dense ids over the union, then compare multisets
        std::vector<std::pair<std::pair<std::vector<Token>, int>, std::pair<int, int>>> all;
        all.reserve(nA + nB);
        for (std::size_t i = 0; i < nA; ++i) all.push_back({sigA[i], {0, static_cast<int>(i)}});
        for (std::size_t i = 0; i < nB; ++i) all.push_back({sigB[i], {1, static_cast<int>(i)}});
        std::sort(all.begin(), all.end());
        std::vector<int> newA(nA), newB(nB);
        int cls = -1;
        long balance = 0;   // +1 per A element, -1 per B element, per class
        bool balanced = true;
        for (std::size_t j = 0; j < all.size(); ++j) {
            if (j == 0 || all[j].first != all[j - 1].first) {
                if (j > 0 && balance != 0) balanced = false;
                ++cls;
                balance = 0;
            }
            balance += all[j].second.first == 0 ? 1 : -1;
            if (all[j].second.first == 0) newA[all[j].second.second] = cls;
            else newB[all[j].second.second] = cls;
        }
        if (balance != 0) balanced = false;
        if (!balanced) return false;
        if (newA == colA && newB == colB) return true;
        colA.swap(newA);
        colB.swap(newB);
    }
    return true;
}

/// Direct check that perm (A index -> B index) preserves all relations both ways.
inline bool verify_map(const FiniteStructure& A, const FiniteStructure& B,
                       const std::vector<int>& perm) {
    for (std::size_t s = 0; s < A.relations.size(); ++s) {
        if (A.relations[s].size() != B.relations[s].size()) return false;
        for (const auto& t : A.relations[s]) {
            Tuple img(t.size());
            for (std::size_t p = 0; p < t.size(); ++p)
                img[p] = B.universe[perm[A.index_of(t[p])]];
            if (!B.relations[s].count(img)) return false;
        }
    }
    return true;
}

struct SearchState {
    const FiniteStructure* A;
    const FiniteStructure* B;
    const Incidence* incA;
    const Incidence* incB;
    std::vector<int> mapAB;   // A index -> B index, -1 unset
    std::vector<int> mapBA;
    std::vector<int> seedA, seedB;
    int individualized = 0;

    // enumeration control
    bool collect_all = false;
    std::size_t cap = 0;
    std::vector<std::vector<int>> found;

    bool consistent_assign(int ia, int ib) {
        const auto& A_ = *A;
        const auto& B_ = *B;
        for (auto [sym, t] : incA->at[ia]) {
            Tuple img(t->size());
            bool full = true;
            for (std::size_t p = 0; p < t->size(); ++p) {
                int q = mapAB[A_.index_of((*t)[p])];
                if (q < 0) { full = false; break; }
                img[p] = B_.universe[q];
            }
            if (full && !B_.relations[sym].count(img)) return false;
        }
        for (auto [sym, t] : incB->at[ib]) {
            Tuple pre(t->size());
            bool full = true;
            for (std::size_t p = 0; p < t->size(); ++p) {
                int q = mapBA[B_.index_of((*t)[p])];
                if (q < 0) { full = false; break; }
                pre[p] = A_.universe[q];
            }
            if (full && !A_.relations[sym].count(pre)) return false;
        }
        return true;
    }

    // returns false when the search should stop entirely (cap logic handled by caller)
    bool search() {
        std::vector<int> colA, colB;
        if (!joint_refine(*A, *incA, *B, *incB, seedA, seedB, colA, colB)) return false;

        // pick the smallest non-singleton cell among unmapped A elements
        std::map<int, std::vector<int>> cellsA;
        for (std::size_t i = 0; i < colA.size(); ++i)
            if (mapAB[i] < 0) cellsA[colA[i]].push_back(static_cast<int>(i));

        if (cellsA.empty()) {
            std::vector<int> perm(mapAB.begin(), mapAB.end());
            if (!verify_map(*A, *B, perm)) return false;
            found.push_back(std::move(perm));
            return !collect_all || found.size() >= cap;
        }

        int best = -1;
        std::size_t best_size = 0;
        for (auto& [c, v] : cellsA)
            if (best < 0 || v.size() < best_size) { best = c; best_size = v.size(); }
        int ia = cellsA[best].front();

        std::vector<int> candidates;
        for (std::size_t j = 0; j < colB.size(); ++j)
            if (mapBA[j] < 0 && colB[j] == best) candidates.push_back(static_cast<int>(j));

        for (int ib : candidates) {
            if (!consistent_assign(ia, ib)) continue;
            mapAB[ia] = ib;
            mapBA[ib] = ia;
            seedA[ia] = individualized;
            seedB[ib] = individualized;
            ++individualized;
            bool stop = search();
            --individualized;
            seedA[ia] = -1;
            seedB[ib] = -1;
            mapAB[ia] = -1;
            mapBA[ib] = -1;
            if (stop) return true;
            if (!collect_all && !found.empty()) return true;
        }
        return false;
    }
};

inline std::optional<std::vector<int>> search_one(const FiniteStructure& A, const FiniteStructure& B,
                                                  const std::vector<std::pair<int, int>>& forced) {
    if (A.signature != B.signature) throw InvalidInput("isomorphism requires a shared signature");
    if (A.size() != B.size()) return std::nullopt;
    Incidence incA(A), incB(B);
    SearchState st;
    st.A = &A; st.B = &B; st.incA = &incA; st.incB = &incB;
    st.mapAB.assign(A.size(), -1);
    st.mapBA.assign(B.size(), -1);
    st.seedA.assign(A.size(), -1);
    st.seedB.assign(B.size(), -1);
    st.collect_all = false;
    st.cap = 1;
    for (auto [ia, ib] : forced) {
        if (st.mapAB[ia] >= 0) {
            if (st.mapAB[ia] != ib) return std::nullopt;
            continue;
        }
        if (st.mapBA[ib] >= 0) return std::nullopt;
        if (!st.consistent_assign(ia, ib)) return std::nullopt;
        st.mapAB[ia] = ib;
        st.mapBA[ib] = ia;
        st.seedA[ia] = st.individualized;
        st.seedB[ib] = st.individualized;
        ++st.individualized;
    }
    st.search();
    if (st.found.empty()) return std::nullopt;
    return st.found.front();
}

} // namespace iso_detail

/**
 * Isomorphism witness from A to B, or nullopt. Deterministic: a fixed
 * search order makes repeated calls return the same witness.
 */
inline std::optional<std::map<ElementId, ElementId>>
isomorphic(const FiniteStructure& A, const FiniteStructure& B, const Budgets& budgets = Budgets{}) {
    if (A.size() > budgets.iso_universe_cap || B.size() > budgets.iso_universe_cap)
        throw BudgetError("universe exceeds the isomorphism budget");
    auto perm = iso_detail::search_one(A, B, {});
    if (!perm) return std::nullopt;
    std::map<ElementId, ElementId> out;
    for (std::size_t i = 0; i < A.size(); ++i) out[A.universe[i]] = B.universe[(*perm)[i]];
    return out;
}

/// Pointed isomorphism (A, a) ~ (B, b): an isomorphism forced to map a_i to b_i.
inline std::optional<std::map<ElementId, ElementId>>
isomorphic_pointed(const FiniteStructure& A, const Tuple& a,
                   const FiniteStructure& B, const Tuple& b,
                   const Budgets& budgets = Budgets{}) {
    if (a.size() != b.size()) throw InvalidInput("pointed isomorphism needs tuples of equal length");
    if (A.size() > budgets.iso_universe_cap || B.size() > budgets.iso_universe_cap)
        throw BudgetError("universe exceeds the isomorphism budget");
    std::vector<std::pair<int, int>> forced;
    for (std::size_t i = 0; i < a.size(); ++i) {
        int ia = A.index_of(a[i]), ib = B.index_of(b[i]);
        if (ia < 0 || ib < 0) throw InvalidInput("pointed tuple element outside universe");
        forced.push_back({ia, ib});
    }
    auto perm = iso_detail::search_one(A, B, forced);
    if (!perm) return std::nullopt;
    std::map<ElementId, ElementId> out;
    for (std::size_t i = 0; i < A.size(); ++i) out[A.universe[i]] = B.universe[(*perm)[i]];
    return out;
}

/**
 * The full automorphism listing of A, as permutations of universe indices.
 * Complete whenever it returns; throws BudgetError past the count cap.
 * Identity is always present; order is deterministic (lexicographic).
 */
inline std::vector<std::vector<int>>
automorphisms(const FiniteStructure& A, const Budgets& budgets = Budgets{}) {
    if (A.size() > budgets.iso_universe_cap)
        throw BudgetError("universe exceeds the isomorphism budget");
    if (A.size() <= 6) {
        // direct filter over all permutations; trivially complete
        std::vector<std::vector<int>> found;
        std::vector<int> perm(A.size());
        std::iota(perm.begin(), perm.end(), 0);
        do {
            if (iso_detail::verify_map(A, A, perm)) found.push_back(perm);
        } while (std::next_permutation(perm.begin(), perm.end()));
        if (found.size() > budgets.aut_count_cap)
            throw BudgetError("automorphism listing exceeds the count cap");
        return found;
    }
    iso_detail::Incidence inc(A);
    iso_detail::SearchState st;
    st.A = &A; st.B = &A; st.incA = &inc; st.incB = &inc;
    st.mapAB.assign(A.size(), -1);
    st.mapBA.assign(A.size(), -1);
    st.seedA.assign(A.size(), -1);
    st.seedB.assign(A.size(), -1);
    st.collect_all = true;
    st.cap = budgets.aut_count_cap + 1;
    st.search();
    if (st.found.size() > budgets.aut_count_cap)
        throw BudgetError("automorphism listing exceeds the count cap");
    std::sort(st.found.begin(), st.found.end());
    return st.found;
}

/// All k-tuples over the universe, ordered lexicographically by universe position.
inline std::vector<Tuple> all_tuples(const FiniteStructure& A, int k) {
    std::vector<Tuple> out;
    Tuple cur(k);
    std::function<void(int)> rec = [&](int pos) {
        if (pos == k) { out.push_back(cur); return; }
        for (ElementId e : A.universe) { cur[pos] = e; rec(pos + 1); }
    };
    rec(0);
    return out;
}

/**
 * Orbit partition of all k-tuples under Aut(A). Cells are sorted by their
 * minimal tuple; two tuples share a cell iff some automorphism maps one to
 * the other (the listing is complete, so these coincide).
 */
inline std::vector<std::vector<Tuple>>
orbits(const FiniteStructure& A, int k, const Budgets& budgets = Budgets{}) {
    const std::size_t n = A.size();
    double count = 1;
    for (int i = 0; i < k; ++i) count *= static_cast<double>(n);
    if (count > static_cast<double>(budgets.orbit_tuple_cap))
        throw BudgetError("|A|^k exceeds the orbit budget");
    auto auts = automorphisms(A, budgets);

    std::size_t total = 1;
    for (int i = 0; i < k; ++i) total *= n;
    std::vector<int> parent(total);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) {
        while (parent[x] != x) { parent[x] = parent[parent[x]]; x = parent[x]; }
        return x;
    };
    auto unite = [&](int x, int y) { parent[find(x)] = find(y); };

    // tuple index = base-n digits of universe positions, most significant first
    std::vector<int> digits(k);
    for (std::size_t idx = 0; idx < total; ++idx) {
        std::size_t rest = idx;
        for (int p = k - 1; p >= 0; --p) { digits[p] = static_cast<int>(rest % n); rest /= n; }
        for (const auto& g : auts) {
            std::size_t img = 0;
            for (int p = 0; p < k; ++p) img = img * n + static_cast<std::size_t>(g[digits[p]]);
            unite(static_cast<int>(idx), static_cast<int>(img));
        }
    }

    std::map<int, std::vector<Tuple>> cells;
    for (std::size_t idx = 0; idx < total; ++idx) {
        std::size_t rest = idx;
        Tuple t(k);
        for (int p = k - 1; p >= 0; --p) { t[p] = A.universe[rest % n]; rest /= n; }
        cells[find(static_cast<int>(idx))].push_back(t);
    }
    std::vector<std::vector<Tuple>> out;
    for (auto& [root, v] : cells) {
        std::sort(v.begin(), v.end());
        out.push_back(std::move(v));
    }
    std::sort(out.begin(), out.end(),
              [](const auto& x, const auto& y) { return x.front() < y.front(); });
    return out;
}

/// Same-orbit decision by pointed isomorphism; independent of the orbit
/// partition route and usable when the full listing would be wasteful.
inline bool same_orbit(const FiniteStructure& A, const Tuple& a, const Tuple& b,
                       const Budgets& budgets = Budgets{}) {
    return isomorphic_pointed(A, a, A, b, budgets).has_value();
}

} // namespace scottkit

#endif // SCOTTKIT_ISOMORPHISM_HPP
