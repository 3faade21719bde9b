#ifndef SCOTTKIT_EMBED_ORDER_HPP
#define SCOTTKIT_EMBED_ORDER_HPP

#include <json.hpp>

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "scottkit/config.hpp"
#include "scottkit/order_partition.hpp"
#include "scottkit/rational.hpp"
#include "scottkit/structure.hpp"

namespace scottkit {

/**
 * Element of the lexicographic order: body q1 r1 q2 r2 ... qn rn followed by
 * a natural tail k, compared as a flat sequence of rationals with a proper
 * prefix below its extensions. Membership in the image of a graph G
 * additionally requires class_of(q_i) to name vertices of G, r_i in Q_0 for
 * i < n, r_n in Q_1, and k below the 1-based index bound of the tuple's
 * atomic type.
 */
struct OrderElement {
    std::vector<Rational> body;   // alternating q r, even length
    long tail = 0;

    std::size_t pairs() const { return body.size() / 2; }

    std::vector<Rational> flatten() const {
        std::vector<Rational> out = body;
        out.push_back(Rational(tail));
        return out;
    }

    friend bool operator==(const OrderElement& a, const OrderElement& b) {
        return a.body == b.body && a.tail == b.tail;
    }
    friend bool operator!=(const OrderElement& a, const OrderElement& b) { return !(a == b); }
    friend bool operator<(const OrderElement& a, const OrderElement& b) {
        std::size_t n = std::min(a.body.size(), b.body.size());
        for (std::size_t i = 0; i < n; ++i) {
            if (a.body[i] < b.body[i]) return true;
            if (b.body[i] < a.body[i]) return false;
        }
        if (a.body.size() < b.body.size()) {
            Rational at(a.tail);
            if (at < b.body[n]) return true;
            if (b.body[n] < at) return false;
            return true;   // a is a proper prefix of b
        }
        if (b.body.size() < a.body.size()) {
            Rational bt(b.tail);
            if (a.body[n] < bt) return true;
            if (bt < a.body[n]) return false;
            return false;  // b is a proper prefix of a
        }
        return a.tail < b.tail;
    }
};

inline nlohmann::json order_element_to_json(const OrderElement& x) {
    nlohmann::json body = nlohmann::json::array();
    for (const auto& q : x.body) body.push_back({q.num().get_str(), q.den().get_str()});
    return nlohmann::json{{"body", body}, {"tail", x.tail}};
}

inline OrderElement order_element_from_json(const nlohmann::json& j) {
    OrderElement x;
    for (const auto& p : j.at("body"))
        x.body.push_back(Rational(mpz_class(p.at(0).get<std::string>()),
                                  mpz_class(p.at(1).get<std::string>())));
    x.tail = j.at("tail").get<long>();
    if (x.body.size() % 2 != 0) throw InvalidInput("body must alternate q r pairs");
    if (x.tail < 0) throw InvalidInput("tail must be a natural");
    return x;
}

// ---- atomic types of graph tuples ----

/**
 * Equality and adjacency pattern of n abstract variables. Encoded as the
 * distinctness bits (pair (i,j), i<j, lexicographic; 0 means equal) followed
 * by the adjacency bits, so patterns with equalities enumerate first.
 */
struct TuplePattern {
    int n = 0;
    std::vector<bool> distinct;   // C(n,2) bits
    std::vector<bool> edge;       // C(n,2) bits

    static int pair_index(int i, int j, int n) {
        // pairs (0,1),(0,2),...,(0,n-1),(1,2),...
        return i * n - i * (i + 1) / 2 + (j - i - 1);
    }

    bool distinct_at(int i, int j) const {
        if (i == j) return false;
        if (i > j) std::swap(i, j);
        return distinct[pair_index(i, j, n)];
    }
    bool edge_at(int i, int j) const {
        if (i == j) return false;
        if (i > j) std::swap(i, j);
        return edge[pair_index(i, j, n)];
    }

    bool consistent() const {
        // equality must be transitive, loops are forbidden, and adjacency
        // must be a congruence for it
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                if (i == j) continue;
                if (!distinct_at(i, j)) {
                    if (edge_at(i, j)) return false;
                    for (int l = 0; l < n; ++l) {
                        if (l == i || l == j) continue;
                        if (distinct_at(i, l) != distinct_at(j, l)) return false;
                        if (edge_at(i, l) != edge_at(j, l)) return false;
                    }
                }
            }
        return true;
    }

    static TuplePattern of_tuple(const FiniteStructure& g, const Tuple& t) {
        TuplePattern p;
        p.n = static_cast<int>(t.size());
        for (int i = 0; i < p.n; ++i)
            for (int j = i + 1; j < p.n; ++j) {
                p.distinct.push_back(t[i] != t[j]);
                p.edge.push_back(graph_has_edge(g, t[i], t[j]));
            }
        return p;
    }

    std::vector<bool> encoding() const {
        std::vector<bool> bits = distinct;
        bits.insert(bits.end(), edge.begin(), edge.end());
        return bits;
    }
};

namespace order_detail {

/// Number of consistent patterns on exactly n variables.
inline long consistent_pattern_count(int n) {
    static std::vector<long> cache{1};   // n = 0: the empty pattern
    while (static_cast<int>(cache.size()) <= n) {
        int m = static_cast<int>(cache.size());
        int bits = m * (m - 1) / 2;
        if (2 * bits > 24) throw BudgetError("atomic-type enumeration too wide");
        long count = 0;
        for (long mask = 0; mask < (1l << (2 * bits)); ++mask) {
            TuplePattern p;
            p.n = m;
            for (int b = 0; b < bits; ++b) p.distinct.push_back(mask >> b & 1);
            for (int b = 0; b < bits; ++b) p.edge.push_back(mask >> (bits + b) & 1);
            if (p.consistent()) ++count;
        }
        cache.push_back(count);
    }
    return cache[n];
}

} // namespace order_detail

/**
 * Index of a pattern in the canonical enumeration: all consistent types on
 * fewer variables first, then same-width types by the lexicographic order
 * of (distinctness bits, adjacency bits).
 */
inline long atomic_type_index(const TuplePattern& pattern) {
    if (pattern.n < 1) throw InvalidInput("patterns need at least one variable");
    if (!pattern.consistent()) throw InvalidInput("inconsistent tuple pattern");
    long index = 0;
    for (int m = 1; m < pattern.n; ++m) index += order_detail::consistent_pattern_count(m);
    int bits = pattern.n * (pattern.n - 1) / 2;
    auto mine = pattern.encoding();
    for (long mask = 0;; ++mask) {
        TuplePattern p;
        p.n = pattern.n;
        for (int b = 0; b < bits; ++b) p.distinct.push_back(mask >> b & 1);
        for (int b = 0; b < bits; ++b) p.edge.push_back(mask >> (bits + b) & 1);
        if (p.encoding() == mine) return index;
        if (p.consistent()) ++index;
    }
}

/// The strict upper bound for tails of elements representing this tuple:
/// the 1-based position of its type, so every type admits at least tail 0
/// and block sizes grow with the enumeration.
inline long type_tail_bound(const FiniteStructure& g, const Tuple& t) {
    return atomic_type_index(TuplePattern::of_tuple(g, t)) + 1;
}

// ---- membership, the tuple maps, and blocks ----

namespace order_detail {

/// Classes of the q positions when shape and r-classes check out.
inline std::optional<Tuple> read_tuple(const FiniteStructure& g, const OrderElement& x,
                                       DensePartition& dp) {
    const std::size_t n = x.pairs();
    if (n == 0 || x.body.size() % 2 != 0) return std::nullopt;
    if (x.tail < 0) return std::nullopt;
    Tuple t;
    for (std::size_t i = 0; i < n; ++i) {
        int qa = dp.class_of(x.body[2 * i]);
        int ra = dp.class_of(x.body[2 * i + 1]);
        if (!g.has_element(qa)) return std::nullopt;
        int want = (i + 1 < n) ? 0 : 1;
        if (ra != want) return std::nullopt;
        t.push_back(qa);
    }
    return t;
}

} // namespace order_detail

inline bool member(const FiniteStructure& g, const OrderElement& x,
                   DensePartition& dp = DensePartition::shared()) {
    if (g.signature != graph_signature()) throw InvalidInput("expected a graph");
    auto t = order_detail::read_tuple(g, x, dp);
    if (!t) return false;
    return x.tail < type_tail_bound(g, *t);
}

/// Canonical element representing a tuple: first-in-class rationals per
/// position and tail 0.
inline OrderElement f_map(const FiniteStructure& g, const Tuple& t,
                          DensePartition& dp = DensePartition::shared()) {
    if (t.empty()) throw InvalidInput("f_map needs a nonempty tuple");
    OrderElement x;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (!g.has_element(t[i])) throw InvalidInput("tuple element outside the graph");
        x.body.push_back(dp.first_in_class(static_cast<int>(t[i])));
        x.body.push_back(dp.first_in_class(i + 1 < t.size() ? 0 : 1));
    }
    x.tail = 0;
    return x;
}

/// Reads the represented tuple back off a left limit point (tail 0).
inline Tuple g_decode(const FiniteStructure& g, const OrderElement& x,
                      DensePartition& dp = DensePartition::shared()) {
    if (x.tail != 0) throw InvalidInput("g_decode expects a tail-0 element");
    if (!member(g, x, dp)) throw InvalidInput("g_decode expects a member of the image");
    return *order_detail::read_tuple(g, x, dp);
}

/**
 * The maximal discrete set containing x is {same body, tail k : k < bound};
 * returns x's position (its tail) and the block size (the bound), both read
 * off the element itself.
 */
inline std::pair<long, long> discrete_block(const FiniteStructure& g, const OrderElement& x,
                                            DensePartition& dp = DensePartition::shared()) {
    if (!member(g, x, dp)) throw InvalidInput("discrete_block expects a member of the image");
    auto t = *order_detail::read_tuple(g, x, dp);
    return {x.tail, type_tail_bound(g, t)};
}

/**
 * The interval formula between two members: every element strictly between
 * x and y lies in a maximal discrete block of size at least m. Membership
 * makes block sizes computable from the element itself, so over a fragment
 * the check is exact on the fragment's elements; a counterexample found is
 * definitive.
 */
inline bool interval_blocks_at_least(const FiniteStructure& g,
                                     const std::vector<OrderElement>& fragment,
                                     const OrderElement& x, const OrderElement& y, long m,
                                     DensePartition& dp = DensePartition::shared()) {
    const OrderElement& lo = x < y ? x : y;
    const OrderElement& hi = x < y ? y : x;
    for (const auto& z : fragment) {
        if (!(lo < z && z < hi)) continue;
        if (discrete_block(g, z, dp).second < m) return false;
    }
    return true;
}

/**
 * Every member with at most max_pairs q-r pairs whose rationals (tail
 * included) have height at most max_height, in ascending order. Fragments
 * are nested as either bound grows.
 */
inline std::vector<OrderElement> enumerate_fragment(const FiniteStructure& g, int max_pairs,
                                                    long long max_height,
                                                    DensePartition& dp = DensePartition::shared(),
                                                    const Budgets& budgets = Budgets{}) {
    if (g.signature != graph_signature()) throw InvalidInput("expected a graph");
    if (max_pairs < 0 || max_height < 1) throw InvalidInput("empty fragment bounds");
    std::map<ElementId, std::vector<Rational>> qpool;
    for (ElementId v : g.universe)
        qpool[v] = dp.class_members_up_to_height(static_cast<int>(v), max_height);
    auto r0 = dp.class_members_up_to_height(0, max_height);
    auto r1 = dp.class_members_up_to_height(1, max_height);

    std::vector<OrderElement> out;
    std::vector<Tuple> tuples;
    Tuple cur;
    std::function<void(int)> walk = [&](int depth) {
        if (depth > 0) tuples.push_back(cur);
        if (depth == max_pairs) return;
        for (ElementId v : g.universe) {
            cur.push_back(v);
            walk(depth + 1);
            cur.pop_back();
        }
    };
    walk(0);

    for (const auto& t : tuples) {
        long bound = type_tail_bound(g, t);
        long max_tail = std::min<long>(bound - 1, static_cast<long>(max_height));
        std::vector<OrderElement> partial{{OrderElement{{}, 0}}};
        for (std::size_t i = 0; i < t.size(); ++i) {
            std::vector<OrderElement> next;
            const auto& rs = (i + 1 < t.size()) ? r0 : r1;
            for (const auto& base : partial)
                for (const auto& q : qpool[t[i]])
                    for (const auto& r : rs) {
                        OrderElement e = base;
                        e.body.push_back(q);
                        e.body.push_back(r);
                        next.push_back(std::move(e));
                    }
            partial = std::move(next);
            if (partial.size() > budgets.fragment_cap)
                throw BudgetError("fragment exceeds the element budget");
        }
        for (const auto& base : partial)
            for (long k = 0; k <= max_tail; ++k) {
                OrderElement e = base;
                e.tail = k;
                out.push_back(std::move(e));
                if (out.size() > budgets.fragment_cap)
                    throw BudgetError("fragment exceeds the element budget");
            }
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace scottkit

#endif // SCOTTKIT_EMBED_ORDER_HPP
