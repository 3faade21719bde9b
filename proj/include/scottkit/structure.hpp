#ifndef SCOTTKIT_STRUCTURE_HPP
#define SCOTTKIT_STRUCTURE_HPP

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "scottkit/config.hpp"

namespace scottkit {

using ElementId = std::int64_t;
using Tuple = std::vector<ElementId>;

/// A relation symbol. Function symbols are represented by their graphs as
/// (arity+1)-ary relations and flagged `functional`.
struct RelSym {
    std::string name;
    int arity = 1;
    bool functional = false;

    friend bool operator==(const RelSym& a, const RelSym& b) {
        return a.name == b.name && a.arity == b.arity && a.functional == b.functional;
    }
};

struct Signature {
    std::vector<RelSym> symbols;

    int index_of(const std::string& name) const {
        for (std::size_t i = 0; i < symbols.size(); ++i)
            if (symbols[i].name == name) return static_cast<int>(i);
        return -1;
    }

    void validate() const {
        std::set<std::string> seen;
        for (const auto& s : symbols) {
            if (s.arity < 1) throw InvalidInput("symbol arity must be >= 1: " + s.name);
            if (!seen.insert(s.name).second) throw InvalidInput("duplicate symbol name: " + s.name);
        }
    }

    friend bool operator==(const Signature& a, const Signature& b) { return a.symbols == b.symbols; }
    friend bool operator!=(const Signature& a, const Signature& b) { return !(a == b); }
};

/**
 * A finite relational structure: universe of element ids plus one finite
 * tuple set per relation symbol. Values are immutable once validated and
 * safe to share across threads.
 */
class FiniteStructure {
public:
    Signature signature;
    std::vector<ElementId> universe;               // sorted ascending, distinct
    std::vector<std::set<Tuple>> relations;        // parallel to signature.symbols

    FiniteStructure() = default;
    FiniteStructure(Signature sig, std::vector<ElementId> univ)
        : signature(std::move(sig)), universe(std::move(univ)),
          relations(signature.symbols.size()) {
        std::sort(universe.begin(), universe.end());
        universe.erase(std::unique(universe.begin(), universe.end()), universe.end());
    }

    std::size_t size() const { return universe.size(); }

    bool has_element(ElementId e) const {
        return std::binary_search(universe.begin(), universe.end(), e);
    }

    /// Position of an element in the sorted universe, -1 when absent.
    int index_of(ElementId e) const {
        auto it = std::lower_bound(universe.begin(), universe.end(), e);
        if (it == universe.end() || *it != e) return -1;
        return static_cast<int>(it - universe.begin());
    }

    bool holds(int sym, const Tuple& t) const { return relations[sym].count(t) > 0; }

    void add_fact(const std::string& sym, Tuple t) {
        int i = signature.index_of(sym);
        if (i < 0) throw InvalidInput("unknown symbol: " + sym);
        relations[i].insert(std::move(t));
    }

    /// Checks arity, universe containment, and totality/single-valuedness of
    /// functional symbols.
    void validate() const {
        signature.validate();
        if (relations.size() != signature.symbols.size())
            throw InvalidInput("relation table count does not match signature");
        for (std::size_t s = 0; s < relations.size(); ++s) {
            const auto& sym = signature.symbols[s];
            for (const auto& t : relations[s]) {
                if (static_cast<int>(t.size()) != sym.arity)
                    throw InvalidInput("tuple arity mismatch for " + sym.name);
                for (ElementId e : t)
                    if (!has_element(e))
                        throw InvalidInput("tuple element outside universe in " + sym.name);
            }
            if (sym.functional) {
                // graph of a total single-valued map on universe^(arity-1)
                std::map<Tuple, ElementId> val;
                for (const auto& t : relations[s]) {
                    Tuple args(t.begin(), t.end() - 1);
                    auto [it, fresh] = val.emplace(args, t.back());
                    if (!fresh && it->second != t.back())
                        throw InvalidInput("functional symbol not single-valued: " + sym.name);
                }
                std::size_t need = 1;
                for (int i = 0; i + 1 < sym.arity; ++i) need *= universe.size();
                if (val.size() != need)
                    throw InvalidInput("functional symbol not total: " + sym.name);
            }
        }
    }

    friend bool operator==(const FiniteStructure& a, const FiniteStructure& b) {
        return a.signature == b.signature && a.universe == b.universe && a.relations == b.relations;
    }
    friend bool operator!=(const FiniteStructure& a, const FiniteStructure& b) { return !(a == b); }
};

/// One atomic fact with a polarity.
struct DiagramFact {
    std::string symbol;
    Tuple tuple;
    bool positive = true;

    friend bool operator<(const DiagramFact& a, const DiagramFact& b) {
        if (a.symbol != b.symbol) return a.symbol < b.symbol;
        if (a.tuple != b.tuple) return a.tuple < b.tuple;
        return a.positive < b.positive;
    }
    friend bool operator==(const DiagramFact& a, const DiagramFact& b) {
        return a.symbol == b.symbol && a.tuple == b.tuple && a.positive == b.positive;
    }
};

/// A finite fragment of an atomic diagram.
struct AtomicDiagram {
    std::set<DiagramFact> facts;

    bool consistent() const {
        for (const auto& f : facts) {
            DiagramFact opp = f;
            opp.positive = !f.positive;
            if (facts.count(opp)) return false;
        }
        return true;
    }

    bool subset_of(const AtomicDiagram& other) const {
        return std::includes(other.facts.begin(), other.facts.end(),
                             facts.begin(), facts.end());
    }

    /// Every element id mentioned by any fact, either polarity.
    std::set<ElementId> mentioned() const {
        std::set<ElementId> out;
        for (const auto& f : facts) out.insert(f.tuple.begin(), f.tuple.end());
        return out;
    }
};

/// The complete diagram of A: every tuple of every symbol, one polarity each.
inline AtomicDiagram complete_diagram(const FiniteStructure& a) {
    AtomicDiagram d;
    for (std::size_t s = 0; s < a.signature.symbols.size(); ++s) {
        const auto& sym = a.signature.symbols[s];
        std::vector<Tuple> all;
        Tuple cur(sym.arity, 0);
        std::function<void(int)> rec = [&](int pos) {
            if (pos == sym.arity) { all.push_back(cur); return; }
            for (ElementId e : a.universe) { cur[pos] = e; rec(pos + 1); }
        };
        if (!a.universe.empty()) rec(0);
        for (auto& t : all)
            d.facts.insert(DiagramFact{sym.name, t, a.holds(static_cast<int>(s), t)});
    }
    return d;
}

/**
 * A monotone, consistent map from diagram fragments to diagram fragments
 * over a disjoint target id space: the finite realization of an enumeration
 * operator between structure classes.
 */
struct DiagramOperator {
    std::string name;
    Signature source_signature;
    Signature target_signature;
    std::function<AtomicDiagram(const AtomicDiagram&)> apply;
};

/**
 * Image structure of A under `op`: by monotonicity this is apply(D(A)) plus
 * the bookkeeping that turns positive facts into relations and mentioned
 * ids into a universe. Throws when the operator output is inconsistent,
 * which signals an operator bug.
 */
inline FiniteStructure apply_operator(const DiagramOperator& op, const FiniteStructure& a) {
    AtomicDiagram image = op.apply(complete_diagram(a));
    if (!image.consistent())
        throw InvalidInput("operator '" + op.name + "' produced an inconsistent diagram");
    auto ids = image.mentioned();
    FiniteStructure b(op.target_signature, std::vector<ElementId>(ids.begin(), ids.end()));
    for (const auto& f : image.facts) {
        if (!f.positive) continue;
        int s = b.signature.index_of(f.symbol);
        if (s < 0) throw InvalidInput("operator emitted unknown symbol " + f.symbol);
        b.relations[s].insert(f.tuple);
    }
    b.validate();
    return b;
}

// ---- convenience builders ----

inline Signature graph_signature() {
    return Signature{{RelSym{"E", 2, false}}};
}

inline Signature order_signature() {
    return Signature{{RelSym{"<", 2, false}}};
}

inline Signature tree_signature() {
    return Signature{{RelSym{"S", 2, false}, RelSym{"root", 1, false}}};
}

/// Simple undirected graph; edges stored symmetrically.
inline FiniteStructure make_graph(std::size_t n, const std::vector<std::pair<ElementId, ElementId>>& edges) {
    std::vector<ElementId> univ(n);
    for (std::size_t i = 0; i < n; ++i) univ[i] = static_cast<ElementId>(i);
    FiniteStructure g(graph_signature(), univ);
    for (auto [u, v] : edges) {
        if (u == v) throw InvalidInput("loops are not allowed in simple graphs");
        g.relations[0].insert({u, v});
        g.relations[0].insert({v, u});
    }
    g.validate();
    return g;
}

/// Strict linear order 0 < 1 < ... < n-1.
inline FiniteStructure make_chain_order(std::size_t n) {
    std::vector<ElementId> univ(n);
    for (std::size_t i = 0; i < n; ++i) univ[i] = static_cast<ElementId>(i);
    FiniteStructure a(order_signature(), univ);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            a.relations[0].insert({static_cast<ElementId>(i), static_cast<ElementId>(j)});
    return a;
}

inline bool graph_has_edge(const FiniteStructure& g, ElementId u, ElementId v) {
    return g.holds(0, {u, v});
}

} // namespace scottkit

#endif // SCOTTKIT_STRUCTURE_HPP
