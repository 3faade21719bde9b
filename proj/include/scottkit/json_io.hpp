#ifndef SCOTTKIT_JSON_IO_HPP
#define SCOTTKIT_JSON_IO_HPP

#include <json.hpp>

#include <functional>
#include <sstream>
#include <string>

#include "scottkit/structure.hpp"

namespace scottkit {

using nlohmann::json;

/**
 * Canonical JSON form of a structure:
 *   { "signature": [{"name","arity","functional"}],
 *     "universe": [ids ascending],
 *     "relations": {"name": [[tuple] lexicographic]} }
 */
inline json structure_to_json(const FiniteStructure& a) {
    json sig = json::array();
    for (const auto& s : a.signature.symbols)
        sig.push_back({{"name", s.name}, {"arity", s.arity}, {"functional", s.functional}});
    json rels = json::object();
    for (std::size_t s = 0; s < a.signature.symbols.size(); ++s) {
        json tuples = json::array();
        for (const auto& t : a.relations[s]) tuples.push_back(t);   // std::set is lexicographic
        rels[a.signature.symbols[s].name] = tuples;
    }
    return json{{"signature", sig}, {"universe", a.universe}, {"relations", rels}};
}

inline FiniteStructure structure_from_json(const json& j) {
    Signature sig;
    for (const auto& s : j.at("signature"))
        sig.symbols.push_back(RelSym{s.at("name").get<std::string>(),
                                     s.at("arity").get<int>(),
                                     s.value("functional", false)});
    FiniteStructure a(sig, j.at("universe").get<std::vector<ElementId>>());
    const auto& rels = j.at("relations");
    for (std::size_t s = 0; s < sig.symbols.size(); ++s) {
        auto it = rels.find(sig.symbols[s].name);
        if (it == rels.end()) continue;
        for (const auto& t : *it) a.relations[s].insert(t.get<Tuple>());
    }
    a.validate();
    return a;
}

/**
 * DOT export for structures whose signature is a single binary relation
 * (graphs, successor trees). Symmetric relations render as an undirected
 * graph; otherwise a digraph. `color_of` may map vertices to fill colors.
 */
inline std::string structure_to_dot(const FiniteStructure& a,
                                    const std::function<std::string(ElementId)>& color_of = nullptr) {
    if (a.signature.symbols.empty()) throw InvalidInput("DOT export needs a relation");
    int bin = -1;
    for (std::size_t s = 0; s < a.signature.symbols.size(); ++s)
        if (a.signature.symbols[s].arity == 2) { bin = static_cast<int>(s); break; }
    if (bin < 0) throw InvalidInput("DOT export needs a binary relation");

    bool symmetric = true;
    for (const auto& t : a.relations[bin])
        if (!a.relations[bin].count({t[1], t[0]})) { symmetric = false; break; }

    std::ostringstream os;
    os << (symmetric ? "graph" : "digraph") << " G {\n";
    for (ElementId v : a.universe) {
        os << "  n" << v;
        if (color_of) os << " [style=filled, fillcolor=\"" << color_of(v) << "\"]";
        os << ";\n";
    }
    for (const auto& t : a.relations[bin]) {
        if (symmetric && t[0] > t[1]) continue;
        if (symmetric && t[0] == t[1]) continue;
        os << "  n" << t[0] << (symmetric ? " -- n" : " -> n") << t[1] << ";\n";
    }
    // unary relations annotate as labels
    for (std::size_t s = 0; s < a.signature.symbols.size(); ++s) {
        if (a.signature.symbols[s].arity != 1) continue;
        for (const auto& t : a.relations[s])
            os << "  n" << t[0] << " [xlabel=\"" << a.signature.symbols[s].name << "\"];\n";
    }
    os << "}\n";
    return os.str();
}

} // namespace scottkit

#endif // SCOTTKIT_JSON_IO_HPP
