#ifndef SCOTTKIT_FIELD_HPP
#define SCOTTKIT_FIELD_HPP

#include <json.hpp>

#include <algorithm>
#include <map>
#include <set>
#include <vector>

#include "scottkit/config.hpp"
#include "scottkit/polynomial.hpp"
#include "scottkit/structure.hpp"

namespace scottkit {

/**
 * A graph coded as a radical tower: one transcendental b_i per vertex over
 * the prime field, and for every edge {i,j} a generator s_ij with
 * s_ij^2 = b_i + b_j (cube roots in characteristic 2). Elements are maps
 * from reduced radical products to rational-function coefficients.
 */
struct FieldPresentation {
    long characteristic = 0;                      // 0 or a prime
    int vertex_count = 0;                         // generators b_1..b_n
    std::vector<std::pair<int, int>> radicals;    // sorted edge labels, i < j, 0-based

    CoeffRing ring() const { return CoeffRing{characteristic}; }
    int radical_degree() const { return characteristic == 2 ? 3 : 2; }

    int radical_index(int i, int j) const {
        if (i > j) std::swap(i, j);
        for (std::size_t e = 0; e < radicals.size(); ++e)
            if (radicals[e] == std::make_pair(i, j)) return static_cast<int>(e);
        return -1;
    }

    /// b_i + b_j over the base function field.
    MPoly form(int i, int j) const {
        CoeffRing R = ring();
        return MPoly::add(MPoly::variable(vertex_count, i, R),
                          MPoly::variable(vertex_count, j, R), R);
    }

    void validate() const {
        if (characteristic != 0) {
            if (characteristic < 2) throw InvalidInput("characteristic must be 0 or prime");
            for (long d = 2; d * d <= characteristic; ++d)
                if (characteristic % d == 0) throw InvalidInput("characteristic must be 0 or prime");
        }
        std::set<std::pair<int, int>> seen;
        for (auto [i, j] : radicals) {
            if (i < 0 || j < 0 || i >= vertex_count || j >= vertex_count)
                throw InvalidInput("radical label outside the vertex range");
            if (i >= j) throw InvalidInput("radical labels must satisfy i < j");
            if (!seen.insert({i, j}).second) throw InvalidInput("duplicate radical label");
        }
    }
};

/// Exponent vector over the presentation's radicals, entries below the
/// radical degree; the all-zero key is the base-field component.
using RadicalKey = std::vector<std::uint8_t>;

struct FieldElement {
    std::map<RadicalKey, RationalFunction> terms;

    bool is_zero() const { return terms.empty(); }

    bool is_base() const {
        return terms.empty() ||
               (terms.size() == 1 &&
                std::all_of(terms.begin()->first.begin(), terms.begin()->first.end(),
                            [](std::uint8_t e) { return e == 0; }));
    }
};

namespace field_detail {

inline void put_term(FieldElement& x, const RadicalKey& key, const RationalFunction& c,
                     const CoeffRing& R) {
    if (c.is_zero()) return;
    auto it = x.terms.find(key);
    if (it == x.terms.end()) {
        x.terms.emplace(key, c);
        return;
    }
    it->second = RationalFunction::add(it->second, c, R);
    if (it->second.is_zero()) x.terms.erase(it);
}

} // namespace field_detail

inline FieldElement fe_zero(const FieldPresentation&) { return FieldElement{}; }

inline FieldElement fe_constant(const FieldPresentation& f, const mpz_class& z) {
    FieldElement x;
    auto c = RationalFunction::constant(f.vertex_count, z, f.ring());
    if (!c.is_zero()) x.terms.emplace(RadicalKey(f.radicals.size(), 0), c);
    return x;
}

inline FieldElement fe_one(const FieldPresentation& f) { return fe_constant(f, 1); }

inline FieldElement fe_from_rf(const FieldPresentation& f, RationalFunction c) {
    FieldElement x;
    if (!c.is_zero()) x.terms.emplace(RadicalKey(f.radicals.size(), 0), std::move(c));
    return x;
}

/// The vertex generator b_i.
inline FieldElement fe_generator(const FieldPresentation& f, int i) {
    CoeffRing R = f.ring();
    return fe_from_rf(f, RationalFunction::make(MPoly::variable(f.vertex_count, i, R),
                                                MPoly::constant(f.vertex_count, 1, R), R));
}

/// The radical s_e itself.
inline FieldElement fe_radical(const FieldPresentation& f, int e) {
    if (e < 0 || e >= static_cast<int>(f.radicals.size()))
        throw InvalidInput("radical index out of range");
    FieldElement x;
    RadicalKey key(f.radicals.size(), 0);
    key[e] = 1;
    x.terms.emplace(key, RationalFunction::constant(f.vertex_count, 1, f.ring()));
    return x;
}

inline FieldElement fe_add(const FieldPresentation& f, const FieldElement& x, const FieldElement& y) {
    CoeffRing R = f.ring();
    FieldElement out = x;
    for (const auto& [k, c] : y.terms) field_detail::put_term(out, k, c, R);
    return out;
}

inline FieldElement fe_neg(const FieldPresentation& f, const FieldElement& x) {
    CoeffRing R = f.ring();
    FieldElement out;
    for (const auto& [k, c] : x.terms) out.terms.emplace(k, RationalFunction::neg(c, R));
    return out;
}

inline FieldElement fe_sub(const FieldPresentation& f, const FieldElement& x, const FieldElement& y) {
    return fe_add(f, x, fe_neg(f, y));
}

/// Product with radical reduction: s_e^d wraps to (b_i + b_j) once the
/// exponent reaches the radical degree.
inline FieldElement fe_mul(const FieldPresentation& f, const FieldElement& x, const FieldElement& y) {
    CoeffRing R = f.ring();
    const int deg = f.radical_degree();
    FieldElement out;
    for (const auto& [kx, cx] : x.terms)
        for (const auto& [ky, cy] : y.terms) {
            RadicalKey key(f.radicals.size(), 0);
            RationalFunction c = RationalFunction::mul(cx, cy, R);
            for (std::size_t e = 0; e < key.size(); ++e) {
                int sum = kx[e] + ky[e];
                if (sum >= deg) {
                    sum -= deg;
                    auto [i, j] = f.radicals[e];
                    c = RationalFunction::mul(
                        c, RationalFunction::make(f.form(i, j),
                                                  MPoly::constant(f.vertex_count, 1, R), R),
                        R);
                }
                key[e] = static_cast<std::uint8_t>(sum);
            }
            field_detail::put_term(out, key, c, R);
        }
    return out;
}

inline bool fe_equal(const FieldPresentation& f, const FieldElement& x, const FieldElement& y) {
    return fe_sub(f, x, y).is_zero();
}

namespace field_detail {

/// Components of x along powers of radical e: out[d] collects the terms
/// with exponent d at e, with that exponent cleared.
inline std::vector<FieldElement> split(const FieldPresentation& f, const FieldElement& x, int e) {
    std::vector<FieldElement> out(f.radical_degree());
    for (const auto& [k, c] : x.terms) {
        RadicalKey key = k;
        int d = key[e];
        key[e] = 0;
        out[d].terms.emplace(key, c);
    }
    return out;
}

/// Multiplies by s_e^d without reduction; x must not mention s_e.
inline FieldElement shift(const FieldPresentation&, const FieldElement& x, int e, int d) {
    FieldElement out;
    for (const auto& [k, c] : x.terms) {
        RadicalKey key = k;
        if (key[e] != 0) throw InvalidInput("shift over an occupied radical");
        key[e] = static_cast<std::uint8_t>(d);
        out.terms.emplace(key, c);
    }
    return out;
}

} // namespace field_detail

/**
 * Multiplicative inverse by descending the tower: writing x = a + b*s over
 * the top occupied radical s (quadratic case), x * (a - b*s) eliminates s;
 * the cubic case uses the adjugate a^2-bc*f + (c^2*f-ab)s + (b^2-ac)s^2.
 * Each step strictly reduces the set of radicals, ending in the base field.
 */
inline FieldElement fe_inv(const FieldPresentation& f, const FieldElement& x) {
    if (x.is_zero()) throw InvalidInput("division by zero");
    CoeffRing R = f.ring();
    int top = -1;
    for (const auto& [k, c] : x.terms)
        for (int e = static_cast<int>(k.size()) - 1; e > top; --e)
            if (k[e] != 0) top = e;
    if (top < 0) {
        FieldElement out = x;
        auto it = out.terms.begin();
        it->second = RationalFunction::inv(it->second, R);
        return out;
    }
    auto parts = field_detail::split(f, x, top);
    auto [i, j] = f.radicals[top];
    FieldElement fe_form = fe_from_rf(
        f, RationalFunction::make(f.form(i, j), MPoly::constant(f.vertex_count, 1, R), R));

    FieldElement cofactor;
    if (f.radical_degree() == 2) {
        const FieldElement &a = parts[0], &b = parts[1];
        cofactor = fe_sub(f, a, field_detail::shift(f, b, top, 1));
    } else {
        const FieldElement &a = parts[0], &b = parts[1], &c = parts[2];
        FieldElement c0 = fe_sub(f, fe_mul(f, a, a), fe_mul(f, fe_mul(f, b, c), fe_form));
        FieldElement c1 = fe_sub(f, fe_mul(f, fe_mul(f, c, c), fe_form), fe_mul(f, a, b));
        FieldElement c2 = fe_sub(f, fe_mul(f, b, b), fe_mul(f, a, c));
        cofactor = fe_add(f, c0, fe_add(f, field_detail::shift(f, c1, top, 1),
                                        field_detail::shift(f, c2, top, 2)));
    }
    FieldElement norm = fe_mul(f, x, cofactor);
    for (const auto& [k, c] : norm.terms)
        if (k[top] != 0) throw InvalidInput("norm failed to eliminate the top radical");
    return fe_mul(f, cofactor, fe_inv(f, norm));
}

// ---- the coding and its decoder ----

/// Presentation of a simple undirected graph: one generator per vertex, one
/// radical per edge; deterministic labeling by universe position.
inline FieldPresentation build_field(const FiniteStructure& g, long characteristic) {
    if (g.signature != graph_signature()) throw InvalidInput("expected a graph");
    FieldPresentation f;
    f.characteristic = characteristic;
    f.vertex_count = static_cast<int>(g.size());
    for (const auto& e : g.relations[0]) {
        int i = g.index_of(e[0]), j = g.index_of(e[1]);
        if (i < j) f.radicals.push_back({i, j});
    }
    std::sort(f.radicals.begin(), f.radicals.end());
    f.validate();
    return f;
}

/// Square (or cube) class data of a base-field element of linear-form shape:
/// exponents over the forms b_i + b_j plus the leftover scalar.
struct SquareClass {
    std::map<std::pair<int, int>, int> form_exponents;
    mpz_class scalar;

    /// The canonical square-free representative: product of the forms with
    /// exponent 1 after reduction, content-free, lead coefficient 1.
    MPoly representative(const FieldPresentation& f, int modulus) const {
        CoeffRing R = f.ring();
        MPoly rep = MPoly::constant(f.vertex_count, 1, R);
        for (const auto& [e, n] : form_exponents)
            for (int k = 0; k < n % modulus; ++k)
                rep = MPoly::mul(rep, f.form(e.first, e.second), R);
        return rep;
    }
};

/**
 * Factors a base-field element d into prod (b_i+b_j)^e times a scalar, by
 * trial division over all vertex pairs. Throws when d is outside the
 * supported shape (a leftover that is not a scalar).
 */
inline SquareClass square_class(const FieldPresentation& f, const FieldElement& d) {
    if (!d.is_base()) throw InvalidInput("radical membership needs a base-field element");
    if (d.is_zero()) throw InvalidInput("zero has no radical class");
    CoeffRing R = f.ring();
    const auto& rf = d.terms.begin()->second;
    // num/den agrees with num*den^(deg-1) modulo deg-th powers
    MPoly p = rf.num;
    for (int k = 1; k < f.radical_degree(); ++k) p = MPoly::mul(p, rf.den, R);
    SquareClass out;
    for (int i = 0; i < f.vertex_count; ++i)
        for (int j = i + 1; j < f.vertex_count; ++j) {
            MPoly form = f.form(i, j);
            if (form.is_zero()) continue;
            while (true) {
                auto q = MPoly::try_divide(p, form, R);
                if (!q) break;
                p = *q;
                ++out.form_exponents[{i, j}];
            }
        }
    if (!p.is_constant())
        throw InvalidInput("element is not a scalar multiple of a product of the linear forms");
    out.scalar = p.constant_value();
    return out;
}

namespace field_detail {

inline bool scalar_has_root(long characteristic, const mpz_class& z, int degree) {
    if (characteristic == 0) {
        if (degree == 2) return z > 0 && mpz_perfect_square_p(z.get_mpz_t());
        mpz_class r;
        return mpz_root(r.get_mpz_t(), z.get_mpz_t(), degree) != 0;
    }
    // F_p: brute scan is exact and cheap for the scalar residues in play
    mpz_class zr = z % characteristic;
    if (zr < 0) zr += characteristic;
    for (long s = 0; s < characteristic; ++s) {
        mpz_class pw = 1;
        for (int k = 0; k < degree; ++k) pw = (pw * s) % characteristic;
        if (pw == zr) return true;
    }
    return false;
}

} // namespace field_detail

/**
 * Membership of the square root (cube root in characteristic 2) of d in the
 * tower: the forms with exponent not divisible by the radical degree must
 * all be edge labels, and the leftover scalar must have a root in the prime
 * field. The forms are pairwise non-associate irreducibles, so the matching
 * edge subset is unique.
 */
inline bool has_root(const FieldPresentation& f, const FieldElement& d) {
    const int deg = f.radical_degree();
    SquareClass cls = square_class(f, d);
    for (const auto& [e, n] : cls.form_exponents) {
        if (n % deg == 0) continue;
        if (f.radical_index(e.first, e.second) < 0) return false;
    }
    return field_detail::scalar_has_root(f.characteristic, cls.scalar, deg);
}

/// has_root on b_i + b_j given by vertex indices.
inline bool has_root_form(const FieldPresentation& f, int i, int j) {
    CoeffRing R = f.ring();
    return has_root(f, fe_from_rf(f, RationalFunction::make(
                                         f.form(i, j), MPoly::constant(f.vertex_count, 1, R), R)));
}

/// Rebuilds the graph: vertices 0..n-1, an edge exactly where the root of
/// b_i + b_j exists in the tower.
inline FiniteStructure decode_field(const FieldPresentation& f) {
    std::vector<std::pair<ElementId, ElementId>> edges;
    for (int i = 0; i < f.vertex_count; ++i)
        for (int j = i + 1; j < f.vertex_count; ++j)
            if (has_root_form(f, i, j)) edges.push_back({i, j});
    return make_graph(f.vertex_count, edges);
}

// ---- serialization ----

inline nlohmann::json field_to_json(const FieldPresentation& f) {
    nlohmann::json rads = nlohmann::json::array();
    for (auto [i, j] : f.radicals) rads.push_back({i, j});
    return nlohmann::json{{"characteristic", f.characteristic},
                          {"vertex_count", f.vertex_count},
                          {"radicals", rads}};
}

inline FieldPresentation field_from_json(const nlohmann::json& j) {
    FieldPresentation f;
    f.characteristic = j.at("characteristic").get<long>();
    f.vertex_count = j.at("vertex_count").get<int>();
    for (const auto& e : j.at("radicals"))
        f.radicals.push_back({e.at(0).get<int>(), e.at(1).get<int>()});
    f.validate();
    return f;
}

inline nlohmann::json element_to_json(const FieldPresentation& f, const FieldElement& x) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& [k, c] : x.terms) {
        nlohmann::json rads = nlohmann::json::array();
        for (std::size_t e = 0; e < k.size(); ++e)
            if (k[e] != 0) rads.push_back({f.radicals[e].first, f.radicals[e].second, k[e]});
        arr.push_back({{"radicals", rads}, {"coeff", c.to_json()}});
    }
    return arr;
}

inline FieldElement element_from_json(const FieldPresentation& f, const nlohmann::json& j) {
    CoeffRing R = f.ring();
    FieldElement x;
    for (const auto& term : j) {
        RadicalKey key(f.radicals.size(), 0);
        for (const auto& r : term.at("radicals")) {
            int e = f.radical_index(r.at(0).get<int>(), r.at(1).get<int>());
            if (e < 0) throw InvalidInput("unknown radical in element");
            int exp = r.size() > 2 ? r.at(2).get<int>() : 1;
            if (exp < 0 || exp >= f.radical_degree()) throw InvalidInput("exponent out of range");
            key[e] = static_cast<std::uint8_t>(exp);
        }
        field_detail::put_term(x, key, RationalFunction::from_json(term.at("coeff"), f.vertex_count, R), R);
    }
    return x;
}

} // namespace scottkit

#endif // SCOTTKIT_FIELD_HPP
