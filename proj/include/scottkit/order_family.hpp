#ifndef SCOTTKIT_ORDER_FAMILY_HPP
#define SCOTTKIT_ORDER_FAMILY_HPP

#include <map>
#include <optional>
#include <vector>

#include "scottkit/embed_order.hpp"

namespace scottkit {

namespace order_detail {

inline std::size_t common_prefix(const std::vector<Rational>& a, const std::vector<Rational>& b) {
    std::size_t n = std::min(a.size(), b.size());
    std::size_t i = 0;
    while (i < n && a[i] == b[i]) ++i;
    return i;
}

/// Largest odd threshold at or below c; the family's conditions only see
/// agreement through lengths 2m-1.
inline std::size_t quantize_odd(std::size_t c) {
    if (c == 0) return 0;
    return c % 2 == 1 ? c : c - 1;
}

} // namespace order_detail

/**
 * The back-and-forth family of finite partial maps between the images of two
 * isomorphic graphs. A map belongs to the family when it is an order
 * isomorphism between members, carries each represented tuple through the
 * graph isomorphism, preserves last terms (positions inside maximal discrete
 * blocks), and preserves common initial segments of every odd length 2m-1.
 *
 * For lexicographically ordered x < y < z, the first difference of x and z
 * happens at the smaller of the two pairwise difference positions, so both
 * the order condition and the prefix condition over all pairs reduce to
 * consecutive pairs, and the strongest-agreeing partner of a new element is
 * always one of its order neighbors. `contains` and `extend` lean on both
 * reductions.
 */
class OrderBackForthFamily {
public:
    /// Pairs in ascending domain order.
    using PartialMap = std::map<OrderElement, OrderElement>;

    OrderBackForthFamily(const FiniteStructure& g, const FiniteStructure& g2,
                         std::map<ElementId, ElementId> vertex_map,
                         DensePartition& dp = DensePartition::shared())
        : g_(&g), g2_(&g2), f_(std::move(vertex_map)), dp_(&dp) {
        if (g.signature != graph_signature() || g2.signature != graph_signature())
            throw InvalidInput("expected graphs");
        if (f_.size() != g.size()) throw InvalidInput("vertex map must cover the domain graph");
        std::map<ElementId, ElementId> seen;
        for (auto [u, v] : f_) {
            if (!g.has_element(u) || !g2.has_element(v))
                throw InvalidInput("vertex map outside the graphs");
            if (!seen.emplace(v, u).second) throw InvalidInput("vertex map is not injective");
        }
        for (auto [u, v] : f_)
            for (auto [u2, v2] : f_)
                if (graph_has_edge(g, u, u2) != graph_has_edge(g2, v, v2))
                    throw InvalidInput("vertex map is not a graph isomorphism");
    }

    const std::map<ElementId, ElementId>& vertex_map() const { return f_; }

    /// Membership test for the family's conditions.
    bool contains(const PartialMap& p) const {
        const OrderElement* prev_dom = nullptr;
        const OrderElement* prev_img = nullptr;
        std::vector<Rational> prev_dom_flat, prev_img_flat;
        for (const auto& [b, c] : p) {
            if (!member(*g_, b, *dp_) || !member(*g2_, c, *dp_)) return false;
            if (b.tail != c.tail) return false;
            Tuple t = *order_detail::read_tuple(*g_, b, *dp_);
            Tuple u = *order_detail::read_tuple(*g2_, c, *dp_);
            if (t.size() != u.size()) return false;
            for (std::size_t i = 0; i < t.size(); ++i)
                if (f_.at(t[i]) != u[i]) return false;
            auto dom_flat = b.flatten();
            auto img_flat = c.flatten();
            if (prev_dom) {
                if (!(*prev_img < c)) return false;   // images ascend with domains
                if (order_detail::quantize_odd(order_detail::common_prefix(prev_dom_flat, dom_flat)) !=
                    order_detail::quantize_odd(order_detail::common_prefix(prev_img_flat, img_flat)))
                    return false;
            }
            prev_dom = &b;
            prev_img = &c;
            prev_dom_flat = std::move(dom_flat);
            prev_img_flat = std::move(img_flat);
        }
        return true;
    }

    /**
     * Extends p by b: copies the stronger-agreeing neighbor's image through
     * the shared odd-length prefix, then completes position by position
     * strictly inside the image-side gap, drawing class-correct rationals
     * from the partition. Returns the image, or nullopt when the map is not
     * extendable (maps grown from the empty map through this method always
     * are).
     */
    std::optional<OrderElement> extend(PartialMap& p, const OrderElement& b) {
        if (!member(*g_, b, *dp_)) return std::nullopt;
        if (p.count(b)) return std::nullopt;

        Tuple t = *order_detail::read_tuple(*g_, b, *dp_);
        Tuple t2;
        for (ElementId v : t) t2.push_back(f_.at(v));
        const std::size_t n = t.size();
        const std::size_t len = 2 * n + 1;
        auto bf = b.flatten();

        auto above = p.lower_bound(b);
        const OrderElement *lo = nullptr, *hi = nullptr;
        const OrderElement *lo_img = nullptr, *hi_img = nullptr;
        if (above != p.end()) { hi = &above->first; hi_img = &above->second; }
        if (above != p.begin()) {
            auto below = std::prev(above);
            lo = &below->first;
            lo_img = &below->second;
        }

        std::vector<Rational> lo_seq, hi_seq;
        if (lo_img) lo_seq = lo_img->flatten();
        if (hi_img) hi_seq = hi_img->flatten();

        // the strongest odd-length agreement is with an order neighbor
        std::size_t c_lo = lo ? order_detail::quantize_odd(order_detail::common_prefix(bf, lo->flatten())) : 0;
        std::size_t c_hi = hi ? order_detail::quantize_odd(order_detail::common_prefix(bf, hi->flatten())) : 0;
        std::size_t prefix_len = std::max(c_lo, c_hi);
        const std::vector<Rational>* prefix_src = nullptr;
        if (prefix_len > 0) prefix_src = (c_lo >= c_hi) ? &lo_seq : &hi_seq;

        bool low_active = lo != nullptr, high_active = hi != nullptr;
        std::vector<Rational> out;
        for (std::size_t pos = 1; pos <= len; ++pos) {
            bool is_tail = pos == len;
            int cls = 0;
            if (!is_tail) {
                if (pos % 2 == 1) cls = static_cast<int>(t2[(pos - 1) / 2]);
                else cls = (pos / 2 < n) ? 0 : 1;
            }

            if (low_active && lo_seq.size() < pos) low_active = false;   // proper prefix sits below
            if (high_active && hi_seq.size() < pos) return std::nullopt; // would place hi' below b'

            std::optional<Rational> v;
            if (pos <= prefix_len) {
                v = (*prefix_src)[pos - 1];
                if (low_active) {
                    if (*v < lo_seq[pos - 1]) return std::nullopt;
                    if (lo_seq[pos - 1] < *v) low_active = false;
                }
                if (high_active) {
                    if (hi_seq[pos - 1] < *v) return std::nullopt;
                    if (*v < hi_seq[pos - 1]) high_active = false;
                }
            } else if (is_tail) {
                v = Rational(b.tail);
                if (low_active && !(lo_seq[pos - 1] < *v)) return std::nullopt;
                if (high_active && !(*v < hi_seq[pos - 1])) return std::nullopt;
            } else if (low_active && high_active) {
                const Rational &L = lo_seq[pos - 1], &H = hi_seq[pos - 1];
                if (L == H) {
                    if (dp_->class_of(L) != cls) return std::nullopt;
                    v = L;
                } else if (L < H) {
                    v = dp_->dense_pick(cls, L, H);
                    low_active = high_active = false;
                } else {
                    return std::nullopt;
                }
            } else if (low_active) {
                const Rational& L = lo_seq[pos - 1];
                v = dp_->dense_pick(cls, L, L + Rational(1));
                low_active = false;
            } else if (high_active) {
                const Rational& H = hi_seq[pos - 1];
                v = dp_->dense_pick(cls, H - Rational(1), H);
                high_active = false;
            } else {
                v = dp_->first_in_class(cls);
            }
            out.push_back(*v);
        }

        OrderElement image;
        image.body.assign(out.begin(), out.end() - 1);
        image.tail = b.tail;
        if (!member(*g2_, image, *dp_)) return std::nullopt;

        // the two fresh consecutive pairs carry all new conditions
        auto img_flat = image.flatten();
        if (lo) {
            if (!(*lo_img < image)) return std::nullopt;
            if (order_detail::quantize_odd(order_detail::common_prefix(lo->flatten(), bf)) !=
                order_detail::quantize_odd(order_detail::common_prefix(lo_seq, img_flat)))
                return std::nullopt;
        }
        if (hi) {
            if (!(image < *hi_img)) return std::nullopt;
            if (order_detail::quantize_odd(order_detail::common_prefix(hi->flatten(), bf)) !=
                order_detail::quantize_odd(order_detail::common_prefix(hi_seq, img_flat)))
                return std::nullopt;
        }
        p.emplace(b, image);
        return image;
    }

    /// Symmetric extension on the range side, through the inverse family.
    std::optional<OrderElement> extend_range(PartialMap& p, const OrderElement& c) {
        std::map<ElementId, ElementId> inv;
        for (auto [u, v] : f_) inv[v] = u;
        OrderBackForthFamily rev(*g2_, *g_, std::move(inv), *dp_);
        PartialMap mirrored;
        for (const auto& [dom, img] : p) mirrored.emplace(img, dom);
        auto preimage = rev.extend(mirrored, c);
        if (!preimage) return std::nullopt;
        p.emplace(*preimage, c);
        return preimage;
    }

private:
    const FiniteStructure* g_;
    const FiniteStructure* g2_;
    std::map<ElementId, ElementId> f_;
    DensePartition* dp_;
};

} // namespace scottkit

#endif // SCOTTKIT_ORDER_FAMILY_HPP
