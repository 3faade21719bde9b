#ifndef SCOTTKIT_BACKFORTH_HPP
#define SCOTTKIT_BACKFORTH_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <unordered_map>
#include <vector>

#include "scottkit/config.hpp"
#include "scottkit/isomorphism.hpp"
#include "scottkit/structure.hpp"

namespace scottkit {

namespace bf_detail {

/// Dense code of a k-tuple over the universe: base-n digits of universe
/// positions, most significant first.
inline std::size_t tuple_code(const FiniteStructure& s, const Tuple& t) {
    std::size_t code = 0;
    for (ElementId e : t) {
        int i = s.index_of(e);
        if (i < 0) throw InvalidInput("tuple element outside universe");
        code = code * s.size() + static_cast<std::size_t>(i);
    }
    return code;
}

inline Tuple tuple_decode(const FiniteStructure& s, int k, std::size_t code) {
    Tuple t(k);
    for (int p = k - 1; p >= 0; --p) {
        t[p] = s.universe[code % s.size()];
        code /= s.size();
    }
    return t;
}

/// Quantifier-free type of a tuple: equality pattern plus the value of every
/// atomic formula R(x_{i_1},...,x_{i_r}) over variables of the tuple.
inline std::vector<std::uint64_t> qf_pattern(const FiniteStructure& s, const Tuple& t) {
    std::vector<std::uint64_t> out;
    const int k = static_cast<int>(t.size());
    std::uint64_t eq = 0;
    int bit = 0;
    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j, ++bit)
            if (t[i] == t[j]) eq |= 1ull << (bit % 64);
    out.push_back(eq);
    for (std::size_t sym = 0; sym < s.relations.size(); ++sym) {
        const int r = s.signature.symbols[sym].arity;
        std::size_t maps = 1;
        for (int i = 0; i < r; ++i) maps *= static_cast<std::size_t>(k);
        std::uint64_t word = 0;
        int wbit = 0;
        Tuple arg(r);
        for (std::size_t m = 0; m < maps; ++m) {
            std::size_t rest = m;
            for (int p = r - 1; p >= 0; --p) {
                arg[p] = t[rest % k];
                rest /= k;
            }
            if (s.holds(static_cast<int>(sym), arg)) word |= 1ull << wbit;
            if (++wbit == 64) {
                out.push_back(word);
                word = 0;
                wbit = 0;
            }
        }
        out.push_back(word);
    }
    return out;
}

} // namespace bf_detail

/// One level of the back-and-forth hierarchy: a partition of all tuples up
/// to the length bound, jointly over both structures. classes_a[k][code] is
/// the class of the A-tuple with the given dense code, likewise classes_b.
struct BfLevel {
    int alpha = 0;
    int class_count = 0;
    std::vector<std::vector<int>> classes_a;
    std::vector<std::vector<int>> classes_b;
};

struct BfFixpoint {
    std::vector<BfLevel> levels;     // reported up to the stabilization index
    int stabilization_index = 0;
};

namespace bf_detail {

struct Tables {
    const FiniteStructure* A;
    const FiniteStructure* B;
    int maxlen;
    // per level, per side, per length: dense class ids
    std::vector<std::vector<std::vector<int>>> lvl_a, lvl_b;

    std::size_t side_count(const FiniteStructure& s, int k) const {
        std::size_t c = 1;
        for (int i = 0; i < k; ++i) c *= s.size();
        return c;
    }

    /// Builds levels until the class count is stable; returns the full-table
    /// stabilization index. When A and B are the same object, one side is
    /// computed and mirrored.
    int run(const Budgets& budgets) {
        const bool same = A == B;
        std::size_t total = 0;
        for (int k = 0; k <= maxlen; ++k)
            total += side_count(*A, k) + side_count(*B, k);
        if (total > budgets.bf_table_cap)
            throw BudgetError("back-and-forth table exceeds the budget");

        lvl_a.clear();
        lvl_b.clear();
        std::vector<int> counts;

        // level 0: quantifier-free types, shared ids across sides per length
        {
            std::vector<std::vector<int>> ca(maxlen + 1), cb(maxlen + 1);
            int next = 0;
            for (int k = 0; k <= maxlen; ++k) {
                std::map<std::vector<std::uint64_t>, int> ids;
                ca[k].resize(side_count(*A, k));
                for (std::size_t code = 0; code < ca[k].size(); ++code) {
                    auto pat = qf_pattern(*A, tuple_decode(*A, k, code));
                    auto [it, fresh] = ids.emplace(pat, next);
                    if (fresh) ++next;
                    ca[k][code] = it->second;
                }
                if (same) {
                    cb[k] = ca[k];
                    continue;
                }
                cb[k].resize(side_count(*B, k));
                for (std::size_t code = 0; code < cb[k].size(); ++code) {
                    auto pat = qf_pattern(*B, tuple_decode(*B, k, code));
                    auto [it, fresh] = ids.emplace(pat, next);
                    if (fresh) ++next;
                    cb[k][code] = it->second;
                }
            }
            lvl_a.push_back(std::move(ca));
            lvl_b.push_back(std::move(cb));
            counts.push_back(next);
        }

        for (int alpha = 1;; ++alpha) {
            const auto& pa = lvl_a.back();
            const auto& pb = lvl_b.back();
            std::vector<std::vector<int>> ca(maxlen + 1), cb(maxlen + 1);
            int next = 0;
            for (int k = 0; k <= maxlen; ++k) {
                // signature: previous class + sorted set of extension classes
                // (frozen at the boundary length); dense ids by sorting
                std::vector<std::pair<std::vector<int>, std::pair<int, int>>> sigs;
                auto collect = [&](const FiniteStructure& S,
                                   const std::vector<std::vector<int>>& prev, int side) {
                    std::size_t count = side == 0 ? side_count(*A, k) : side_count(*B, k);
                    for (std::size_t code = 0; code < count; ++code) {
                        std::vector<int> sig{prev[k][code]};
                        if (k < maxlen) {
                            std::vector<int> ext;
                            ext.reserve(S.size());
                            for (std::size_t i = 0; i < S.size(); ++i)
                                ext.push_back(prev[k + 1][code * S.size() + i]);
                            std::sort(ext.begin(), ext.end());
                            ext.erase(std::unique(ext.begin(), ext.end()), ext.end());
                            sig.insert(sig.end(), ext.begin(), ext.end());
                        }
                        sigs.push_back({std::move(sig), {side, static_cast<int>(code)}});
                    }
                };
                collect(*A, pa, 0);
                if (!same) collect(*B, pb, 1);
                std::sort(sigs.begin(), sigs.end());
                ca[k].resize(side_count(*A, k));
                cb[k].resize(side_count(*B, k));
                int base = next;
                for (std::size_t i = 0; i < sigs.size(); ++i) {
                    if (i > 0 && sigs[i].first != sigs[i - 1].first) ++next;
                    auto [side, code] = sigs[i].second;
                    (side == 0 ? ca[k] : cb[k])[code] = next;
                }
                if (!sigs.empty()) ++next;
                (void)base;
                if (same) cb[k] = ca[k];
            }
            lvl_a.push_back(std::move(ca));
            lvl_b.push_back(std::move(cb));
            counts.push_back(next);
            if (counts[alpha] == counts[alpha - 1]) return alpha - 1;
        }
    }
};

} // namespace bf_detail

/**
 * The refining sequence of back-and-forth partitions on all tuples of length
 * at most `len` over A and B, computed with enough internal headroom that
 * every reported level is exact, then truncated at stabilization.
 */
inline BfFixpoint bf_fixpoint(const FiniteStructure& A, const FiniteStructure& B, int len,
                              const Budgets& budgets = Budgets{}) {
    if (A.signature != B.signature) throw InvalidInput("bf_fixpoint requires a shared signature");
    for (int headroom = 2;; headroom *= 2) {
        bf_detail::Tables t;
        t.A = &A;
        t.B = &B;
        t.maxlen = len + headroom;
        int full_stab = t.run(budgets);
        if (full_stab > headroom) continue;   // not enough exact levels; widen

        BfFixpoint out;
        for (int alpha = 0; alpha <= full_stab; ++alpha) {
            BfLevel lvl;
            lvl.alpha = alpha;
            lvl.classes_a.assign(t.lvl_a[alpha].begin(), t.lvl_a[alpha].begin() + len + 1);
            lvl.classes_b.assign(t.lvl_b[alpha].begin(), t.lvl_b[alpha].begin() + len + 1);
            std::map<int, int> dense;
            for (auto* side : {&lvl.classes_a, &lvl.classes_b})
                for (auto& per_k : *side)
                    for (int& c : per_k) {
                        auto [it, fresh] = dense.emplace(c, static_cast<int>(dense.size()));
                        c = it->second;
                    }
            lvl.class_count = static_cast<int>(dense.size());
            out.levels.push_back(std::move(lvl));
        }
        // drop trailing levels that no longer refine the visible partition
        while (out.levels.size() >= 2 &&
               out.levels[out.levels.size() - 1].classes_a == out.levels[out.levels.size() - 2].classes_a &&
               out.levels[out.levels.size() - 1].classes_b == out.levels[out.levels.size() - 2].classes_b)
            out.levels.pop_back();
        out.stabilization_index = static_cast<int>(out.levels.size()) - 1;
        return out;
    }
}

/**
 * Literal evaluation of the hierarchy by memoized recursion on the
 * definition: equality of quantifier-free types at level 0, and alternating
 * single-element extension quantifiers below every smaller level above it.
 */
class BfNaive {
public:
    BfNaive(const FiniteStructure& A, const FiniteStructure& B) : a_(&A), b_(&B) {
        if (A.signature != B.signature) throw InvalidInput("bf_equiv requires a shared signature");
    }

    bool equiv(const Tuple& a, const Tuple& b, int alpha) {
        if (a.size() != b.size()) throw InvalidInput("tuples must have equal length");
        if (qf_id(a, 0) != qf_id(b, 1)) return false;   // cheap reject, no memo write
        if (alpha == 0) return true;
        auto packed = pack(a, b, alpha);
        if (packed) {
            auto it = packed_memo_.find(*packed);
            if (it != packed_memo_.end()) return it->second;
        } else {
            auto it = memo_.find(Key{a, b, alpha});
            if (it != memo_.end()) return it->second;
        }
        bool ok = expand(a, b, alpha);
        if (packed) packed_memo_.emplace(*packed, ok);
        else memo_.emplace(Key{a, b, alpha}, ok);
        return ok;
    }

private:
    bool expand(const Tuple& a, const Tuple& b, int alpha) {
        bool ok = true;
        for (int beta = 0; ok && beta < alpha; ++beta) {
            Tuple ac = a, bd = b;
            ac.push_back(0);
            bd.push_back(0);
            for (ElementId c : a_->universe) {   // forth
                ac.back() = c;
                bool found = false;
                for (ElementId d : b_->universe) {
                    bd.back() = d;
                    if (equiv(ac, bd, beta)) { found = true; break; }
                }
                if (!found) { ok = false; break; }
            }
            if (!ok) break;
            for (ElementId d : b_->universe) {   // back
                bd.back() = d;
                bool found = false;
                for (ElementId c : a_->universe) {
                    ac.back() = c;
                    if (equiv(ac, bd, beta)) { found = true; break; }
                }
                if (!found) { ok = false; break; }
            }
        }
        return ok;
    }

    struct Key {
        Tuple a, b;
        int alpha;
        friend bool operator<(const Key& x, const Key& y) {
            if (x.alpha != y.alpha) return x.alpha < y.alpha;
            if (x.a != y.a) return x.a < y.a;
            return x.b < y.b;
        }
    };

    /// Quantifier-free type id of a tuple, shared across both sides and
    /// cached per distinct tuple (dense-coded cache when codes fit).
    int qf_id(const Tuple& t, int side) {
        const FiniteStructure& s = side == 0 ? *a_ : *b_;
        std::uint64_t code = 0;
        bool fits = t.size() <= 13;
        if (fits) {
            double worst = 1;
            const std::size_t n = std::max<std::size_t>(s.size(), 2);
            for (std::size_t i = 0; i < t.size() && fits; ++i) {
                worst *= static_cast<double>(n);
                if (worst >= 72057594037927936.0) fits = false;   // 2^56
                else code = code * n + static_cast<std::uint64_t>(s.index_of(t[i]));
            }
        }
        if (fits) {
            std::uint64_t key = (static_cast<std::uint64_t>(side) << 63) |
                                (static_cast<std::uint64_t>(t.size()) << 56) | code;
            auto it = qf_packed_.find(key);
            if (it != qf_packed_.end()) return it->second;
            auto pat = bf_detail::qf_pattern(s, t);
            auto [pit, fresh] =
                pattern_ids_.emplace(std::move(pat), static_cast<int>(pattern_ids_.size()));
            qf_packed_.emplace(key, pit->second);
            return pit->second;
        }
        auto& cache = side == 0 ? qf_id_a_ : qf_id_b_;
        auto it = cache.find(t);
        if (it != cache.end()) return it->second;
        auto pat = bf_detail::qf_pattern(s, t);
        auto [pit, fresh] = pattern_ids_.emplace(std::move(pat), static_cast<int>(pattern_ids_.size()));
        cache.emplace(t, pit->second);
        return pit->second;
    }

    /// Dense 64-bit key (level, length, both tuple codes) when it fits.
    std::optional<std::uint64_t> pack(const Tuple& a, const Tuple& b, int alpha) const {
        const std::size_t n = std::max<std::size_t>(std::max(a_->size(), b_->size()), 2);
        if (alpha > 14 || a.size() > 13) return std::nullopt;
        double worst = 1;
        for (std::size_t i = 0; i < a.size(); ++i) {
            worst *= static_cast<double>(n);
            if (worst >= 268435456.0) return std::nullopt;   // 2^28
        }
        std::uint64_t ca = 0, cb = 0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            ca = ca * n + static_cast<std::uint64_t>(a_->index_of(a[i]));
            cb = cb * n + static_cast<std::uint64_t>(b_->index_of(b[i]));
        }
        return (static_cast<std::uint64_t>(alpha) << 60) |
               (static_cast<std::uint64_t>(a.size()) << 56) | (ca << 28) | cb;
    }

    const FiniteStructure* a_;
    const FiniteStructure* b_;
    std::map<Key, bool> memo_;
    std::unordered_map<std::uint64_t, bool> packed_memo_;
    std::unordered_map<std::uint64_t, int> qf_packed_;
    std::map<std::vector<std::uint64_t>, int> pattern_ids_;
    std::map<Tuple, int> qf_id_a_, qf_id_b_;
};

/// One-shot form of the naive evaluation.
inline bool bf_equiv(const FiniteStructure& A, const Tuple& a,
                     const FiniteStructure& B, const Tuple& b, int alpha) {
    BfNaive n(A, B);
    return n.equiv(a, b, alpha);
}

struct ScottReport {
    std::map<Tuple, int> tuple_ranks;   // lengths 0..|A|
    int structure_rank = 0;
};

namespace bf_detail {

/// Orbit cell ids for all k-tuples under a complete automorphism listing.
inline std::vector<int> orbit_cells_from(const FiniteStructure& A, int k,
                                         const std::vector<std::vector<int>>& auts) {
    const std::size_t n = A.size();
    std::size_t total = 1;
    for (int i = 0; i < k; ++i) total *= n;
    std::vector<int> parent(total);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) {
        while (parent[x] != x) { parent[x] = parent[parent[x]]; x = parent[x]; }
        return x;
    };
    std::vector<int> digits(k);
    for (std::size_t idx = 0; idx < total; ++idx) {
        std::size_t rest = idx;
        for (int p = k - 1; p >= 0; --p) { digits[p] = static_cast<int>(rest % n); rest /= n; }
        for (const auto& g : auts) {
            std::size_t img = 0;
            for (int p = 0; p < k; ++p) img = img * n + static_cast<std::size_t>(g[digits[p]]);
            parent[find(static_cast<int>(idx))] = find(static_cast<int>(img));
        }
    }
    std::vector<int> cell(total);
    for (std::size_t idx = 0; idx < total; ++idx) cell[idx] = find(static_cast<int>(idx));
    return cell;
}

/// Orbit cell ids for all k-tuples, from the complete automorphism listing.
inline std::vector<int> orbit_cells(const FiniteStructure& A, int k, const Budgets& budgets) {
    return orbit_cells_from(A, k, automorphisms(A, budgets));
}

} // namespace bf_detail

/**
 * Scott ranks through the fixpoint tables: the rank of a tuple is the least
 * level at which its class is contained in its automorphism orbit, and the
 * structure rank is one more than the largest tuple rank, over tuple lengths
 * 0..|A|.
 */
inline ScottReport scott_rank(const FiniteStructure& A, const Budgets& budgets = Budgets{}) {
    const int n = static_cast<int>(A.size());
    ScottReport rep;
    if (n == 0) {
        rep.tuple_ranks[{}] = 0;
        rep.structure_rank = 1;
        return rep;
    }
    auto auts = automorphisms(A, budgets);
    std::vector<std::vector<int>> cells(n + 1);
    for (int k = 0; k <= n; ++k) cells[k] = bf_detail::orbit_cells_from(A, k, auts);

    for (int headroom = 2;; headroom *= 2) {
        bf_detail::Tables t;
        t.A = &A;
        t.B = &A;
        t.maxlen = n + headroom;
        t.run(budgets);
        const int levels = static_cast<int>(t.lvl_a.size());

        bool ok = true;
        ScottReport out;
        int max_rank = 0;
        for (int k = 0; k <= n && ok; ++k) {
            std::size_t total = t.side_count(A, k);
            std::vector<int> rank_of(total, -1);
            // a class is ready at level alpha when all its members share an orbit cell
            for (int alpha = 0; alpha < levels && alpha + k <= t.maxlen; ++alpha) {
                std::map<int, int> cls_cell;   // class -> common cell, -2 on clash
                for (std::size_t code = 0; code < total; ++code) {
                    int cls = t.lvl_a[alpha][k][code];
                    auto [it, fresh] = cls_cell.emplace(cls, cells[k][code]);
                    if (!fresh && it->second != cells[k][code]) it->second = -2;
                }
                for (std::size_t code = 0; code < total; ++code)
                    if (rank_of[code] < 0 && cls_cell[t.lvl_a[alpha][k][code]] != -2)
                        rank_of[code] = alpha;
            }
            for (std::size_t code = 0; code < total; ++code) {
                if (rank_of[code] < 0) { ok = false; break; }
                out.tuple_ranks[bf_detail::tuple_decode(A, k, code)] = rank_of[code];
                max_rank = std::max(max_rank, rank_of[code]);
            }
        }
        if (!ok || max_rank + n > t.maxlen) continue;   // widen the exact window
        out.structure_rank = max_rank + 1;
        return out;
    }
}

/// Rank of one tuple through the fixpoint route.
inline int scott_rank_tuple(const FiniteStructure& A, const Tuple& a,
                            const Budgets& budgets = Budgets{}) {
    auto rep = scott_rank(A, budgets);
    auto it = rep.tuple_ranks.find(a);
    if (it == rep.tuple_ranks.end()) throw InvalidInput("tuple longer than the rank table");
    return it->second;
}

/**
 * Independent oracle: Scott ranks by the literal recursion, one bf_equiv
 * call per pair and level, with pointed isomorphism decided by the orbit
 * partition.
 */
inline ScottReport scott_rank_naive(const FiniteStructure& A, const Budgets& budgets = Budgets{}) {
    const int n = static_cast<int>(A.size());
    ScottReport rep;
    if (n == 0) {
        rep.tuple_ranks[{}] = 0;
        rep.structure_rank = 1;
        return rep;
    }
    BfNaive nv(A, A);
    auto auts = automorphisms(A, budgets);
    int max_rank = 0;
    for (int k = 0; k <= n; ++k) {
        auto cells = bf_detail::orbit_cells_from(A, k, auts);
        auto tuples = all_tuples(A, k);
        for (const auto& a : tuples) {
            std::size_t ca = bf_detail::tuple_code(A, a);
            int beta = 0;
            for (;; ++beta) {
                bool sound = true;
                for (const auto& b : tuples) {
                    if (cells[bf_detail::tuple_code(A, b)] == cells[ca]) continue;
                    if (nv.equiv(a, b, beta)) { sound = false; break; }
                }
                if (sound) break;
                if (beta > 4 * n + 4)
                    throw BudgetError("naive rank search exceeded the level cap");
            }
            rep.tuple_ranks[a] = beta;
            max_rank = std::max(max_rank, beta);
        }
    }
    rep.structure_rank = max_rank + 1;
    return rep;
}

} // namespace scottkit

#endif // SCOTTKIT_BACKFORTH_HPP
