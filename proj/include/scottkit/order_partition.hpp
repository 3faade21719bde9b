#ifndef SCOTTKIT_ORDER_PARTITION_HPP
#define SCOTTKIT_ORDER_PARTITION_HPP

#include <cstdint>
#include <numeric>
#include <optional>
#include <unordered_set>
#include <map>
#include <vector>

#include "scottkit/config.hpp"
#include "scottkit/rational.hpp"

namespace scottkit {

/// Table-resident rational: reduced, den > 0, both parts in int64 range.
struct Rat64 {
    long long num = 0;
    long long den = 1;

    friend bool operator==(const Rat64& a, const Rat64& b) { return a.num == b.num && a.den == b.den; }
    friend bool operator<(const Rat64& a, const Rat64& b) {
        return static_cast<__int128>(a.num) * b.den < static_cast<__int128>(b.num) * a.den;
    }
    friend bool operator<=(const Rat64& a, const Rat64& b) { return !(b < a); }

    Rational to_rational() const { return Rational(num, den); }
};

/**
 * The computable partition of Q into dense classes Q_0, Q_1, ...
 *
 * A fixed bijection e enumerates Q by height (max of |num| and den), then by
 * denominator, then by numerator. Obligations are enumerated in generations
 * g = 0, 1, ...: generation g covers the window [-2^g, 2^g) with half-open
 * dyadic cells of width 2^-g and serves classes 0..g, ordered by class then
 * cell. Each rational e(n) in turn is assigned the class of the earliest
 * unmet obligation whose cell contains it, which is then marked met (class 0
 * if none were found, which the generation tower makes unreachable). Every
 * class is dense, the table is append-only and deterministic, and the value
 * a query returns does not depend on how far other queries have already
 * extended the table.
 *
 * Concurrency: extension is single-writer; readers of already-assigned
 * prefixes are safe.
 */
class DensePartition {
public:
    /// Class of q; extends the table up to q's position in the enumeration.
    int class_of(const Rational& q, std::size_t step_cap = Budgets{}.dense_step_cap) {
        Rat64 v = to_rat64(q);
        auto it = class_by_value_.find(v);
        if (it != class_by_value_.end()) return it->second;
        std::size_t steps = 0;
        while (true) {
            const Rat64& fresh = extend(step_cap, steps);
            if (fresh == v) return class_by_value_.at(v);
        }
    }

    /// The first rational the scheme assigns to class a.
    Rational first_in_class(int a, std::size_t step_cap = Budgets{}.dense_step_cap) {
        if (a < 0) throw InvalidInput("classes are indexed by naturals");
        if (a > 63) throw BudgetError("classes above 63 are not served");
        std::size_t steps = 0;
        while (static_cast<int>(first_.size()) <= a || !first_[a].has_value())
            extend(step_cap, steps);
        return first_[a]->to_rational();
    }

    /**
     * Deterministic pick: the first rational, in assignment order, of class a
     * strictly inside (lo, hi). Later table growth never changes the answer.
     */
    Rational dense_pick(int a, const Rational& lo, const Rational& hi,
                        std::size_t step_cap = Budgets{}.dense_step_cap) {
        if (!(lo < hi)) throw InvalidInput("empty interval");
        if (a < 0) throw InvalidInput("classes are indexed by naturals");
        if (a > 63) throw BudgetError("classes above 63 are not served");
        Rat64 l = to_rat64(lo), h = to_rat64(hi);
        std::size_t cursor = 0;
        std::size_t steps = 0;
        while (true) {
            if (static_cast<int>(by_class_.size()) > a) {
                const auto& pool = by_class_[a];
                for (; cursor < pool.size(); ++cursor)
                    if (l < pool[cursor] && pool[cursor] < h) return pool[cursor].to_rational();
            }
            extend(step_cap, steps);
        }
    }

    /// Rationals of class a with height <= max_height, ascending by value;
    /// extends the table through that height.
    std::vector<Rational> class_members_up_to_height(int a, long long max_height,
                                                     std::size_t step_cap = Budgets{}.dense_step_cap) {
        std::size_t steps = 0;
        while (height_done_ <= max_height) extend(step_cap, steps);
        std::vector<Rat64> out;
        if (a < static_cast<int>(by_class_.size()))
            for (const auto& v : by_class_[a])
                if (std::max(v.num < 0 ? -v.num : v.num, v.den) <= max_height) out.push_back(v);
        std::sort(out.begin(), out.end());
        std::vector<Rational> res;
        res.reserve(out.size());
        for (const auto& v : out) res.push_back(v.to_rational());
        return res;
    }

    std::size_t table_size() const { return table_.size(); }

    /// Process-wide shared table.
    static DensePartition& shared() {
        static DensePartition instance;
        return instance;
    }

private:
    struct PairHash {
        std::size_t operator()(const std::pair<long long, long long>& p) const {
            return std::hash<long long>()(p.first * 1000003ll ^ p.second);
        }
    };

    std::vector<std::pair<Rat64, int>> table_;                 // assignment order
    std::map<Rat64, int> class_by_value_;
    std::vector<std::vector<Rat64>> by_class_;                 // per class, assignment order
    std::vector<std::optional<Rat64>> first_;
    std::unordered_set<std::uint64_t> met_;

    // enumeration state: values of the current height, next index, height
    std::vector<Rat64> height_buffer_;
    std::size_t height_pos_ = 0;
    long long h_ = 0;
    long long height_done_ = 0;

    static Rat64 to_rat64(const Rational& q) {
        if (!q.num().fits_slong_p() || !q.den().fits_slong_p())
            throw BudgetError("rational outside the int64 table range");
        return Rat64{q.num().get_si(), q.den().get_si()};
    }

    static std::uint64_t obligation_key(int g, int cls, long long cell) {
        return (static_cast<std::uint64_t>(g) << 58) |
               (static_cast<std::uint64_t>(cls) << 52) |
               static_cast<std::uint64_t>(cell + (1ll << 51));
    }

    /// Floor of q * 2^g.
    static long long cell_index(const Rat64& q, int g) {
        __int128 scaled = static_cast<__int128>(q.num) << g;
        long long cell = static_cast<long long>(scaled / q.den);
        if ((scaled % q.den) != 0 && scaled < 0) --cell;
        return cell;
    }

    int assign_class(const Rat64& q) {
        // generation g: window [-2^W, 2^W) and mesh 2^-W with W = min(g, 22),
        // classes 0..g; geometry saturates at g = 22 while later generations
        // keep serving fresh obligations for higher classes, so every class
        // up to 63 is dense
        for (int g = 0; g <= 63; ++g) {
            int w = std::min(g, 22);
            __int128 bound = static_cast<__int128>(q.den) << w;
            if (q.num >= bound || q.num < -bound) continue;
            long long cell = cell_index(q, w);
            for (int cls = 0; cls <= g; ++cls) {
                std::uint64_t key = obligation_key(g, cls, cell);
                if (met_.insert(key).second) return cls;
            }
        }
        throw BudgetError("no unmet obligation below the class cap");
    }

    /// Assigns the next rational in the enumeration; returns it.
    const Rat64& extend(std::size_t step_cap, std::size_t& steps) {
        if (++steps > step_cap)
            throw BudgetError("dense-partition step cap exceeded");
        Rat64 v = next_value();
        int cls = assign_class(v);
        table_.push_back({v, cls});
        class_by_value_.emplace(v, cls);
        if (static_cast<int>(by_class_.size()) <= cls) by_class_.resize(cls + 1);
        by_class_[cls].push_back(v);
        if (static_cast<int>(first_.size()) <= cls) first_.resize(cls + 1);
        if (!first_[cls]) first_[cls] = v;
        return table_.back().first;
    }

    /// e: N -> Q, by height, then denominator, then numerator.
    Rat64 next_value() {
        while (height_pos_ >= height_buffer_.size()) {
            height_done_ = h_;
            ++h_;
            height_buffer_.clear();
            height_pos_ = 0;
            for (long long d = 1; d <= h_; ++d) {
                if (d < h_) {
                    if (std::gcd(h_, d) == 1) {
                        height_buffer_.push_back({-h_, d});
                        height_buffer_.push_back({h_, d});
                    }
                } else {
                    for (long long p = -h_; p <= h_; ++p)
                        if (std::gcd(p < 0 ? -p : p, d) == 1) height_buffer_.push_back({p, d});
                }
            }
        }
        return height_buffer_[height_pos_++];
    }
};

} // namespace scottkit

#endif // SCOTTKIT_ORDER_PARTITION_HPP
