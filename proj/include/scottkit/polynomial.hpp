#ifndef SCOTTKIT_POLYNOMIAL_HPP
#define SCOTTKIT_POLYNOMIAL_HPP

#include <gmpxx.h>
#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

#include "scottkit/config.hpp"

namespace scottkit {

/// Coefficient domain: the integers (p == 0) or the prime field F_p.
struct CoeffRing {
    long p = 0;

    mpz_class reduce(const mpz_class& z) const {
        if (p == 0) return z;
        mpz_class r = z % p;
        if (r < 0) r += p;
        return r;
    }

    mpz_class inverse(const mpz_class& z) const {
        if (p == 0) throw InvalidInput("no integer inverses in characteristic 0");
        mpz_class r = reduce(z);
        if (r == 0) throw InvalidInput("division by zero in F_p");
        mpz_class out;
        mpz_invert(out.get_mpz_t(), r.get_mpz_t(), mpz_class(p).get_mpz_t());
        return out;
    }
};

/**
 * Multivariate polynomial in b_1 < b_2 < ... < b_nvars, recursive dense:
 * a polynomial in nvars variables is a coefficient vector over powers of
 * b_nvars whose entries live in nvars-1 variables; the base is an integer
 * (reduced mod p in characteristic p). Trailing zero coefficients are
 * trimmed, so representation equality is value equality.
 */
class MPoly {
public:
    MPoly() : nvars_(0), c_(0) {}

    static MPoly constant(int nvars, const mpz_class& z, const CoeffRing& R) {
        MPoly out;
        out.nvars_ = nvars;
        if (nvars == 0) {
            out.c_ = R.reduce(z);
            return out;
        }
        MPoly base = constant(nvars - 1, z, R);
        if (!base.is_zero()) out.co_.push_back(std::move(base));
        return out;
    }

    /// b_{i+1} as a polynomial in nvars variables (0-based i).
    static MPoly variable(int nvars, int i, const CoeffRing& R) {
        if (i < 0 || i >= nvars) throw InvalidInput("variable index out of range");
        MPoly out;
        out.nvars_ = nvars;
        if (i == nvars - 1) {
            out.co_.push_back(constant(nvars - 1, 0, R));
            out.co_.push_back(constant(nvars - 1, 1, R));
            out.trim();
        } else {
            out.co_.push_back(variable(nvars - 1, i, R));
        }
        return out;
    }

    int nvars() const { return nvars_; }
    bool is_zero() const { return nvars_ == 0 ? c_ == 0 : co_.empty(); }
    bool is_constant() const { return deeper_constant(); }

    /// Value of a constant polynomial.
    mpz_class constant_value() const {
        if (nvars_ == 0) return c_;
        if (co_.empty()) return 0;
        if (co_.size() > 1) throw InvalidInput("polynomial is not constant");
        return co_[0].constant_value();
    }

    int degree() const {   // in the top variable; -1 for zero
        if (nvars_ == 0) return c_ == 0 ? -1 : 0;
        return static_cast<int>(co_.size()) - 1;
    }

    static MPoly add(const MPoly& x, const MPoly& y, const CoeffRing& R) {
        check_compatible(x, y);
        if (x.nvars_ == 0) {
            MPoly out;
            out.c_ = R.reduce(x.c_ + y.c_);
            return out;
        }
        MPoly out;
        out.nvars_ = x.nvars_;
        out.co_.resize(std::max(x.co_.size(), y.co_.size()), zero_like(x.nvars_ - 1));
        for (std::size_t i = 0; i < out.co_.size(); ++i) {
            const MPoly* a = i < x.co_.size() ? &x.co_[i] : nullptr;
            const MPoly* b = i < y.co_.size() ? &y.co_[i] : nullptr;
            if (a && b) out.co_[i] = add(*a, *b, R);
            else if (a) out.co_[i] = *a;
            else out.co_[i] = *b;
        }
        out.trim();
        return out;
    }

    static MPoly neg(const MPoly& x, const CoeffRing& R) {
        MPoly out = x;
        out.negate(R);
        return out;
    }

    static MPoly sub(const MPoly& x, const MPoly& y, const CoeffRing& R) {
        return add(x, neg(y, R), R);
    }

    static MPoly mul(const MPoly& x, const MPoly& y, const CoeffRing& R) {
        check_compatible(x, y);
        if (x.nvars_ == 0) {
            MPoly out;
            out.c_ = R.reduce(x.c_ * y.c_);
            return out;
        }
        MPoly out;
        out.nvars_ = x.nvars_;
        if (x.co_.empty() || y.co_.empty()) return out;
        out.co_.assign(x.co_.size() + y.co_.size() - 1, zero_like(x.nvars_ - 1));
        for (std::size_t i = 0; i < x.co_.size(); ++i)
            for (std::size_t j = 0; j < y.co_.size(); ++j)
                out.co_[i + j] = add(out.co_[i + j], mul(x.co_[i], y.co_[j], R), R);
        out.trim();
        return out;
    }

    /// Exact division: x / y when y divides x, nullopt otherwise.
    static std::optional<MPoly> try_divide(const MPoly& x, const MPoly& y, const CoeffRing& R) {
        check_compatible(x, y);
        if (y.is_zero()) throw InvalidInput("division by the zero polynomial");
        if (x.is_zero()) return zero_like(x.nvars_);
        if (x.nvars_ == 0) {
            if (R.p != 0) {
                MPoly out;
                out.c_ = R.reduce(x.c_ * R.inverse(y.c_));
                return out;
            }
            if (x.c_ % y.c_ != 0) return std::nullopt;
            MPoly out;
            out.c_ = x.c_ / y.c_;
            return out;
        }
        MPoly rem = x;
        MPoly quot;
        quot.nvars_ = x.nvars_;
        int dy = y.degree();
        if (rem.degree() >= dy)
            quot.co_.assign(rem.degree() - dy + 1, zero_like(x.nvars_ - 1));
        while (!rem.is_zero() && rem.degree() >= dy) {
            auto q = try_divide(rem.co_.back(), y.co_.back(), R);
            if (!q) return std::nullopt;
            int shift = rem.degree() - dy;
            quot.co_[shift] = *q;
            // rem -= q * y * b^shift
            for (int i = 0; i <= dy; ++i)
                rem.co_[i + shift] = sub(rem.co_[i + shift], mul(*q, y.co_[i], R), R);
            rem.trim();
        }
        if (!rem.is_zero()) return std::nullopt;
        quot.trim();
        return quot;
    }

    /// gcd of all base integer coefficients (0 for the zero polynomial).
    mpz_class content() const {
        mpz_class g = 0;
        walk([&](const mpz_class& z) { mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), z.get_mpz_t()); });
        return g;
    }

    /// The base coefficient of the lexicographically largest monomial.
    mpz_class lead() const {
        if (nvars_ == 0) return c_;
        if (co_.empty()) return 0;
        return co_.back().lead();
    }

    void divide_content(const mpz_class& g) {
        if (g == 0 || g == 1) return;
        map_base([&](mpz_class& z) { z /= g; });
    }

    void scale(const mpz_class& s, const CoeffRing& R) {
        map_base([&](mpz_class& z) { z = R.reduce(z * s); });
        trim_deep();
    }

    friend bool operator==(const MPoly& a, const MPoly& b) {
        return a.nvars_ == b.nvars_ && a.c_ == b.c_ && a.co_ == b.co_;
    }
    friend bool operator!=(const MPoly& a, const MPoly& b) { return !(a == b); }
    friend bool operator<(const MPoly& a, const MPoly& b) {   // structural order for map keys
        if (a.nvars_ != b.nvars_) return a.nvars_ < b.nvars_;
        if (a.nvars_ == 0) return a.c_ < b.c_;
        return a.co_ < b.co_;
    }

    static MPoly zero_like(int nvars) {
        MPoly out;
        out.nvars_ = nvars;
        return out;
    }

    nlohmann::json to_json() const {
        if (nvars_ == 0) return c_.get_str();
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& c : co_) arr.push_back(c.to_json());
        return arr;
    }

    static MPoly from_json(const nlohmann::json& j, int nvars, const CoeffRing& R) {
        if (nvars == 0) {
            if (!j.is_string()) throw InvalidInput("constant polynomial must be a string");
            MPoly out;
            out.c_ = R.reduce(mpz_class(j.get<std::string>()));
            return out;
        }
        MPoly out;
        out.nvars_ = nvars;
        for (const auto& c : j) out.co_.push_back(from_json(c, nvars - 1, R));
        out.trim();
        return out;
    }

private:
    int nvars_ = 0;
    mpz_class c_;
    std::vector<MPoly> co_;

    static void check_compatible(const MPoly& x, const MPoly& y) {
        if (x.nvars_ != y.nvars_) throw InvalidInput("polynomials over different variable counts");
    }

    bool deeper_constant() const {
        if (nvars_ == 0) return true;
        if (co_.empty()) return true;
        return co_.size() == 1 && co_[0].deeper_constant();
    }

    void trim() {
        while (!co_.empty() && co_.back().is_zero()) co_.pop_back();
    }

    void trim_deep() {
        for (auto& c : co_) c.trim_deep();
        trim();
    }

    void negate(const CoeffRing& R) {
        if (nvars_ == 0) {
            c_ = R.reduce(-c_);
            return;
        }
        for (auto& c : co_) c.negate(R);
    }

    template <typename F>
    void walk(F&& f) const {
        if (nvars_ == 0) {
            if (c_ != 0) f(c_);
            return;
        }
        for (const auto& c : co_) c.walk(f);
    }

    template <typename F>
    void map_base(F&& f) {
        if (nvars_ == 0) {
            f(c_);
            return;
        }
        for (auto& c : co_) c.map_base(f);
    }
};

/**
 * Rational function num/den in canonical form: zero is 0/1; the pair is
 * jointly content-reduced with the denominator's lead positive (monic in
 * characteristic p); and a denominator dividing the numerator exactly is
 * cleared to 1.
 */
struct RationalFunction {
    MPoly num, den;

    static RationalFunction make(MPoly n, MPoly d, const CoeffRing& R) {
        if (d.is_zero()) throw InvalidInput("division by zero");
        RationalFunction out{std::move(n), std::move(d)};
        out.normalize(R);
        return out;
    }

    static RationalFunction constant(int nvars, const mpz_class& z, const CoeffRing& R) {
        return make(MPoly::constant(nvars, z, R), MPoly::constant(nvars, 1, R), R);
    }

    bool is_zero() const { return num.is_zero(); }

    void normalize(const CoeffRing& R) {
        if (num.is_zero()) {
            den = MPoly::constant(den.nvars(), 1, R);
            return;
        }
        if (auto q = MPoly::try_divide(num, den, R)) {
            num = *q;
            den = MPoly::constant(num.nvars(), 1, R);
        }
        if (R.p == 0) {
            mpz_class g;
            mpz_gcd(g.get_mpz_t(), num.content().get_mpz_t(), den.content().get_mpz_t());
            num.divide_content(g);
            den.divide_content(g);
            if (den.lead() < 0) {
                num.scale(-1, R);
                den.scale(-1, R);
            }
        } else {
            mpz_class inv = R.inverse(den.lead());
            num.scale(inv, R);
            den.scale(inv, R);
        }
    }

    static RationalFunction add(const RationalFunction& x, const RationalFunction& y, const CoeffRing& R) {
        return make(MPoly::add(MPoly::mul(x.num, y.den, R), MPoly::mul(y.num, x.den, R), R),
                    MPoly::mul(x.den, y.den, R), R);
    }
    static RationalFunction sub(const RationalFunction& x, const RationalFunction& y, const CoeffRing& R) {
        return make(MPoly::sub(MPoly::mul(x.num, y.den, R), MPoly::mul(y.num, x.den, R), R),
                    MPoly::mul(x.den, y.den, R), R);
    }
    static RationalFunction mul(const RationalFunction& x, const RationalFunction& y, const CoeffRing& R) {
        return make(MPoly::mul(x.num, y.num, R), MPoly::mul(x.den, y.den, R), R);
    }
    static RationalFunction inv(const RationalFunction& x, const CoeffRing& R) {
        if (x.is_zero()) throw InvalidInput("division by zero");
        return make(x.den, x.num, R);
    }
    static RationalFunction neg(const RationalFunction& x, const CoeffRing& R) {
        return make(MPoly::neg(x.num, R), x.den, R);
    }

    /// Value equality by cross-multiplication; independent of representation.
    static bool equal(const RationalFunction& x, const RationalFunction& y, const CoeffRing& R) {
        return MPoly::mul(x.num, y.den, R) == MPoly::mul(y.num, x.den, R);
    }

    friend bool operator==(const RationalFunction& a, const RationalFunction& b) {
        return a.num == b.num && a.den == b.den;   // canonical-form equality
    }

    nlohmann::json to_json() const {
        return nlohmann::json{{"num", num.to_json()}, {"den", den.to_json()}};
    }

    static RationalFunction from_json(const nlohmann::json& j, int nvars, const CoeffRing& R) {
        return make(MPoly::from_json(j.at("num"), nvars, R),
                    MPoly::from_json(j.at("den"), nvars, R), R);
    }
};

} // namespace scottkit

#endif // SCOTTKIT_POLYNOMIAL_HPP
