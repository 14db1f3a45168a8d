#pragma once

/**
 * @file quad_ideal.hpp
 * @brief Exact ideal arithmetic in the quadratic order Z[w], w = sqrt(d),
 *        for squarefree d congruent to 2 or 3 mod 4 (so Z[w] is maximal).
 *
 * Nonzero ideals are stored in Hermite normal form as the Z-module
 * a Z + (b + c w) Z with a, c > 0, c | a, c | b, ac | b^2 - d c^2 and
 * 0 <= b < a.  The norm is the module index ac.  Products are computed by
 * reducing generator products back to HNF; exact division by a prime ideal
 * P over p uses the conjugate: I / P = (I * conj(P)) / p.
 */

#include <gmpxx.h>

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace arithfn {

/// u + v*sqrt(d); the ring element, d carried by context.
struct QuadElem {
    mpz_class u;
    mpz_class v;

    friend bool operator==(const QuadElem&, const QuadElem&) = default;
};

inline QuadElem quad_add(const QuadElem& x, const QuadElem& y) {
    return {x.u + y.u, x.v + y.v};
}
inline QuadElem quad_mul(const QuadElem& x, const QuadElem& y, const mpz_class& d) {
    return {x.u * y.u + d * x.v * y.v, x.u * y.v + x.v * y.u};
}
inline QuadElem quad_conj(const QuadElem& x) { return {x.u, -x.v}; }
/// Field norm u^2 - d v^2 (sign kept; ideals use the absolute value).
inline mpz_class quad_elem_norm(const QuadElem& x, const mpz_class& d) {
    return x.u * x.u - d * x.v * x.v;
}
inline bool quad_is_zero(const QuadElem& x) { return x.u == 0 && x.v == 0; }

inline std::string quad_elem_str(const QuadElem& x) {
    if (x.v == 0) return x.u.get_str();
    std::string w = x.v == 1 ? "w" : (x.v == -1 ? "-w" : x.v.get_str() + "*w");
    if (x.u == 0) return w;
    if (x.v > 0) return x.u.get_str() + "+" + w;
    return x.u.get_str() + w;  // negative v already carries the sign
}

class QuadIdeal {
public:
    /// Raw HNF data; validates every ideal invariant.
    QuadIdeal(mpz_class d, mpz_class a, mpz_class b, mpz_class c)
        : d_(std::move(d)), a_(std::move(a)), b_(std::move(b)), c_(std::move(c)) {
        validate_d(d_);
        if (a_ <= 0 || c_ <= 0) throw std::invalid_argument("QuadIdeal: a, c must be positive");
        b_ = mod_floor(b_, a_);
        if (a_ % c_ != 0 || b_ % c_ != 0)
            throw std::invalid_argument("QuadIdeal: c must divide a and b");
        if ((b_ * b_ - d_ * c_ * c_) % (a_ * c_) != 0)
            throw std::invalid_argument("QuadIdeal: module is not an ideal");
    }

    /// The whole ring (1).
    static QuadIdeal one(const mpz_class& d) { return QuadIdeal(d, 1, 0, 1); }

    /// HNF of the module spanned by the columns x + y w; must have rank 2.
    static QuadIdeal from_module(const mpz_class& d,
                                 std::vector<std::pair<mpz_class, mpz_class>> cols) {
        validate_d(d);
        mpz_class b0 = 0, c = 0;
        std::vector<mpz_class> xs;
        for (auto& [x, y] : cols) {
            if (y == 0) {
                xs.push_back(x);
                continue;
            }
            if (c == 0) {
                c = y;
                b0 = x;
                continue;
            }
            mpz_class g, s, t;
            mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), c.get_mpz_t(),
                       y.get_mpz_t());
            // column with y eliminated: (c/g) col - (y/g) carrier
            xs.push_back((c / g) * x - (y / g) * b0);
            b0 = s * b0 + t * x;
            c = g;
        }
        if (c == 0) throw std::invalid_argument("QuadIdeal: module has rank < 2");
        if (c < 0) {
            c = -c;
            b0 = -b0;
        }
        mpz_class a = 0;
        for (auto& x : xs) mpz_gcd(a.get_mpz_t(), a.get_mpz_t(), x.get_mpz_t());
        if (a == 0) throw std::invalid_argument("QuadIdeal: module has rank < 2");
        return QuadIdeal(d, a, mod_floor(b0, a), c);
    }

    /// The principal ideal (g): module spanned by g and g w.
    static QuadIdeal principal(const mpz_class& d, const QuadElem& g) {
        if (quad_is_zero(g)) throw std::invalid_argument("QuadIdeal: zero generator");
        return from_module(d, {{g.u, g.v}, {d * g.v, g.u}});
    }

    const mpz_class& d() const { return d_; }
    const mpz_class& a() const { return a_; }
    const mpz_class& b() const { return b_; }
    const mpz_class& c() const { return c_; }

    mpz_class norm() const { return a_ * c_; }
    bool is_whole_ring() const { return a_ == 1 && c_ == 1; }

    bool contains(const QuadElem& x) const {
        if (x.v % c_ != 0) return false;
        return (x.u - b_ * (x.v / c_)) % a_ == 0;
    }

    friend QuadIdeal operator*(const QuadIdeal& I, const QuadIdeal& J) {
        I.require_same_order(J);
        const mpz_class &d = I.d_;
        std::vector<std::pair<mpz_class, mpz_class>> cols;
        cols.emplace_back(I.a_ * J.a_, 0);
        cols.emplace_back(I.a_ * J.b_, I.a_ * J.c_);
        cols.emplace_back(J.a_ * I.b_, J.a_ * I.c_);
        cols.emplace_back(I.b_ * J.b_ + I.c_ * J.c_ * d, I.b_ * J.c_ + J.b_ * I.c_);
        return from_module(d, std::move(cols));
    }

    QuadIdeal conjugate() const { return QuadIdeal(d_, a_, mod_floor(-b_, a_), c_); }

    /// I subseteq J, i.e. J | I in the ideal group.
    bool contained_in(const QuadIdeal& J) const {
        require_same_order(J);
        return J.contains({a_, 0}) && J.contains({b_, c_});
    }

    /**
     * Exact division by a prime ideal P lying over the rational prime p;
     * nullopt when P does not divide this ideal.  Split and ramified primes
     * have P * conj(P) = (p), so I / P = (I * conj(P)) / p; the inert prime
     * is (p) itself and divides out of the module entries directly.
     */
    std::optional<QuadIdeal> divide_by_prime(const QuadIdeal& P, const mpz_class& p) const {
        require_same_order(P);
        if (!contained_in(P)) return std::nullopt;
        if (P.norm() == p * p) {
            if (a_ % p != 0 || b_ % p != 0 || c_ % p != 0)
                throw std::logic_error("QuadIdeal: divisibility test and division disagree");
            return QuadIdeal(d_, a_ / p, b_ / p, c_ / p);
        }
        QuadIdeal prod = *this * P.conjugate();
        if (prod.a_ % p != 0 || prod.b_ % p != 0 || prod.c_ % p != 0)
            throw std::logic_error("QuadIdeal: divisibility test and division disagree");
        return QuadIdeal(d_, prod.a_ / p, prod.b_ / p, prod.c_ / p);
    }

    friend bool operator==(const QuadIdeal& I, const QuadIdeal& J) {
        return I.d_ == J.d_ && I.a_ == J.a_ && I.b_ == J.b_ && I.c_ == J.c_;
    }
    friend bool operator!=(const QuadIdeal& I, const QuadIdeal& J) { return !(I == J); }

    /// "(a, b+c*w)"; principal-looking short forms are not attempted.
    std::string str() const {
        return "(" + a_.get_str() + ", " + quad_elem_str({b_, c_}) + ")";
    }

private:
    static void validate_d(const mpz_class& d) {
        if (d == 0 || d == 1) throw std::invalid_argument("QuadIdeal: d must not be 0 or 1");
        mpz_class r = mod_floor(d, 4);
        if (r != 2 && r != 3)
            throw std::invalid_argument("QuadIdeal: d must be 2 or 3 mod 4, got " +
                                        d.get_str());
        // squarefree check by trial division (desk scale)
        mpz_class abs_d = abs(d);
        for (mpz_class q = 2; q * q <= abs_d; ++q)
            if (abs_d % (q * q) == 0)
                throw std::invalid_argument("QuadIdeal: d must be squarefree");
    }

    static mpz_class mod_floor(const mpz_class& x, const mpz_class& m) {
        mpz_class r = x % m;
        if (r < 0) r += abs(m);
        return r;
    }

    void require_same_order(const QuadIdeal& J) const {
        if (d_ != J.d_)
            throw std::invalid_argument("QuadIdeal: mixed orders d=" + d_.get_str() +
                                        " and d=" + J.d_.get_str());
    }

    mpz_class d_, a_, b_, c_;
};

// ---------------------------------------------------------------------------
// Splitting of rational primes
// ---------------------------------------------------------------------------

enum class SplitKind { Split, Inert, Ramified };

struct Splitting {
    SplitKind kind;
    QuadIdeal first;                  // the ramified/inert prime, or the "+" one
    std::optional<QuadIdeal> second;  // the "-" one when split
};

/**
 * Splitting of p in Z[sqrt(d)].  Discriminant is 4d, so 2 always ramifies;
 * odd p ramify iff p | d, split iff d is a nonzero square mod p (then the
 * factors are (p, w -+ r) with r^2 = d mod p, labeled so that "+" has the
 * smaller HNF b entry), and are inert otherwise.
 */
inline Splitting splitting_type(const mpz_class& d, const mpz_class& p) {
    if (p < 2) throw std::invalid_argument("splitting_type: p must be a prime");
    if (p == 2) {
        mpz_class b = (d % 2 == 0) ? 0 : 1;
        return {SplitKind::Ramified, QuadIdeal(d, 2, b, 1), std::nullopt};
    }
    if (d % p == 0) return {SplitKind::Ramified, QuadIdeal(d, p, 0, 1), std::nullopt};
    int leg = mpz_kronecker(d.get_mpz_t(), p.get_mpz_t());
    if (leg == -1) return {SplitKind::Inert, QuadIdeal(d, p, 0, p), std::nullopt};
    // find a square root of d mod p by direct search (p stays desk sized)
    mpz_class dm = d % p;
    if (dm < 0) dm += p;
    mpz_class r = 0;
    for (mpz_class t = 1; t < p; ++t)
        if ((t * t) % p == dm) {
            r = t;
            break;
        }
    if (r == 0) throw std::logic_error("splitting_type: Kronecker symbol lied");
    mpz_class b1 = p - r;  // ideal (p, w - r)
    mpz_class b2 = r;      // ideal (p, w + r)
    if (b2 < b1) std::swap(b1, b2);
    return {SplitKind::Split, QuadIdeal(d, p, b1, 1),
            QuadIdeal(d, p, b2, 1)};
}

}  // namespace arithfn
