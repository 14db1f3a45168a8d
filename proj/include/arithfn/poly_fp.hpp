#pragma once

/**
 * @file poly_fp.hpp
 * @brief Dense polynomials over F_p with just enough machinery to factor:
 *        division with remainder, irreducibility by trial division, and a
 *        canonical enumeration of monic irreducibles ordered by degree and
 *        then lexicographically on the coefficient vector.
 *
 * Coefficients live in [0, p); p is a small prime carried by every value.
 * This is desk-scale code: p and the degrees stay tiny, so quadratic
 * algorithms are fine.
 */

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace arithfn {

class PolyFp {
public:
    /// Zero polynomial over F_p.
    explicit PolyFp(std::uint64_t p) : p_(check_p(p)) {}

    PolyFp(std::uint64_t p, std::vector<std::uint64_t> coeffs)
        : p_(check_p(p)), c_(std::move(coeffs)) {
        for (auto& x : c_) x %= p_;
        trim();
    }

    static PolyFp constant(std::uint64_t p, std::uint64_t value) {
        return PolyFp(p, {value});
    }
    static PolyFp x(std::uint64_t p) { return PolyFp(p, {0, 1}); }

    std::uint64_t p() const { return p_; }
    bool is_zero() const { return c_.empty(); }
    /// Degree; -1 for the zero polynomial.
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    std::uint64_t coeff(std::size_t i) const { return i < c_.size() ? c_[i] : 0; }
    const std::vector<std::uint64_t>& coeffs() const { return c_; }
    bool is_monic() const { return !c_.empty() && c_.back() == 1; }

    friend PolyFp operator+(const PolyFp& f, const PolyFp& g) {
        f.require_same_field(g);
        std::vector<std::uint64_t> r(std::max(f.c_.size(), g.c_.size()), 0);
        for (std::size_t i = 0; i < r.size(); ++i) r[i] = (f.coeff(i) + g.coeff(i)) % f.p_;
        return PolyFp(f.p_, std::move(r));
    }

    friend PolyFp operator-(const PolyFp& f, const PolyFp& g) {
        f.require_same_field(g);
        std::vector<std::uint64_t> r(std::max(f.c_.size(), g.c_.size()), 0);
        for (std::size_t i = 0; i < r.size(); ++i)
            r[i] = (f.coeff(i) + f.p_ - g.coeff(i) % f.p_) % f.p_;
        return PolyFp(f.p_, std::move(r));
    }

    friend PolyFp operator*(const PolyFp& f, const PolyFp& g) {
        f.require_same_field(g);
        if (f.is_zero() || g.is_zero()) return PolyFp(f.p_);
        std::vector<std::uint64_t> r(f.c_.size() + g.c_.size() - 1, 0);
        for (std::size_t i = 0; i < f.c_.size(); ++i)
            for (std::size_t j = 0; j < g.c_.size(); ++j)
                r[i + j] = (r[i + j] + f.c_[i] * g.c_[j]) % f.p_;
        return PolyFp(f.p_, std::move(r));
    }

    friend bool operator==(const PolyFp& f, const PolyFp& g) {
        return f.p_ == g.p_ && f.c_ == g.c_;
    }

    /// Quotient and remainder with deg r < deg g; g must be nonzero.
    std::pair<PolyFp, PolyFp> divmod(const PolyFp& g) const {
        require_same_field(g);
        if (g.is_zero()) throw std::domain_error("PolyFp: division by zero");
        std::vector<std::uint64_t> rem = c_;
        std::vector<std::uint64_t> quo(
            rem.size() >= g.c_.size() ? rem.size() - g.c_.size() + 1 : 0, 0);
        std::uint64_t lead_inv = inv_mod(g.c_.back(), p_);
        while (rem.size() >= g.c_.size() && !rem.empty()) {
            std::uint64_t q = rem.back() * lead_inv % p_;
            std::size_t shift = rem.size() - g.c_.size();
            quo[shift] = q;
            for (std::size_t i = 0; i < g.c_.size(); ++i)
                rem[shift + i] = (rem[shift + i] + p_ - g.c_[i] * q % p_) % p_;
            while (!rem.empty() && rem.back() == 0) rem.pop_back();
        }
        return {PolyFp(p_, std::move(quo)), PolyFp(p_, std::move(rem))};
    }

    bool divides(const PolyFp& f) const { return f.divmod(*this).second.is_zero(); }

    /// Scale by the inverse of the leading coefficient.
    PolyFp monic() const {
        if (is_zero()) throw std::domain_error("PolyFp: zero has no monic form");
        std::uint64_t s = inv_mod(c_.back(), p_);
        std::vector<std::uint64_t> r = c_;
        for (auto& x : r) x = x * s % p_;
        return PolyFp(p_, std::move(r));
    }

    bool is_irreducible() const {
        if (degree() < 1) return false;
        for (const PolyFp& q : monic_irreducibles_up_to(p_, degree() / 2))
            if (q.divides(*this)) return false;
        return true;
    }

    /// "x^2+2x+1" with coefficients reduced mod p; "0" for zero.
    std::string str() const {
        if (is_zero()) return "0";
        std::string out;
        for (int i = degree(); i >= 0; --i) {
            std::uint64_t a = c_[static_cast<std::size_t>(i)];
            if (a == 0) continue;
            if (!out.empty()) out += "+";
            if (i == 0 || a != 1) out += std::to_string(a);
            if (i >= 1) out += a != 1 ? "*x" : "x";
            if (i >= 2) out += "^" + std::to_string(i);
        }
        return out;
    }

    /// Orders by (degree, lexicographic from the top coefficient down).
    friend bool poly_order_less(const PolyFp& f, const PolyFp& g) {
        if (f.degree() != g.degree()) return f.degree() < g.degree();
        for (int i = f.degree(); i >= 0; --i) {
            auto a = f.coeff(static_cast<std::size_t>(i));
            auto b = g.coeff(static_cast<std::size_t>(i));
            if (a != b) return a < b;
        }
        return false;
    }

    /// All monic irreducibles of degree in [1, max_deg], in canonical order.
    static std::vector<PolyFp> monic_irreducibles_up_to(std::uint64_t p, int max_deg) {
        std::vector<PolyFp> out;
        for (int deg = 1; deg <= max_deg; ++deg) {
            // iterate lower coefficients as a base-p counter, low digit fastest;
            // collect and sort per degree to get the lex-from-the-top order
            std::vector<PolyFp> layer;
            std::vector<std::uint64_t> digits(static_cast<std::size_t>(deg), 0);
            while (true) {
                std::vector<std::uint64_t> c = digits;
                c.push_back(1);
                PolyFp cand(p, std::move(c));
                bool irred = true;
                for (const PolyFp& q : out)
                    if (2 * q.degree() > deg) break;  // out is degree-sorted
                    else if (q.divides(cand)) {
                        irred = false;
                        break;
                    }
                if (irred) layer.push_back(cand);
                std::size_t i = 0;
                for (; i < digits.size(); ++i) {
                    if (++digits[i] < p) break;
                    digits[i] = 0;
                }
                if (i == digits.size()) break;
            }
            std::sort(layer.begin(), layer.end(),
                      [](const PolyFp& a, const PolyFp& b) { return poly_order_less(a, b); });
            out.insert(out.end(), layer.begin(), layer.end());
        }
        return out;
    }

private:
    static std::uint64_t check_p(std::uint64_t p) {
        if (p < 2) throw std::invalid_argument("PolyFp: p must be a prime >= 2");
        for (std::uint64_t q = 2; q * q <= p; ++q)
            if (p % q == 0) throw std::invalid_argument("PolyFp: p must be prime");
        return p;
    }

    static std::uint64_t inv_mod(std::uint64_t a, std::uint64_t p) {
        // Fermat; p is prime and a nonzero mod p
        a %= p;
        if (a == 0) throw std::domain_error("PolyFp: inverting zero");
        std::uint64_t r = 1, base = a, e = p - 2;
        while (e) {
            if (e & 1) r = r * base % p;
            base = base * base % p;
            e >>= 1;
        }
        return r;
    }

    void require_same_field(const PolyFp& g) const {
        if (p_ != g.p_) throw std::invalid_argument("PolyFp: mixed characteristics");
    }

    void trim() {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }

    std::uint64_t p_;
    std::vector<std::uint64_t> c_;
};

}  // namespace arithfn
