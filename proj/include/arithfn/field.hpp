#pragma once

/**
 * @file field.hpp
 * @brief Exact scalar arithmetic over the rationals or a prime field F_p.
 *
 * Every scalar carries its field tag; mixing fields is an error, not a
 * coercion.  Rationals are kept reduced with positive denominator, prime
 * field elements as least residues in [0, p).  No floating point anywhere.
 */

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace arithfn {

/// Field tag: characteristic 0 is the rationals, a prime p is F_p.
struct FieldId {
    unsigned long characteristic = 0;

    friend bool operator==(const FieldId&, const FieldId&) = default;

    bool is_rationals() const { return characteristic == 0; }

    std::string str() const {
        return is_rationals() ? "Q" : "F" + std::to_string(characteristic);
    }
};

inline FieldId rationals() { return FieldId{0}; }

inline bool is_prime_ul(unsigned long n) {
    if (n < 2) return false;
    for (unsigned long q = 2; q * q <= n; ++q)
        if (n % q == 0) return false;
    return true;
}

inline FieldId prime_field(unsigned long p) {
    if (!is_prime_ul(p))
        throw std::invalid_argument("prime_field: " + std::to_string(p) + " is not prime");
    return FieldId{p};
}

class Scalar {
public:
    /// Zero in Q.
    Scalar() : field_{0}, v_(0) {}

    static Scalar zero(FieldId k) { return Scalar(k, mpq_class(0)); }
    static Scalar one(FieldId k) { return Scalar(k, mpq_class(1)); }

    static Scalar rational(mpq_class q) {
        q.canonicalize();
        return Scalar(FieldId{0}, std::move(q));
    }
    static Scalar rational(long num, long den) {
        if (den == 0) throw std::domain_error("Scalar: zero denominator");
        mpq_class q(num, den);
        q.canonicalize();
        return Scalar(FieldId{0}, std::move(q));
    }
    static Scalar integer(const mpz_class& n) { return Scalar(FieldId{0}, mpq_class(n)); }
    static Scalar integer(long n) { return Scalar(FieldId{0}, mpq_class(n)); }

    /// n embedded into k: as-is in Q, reduced to the least residue in F_p.
    static Scalar of_int(FieldId k, const mpz_class& n) {
        if (k.is_rationals()) return integer(n);
        mpz_class r = n % mpz_class(k.characteristic);
        if (r < 0) r += k.characteristic;
        return Scalar(k, mpq_class(r));
    }
    static Scalar of_int(FieldId k, long n) { return of_int(k, mpz_class(n)); }

    FieldId field() const { return field_; }
    unsigned long characteristic() const { return field_.characteristic; }

    bool is_zero() const { return v_ == 0; }
    bool is_one() const { return v_ == 1; }

    /// Numerator/denominator view of the canonical value.
    const mpq_class& value() const { return v_; }

    Scalar operator-() const {
        if (field_.is_rationals()) return Scalar(field_, mpq_class(-v_));
        return of_int(field_, mpz_class(-v_.get_num()));
    }

    friend Scalar operator+(const Scalar& a, const Scalar& b) {
        a.require_same_field(b);
        if (a.field_.is_rationals()) return Scalar(a.field_, mpq_class(a.v_ + b.v_));
        return of_int(a.field_, mpz_class(a.v_.get_num() + b.v_.get_num()));
    }
    friend Scalar operator-(const Scalar& a, const Scalar& b) { return a + (-b); }
    friend Scalar operator*(const Scalar& a, const Scalar& b) {
        a.require_same_field(b);
        if (a.field_.is_rationals()) return Scalar(a.field_, mpq_class(a.v_ * b.v_));
        return of_int(a.field_, mpz_class(a.v_.get_num() * b.v_.get_num()));
    }

    Scalar inverse() const {
        if (is_zero()) throw std::domain_error("Scalar: inverse of zero");
        if (field_.is_rationals()) return Scalar(field_, mpq_class(1 / v_));
        mpz_class inv, p(field_.characteristic);
        if (mpz_invert(inv.get_mpz_t(), v_.get_num().get_mpz_t(), p.get_mpz_t()) == 0)
            throw std::domain_error("Scalar: not invertible mod p");
        return of_int(field_, inv);
    }

    friend Scalar operator/(const Scalar& a, const Scalar& b) { return a * b.inverse(); }

    Scalar& operator+=(const Scalar& b) { return *this = *this + b; }
    Scalar& operator-=(const Scalar& b) { return *this = *this - b; }
    Scalar& operator*=(const Scalar& b) { return *this = *this * b; }

    /// Integer power; negative exponents invert first.
    Scalar pow(long e) const {
        if (e < 0) return inverse().pow(-e);
        Scalar acc = one(field_), base = *this;
        unsigned long k = static_cast<unsigned long>(e);
        while (k) {
            if (k & 1) acc *= base;
            base *= base;
            k >>= 1;
        }
        return acc;
    }

    friend bool operator==(const Scalar& a, const Scalar& b) {
        return a.field_ == b.field_ && a.v_ == b.v_;
    }
    friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }

    /// Canonical text: "5", "-3/2"; least residue for F_p.
    std::string str() const { return v_.get_str(); }

    /**
     * Parse "a" or "a/b" (optional leading sign) into field k.
     * In F_p, "a/b" means a * b^{-1}.
     */
    static Scalar parse(const std::string& text, FieldId k) {
        auto slash = text.find('/');
        try {
            if (slash == std::string::npos) {
                mpz_class n(text);
                return of_int(k, n);
            }
            mpz_class num(text.substr(0, slash));
            mpz_class den(text.substr(slash + 1));
            if (den == 0) throw std::domain_error("Scalar: zero denominator");
            if (k.is_rationals()) {
                mpq_class q(num, den);
                q.canonicalize();
                return Scalar(k, std::move(q));
            }
            return of_int(k, num) / of_int(k, den);
        } catch (const std::invalid_argument&) {
            throw std::invalid_argument("Scalar: cannot parse '" + text + "'");
        }
    }

private:
    Scalar(FieldId k, mpq_class v) : field_(k), v_(std::move(v)) {}

    void require_same_field(const Scalar& b) const {
        if (!(field_ == b.field_))
            throw std::invalid_argument("Scalar: mixed fields " + field_.str() + " and " +
                                        b.field_.str());
    }

    FieldId field_;
    mpq_class v_;
};

}  // namespace arithfn
