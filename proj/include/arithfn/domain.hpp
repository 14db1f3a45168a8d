#pragma once

/**
 * @file domain.hpp
 * @brief Dedekind domains presented through their nonzero-ideal monoids.
 *
 * Four shapes: the integers, polynomial rings F_p[x], quadratic orders
 * Z[sqrt(d)] for squarefree d = 2, 3 mod 4, and semi-local localizations of
 * the first and last at a finite set of maximal ideals.  Each domain exposes
 * one shared IdealMonoid whose primes are the maximal ideals in a canonical
 * order: nondecreasing norm, ties broken by the HNF b entry (so the two
 * primes over a split p get stable labels "Pp+" and "Pp-", plus first).
 *
 * factor_principal maps a nonzero element to the exponent vector of its
 * principal ideal; for quadratic orders that runs by repeated exact division
 * I -> (I * conj(P)) / p, which doubles as a correctness check because the
 * leftover ideal must come out the whole ring.
 */

#include <gmpxx.h>

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <deque>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <variant>
#include <vector>

#include "arithfn/dirichlet.hpp"
#include "arithfn/monoid.hpp"
#include "arithfn/poly_fp.hpp"
#include "arithfn/quad_ideal.hpp"

namespace arithfn {

using DomainElement = std::variant<mpz_class, QuadElem, PolyFp>;

enum class DomainKind { Integers, Poly, Quadratic, Localized };

class Domain;
using DomainPtr = std::shared_ptr<const Domain>;
class IdealMonoid;

class Domain : public std::enable_shared_from_this<Domain> {
public:
    virtual ~Domain() = default;

    virtual DomainKind kind() const = 0;
    virtual std::string signature() const = 0;
    virtual std::string name() const = 0;

    /// True for the semi-local localizations, where Max(A) is finite.
    virtual bool finite_max() const = 0;
    virtual std::size_t max_count() const {
        throw std::domain_error(signature() + ": infinitely many maximal ideals");
    }

    virtual const PrimeInfo& prime_info(PrimeId id) const = 0;
    virtual std::optional<PrimeId> find_prime_by_label(const std::string& label) const = 0;

    virtual bool accepts(const DomainElement& x) const = 0;
    virtual bool is_zero(const DomainElement& x) const = 0;
    virtual std::string element_str(const DomainElement& x) const = 0;
    virtual DomainElement parse_element(const std::string& text) const = 0;
    virtual DomainElement one() const = 0;
    virtual DomainElement mul_elements(const DomainElement& a,
                                       const DomainElement& b) const = 0;

    /// Exponent vector of the principal ideal xA; rejects x = 0 (the zero
    /// ideal is not a monoid element).
    virtual MonoidElement factor_principal(const DomainElement& x) const = 0;

    /// A generator of I when one is found.  A nullopt is a proof of
    /// non-principality only when principality_is_decisive().
    virtual std::optional<DomainElement> principal_generator(const MonoidElement& I) const = 0;
    virtual bool principality_is_decisive() const = 0;

    /// The monoid of nonzero ideals; one shared instance per domain.
    MonoidPtr ideal_monoid() const;

    mpz_class ideal_norm(const MonoidElement& I) const {
        require_ours(I);
        return I.norm();
    }

    /// |(A/I)^x| by the local formula N(P)^e - N(P)^(e-1).
    mpz_class euler_phi(const MonoidElement& I) const {
        require_ours(I);
        mpz_class phi = 1;
        for (auto& [id, e] : I.exponents()) {
            const mpz_class& N = prime_info(id).norm;
            mpz_class hi, lo;
            mpz_pow_ui(hi.get_mpz_t(), N.get_mpz_t(), e);
            mpz_pow_ui(lo.get_mpz_t(), N.get_mpz_t(), e - 1);
            phi *= hi - lo;
        }
        return phi;
    }

    void require_ours(const MonoidElement& I) const { require_same_monoid(I.monoid(), ideal_monoid()); }

private:
    mutable std::mutex monoid_mu_;
    mutable std::shared_ptr<const IdealMonoid> monoid_;
};

/// Monoid view of the nonzero ideals of a domain.
class IdealMonoid final : public Monoid {
public:
    explicit IdealMonoid(DomainPtr dom) : dom_(std::move(dom)) {}

    std::string signature() const override { return "I(" + dom_->signature() + ")"; }
    bool finite_primes() const override { return dom_->finite_max(); }
    std::size_t prime_count() const override { return dom_->max_count(); }
    bool has_norms() const override { return true; }
    const PrimeInfo& prime(PrimeId id) const override { return dom_->prime_info(id); }
    std::optional<PrimeId> find_prime_by_label(const std::string& label) const override {
        return dom_->find_prime_by_label(label);
    }

    const DomainPtr& domain() const { return dom_; }

private:
    DomainPtr dom_;
};

inline MonoidPtr Domain::ideal_monoid() const {
    std::lock_guard<std::mutex> lock(monoid_mu_);
    if (!monoid_) monoid_ = std::make_shared<const IdealMonoid>(shared_from_this());
    return monoid_;
}

// ---------------------------------------------------------------------------
// Element parsing helpers
// ---------------------------------------------------------------------------

namespace detail {

/// "3+2w", "-w", "5"; terms are [sign][digits]['*']['w'].
inline QuadElem parse_quad_elem(const std::string& text) {
    std::string s;
    for (char ch : text)
        if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
    if (s.empty()) throw std::invalid_argument("quadratic element: empty input");
    QuadElem out{0, 0};
    std::size_t i = 0;
    while (i < s.size()) {
        int sign = 1;
        while (i < s.size() && (s[i] == '+' || s[i] == '-')) {
            if (s[i] == '-') sign = -sign;
            ++i;
        }
        std::size_t start = i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
        bool have_digits = i > start;
        mpz_class coef = have_digits ? mpz_class(s.substr(start, i - start)) : mpz_class(1);
        if (i < s.size() && s[i] == '*') ++i;
        if (i < s.size() && s[i] == 'w') {
            ++i;
            out.v += sign * coef;
        } else if (have_digits) {
            out.u += sign * coef;
        } else {
            throw std::invalid_argument("quadratic element: cannot parse '" + text + "'");
        }
        if (i < s.size() && s[i] != '+' && s[i] != '-')
            throw std::invalid_argument("quadratic element: cannot parse '" + text + "'");
    }
    return out;
}

/// "x^2+2x+1", "3*x", "7"; coefficients reduced mod p, '-' accepted.
inline PolyFp parse_poly_fp(std::uint64_t p, const std::string& text) {
    std::string s;
    for (char ch : text)
        if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
    if (s.empty()) throw std::invalid_argument("polynomial: empty input");
    std::vector<std::pair<std::size_t, std::int64_t>> terms;
    std::size_t i = 0, max_deg = 0;
    while (i < s.size()) {
        std::int64_t sign = 1;
        while (i < s.size() && (s[i] == '+' || s[i] == '-')) {
            if (s[i] == '-') sign = -sign;
            ++i;
        }
        std::size_t start = i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
        bool have_digits = i > start;
        std::uint64_t coef =
            have_digits ? std::stoull(s.substr(start, i - start)) % p : 1;
        if (i < s.size() && s[i] == '*') ++i;
        std::size_t deg = 0;
        if (i < s.size() && s[i] == 'x') {
            ++i;
            deg = 1;
            if (i < s.size() && s[i] == '^') {
                ++i;
                start = i;
                while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
                if (i == start)
                    throw std::invalid_argument("polynomial: cannot parse '" + text + "'");
                deg = std::stoull(s.substr(start, i - start));
            }
        } else if (!have_digits) {
            throw std::invalid_argument("polynomial: cannot parse '" + text + "'");
        }
        terms.emplace_back(deg, sign * static_cast<std::int64_t>(coef));
        max_deg = std::max(max_deg, deg);
        if (i < s.size() && s[i] != '+' && s[i] != '-')
            throw std::invalid_argument("polynomial: cannot parse '" + text + "'");
    }
    std::vector<std::uint64_t> c(max_deg + 1, 0);
    auto m = static_cast<std::int64_t>(p);
    for (auto& [deg, sc] : terms)
        c[deg] = static_cast<std::uint64_t>(((static_cast<std::int64_t>(c[deg]) + sc) % m + m) % m);
    return PolyFp(p, std::move(c));
}

inline std::vector<std::pair<mpz_class, std::uint32_t>> trial_factor(mpz_class n) {
    std::vector<std::pair<mpz_class, std::uint32_t>> out;
    for (mpz_class p = 2; p * p <= n; ++p) {
        std::uint32_t e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        if (e) out.emplace_back(p, e);
    }
    if (n > 1) out.emplace_back(n, 1);
    return out;
}

inline bool is_prime_trial(const mpz_class& p) {
    if (p < 2) return false;
    for (mpz_class q = 2; q * q <= p; ++q)
        if (p % q == 0) return false;
    return true;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// The integers
// ---------------------------------------------------------------------------

class IntegerDomain final : public Domain {
public:
    static std::shared_ptr<const IntegerDomain> make() {
        return std::make_shared<const IntegerDomain>();
    }

    DomainKind kind() const override { return DomainKind::Integers; }
    std::string signature() const override { return "Z"; }
    std::string name() const override { return "Z"; }
    bool finite_max() const override { return false; }

    const PrimeInfo& prime_info(PrimeId id) const override { return zplus_->prime(id); }
    std::optional<PrimeId> find_prime_by_label(const std::string& label) const override {
        return zplus_->find_prime_by_label(label);
    }

    /// Id of (p) for a rational prime p.
    PrimeId prime_id_of(const mpz_class& p) const { return zplus_->prime_id_of(p); }

    bool accepts(const DomainElement& x) const override {
        return std::holds_alternative<mpz_class>(x);
    }
    bool is_zero(const DomainElement& x) const override { return as_int(x) == 0; }
    std::string element_str(const DomainElement& x) const override {
        return as_int(x).get_str();
    }
    DomainElement parse_element(const std::string& text) const override {
        try {
            return mpz_class(text);
        } catch (const std::invalid_argument&) {
            throw std::invalid_argument("Z: cannot parse integer '" + text + "'");
        }
    }
    DomainElement one() const override { return mpz_class(1); }
    DomainElement mul_elements(const DomainElement& a, const DomainElement& b) const override {
        return mpz_class(as_int(a) * as_int(b));
    }

    MonoidElement factor_principal(const DomainElement& x) const override {
        mpz_class n = abs(as_int(x));
        if (n == 0) throw std::domain_error("factor_principal: zero generates the zero ideal");
        return MonoidElement::from_exponents(ideal_monoid(),
                                             zplus_->element_of(n).exponents());
    }

    std::optional<DomainElement> principal_generator(const MonoidElement& I) const override {
        require_ours(I);
        return DomainElement(I.norm());  // prime norms are the primes themselves
    }
    bool principality_is_decisive() const override { return true; }

    static const mpz_class& as_int(const DomainElement& x) {
        if (auto* p = std::get_if<mpz_class>(&x)) return *p;
        throw std::invalid_argument("Z: element has the wrong type");
    }

private:
    std::shared_ptr<const PositiveIntegers> zplus_ = PositiveIntegers::make();
};

// ---------------------------------------------------------------------------
// F_p[x]
// ---------------------------------------------------------------------------

class PolyDomain final : public Domain {
public:
    static std::shared_ptr<const PolyDomain> make(std::uint64_t p) {
        return std::make_shared<const PolyDomain>(p);
    }

    explicit PolyDomain(std::uint64_t p) : p_(p) {
        PolyFp probe(p);  // validates that p is prime
        (void)probe;
    }

    DomainKind kind() const override { return DomainKind::Poly; }
    std::string signature() const override { return "F" + std::to_string(p_) + "[x]"; }
    std::string name() const override { return "F_" + std::to_string(p_) + "[x]"; }
    bool finite_max() const override { return false; }
    std::uint64_t p() const { return p_; }

    const PrimeInfo& prime_info(PrimeId id) const override {
        std::lock_guard<std::mutex> lock(mu_);
        grow_to_index(id);
        return infos_[id];
    }

    std::optional<PrimeId> find_prime_by_label(const std::string& label) const override {
        try {
            return prime_id_of(detail::parse_poly_fp(p_, label));
        } catch (const std::invalid_argument&) {
            return std::nullopt;
        }
    }

    /// The monic irreducible behind a prime id.
    const PolyFp& prime_poly(PrimeId id) const {
        std::lock_guard<std::mutex> lock(mu_);
        grow_to_index(id);
        return polys_[id];
    }

    PrimeId prime_id_of(const PolyFp& q) const {
        if (q.p() != p_) throw std::invalid_argument(signature() + ": wrong characteristic");
        if (q.degree() < 1 || !q.is_monic())
            throw std::invalid_argument(signature() + ": " + q.str() + " is not a monic prime");
        std::lock_guard<std::mutex> lock(mu_);
        while (degree_done_ < q.degree()) grow_one_degree();
        for (std::size_t i = 0; i < polys_.size(); ++i)
            if (polys_[i] == q) return static_cast<PrimeId>(i);
        throw std::invalid_argument(signature() + ": " + q.str() + " is not irreducible");
    }

    bool accepts(const DomainElement& x) const override {
        auto* f = std::get_if<PolyFp>(&x);
        return f && f->p() == p_;
    }
    bool is_zero(const DomainElement& x) const override { return as_poly(x).is_zero(); }
    std::string element_str(const DomainElement& x) const override { return as_poly(x).str(); }
    DomainElement parse_element(const std::string& text) const override {
        return detail::parse_poly_fp(p_, text);
    }
    DomainElement one() const override { return PolyFp::constant(p_, 1); }
    DomainElement mul_elements(const DomainElement& a, const DomainElement& b) const override {
        return as_poly(a) * as_poly(b);
    }

    MonoidElement factor_principal(const DomainElement& x) const override {
        const PolyFp& f = as_poly(x);
        if (f.is_zero()) throw std::domain_error("factor_principal: zero generates the zero ideal");
        PolyFp g = f.monic();
        ExpVec exps;
        for (PrimeId id = 0; g.degree() >= 1; ++id) {
            const PolyFp& q = prime_poly(id);
            if (2 * q.degree() > g.degree()) break;
            std::uint32_t e = 0;
            while (q.divides(g)) {
                g = g.divmod(q).first;
                ++e;
            }
            if (e) exps.emplace_back(id, e);
        }
        if (g.degree() >= 1) exps.emplace_back(prime_id_of(g), 1);  // leftover is irreducible
        return MonoidElement::from_exponents(ideal_monoid(), std::move(exps));
    }

    std::optional<DomainElement> principal_generator(const MonoidElement& I) const override {
        require_ours(I);
        PolyFp g = PolyFp::constant(p_, 1);
        for (auto& [id, e] : I.exponents())
            for (std::uint32_t k = 0; k < e; ++k) g = g * prime_poly(id);
        return DomainElement(std::move(g));
    }
    bool principality_is_decisive() const override { return true; }

    const PolyFp& as_poly(const DomainElement& x) const {
        auto* f = std::get_if<PolyFp>(&x);
        if (!f || f->p() != p_)
            throw std::invalid_argument(signature() + ": element has the wrong type");
        return *f;
    }

private:
    // callers hold mu_
    void grow_to_index(PrimeId id) const {
        while (polys_.size() <= id) grow_one_degree();
    }
    void grow_one_degree() const {
        int deg = degree_done_ + 1;
        // enumerate monic polys of this degree; every proper factor has a
        // smaller degree, so the current pool decides irreducibility
        std::vector<PolyFp> fresh;
        std::vector<std::uint64_t> digits(static_cast<std::size_t>(deg), 0);
        while (true) {
            std::vector<std::uint64_t> c = digits;
            c.push_back(1);
            PolyFp cand(p_, std::move(c));
            bool irred = true;
            for (const auto& q : polys_) {
                if (2 * q.degree() > deg) break;
                if (q.divides(cand)) {
                    irred = false;
                    break;
                }
            }
            if (irred) fresh.push_back(cand);
            std::size_t i = 0;
            for (; i < digits.size(); ++i) {
                if (++digits[i] < p_) break;
                digits[i] = 0;
            }
            if (i == digits.size()) break;
        }
        std::sort(fresh.begin(), fresh.end(),
                  [](const PolyFp& a, const PolyFp& b) { return poly_order_less(a, b); });
        mpz_class norm;
        mpz_ui_pow_ui(norm.get_mpz_t(), static_cast<unsigned long>(p_),
                      static_cast<unsigned long>(deg));
        for (auto& q : fresh) {
            polys_.push_back(q);
            infos_.push_back(PrimeInfo{q.str(), true, norm});
        }
        degree_done_ = deg;
    }

    std::uint64_t p_;
    mutable std::mutex mu_;
    mutable int degree_done_ = 0;
    // deques: prime_info and prime_poly hand out references that must
    // survive later growth
    mutable std::deque<PolyFp> polys_;
    mutable std::deque<PrimeInfo> infos_;
};

// ---------------------------------------------------------------------------
// Quadratic orders Z[sqrt(d)]
// ---------------------------------------------------------------------------

class QuadDomain final : public Domain {
public:
    static std::shared_ptr<const QuadDomain> make(mpz_class d) {
        return std::make_shared<const QuadDomain>(std::move(d));
    }

    explicit QuadDomain(mpz_class d) : d_(std::move(d)) {
        QuadIdeal::one(d_);  // validates d: squarefree, 2 or 3 mod 4
    }

    DomainKind kind() const override { return DomainKind::Quadratic; }
    std::string signature() const override { return "Z[sqrt(" + d_.get_str() + ")]"; }
    std::string name() const override { return signature(); }
    bool finite_max() const override { return false; }
    const mpz_class& d() const { return d_; }

    const PrimeInfo& prime_info(PrimeId id) const override {
        std::lock_guard<std::mutex> lock(mu_);
        grow_to_index(id);
        return infos_[id];
    }

    std::optional<PrimeId> find_prime_by_label(const std::string& label) const override {
        if (label.size() < 2 || label[0] != 'P') return std::nullopt;
        std::string digits = label.substr(1);
        if (digits.back() == '+' || digits.back() == '-') digits.pop_back();
        mpz_class p;
        try {
            p = mpz_class(digits);
        } catch (const std::invalid_argument&) {
            return std::nullopt;
        }
        if (!detail::is_prime_trial(p)) return std::nullopt;
        std::lock_guard<std::mutex> lock(mu_);
        grow_to_norm(p * p);  // covers the inert case
        for (std::size_t i = 0; i < infos_.size(); ++i)
            if (infos_[i].label == label) return static_cast<PrimeId>(i);
        return std::nullopt;
    }

    /// HNF ideal behind a prime id.
    const QuadIdeal& prime_ideal(PrimeId id) const {
        std::lock_guard<std::mutex> lock(mu_);
        grow_to_index(id);
        return ideals_[id];
    }

    /// The rational prime a prime id lies over; also its contraction to Z.
    const mpz_class& rational_under(PrimeId id) const {
        std::lock_guard<std::mutex> lock(mu_);
        grow_to_index(id);
        return under_[id];
    }

    PrimeId prime_id_of(const QuadIdeal& P) const {
        std::lock_guard<std::mutex> lock(mu_);
        grow_to_norm(P.norm());
        for (std::size_t i = 0; i < ideals_.size(); ++i)
            if (ideals_[i] == P) return static_cast<PrimeId>(i);
        throw std::invalid_argument(signature() + ": " + P.str() + " is not a prime ideal");
    }

    struct PrimeSplitting {
        SplitKind split_kind;
        std::vector<PrimeId> ids;  // one id, or two (the "+" one first)
    };

    PrimeSplitting splitting(const mpz_class& p) const {
        if (!detail::is_prime_trial(p))
            throw std::invalid_argument(signature() + ": " + p.get_str() + " is not prime");
        Splitting s = splitting_type(d_, p);
        PrimeSplitting out{s.kind, {prime_id_of(s.first)}};
        if (s.second) out.ids.push_back(prime_id_of(*s.second));
        return out;
    }

    bool accepts(const DomainElement& x) const override {
        return std::holds_alternative<QuadElem>(x);
    }
    bool is_zero(const DomainElement& x) const override { return quad_is_zero(as_quad(x)); }
    std::string element_str(const DomainElement& x) const override {
        return quad_elem_str(as_quad(x));
    }
    DomainElement parse_element(const std::string& text) const override {
        return detail::parse_quad_elem(text);
    }
    DomainElement one() const override { return QuadElem{1, 0}; }
    DomainElement mul_elements(const DomainElement& a, const DomainElement& b) const override {
        return quad_mul(as_quad(a), as_quad(b), d_);
    }

    MonoidElement factor_principal(const DomainElement& x) const override {
        const QuadElem& g = as_quad(x);
        mpz_class N = abs(quad_elem_norm(g, d_));
        if (N == 0) throw std::domain_error("factor_principal: zero generates the zero ideal");
        QuadIdeal I = QuadIdeal::principal(d_, g);
        ExpVec exps;
        for (auto& [p, e] : detail::trial_factor(N)) {
            (void)e;
            Splitting s = splitting_type(d_, p);
            std::vector<const QuadIdeal*> over{&s.first};
            if (s.second) over.push_back(&*s.second);
            for (const QuadIdeal* P : over) {
                std::uint32_t v = 0;
                while (auto next = I.divide_by_prime(*P, p)) {
                    I = *next;
                    ++v;
                }
                if (v) exps.emplace_back(prime_id_of(*P), v);
            }
        }
        if (!I.is_whole_ring())
            throw std::logic_error("factor_principal: division left a nontrivial ideal");
        return MonoidElement::from_exponents(ideal_monoid(), std::move(exps));
    }

    /// HNF form of a monoid element, multiplying out its prime powers.
    QuadIdeal hnf_of(const MonoidElement& I) const {
        require_ours(I);
        QuadIdeal H = QuadIdeal::one(d_);
        for (auto& [id, e] : I.exponents()) {
            const QuadIdeal P = prime_ideal(id);
            for (std::uint32_t k = 0; k < e; ++k) H = H * P;
        }
        return H;
    }

    /**
     * Norm-form search for a generator.  For d < 0 the form u^2 + |d| v^2
     * has finitely many candidates at any value, so a nullopt is a proof;
     * for d > 0 the search is cut off at |v| <= 1000 and stays inconclusive.
     */
    std::optional<DomainElement> principal_generator(const MonoidElement& I) const override {
        QuadIdeal H = hnf_of(I);
        mpz_class N = H.norm();
        auto try_candidates = [&](const mpz_class& u, const mpz_class& v)
            -> std::optional<QuadElem> {
            for (const QuadElem& g : {QuadElem{u, v}, QuadElem{u, -v}}) {
                if (quad_is_zero(g)) continue;
                if (QuadIdeal::principal(d_, g) == H) return g;
                if (v == 0) break;  // the two candidates coincide
            }
            return std::nullopt;
        };
        if (d_ < 0) {
            mpz_class D = -d_;
            for (mpz_class v = 0; D * v * v <= N; ++v) {
                mpz_class r = N - D * v * v;
                if (mpz_perfect_square_p(r.get_mpz_t())) {
                    mpz_class u;
                    mpz_sqrt(u.get_mpz_t(), r.get_mpz_t());
                    if (auto g = try_candidates(u, v)) return DomainElement(*g);
                }
            }
            return std::nullopt;
        }
        for (mpz_class v = 0; v <= 1000; ++v) {
            for (const mpz_class& target : {mpz_class(N + d_ * v * v), mpz_class(-N + d_ * v * v)}) {
                if (target < 0 || !mpz_perfect_square_p(target.get_mpz_t())) continue;
                mpz_class u;
                mpz_sqrt(u.get_mpz_t(), target.get_mpz_t());
                if (auto g = try_candidates(u, v)) return DomainElement(*g);
            }
        }
        return std::nullopt;
    }
    bool principality_is_decisive() const override { return d_ < 0; }

    const QuadElem& as_quad(const DomainElement& x) const {
        if (auto* g = std::get_if<QuadElem>(&x)) return *g;
        throw std::invalid_argument(signature() + ": element has the wrong type");
    }

private:
    // callers hold mu_
    void grow_to_index(PrimeId id) const {
        while (ideals_.size() <= id) grow_to_norm(bound_ < 8 ? mpz_class(16) : mpz_class(bound_ * 2));
    }

    /// Rebuild the (norm, b)-sorted pool up to a norm bound; the previous
    /// pool must reappear as a prefix, which keeps ids stable.
    void grow_to_norm(const mpz_class& request) const {
        if (request <= bound_) return;
        mpz_class target = std::max(request, mpz_class(bound_ * 2));
        struct Entry {
            mpz_class norm, b, p;
            QuadIdeal ideal;
            std::string label;
        };
        std::vector<Entry> entries;
        for (mpz_class p = 2; p <= target; ++p) {
            if (!detail::is_prime_trial(p)) continue;
            Splitting s = splitting_type(d_, p);
            std::string base = "P" + p.get_str();
            switch (s.kind) {
                case SplitKind::Split:
                    entries.push_back({p, s.first.b(), p, s.first, base + "+"});
                    entries.push_back({p, s.second->b(), p, *s.second, base + "-"});
                    break;
                case SplitKind::Ramified:
                    entries.push_back({p, s.first.b(), p, s.first, base});
                    break;
                case SplitKind::Inert:
                    if (p * p <= target)
                        entries.push_back({p * p, s.first.b(), p, s.first, base});
                    break;
            }
        }
        std::sort(entries.begin(), entries.end(), [](const Entry& x, const Entry& y) {
            return std::tie(x.norm, x.b) < std::tie(y.norm, y.b);
        });
        if (entries.size() < ideals_.size())
            throw std::logic_error(signature() + ": prime pool shrank on growth");
        for (std::size_t i = 0; i < ideals_.size(); ++i)
            if (!(entries[i].ideal == ideals_[i]))
                throw std::logic_error(signature() + ": prime enumeration lost stability");
        for (std::size_t i = ideals_.size(); i < entries.size(); ++i) {
            ideals_.push_back(entries[i].ideal);
            under_.push_back(entries[i].p);
            infos_.push_back(PrimeInfo{entries[i].label, true, entries[i].norm});
        }
        bound_ = target;
    }

    mpz_class d_;
    mutable std::mutex mu_;
    mutable mpz_class bound_ = 1;
    // deques: references out of prime_info/prime_ideal survive growth
    mutable std::deque<QuadIdeal> ideals_;
    mutable std::deque<mpz_class> under_;
    mutable std::deque<PrimeInfo> infos_;
};

// ---------------------------------------------------------------------------
// Semi-local localizations
// ---------------------------------------------------------------------------

/**
 * A_S for a finite set S of maximal ideals of the base: everything outside
 * S becomes a unit, so Max(A_S) = S and ideals keep only their S-part.
 * Elements are base elements; S is given by base prime ids.
 */
class LocalizedDomain final : public Domain {
public:
    static std::shared_ptr<const LocalizedDomain> make(DomainPtr base,
                                                       std::vector<PrimeId> s) {
        if (!base) throw std::invalid_argument("localization: null base");
        if (base->kind() != DomainKind::Integers && base->kind() != DomainKind::Quadratic)
            throw std::invalid_argument("localization: base must be Z or a quadratic order");
        std::sort(s.begin(), s.end());
        s.erase(std::unique(s.begin(), s.end()), s.end());
        if (s.empty()) throw std::invalid_argument("localization: S must not be empty");
        for (PrimeId id : s) base->prime_info(id);  // force existence
        return std::make_shared<const LocalizedDomain>(std::move(base), std::move(s));
    }

    LocalizedDomain(DomainPtr base, std::vector<PrimeId> s)
        : base_(std::move(base)), s_(std::move(s)) {}

    DomainKind kind() const override { return DomainKind::Localized; }

    std::string signature() const override {
        std::string out = "Loc(" + base_->signature() + ";";
        for (std::size_t i = 0; i < s_.size(); ++i)
            out += (i ? "," : "") + base_->prime_info(s_[i]).label;
        return out + ")";
    }
    std::string name() const override { return signature(); }

    bool finite_max() const override { return true; }
    std::size_t max_count() const override { return s_.size(); }

    const DomainPtr& base() const { return base_; }
    const std::vector<PrimeId>& base_ids() const { return s_; }

    /// Local id of a base prime, when it survives the localization.
    std::optional<PrimeId> local_id_of(PrimeId base_id) const {
        auto it = std::lower_bound(s_.begin(), s_.end(), base_id);
        if (it == s_.end() || *it != base_id) return std::nullopt;
        return static_cast<PrimeId>(it - s_.begin());
    }

    const PrimeInfo& prime_info(PrimeId id) const override {
        if (id >= s_.size())
            throw std::out_of_range(signature() + ": prime index " + std::to_string(id) +
                                    " out of range");
        return base_->prime_info(s_[id]);
    }

    std::optional<PrimeId> find_prime_by_label(const std::string& label) const override {
        for (std::size_t i = 0; i < s_.size(); ++i)
            if (prime_info(static_cast<PrimeId>(i)).label == label)
                return static_cast<PrimeId>(i);
        return std::nullopt;
    }

    bool accepts(const DomainElement& x) const override { return base_->accepts(x); }
    bool is_zero(const DomainElement& x) const override { return base_->is_zero(x); }
    std::string element_str(const DomainElement& x) const override {
        return base_->element_str(x);
    }
    DomainElement parse_element(const std::string& text) const override {
        return base_->parse_element(text);
    }
    DomainElement one() const override { return base_->one(); }
    DomainElement mul_elements(const DomainElement& a, const DomainElement& b) const override {
        return base_->mul_elements(a, b);
    }

    MonoidElement factor_principal(const DomainElement& x) const override {
        MonoidElement over_base = base_->factor_principal(x);
        ExpVec exps;
        for (auto& [bid, e] : over_base.exponents())
            if (auto lid = local_id_of(bid)) exps.emplace_back(*lid, e);
        return MonoidElement::from_exponents(ideal_monoid(), std::move(exps));
    }

    /**
     * Semi-local Dedekind domains are PIDs, so a generator always exists;
     * finding one may need a unit adjustment by primes outside S.  The
     * search multiplies by small outside ideals and asks the base, so a
     * nullopt over a quadratic base is inconclusive.
     */
    std::optional<DomainElement> principal_generator(const MonoidElement& I) const override {
        require_ours(I);
        ExpVec base_exps;
        for (auto& [lid, e] : I.exponents()) base_exps.emplace_back(s_[lid], e);
        MonoidElement J =
            MonoidElement::from_exponents(base_->ideal_monoid(), std::move(base_exps));
        if (auto g = base_->principal_generator(J)) return g;
        // adjust by ideals supported outside S
        std::vector<PrimeId> outside;
        for (PrimeId bid = 0; outside.size() < 6; ++bid)
            if (!local_id_of(bid)) outside.push_back(bid);
        for (const MonoidElement& K :
             enumerate_universe(base_->ideal_monoid(), outside, 3)) {
            if (K.is_identity()) continue;
            if (auto g = base_->principal_generator(J * K)) return g;
        }
        return std::nullopt;
    }
    bool principality_is_decisive() const override {
        return base_->kind() == DomainKind::Integers;
    }

private:
    DomainPtr base_;
    std::vector<PrimeId> s_;  // sorted base prime ids
};

// ---------------------------------------------------------------------------
// Ring homomorphisms between the domains on the menu
// ---------------------------------------------------------------------------

/**
 * The four supported shapes: identity, Z into a quadratic order, a
 * localization map over a fixed base, and Z_S into a localized quadratic
 * order.  Construction only checks shapes; whether the map actually lands
 * inside the target in a prime-respecting way is the quasi-integrality
 * question, answered per target prime by contract_prime and in bulk by
 * quasi_integral_witness.  Declaring a bogus map (say Z localized at (2)
 * into Z localized at (3)) is allowed, and the witness then names the
 * target prime whose contraction escapes the source.
 */
class DomainHom {
public:
    enum class Kind { Identity, InclusionQuad, Localize, LocalizedInclusion };

    static DomainHom identity(DomainPtr a) {
        if (!a) throw std::invalid_argument("hom: null domain");
        return DomainHom(Kind::Identity, a, a);
    }

    /// Z -> Z[sqrt(d)].
    static DomainHom inclusion_quad(DomainPtr z, DomainPtr quad) {
        if (!z || z->kind() != DomainKind::Integers)
            throw std::invalid_argument("hom: source must be Z");
        if (!quad || quad->kind() != DomainKind::Quadratic)
            throw std::invalid_argument("hom: target must be a quadratic order");
        return DomainHom(Kind::InclusionQuad, std::move(z), std::move(quad));
    }

    /// A -> A_T or A_S -> A_T over the same base A.
    static DomainHom localize(DomainPtr source, DomainPtr target) {
        auto t = as_localized(target, "hom: target must be a localization");
        bool source_is_base = source && source->signature() == t->base()->signature();
        if (!source_is_base)
            as_localized_over(source, t->base(), "hom: source must be the base or a localization of it");
        return DomainHom(Kind::Localize, std::move(source), std::move(target));
    }

    /// Z_S -> (quadratic order)_T.
    static DomainHom localized_inclusion(DomainPtr zs, DomainPtr quadt) {
        auto s = as_localized(zs, "hom: source must be a localization of Z");
        if (s->base()->kind() != DomainKind::Integers)
            throw std::invalid_argument("hom: source must be a localization of Z");
        auto t = as_localized(quadt, "hom: target must be a localized quadratic order");
        if (t->base()->kind() != DomainKind::Quadratic)
            throw std::invalid_argument("hom: target must be a localized quadratic order");
        return DomainHom(Kind::LocalizedInclusion, std::move(zs), std::move(quadt));
    }

    Kind kind() const { return kind_; }
    const DomainPtr& source() const { return source_; }
    const DomainPtr& target() const { return target_; }
    std::string describe() const { return source_->name() + " -> " + target_->name(); }

    DomainElement map_element(const DomainElement& x) const {
        if (!source_->accepts(x))
            throw std::invalid_argument("hom: element is not in " + source_->name());
        switch (kind_) {
            case Kind::Identity:
            case Kind::Localize:
                return x;
            case Kind::InclusionQuad:
            case Kind::LocalizedInclusion:
                return DomainElement(QuadElem{IntegerDomain::as_int(x), 0});
        }
        throw std::logic_error("hom: unreachable");
    }

    /**
     * Contraction of a target prime to a source prime id; nullopt when the
     * contraction is not an allowed prime of the source, which is exactly
     * the quasi-integrality failure.
     */
    std::optional<PrimeId> contract_prime(PrimeId t) const {
        switch (kind_) {
            case Kind::Identity:
                target_->prime_info(t);  // bounds check
                return t;
            case Kind::InclusionQuad: {
                auto quad = std::static_pointer_cast<const QuadDomain>(target_);
                auto z = std::static_pointer_cast<const IntegerDomain>(source_);
                return z->prime_id_of(quad->rational_under(t));
            }
            case Kind::Localize: {
                auto tgt = std::static_pointer_cast<const LocalizedDomain>(target_);
                if (t >= tgt->max_count())
                    throw std::out_of_range("hom: target prime out of range");
                PrimeId bid = tgt->base_ids()[t];
                if (source_->signature() == tgt->base()->signature()) return bid;
                auto src = std::static_pointer_cast<const LocalizedDomain>(source_);
                return src->local_id_of(bid);
            }
            case Kind::LocalizedInclusion: {
                auto tgt = std::static_pointer_cast<const LocalizedDomain>(target_);
                if (t >= tgt->max_count())
                    throw std::out_of_range("hom: target prime out of range");
                auto quad = std::static_pointer_cast<const QuadDomain>(tgt->base());
                const mpz_class& p = quad->rational_under(tgt->base_ids()[t]);
                auto src = std::static_pointer_cast<const LocalizedDomain>(source_);
                auto z = std::static_pointer_cast<const IntegerDomain>(src->base());
                return src->local_id_of(z->prime_id_of(p));
            }
        }
        throw std::logic_error("hom: unreachable");
    }

    /// First target prime whose contraction escapes the source, if any.
    /// Identity and full inclusions are always clean.
    std::optional<PrimeId> quasi_integral_witness() const {
        if (kind_ == Kind::Identity || kind_ == Kind::InclusionQuad) return std::nullopt;
        for (PrimeId t = 0; t < target_->max_count(); ++t)
            if (!contract_prime(t)) return t;
        return std::nullopt;
    }

    bool is_valid() const { return !quasi_integral_witness().has_value(); }

    void require_valid() const {
        if (auto w = quasi_integral_witness())
            throw std::invalid_argument("hom " + describe() + " is not quasi-integral: prime " +
                                        target_->prime_info(*w).label +
                                        " does not contract into the source");
    }

    /// Image ideal of a source prime (with ramification exponents).
    MonoidElement extend_prime(PrimeId s) const {
        MonoidPtr tm = target_->ideal_monoid();
        switch (kind_) {
            case Kind::Identity:
                source_->prime_info(s);
                return MonoidElement::prime_power(tm, s);
            case Kind::InclusionQuad: {
                auto quad = std::static_pointer_cast<const QuadDomain>(target_);
                const mpz_class& p = source_->prime_info(s).norm;
                return splitting_to_ideal(*quad, tm, p, nullptr);
            }
            case Kind::Localize: {
                auto tgt = std::static_pointer_cast<const LocalizedDomain>(target_);
                PrimeId bid = s;
                if (source_->signature() != tgt->base()->signature()) {
                    auto src = std::static_pointer_cast<const LocalizedDomain>(source_);
                    if (s >= src->max_count())
                        throw std::out_of_range("hom: source prime out of range");
                    bid = src->base_ids()[s];
                } else {
                    source_->prime_info(s);
                }
                if (auto lid = tgt->local_id_of(bid))
                    return MonoidElement::prime_power(tm, *lid);
                return MonoidElement::identity(tm);  // the prime becomes a unit
            }
            case Kind::LocalizedInclusion: {
                auto src = std::static_pointer_cast<const LocalizedDomain>(source_);
                if (s >= src->max_count())
                    throw std::out_of_range("hom: source prime out of range");
                auto tgt = std::static_pointer_cast<const LocalizedDomain>(target_);
                auto quad = std::static_pointer_cast<const QuadDomain>(tgt->base());
                const mpz_class& p = src->prime_info(s).norm;
                return splitting_to_ideal(*quad, tm, p, tgt.get());
            }
        }
        throw std::logic_error("hom: unreachable");
    }

    /// Multiplicative extension to whole ideals.
    MonoidElement extend_ideal(const MonoidElement& I) const {
        require_same_monoid(I.monoid(), source_->ideal_monoid());
        MonoidElement out = MonoidElement::identity(target_->ideal_monoid());
        for (auto& [s, e] : I.exponents()) {
            MonoidElement img = extend_prime(s);
            for (std::uint32_t k = 0; k < e; ++k) out = out * img;
        }
        return out;
    }

    /// The extension as a monoid map, ready for pullbacks of functions.
    MonoidHom ideal_extension_hom() const {
        DomainHom h = *this;
        return MonoidHom(
            source_->ideal_monoid(), target_->ideal_monoid(),
            [h](PrimeId s) { return std::optional<MonoidElement>(h.extend_prime(s)); },
            "extend(" + describe() + ")");
    }

private:
    DomainHom(Kind k, DomainPtr s, DomainPtr t)
        : kind_(k), source_(std::move(s)), target_(std::move(t)) {}

    static std::shared_ptr<const LocalizedDomain> as_localized(const DomainPtr& d,
                                                               const char* msg) {
        auto loc = std::dynamic_pointer_cast<const LocalizedDomain>(d);
        if (!loc) throw std::invalid_argument(msg);
        return loc;
    }
    static std::shared_ptr<const LocalizedDomain> as_localized_over(const DomainPtr& d,
                                                                    const DomainPtr& base,
                                                                    const char* msg) {
        auto loc = as_localized(d, msg);
        if (loc->base()->signature() != base->signature()) throw std::invalid_argument(msg);
        return loc;
    }

    /// p extended into the quadratic order, optionally cut down to a
    /// localization of it.
    static MonoidElement splitting_to_ideal(const QuadDomain& quad, const MonoidPtr& tm,
                                            const mpz_class& p,
                                            const LocalizedDomain* local) {
        QuadDomain::PrimeSplitting s = quad.splitting(p);
        std::uint32_t e = s.split_kind == SplitKind::Ramified ? 2 : 1;
        ExpVec exps;
        for (PrimeId bid : s.ids) {
            if (local) {
                if (auto lid = local->local_id_of(bid)) exps.emplace_back(*lid, e);
            } else {
                exps.emplace_back(bid, e);
            }
        }
        return MonoidElement::from_exponents(tm, std::move(exps));
    }

    Kind kind_;
    DomainPtr source_;
    DomainPtr target_;
};

}  // namespace arithfn
