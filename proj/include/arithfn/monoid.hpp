#pragma once

/**
 * @file monoid.hpp
 * @brief Free commutative monoids on a countable prime set, written
 *        multiplicatively: elements are finite exponent vectors over primes.
 *
 * Three concrete shapes share one interface: the positive integers under
 * multiplication, an abstract free monoid on n generators, and (defined with
 * the ring machinery in domain.hpp) the nonzero-ideal monoid of a Dedekind
 * domain.  Elements always know their monoid; operations across distinct
 * monoids are rejected.
 */

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <deque>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace arithfn {

/// Index into a monoid's canonical prime enumeration.
using PrimeId = std::uint32_t;

struct PrimeInfo {
    std::string label;
    bool has_norm = false;
    mpz_class norm;  // meaningful only when has_norm
};

class Monoid;
using MonoidPtr = std::shared_ptr<const Monoid>;

class Monoid : public std::enable_shared_from_this<Monoid> {
public:
    virtual ~Monoid() = default;

    /// Structural identity, e.g. "Z+" or "Free(3:p)"; equal signatures mean
    /// the same monoid for mismatch checks.
    virtual std::string signature() const = 0;

    /// True when the complete prime list is finite and known.
    virtual bool finite_primes() const = 0;

    /// Number of primes; only valid when finite_primes().
    virtual std::size_t prime_count() const = 0;

    /// Canonical enumeration: nondecreasing norm where norms exist, stable
    /// ids.  Infinite monoids extend their table on demand.
    virtual const PrimeInfo& prime(PrimeId id) const = 0;

    virtual bool has_norms() const = 0;

    virtual std::optional<PrimeId> find_prime_by_label(const std::string& label) const = 0;

    bool same(const Monoid& other) const { return signature() == other.signature(); }
};

inline void require_same_monoid(const MonoidPtr& a, const MonoidPtr& b) {
    if (!a || !b || !a->same(*b))
        throw std::invalid_argument("monoid mismatch: " + (a ? a->signature() : "null") +
                                    " vs " + (b ? b->signature() : "null"));
}

/// Sorted sparse exponent vector; the canonical element representation.
using ExpVec = std::vector<std::pair<PrimeId, std::uint32_t>>;

class MonoidElement {
public:
    MonoidElement() = default;

    static MonoidElement identity(MonoidPtr m) { return MonoidElement(std::move(m), {}); }

    static MonoidElement from_exponents(MonoidPtr m, ExpVec exps) {
        std::sort(exps.begin(), exps.end());
        ExpVec clean;
        for (auto& [id, e] : exps) {
            if (e == 0) continue;
            if (!clean.empty() && clean.back().first == id)
                throw std::invalid_argument("MonoidElement: duplicate prime in exponent vector");
            clean.emplace_back(id, e);
        }
        return MonoidElement(std::move(m), std::move(clean));
    }

    static MonoidElement prime_power(MonoidPtr m, PrimeId p, std::uint32_t e = 1) {
        ExpVec v;
        if (e) v.emplace_back(p, e);
        return MonoidElement(std::move(m), std::move(v));
    }

    const MonoidPtr& monoid() const { return monoid_; }
    const ExpVec& exponents() const { return exps_; }
    bool is_identity() const { return exps_.empty(); }

    std::uint32_t exponent_of(PrimeId p) const {
        auto it = std::lower_bound(exps_.begin(), exps_.end(), p,
                                   [](const auto& pr, PrimeId id) { return pr.first < id; });
        return (it != exps_.end() && it->first == p) ? it->second : 0;
    }

    std::vector<PrimeId> support() const {
        std::vector<PrimeId> s;
        s.reserve(exps_.size());
        for (auto& [id, e] : exps_) s.push_back(id);
        return s;
    }

    /// Omega in the classical notation: total exponent count with multiplicity.
    std::uint32_t lambda() const {
        std::uint32_t t = 0;
        for (auto& [id, e] : exps_) t += e;
        return t;
    }

    friend MonoidElement operator*(const MonoidElement& x, const MonoidElement& y) {
        require_same_monoid(x.monoid_, y.monoid_);
        ExpVec out;
        out.reserve(x.exps_.size() + y.exps_.size());
        auto i = x.exps_.begin(), j = y.exps_.begin();
        while (i != x.exps_.end() || j != y.exps_.end()) {
            if (j == y.exps_.end() || (i != x.exps_.end() && i->first < j->first))
                out.push_back(*i++);
            else if (i == x.exps_.end() || j->first < i->first)
                out.push_back(*j++);
            else {
                out.emplace_back(i->first, i->second + j->second);
                ++i, ++j;
            }
        }
        return MonoidElement(x.monoid_, std::move(out));
    }

    /// True iff *this divides y (componentwise exponents).
    bool divides(const MonoidElement& y) const {
        require_same_monoid(monoid_, y.monoid_);
        for (auto& [id, e] : exps_)
            if (y.exponent_of(id) < e) return false;
        return true;
    }

    /// Exact quotient y with *this removed; error when not a divisor.
    MonoidElement quotient_of(const MonoidElement& y) const {
        require_same_monoid(monoid_, y.monoid_);
        if (!divides(y))
            throw std::domain_error("quotient: " + str() + " does not divide " + y.str());
        ExpVec out;
        for (auto& [id, e] : y.exps_) {
            std::uint32_t d = exponent_of(id);
            if (e > d) out.emplace_back(id, e - d);
        }
        return MonoidElement(y.monoid_, std::move(out));
    }

    bool coprime_to(const MonoidElement& y) const {
        require_same_monoid(monoid_, y.monoid_);
        for (auto& [id, e] : exps_)
            if (y.exponent_of(id) != 0) return false;
        return true;
    }

    /// All divisors in graded order (lambda, then exponent order).
    std::vector<MonoidElement> divisors() const;

    friend bool operator==(const MonoidElement& a, const MonoidElement& b) {
        if (!a.monoid_ || !b.monoid_) return a.exps_ == b.exps_ && !a.monoid_ == !b.monoid_;
        return a.monoid_->same(*b.monoid_) && a.exps_ == b.exps_;
    }
    friend bool operator!=(const MonoidElement& a, const MonoidElement& b) { return !(a == b); }

    std::size_t hash() const {
        std::size_t h = 1469598103934665603ull;
        for (auto& [id, e] : exps_) {
            h = (h ^ id) * 1099511628211ull;
            h = (h ^ e) * 1099511628211ull;
        }
        return h;
    }

    std::string str() const {
        if (exps_.empty()) return "1";
        std::string out;
        for (auto& [id, e] : exps_) {
            if (!out.empty()) out += " * ";
            out += monoid_->prime(id).label;
            if (e != 1) out += "^" + std::to_string(e);
        }
        return out;
    }

    /// Product of prime norms^exponents; needs a normed monoid.
    mpz_class norm() const {
        if (!monoid_->has_norms())
            throw std::domain_error("norm: monoid " + monoid_->signature() + " has no norms");
        mpz_class n = 1;
        for (auto& [id, e] : exps_) {
            mpz_class pe;
            mpz_pow_ui(pe.get_mpz_t(), monoid_->prime(id).norm.get_mpz_t(), e);
            n *= pe;
        }
        return n;
    }

private:
    MonoidElement(MonoidPtr m, ExpVec exps) : monoid_(std::move(m)), exps_(std::move(exps)) {
        if (!monoid_) throw std::invalid_argument("MonoidElement: null monoid");
    }

    MonoidPtr monoid_;
    ExpVec exps_;
};

/**
 * Graded order used everywhere elements are enumerated: first by total
 * exponent, then by exponent vectors compared at ascending prime ids with
 * the larger exponent first.  On {2,3}: 1, 2, 3, 2^2, 2*3, 3^2.
 */
inline bool exp_graded_less(const ExpVec& a, const ExpVec& b) {
    std::uint32_t la = 0, lb = 0;
    for (auto& [p, e] : a) la += e;
    for (auto& [p, e] : b) lb += e;
    if (la != lb) return la < lb;
    auto i = a.begin(), j = b.begin();
    while (i != a.end() && j != b.end()) {
        if (i->first != j->first) return i->first < j->first;  // earlier prime has exp > 0
        if (i->second != j->second) return i->second > j->second;
        ++i, ++j;
    }
    return false;  // equal degree and one a prefix of the other cannot differ here
}

inline bool graded_less(const MonoidElement& a, const MonoidElement& b) {
    return exp_graded_less(a.exponents(), b.exponents());
}

struct ExpGradedLess {
    bool operator()(const ExpVec& a, const ExpVec& b) const { return exp_graded_less(a, b); }
};

struct GradedLess {
    bool operator()(const MonoidElement& a, const MonoidElement& b) const {
        return graded_less(a, b);
    }
};

struct MonoidElementHash {
    std::size_t operator()(const MonoidElement& a) const { return a.hash(); }
};

inline std::vector<MonoidElement> MonoidElement::divisors() const {
    std::vector<MonoidElement> out;
    ExpVec cur;
    std::function<void(std::size_t)> rec = [&](std::size_t k) {
        if (k == exps_.size()) {
            ExpVec copy = cur;
            out.push_back(MonoidElement(monoid_, std::move(copy)));
            return;
        }
        auto [id, e] = exps_[k];
        for (std::uint32_t j = 0; j <= e; ++j) {
            if (j) cur.emplace_back(id, j);
            rec(k + 1);
            if (j) cur.pop_back();
        }
    };
    rec(0);
    std::sort(out.begin(), out.end(), GradedLess{});
    return out;
}

/**
 * The test universe U(W, D): all elements with support inside the window and
 * lambda at most D, in graded order.  |U| = binom(D + |W|, |W|) summed over
 * degrees; for |W| = 2 that is (D+1)(D+2)/2.
 */
inline std::vector<MonoidElement> enumerate_universe(const MonoidPtr& m,
                                                     std::span<const PrimeId> window,
                                                     std::uint32_t max_lambda) {
    std::vector<PrimeId> w(window.begin(), window.end());
    std::sort(w.begin(), w.end());
    if (std::adjacent_find(w.begin(), w.end()) != w.end())
        throw std::invalid_argument("enumerate_universe: duplicate prime in window");
    std::vector<MonoidElement> out;
    ExpVec cur;
    std::function<void(std::size_t, std::uint32_t)> rec = [&](std::size_t k, std::uint32_t left) {
        if (k == w.size()) {
            ExpVec copy = cur;
            out.push_back(MonoidElement::from_exponents(m, std::move(copy)));
            return;
        }
        for (std::uint32_t j = 0; j <= left; ++j) {
            if (j) cur.emplace_back(w[k], j);
            rec(k + 1, left - j);
            if (j) cur.pop_back();
        }
    };
    rec(0, max_lambda);
    std::sort(out.begin(), out.end(), GradedLess{});
    return out;
}

// ---------------------------------------------------------------------------
// Positive integers under multiplication
// ---------------------------------------------------------------------------

class PositiveIntegers final : public Monoid {
public:
    static std::shared_ptr<const PositiveIntegers> make() {
        return std::make_shared<const PositiveIntegers>();
    }

    std::string signature() const override { return "Z+"; }
    bool finite_primes() const override { return false; }
    std::size_t prime_count() const override {
        throw std::domain_error("Z+: infinitely many primes");
    }
    bool has_norms() const override { return true; }

    const PrimeInfo& prime(PrimeId id) const override {
        std::lock_guard<std::mutex> lock(mu_);
        grow_to_index(id);
        return infos_[id];
    }

    std::optional<PrimeId> find_prime_by_label(const std::string& label) const override {
        try {
            mpz_class v(label);
            return prime_id_of(v);
        } catch (const std::invalid_argument&) {
            return std::nullopt;
        }
    }

    /// Id of the prime p itself; error when p is not prime.
    PrimeId prime_id_of(const mpz_class& p) const {
        std::lock_guard<std::mutex> lock(mu_);
        if (p < 2) throw std::invalid_argument("Z+: " + p.get_str() + " is not prime");
        grow_to_value(p);
        auto it = std::lower_bound(primes_.begin(), primes_.end(), p);
        if (it == primes_.end() || *it != p)
            throw std::invalid_argument("Z+: " + p.get_str() + " is not prime");
        return static_cast<PrimeId>(it - primes_.begin());
    }

    /// Factor n >= 1 into the monoid; rejects n < 1.
    MonoidElement element_of(const mpz_class& n) const {
        if (n < 1) throw std::invalid_argument("Z+: " + n.get_str() + " is not in the monoid");
        ExpVec exps;
        mpz_class rest = n;
        {
            std::lock_guard<std::mutex> lock(mu_);
            for (std::size_t i = 0; rest > 1; ++i) {
                grow_to_index(static_cast<PrimeId>(i));
                const mpz_class& p = primes_[i];
                if (p * p > rest) break;
                std::uint32_t e = 0;
                while (mpz_divisible_p(rest.get_mpz_t(), p.get_mpz_t())) {
                    rest /= p;
                    ++e;
                }
                if (e) exps.emplace_back(static_cast<PrimeId>(i), e);
            }
        }
        if (rest > 1) exps.emplace_back(prime_id_of(rest), 1);
        return MonoidElement::from_exponents(shared_from_this(), std::move(exps));
    }

    /// Back to the integer the exponent vector denotes.
    mpz_class value_of(const MonoidElement& a) const {
        mpz_class n = 1;
        for (auto& [id, e] : a.exponents()) {
            mpz_class pe;
            mpz_pow_ui(pe.get_mpz_t(), prime(id).norm.get_mpz_t(), e);
            n *= pe;
        }
        return n;
    }

private:
    void grow_to_index(PrimeId id) const {
        while (primes_.size() <= id) append_next();
    }
    void grow_to_value(const mpz_class& bound) const {
        while (primes_.empty() || primes_.back() < bound) append_next();
    }
    void append_next() const {
        mpz_class c = primes_.empty() ? mpz_class(2) : mpz_class(primes_.back() + 1);
        while (true) {
            bool composite = false;
            for (const auto& p : primes_) {
                if (p * p > c) break;
                if (mpz_divisible_p(c.get_mpz_t(), p.get_mpz_t())) {
                    composite = true;
                    break;
                }
            }
            if (!composite && (primes_.empty() ? c >= 2 : true)) break;
            ++c;
        }
        primes_.push_back(c);
        infos_.push_back(PrimeInfo{c.get_str(), true, c});
    }

    mutable std::mutex mu_;
    mutable std::vector<mpz_class> primes_;
    // deque: prime() hands out references that must survive later growth
    mutable std::deque<PrimeInfo> infos_;
};

// ---------------------------------------------------------------------------
// Free commutative monoid on n named generators
// ---------------------------------------------------------------------------

class FreeFinite final : public Monoid {
public:
    static std::shared_ptr<const FreeFinite> make(std::size_t n, std::string prefix = "p") {
        std::vector<std::string> labels;
        labels.reserve(n);
        for (std::size_t i = 0; i < n; ++i) labels.push_back(prefix + std::to_string(i + 1));
        return std::make_shared<const FreeFinite>(std::move(labels));
    }
    static std::shared_ptr<const FreeFinite> with_labels(std::vector<std::string> labels) {
        return std::make_shared<const FreeFinite>(std::move(labels));
    }

    explicit FreeFinite(std::vector<std::string> labels) {
        infos_.reserve(labels.size());
        for (auto& l : labels) infos_.push_back(PrimeInfo{std::move(l), false, mpz_class(0)});
    }

    std::string signature() const override {
        std::string s = "Free(" + std::to_string(infos_.size()) + ":";
        for (auto& i : infos_) s += i.label + ",";
        return s + ")";
    }
    bool finite_primes() const override { return true; }
    std::size_t prime_count() const override { return infos_.size(); }
    bool has_norms() const override { return false; }

    const PrimeInfo& prime(PrimeId id) const override {
        if (id >= infos_.size())
            throw std::out_of_range("FreeFinite: prime index " + std::to_string(id) +
                                    " out of range");
        return infos_[id];
    }

    std::optional<PrimeId> find_prime_by_label(const std::string& label) const override {
        for (std::size_t i = 0; i < infos_.size(); ++i)
            if (infos_[i].label == label) return static_cast<PrimeId>(i);
        return std::nullopt;
    }

    /// Every prime, in canonical order; handy as the default window.
    std::vector<PrimeId> all_primes() const {
        std::vector<PrimeId> w(infos_.size());
        for (std::size_t i = 0; i < w.size(); ++i) w[i] = static_cast<PrimeId>(i);
        return w;
    }

private:
    std::vector<PrimeInfo> infos_;
};

/// Full window of a finite-prime monoid.
inline std::vector<PrimeId> all_primes_window(const MonoidPtr& m) {
    if (!m->finite_primes())
        throw std::domain_error("all_primes_window: monoid has infinitely many primes");
    std::vector<PrimeId> w(m->prime_count());
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = static_cast<PrimeId>(i);
    return w;
}

}  // namespace arithfn
