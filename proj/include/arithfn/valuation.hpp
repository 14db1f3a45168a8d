#pragma once

/**
 * @file valuation.hpp
 * @brief Order-of-vanishing valuation, the induced non-archimedean norm and
 *        ultrametric, and limits of Cauchy sequences by stabilization.
 *
 * v(f) is the least lambda(a) with f(a) != 0 (infinity for the zero
 * function).  A finite search can certify a found value exactly when the
 * monoid has finitely many primes and the window covers all of them: all
 * lower levels were checked.  It can never certify v = infinity, so exact
 * zeros come only from structural knowledge (the literal zero function,
 * or a distance between two handles to the same function).
 */

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "arithfn/dirichlet.hpp"
#include "arithfn/field.hpp"
#include "arithfn/monoid.hpp"

namespace arithfn {

struct ValuationReport {
    /// Least degree with support found; nullopt means none up to the depth
    /// (exactly +infinity when certified).
    std::optional<std::uint32_t> value;
    /// True when the report pins v(f) exactly rather than window-relatively.
    bool certified = false;
    std::vector<PrimeId> window;
    std::uint32_t depth = 0;
};

struct MetricParams {
    mpq_class c = mpq_class(1, 2);  // d(f, g) = c^v(f - g); needs 0 < c < 1
};

inline void require_valid(const MetricParams& p) {
    if (!(p.c > 0 && p.c < 1))
        throw std::invalid_argument("MetricParams: c must satisfy 0 < c < 1, got " +
                                    p.c.get_str());
}

/**
 * Scan U(window, depth) in graded order for the first support point.
 * Certification: finite-prime monoid, full window, and a hit (all lower
 * levels exhausted), or the literal zero function (v = infinity is then
 * structural, not searched).
 */
inline ValuationReport valuation(const ArithFn& f, std::vector<PrimeId> window,
                                 std::uint32_t depth) {
    ValuationReport rep;
    rep.window = std::move(window);
    rep.depth = depth;
    if (f.literal_zero()) {
        rep.certified = true;
        return rep;
    }
    bool full_window =
        f.monoid()->finite_primes() && rep.window.size() == f.monoid()->prime_count();
    for (auto& a : enumerate_universe(f.monoid(), rep.window, depth)) {
        if (!f(a).is_zero()) {
            rep.value = a.lambda();
            rep.certified = full_window;
            return rep;
        }
    }
    return rep;  // nothing found: v > depth as far as searched, never certified
}

/// N(f) = 2^v(f), N(zero) = 0.  Demands a certified report.
inline mpq_class norm_N(const ArithFn& f, const std::vector<PrimeId>& window,
                        std::uint32_t depth) {
    auto rep = valuation(f, window, depth);
    if (!rep.certified)
        throw std::domain_error("norm_N: valuation of " + f.name() +
                                " not certified at depth " + std::to_string(depth));
    if (!rep.value) return mpq_class(0);
    mpz_class num = 1;
    mpz_mul_2exp(num.get_mpz_t(), num.get_mpz_t(), *rep.value);
    return mpq_class(num);
}

/**
 * d(f, g) = c^v(f - g).  Exact 0 needs structural equality: the same
 * evaluation node (or both literal zero); a pointwise-equal pair under
 * distinct nodes is indistinguishable from v > depth and raises instead.
 */
inline mpq_class distance(const ArithFn& f, const ArithFn& g,
                          const std::vector<PrimeId>& window, std::uint32_t depth,
                          const MetricParams& params = {}) {
    require_valid(params);
    if (f.same_node(g) || (f.literal_zero() && g.literal_zero())) return mpq_class(0);
    auto rep = valuation(sub(f, g), window, depth);
    if (!rep.certified)
        throw std::domain_error("distance: valuation of " + f.name() + " - " + g.name() +
                                " not certified at depth " + std::to_string(depth));
    if (!rep.value) return mpq_class(0);  // certified infinity (literal zero difference)
    mpq_class d(1);
    for (std::uint32_t i = 0; i < *rep.value; ++i) d *= params.c;
    return d;
}

/**
 * Membership in the filtration ideal m_n = { f : v(f) >= n }: exact on a
 * finite-prime monoid with full window, since only levels below n matter.
 */
inline bool in_m_n(const ArithFn& f, std::uint32_t n, const std::vector<PrimeId>& window) {
    if (n == 0) return true;
    for (auto& a : enumerate_universe(f.monoid(), window, n - 1))
        if (!f(a).is_zero()) return false;
    return true;
}

/**
 * Limit of a sequence that is Cauchy with stabilization modulus t(k): for
 * every m >= t(k), seq(m) agrees with seq(t(k)) on all elements of level k.
 * The moduli are verified on every level k <= max_level for all indices up
 * to the largest modulus plus slack; a violation raises with the offending
 * level and index.  The limit is returned as a value table on
 * U(window, max_level).
 */
inline ArithFn cauchy_limit(const std::function<ArithFn(std::size_t)>& seq,
                            const MonoidPtr& monoid, FieldId field,
                            const std::vector<PrimeId>& window,
                            const std::function<std::size_t(std::uint32_t)>& modulus,
                            std::uint32_t max_level, std::size_t slack = 2) {
    std::size_t max_index = 0;
    for (std::uint32_t k = 0; k <= max_level; ++k) max_index = std::max(max_index, modulus(k));
    max_index += slack;

    std::vector<ArithFn> terms;
    terms.reserve(max_index + 1);
    for (std::size_t m = 0; m <= max_index; ++m) terms.push_back(seq(m));

    auto universe = enumerate_universe(monoid, window, max_level);
    std::map<MonoidElement, Scalar, GradedLess> table;
    for (auto& a : universe) {
        std::uint32_t k = a.lambda();
        std::size_t t = modulus(k);
        if (t > max_index)
            throw std::invalid_argument("cauchy_limit: modulus exceeds materialized range");
        Scalar settled = terms[t](a);
        for (std::size_t m = t; m <= max_index; ++m)
            if (terms[m](a) != settled)
                throw std::domain_error("cauchy_limit: not Cauchy for the given modulus: "
                                        "level " + std::to_string(k) + ", index " +
                                        std::to_string(m) + ", element " + a.str());
        if (!settled.is_zero()) table.emplace(a, settled);
    }
    return ArithFn::from_table(monoid, field, std::move(table), "cauchy-limit");
}

}  // namespace arithfn
