#pragma once

/**
 * @file verify.hpp
 * @brief The acceptance battery behind `arithfn verify`: thirteen numbered
 *        criteria over the ring, series, valuation, and space layers.
 *
 * Every criterion is seeded, so one seed reproduces one data set exactly.
 * Results carry counterexample notes instead of bare booleans; wall-clock
 * budgets are pinned here as constants and count as part of the criterion
 * that declares them.  All scalar work is exact rational arithmetic.
 */

#include <chrono>
#include <cstdint>
#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "arithfn/dirichlet.hpp"
#include "arithfn/domain.hpp"
#include "arithfn/series.hpp"
#include "arithfn/space.hpp"
#include "arithfn/valuation.hpp"

namespace arithfn::verify {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    double seconds = 0.0;            // measured, reported in text output only
    std::vector<std::string> notes;  // counterexamples and failure context
};

// Wall-clock budgets, in seconds, for the criteria that carry one.
inline constexpr double kRingAxiomBudget = 10.0;
inline constexpr double kSpaceBudget = 30.0;
inline constexpr double kWitnessBudget = 5.0;

namespace vdetail {

// Per-criterion stream: one seed fans out to independent generators.
inline std::mt19937_64 rng_for(std::uint64_t seed, int criterion) {
    return std::mt19937_64(seed * 1000003ull + static_cast<std::uint64_t>(criterion));
}

// Uniform in [lo, hi] straight off the engine; immune to library-specific
// distribution implementations, so one seed means one data set everywhere.
inline long pick(std::mt19937_64& rng, long lo, long hi) {
    return lo + static_cast<long>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

inline Scalar small_rational(std::mt19937_64& rng, bool nonzero = false) {
    long num = pick(rng, -9, 9);
    if (nonzero && num == 0) num = 1;
    return Scalar::rational(num, pick(rng, 1, 9));
}

inline ArithFn random_table(const MonoidPtr& m, const std::vector<MonoidElement>& universe,
                            std::mt19937_64& rng, bool force_unit,
                            const std::string& name) {
    std::map<MonoidElement, Scalar, GradedLess> table;
    for (auto& a : universe) {
        Scalar v = (a.is_identity() && force_unit) ? small_rational(rng, true)
                   : pick(rng, 0, 4) == 0          ? Scalar()
                                                   : small_rational(rng);
        if (!v.is_zero()) table.emplace(a, v);
    }
    return ArithFn::from_table(m, rationals(), std::move(table), name);
}

inline ArithFn random_multiplicative(const MonoidPtr& m, const std::vector<PrimeId>& window,
                                     std::uint32_t depth, std::mt19937_64& rng,
                                     const std::string& name) {
    std::map<std::pair<PrimeId, std::uint32_t>, Scalar> table;
    for (PrimeId p : window)
        for (std::uint32_t j = 1; j <= depth; ++j) table[{p, j}] = small_rational(rng);
    return ArithFn::multiplicative_from_prime_powers(m, rationals(), std::move(table), name);
}

// Failure recorder with a bounded note list; one missing claim fails the run.
struct Checker {
    std::vector<std::string>* notes;
    bool ok = true;

    void require(bool pass, const std::string& claim) {
        if (pass) return;
        ok = false;
        if (notes->size() < 8) notes->push_back(claim);
    }
};

inline bool agree_on(const ArithFn& f, const ArithFn& g,
                     const std::vector<MonoidElement>& universe, std::string* witness) {
    for (auto& a : universe)
        if (f(a) != g(a)) {
            if (witness)
                *witness = "at " + a.str() + ": " + f(a).str() + " vs " + g(a).str();
            return false;
        }
    return true;
}

// Value table of f on the universe; cuts re-evaluation in nested products.
inline ArithFn snapshot(const ArithFn& f, const std::vector<MonoidElement>& universe,
                        const std::string& name) {
    std::map<MonoidElement, Scalar, GradedLess> table;
    for (auto& a : universe) {
        Scalar v = f(a);
        if (!v.is_zero()) table.emplace(a, v);
    }
    return ArithFn::from_table(f.monoid(), f.field(), std::move(table), name);
}

inline std::vector<PrimeId> ids_of(const MonoidPtr& m, const std::vector<std::string>& labels) {
    std::vector<PrimeId> out;
    for (auto& l : labels) {
        auto id = m->find_prime_by_label(l);
        if (!id) throw std::logic_error("verify: no prime labeled " + l);
        out.push_back(*id);
    }
    return out;
}

inline std::vector<PrimeId> base_ids_of(const std::shared_ptr<const IntegerDomain>& z,
                                        const std::vector<std::string>& labels) {
    std::vector<PrimeId> out;
    for (auto& l : labels) {
        auto id = z->find_prime_by_label(l);
        if (!id) throw std::logic_error("verify: no prime labeled " + l);
        out.push_back(*id);
    }
    return out;
}

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

}  // namespace vdetail

// ---------------------------------------------------------------------------
// 1. Ring laws on random triples
// ---------------------------------------------------------------------------

inline CriterionResult criterion_ring_axioms(std::uint64_t seed) {
    using namespace vdetail;
    CriterionResult r{1, "ring-axioms", false, 0.0, {}};
    Timer timer;
    auto rng = rng_for(seed, 1);
    Checker ck{&r.notes};

    auto z = IntegerDomain::make();
    auto m = z->ideal_monoid();
    FieldId k = rationals();
    auto window = ids_of(m, {"2", "3", "5"});
    auto universe = enumerate_universe(m, window, 5);
    ArithFn zero = ArithFn::zero(m, k);
    ArithFn e = ArithFn::identity_e(m, k);

    std::string w;
    for (int t = 0; t < 200 && ck.ok; ++t) {
        ArithFn f = random_table(m, universe, rng, false, "f");
        ArithFn g = random_table(m, universe, rng, false, "g");
        ArithFn h = random_table(m, universe, rng, false, "h");

        ck.require(agree_on(add(f, g), add(g, f), universe, &w),
                   "addition is not commutative " + w);
        ck.require(agree_on(add(add(f, g), h), add(f, add(g, h)), universe, &w),
                   "addition is not associative " + w);
        ck.require(agree_on(add(f, zero), f, universe, &w), "zero is not neutral " + w);
        ck.require(agree_on(add(f, neg(f)), zero, universe, &w),
                   "additive inverse fails " + w);

        ArithFn fg = snapshot(convolve(f, g), universe, "f*g");
        ck.require(agree_on(fg, convolve(g, f), universe, &w),
                   "convolution is not commutative " + w);
        ArithFn gh = snapshot(convolve(g, h), universe, "g*h");
        ck.require(agree_on(convolve(fg, h), convolve(f, gh), universe, &w),
                   "convolution is not associative " + w);
        ck.require(agree_on(convolve(f, add(g, h)), add(fg, snapshot(convolve(f, h),
                                                                     universe, "f*h")),
                            universe, &w),
                   "convolution does not distribute over addition " + w);
        ck.require(agree_on(convolve(f, e), f, universe, &w),
                   "the identity function is not neutral " + w);
    }

    r.seconds = timer.seconds();
    if (r.seconds > kRingAxiomBudget) {
        ck.ok = false;
        r.notes.push_back("time budget exceeded (limit 10s)");
    }
    r.pass = ck.ok;
    return r;
}

// ---------------------------------------------------------------------------
// 2. Units are exactly the functions nonzero at the identity
// ---------------------------------------------------------------------------

inline CriterionResult criterion_units(std::uint64_t seed) {
    using namespace vdetail;
    CriterionResult r{2, "units-inverse", false, 0.0, {}};
    Timer timer;
    auto rng = rng_for(seed, 2);
    Checker ck{&r.notes};

    auto m = IntegerDomain::make()->ideal_monoid();
    auto window = ids_of(m, {"2", "3"});
    auto universe = enumerate_universe(m, window, 6);
    ArithFn e = ArithFn::identity_e(m, rationals());

    std::string w;
    for (int t = 0; t < 100 && ck.ok; ++t) {
        ArithFn f = random_table(m, universe, rng, true, "f");
        ck.require(agree_on(convolve(f, dirichlet_inverse(f)), e, universe, &w),
                   "f * inverse(f) is not the identity " + w);
    }

    ArithFn non_unit = sub(ArithFn::unit_u(m, rationals()), e);  // value 0 at the identity
    bool rejected = false;
    try {
        dirichlet_inverse(non_unit);
    } catch (const std::domain_error&) {
        rejected = true;
    }
    ck.require(rejected, "a function with value 0 at the identity was inverted");

    r.seconds = timer.seconds();
    r.pass = ck.ok;
    return r;
}

// ---------------------------------------------------------------------------
// 3. Moebius function and inversion
// ---------------------------------------------------------------------------

inline CriterionResult criterion_moebius(std::uint64_t seed) {
    using namespace vdetail;
    CriterionResult r{3, "moebius-inversion", false, 0.0, {}};
    Timer timer;
    auto rng = rng_for(seed, 3);
    Checker ck{&r.notes};

    auto m = IntegerDomain::make()->ideal_monoid();
    FieldId k = rationals();
    auto window = ids_of(m, {"2", "3", "5", "7"});
    auto universe = enumerate_universe(m, window, 5);
    ArithFn mu = ArithFn::moebius(m, k);
    ArithFn u = ArithFn::unit_u(m, k);

    std::string w;
    ck.require(agree_on(convolve(mu, u), ArithFn::identity_e(m, k), universe, &w),
               "mu * u is not the identity " + w);

    for (int t = 0; t < 50 && ck.ok; ++t) {
        ArithFn f = random_table(m, universe, rng, false, "f");
        ArithFn summed = snapshot(convolve(f, u), universe, "f*u");
        ck.require(agree_on(convolve(summed, mu), f, universe, &w),
                   "inversion round trip (f*u)*mu != f " + w);
    }

    r.seconds = timer.seconds();
    r.pass = ck.ok;
    return r;
}

// ---------------------------------------------------------------------------
// 4. Multiplicativity survives convolution and inversion
// ---------------------------------------------------------------------------

inline CriterionResult criterion_multiplicativity(std::uint64_t seed) {
    using namespace vdetail;
    CriterionResult r{4, "multiplicativity-preserved", false, 0.0, {}};
    Timer timer;
    auto rng = rng_for(seed, 4);
    Checker ck{&r.notes};

    auto m = IntegerDomain::make()->ideal_monoid();
    auto window = ids_of(m, {"2", "3", "5"});
    auto universe = enumerate_universe(m, window, 4);

    for (int t = 0; t < 50 && ck.ok; ++t) {
        ArithFn f = random_multiplicative(m, window, 4, rng, "f");
        ArithFn g = random_multiplicative(m, window, 4, rng, "g");
        ck.require(is_multiplicative(snapshot(convolve(f, g), universe, "f*g"), window, 4),
                   "convolution of multiplicative functions is not multiplicative (pair " +
                       std::to_string(t) + ")");
        ck.require(is_multiplicative(snapshot(dirichlet_inverse(f), universe, "inv f"),
                                     window, 4),
                   "inverse of a multiplicative function is not multiplicative (pair " +
                       std::to_string(t) + ")");
    }

    r.seconds = timer.seconds();
    r.pass = ck.ok;
    return r;
}

// ---------------------------------------------------------------------------
// 5. Convolution powers at the first supported prime level
// ---------------------------------------------------------------------------

inline CriterionResult criterion_torsion(std::uint64_t seed) {
    using namespace vdetail;
    CriterionResult r{5, "torsion-identity", false, 0.0, {}};
    Timer timer;
    auto rng = rng_for(seed, 5);
    Checker ck{&r.notes};

    auto m = IntegerDomain::make()->ideal_monoid();
    FieldId k = rationals();
    auto window = ids_of(m, {"2", "3", "5"});

    for (int t = 0; t < 20 && ck.ok; ++t) {
        // Per prime: zero below a chosen first level, nonzero there, free above.
        std::map<std::pair<PrimeId, std::uint32_t>, Scalar> table;
        std::map<PrimeId, std::uint32_t> first_level;
        for (PrimeId p : window) {
            std::uint32_t ell = static_cast<std::uint32_t>(pick(rng, 1, 3));
            first_level[p] = ell;
            table[{p, ell}] = small_rational(rng, true);
            for (std::uint32_t j = ell + 1; j <= 4; ++j) table[{p, j}] = small_rational(rng);
        }
        ArithFn f = ArithFn::multiplicative_from_prime_powers(m, k, std::move(table), "f");

        for (PrimeId p : window) {
            std::uint32_t ell = first_level[p];
            MonoidElement point = MonoidElement::prime_power(m, p, ell);
            Scalar base = f(point);
            for (unsigned n = 1; n <= 5; ++n) {
                Scalar lhs = convolve_pow(f, n)(point);
                Scalar rhs = Scalar::of_int(k, static_cast<long>(n)) * base;
                ck.require(lhs == rhs, "power " + std::to_string(n) + " at " + point.str() +
                                           ": " + lhs.str() + " vs " + rhs.str());
            }
        }
    }

    r.seconds = timer.seconds();
    r.pass = ck.ok;
    return r;
}

// ---------------------------------------------------------------------------
// 6. Series transport: ring map, round trips, and the renaming square
// ---------------------------------------------------------------------------

inline CriterionResult criterion_series_iso(std::uint64_t seed) {
    using namespace vdetail;
    CriterionResult r{6, "series-isomorphism", false, 0.0, {}};
    Timer timer;
    auto rng = rng_for(seed, 6);
    Checker ck{&r.notes};

    auto m = IntegerDomain::make()->ideal_monoid();
    FieldId k = rationals();
    auto window = ids_of(m, {"2", "3", "5"});
    const std::uint32_t D = 4;
    auto universe = enumerate_universe(m, window, D);

    std::string w;
    for (int t = 0; t < 50 && ck.ok; ++t) {
        ArithFn f = random_table(m, universe, rng, false, "f");
        ArithFn g = random_table(m, universe, rng, false, "g");
        ck.require(phi(convolve(f, g), window, D) == phi(f, window, D) * phi(g, window, D),
                   "phi(f*g) != phi(f) phi(g) (pair " + std::to_string(t) + ")");
        ck.require(agree_on(phi_inverse(phi(f, window, D)), f, universe, &w),
                   "phi_inverse(phi(f)) != f " + w);

        // Independent surjectivity direction: a series assembled monomial by
        // monomial from variables and constants round-trips through functions.
        TruncatedSeries F = TruncatedSeries::zero(m, k, window, D);
        for (auto& a : universe) {
            Scalar c = pick(rng, 0, 2) == 0 ? Scalar() : small_rational(rng);
            if (c.is_zero()) continue;
            TruncatedSeries term = TruncatedSeries::constant(m, k, window, D, c);
            for (auto& [p, e] : a.exponents())
                for (std::uint32_t j = 0; j < e; ++j)
                    term = term * TruncatedSeries::variable(m, k, window, D, p);
            F = F + term;
        }
        ck.require(phi(phi_inverse(F), window, D) == F, "phi(phi_inverse(F)) != F (trial " +
                                                            std::to_string(t) + ")");
    }

    // Renaming square on a three-generator monoid: pull back along a prime
    // bijection, then expand; or expand, then rename the variables.
    auto M = FreeFinite::make(3, "p");
    auto N = FreeFinite::make(3, "q");
    std::vector<PrimeId> perm{2, 0, 1};
    auto hom = MonoidHom::prime_permutation(M, N, perm);
    std::map<PrimeId, PrimeId> var_map;
    for (PrimeId p = 0; p < 3; ++p) var_map[perm[p]] = p;
    auto UN = enumerate_universe(N, N->all_primes(), D);
    for (int t = 0; t < 50 && ck.ok; ++t) {
        ArithFn g = random_table(N, UN, rng, false, "g");
        TruncatedSeries lhs = phi(pullback(hom, g), M->all_primes(), D);
        TruncatedSeries rhs = rename_variables(phi(g, N->all_primes(), D), M, var_map);
        ck.require(lhs == rhs, "renaming square does not commute (trial " +
                                   std::to_string(t) + ")");
    }

    r.seconds = timer.seconds();
    r.pass = ck.ok;
    return r;
}

// ---------------------------------------------------------------------------
// 7. Valuation, norm, ultrametric, and the isometry
// ---------------------------------------------------------------------------

inline CriterionResult criterion_valuation_metric(std::uint64_t seed) {
    using namespace vdetail;
    CriterionResult r{7, "valuation-metric", false, 0.0, {}};
    Timer timer;
    auto rng = rng_for(seed, 7);
    Checker ck{&r.notes};

    auto m = FreeFinite::make(3);
    auto window = std::static_pointer_cast<const FreeFinite>(m)->all_primes();
    const std::uint32_t D = 8;
    auto universe = enumerate_universe(m, window, D);

    // Random function with a guaranteed hit at level <= 2, so certified
    // valuations of products stay within the search depth.
    auto low_fn = [&](const std::string& name) {
        ArithFn f = random_table(m, universe, rng, false, name);
        MonoidElement anchor =
            MonoidElement::prime_power(m, static_cast<PrimeId>(pick(rng, 0, 2)),
                                       static_cast<std::uint32_t>(pick(rng, 0, 2)));
        std::map<MonoidElement, Scalar, GradedLess> table;
        for (auto& a : universe) {
            Scalar v = a == anchor ? small_rational(rng, true) : f(a);
            if (!v.is_zero()) table.emplace(a, v);
        }
        return ArithFn::from_table(m, rationals(), std::move(table), name);
    };

    for (int t = 0; t < 30 && ck.ok; ++t) {
        ArithFn f = low_fn("f");
        ArithFn g = low_fn("g");
        auto rf = valuation(f, window, D);
        auto rg = valuation(g, window, D);
        ck.require(rf.certified && rf.value.has_value(), "valuation of f not certified");
        ck.require(rg.certified && rg.value.has_value(), "valuation of g not certified");
        if (!ck.ok) break;

        ArithFn fg = snapshot(convolve(f, g), universe, "f*g");
        auto rfg = valuation(fg, window, D);
        ck.require(rfg.certified && rfg.value.has_value() &&
                       *rfg.value == *rf.value + *rg.value,
                   "v(f*g) != v(f) + v(g) at trial " + std::to_string(t));
        ck.require(norm_N(fg, window, D) == norm_N(f, window, D) * norm_N(g, window, D),
                   "N(f*g) != N(f) N(g) at trial " + std::to_string(t));

        // Isometry: the series order of the expansion is the valuation.
        ck.require(phi(f, window, D).w() == rf.value, "series order of f differs from v(f)");
        ck.require(phi(fg, window, D).w() == rfg.value,
                   "series order of f*g differs from v(f*g)");

        // Ultrametric on a perturbation triple with controlled levels.
        ArithFn d1 = low_fn("d1");
        ArithFn h1 = add(f, d1);
        ArithFn h2 = add(h1, low_fn("d2"));
        auto certified_distance = [&](const ArithFn& x, const ArithFn& y,
                                      mpq_class* out) {
            auto rep = valuation(sub(x, y), window, D);
            if (!rep.certified || !rep.value) return false;
            *out = distance(x, y, window, D);
            return true;
        };
        mpq_class dab, dbc, dac;
        if (certified_distance(f, h1, &dab) && certified_distance(h1, h2, &dbc) &&
            certified_distance(f, h2, &dac))
            ck.require(dac <= std::max(dab, dbc),
                       "ultrametric inequality fails: d(f,h2) = " + dac.get_str() +
                           ", d(f,h1) = " + dab.get_str() + ", d(h1,h2) = " + dbc.get_str());
    }

    r.seconds = timer.seconds();
    r.pass = ck.ok;
    return r;
}

// ---------------------------------------------------------------------------
// 8. Partial sums converge to the function they came from
// ---------------------------------------------------------------------------

inline CriterionResult criterion_completeness(std::uint64_t seed) {
    using namespace vdetail;
    CriterionResult r{8, "completeness-density", false, 0.0, {}};
    Timer timer;
    auto rng = rng_for(seed, 8);
    Checker ck{&r.notes};

    auto m = FreeFinite::make(2);
    auto window = std::static_pointer_cast<const FreeFinite>(m)->all_primes();
    const std::uint32_t D = 6;
    auto universe = enumerate_universe(m, window, D);  // graded order
    auto level_count = [](std::uint32_t k) {
        return static_cast<std::size_t>((k + 1) * (k + 2) / 2);  // elements of level <= k
    };

    for (int t = 0; t < 20 && ck.ok; ++t) {
        ArithFn f = random_table(m, universe, rng, false, "f");

        for (std::size_t cut : {std::size_t{1}, std::size_t{3}, std::size_t{7},
                                std::size_t{10}, universe.size()}) {
            ArithFn ft = partial_sum(f, window, cut);

            std::uint32_t done = 0;  // deepest level fully inside the prefix
            while (done < D && level_count(done + 1) <= cut) ++done;
            for (auto& a : universe) {
                if (a.lambda() > done) break;
                ck.require(ft(a) == f(a), "partial sum disagrees on a completed level at " +
                                              a.str());
            }

            // Strict once a level closes: cuts 1, 3, and the full universe land
            // exactly on level boundaries, where done == lambda(a_t).
            auto rep = valuation(sub(f, ft), window, D);
            ck.require(!rep.value || *rep.value > done,
                       "v(f - f_t) is not past the deepest completed level " +
                           std::to_string(done));
        }

        auto seq = [&](std::size_t idx) { return partial_sum(f, window, idx); };
        auto modulus = [&](std::uint32_t k) { return level_count(k); };
        ArithFn limit = cauchy_limit(seq, m, rationals(), window, modulus, 4);
        std::string w;
        ck.require(agree_on(limit, f, enumerate_universe(m, window, 4), &w),
                   "stabilized limit differs from the source function " + w);
    }

    r.seconds = timer.seconds();
    r.pass = ck.ok;
    return r;
}

// ---------------------------------------------------------------------------
// 9. Point census, dimension, and the closed-set lattice
// ---------------------------------------------------------------------------

inline CriterionResult criterion_space_structure(std::uint64_t seed) {
    using namespace vdetail;
    (void)seed;  // fully exhaustive, nothing to randomize
    CriterionResult r{9, "finite-space-structure", false, 0.0, {}};
    Timer timer;
    Checker ck{&r.notes};

    auto z = IntegerDomain::make();
    const std::vector<std::vector<std::string>> prime_sets{
        {"2"}, {"2", "3"}, {"2", "3", "5"}};
    const std::size_t expected_closed[] = {3, 6, 20};

    for (std::size_t n = 1; n <= 3 && ck.ok; ++n) {
        FiniteSpace space(LocalizedDomain::make(z, base_ids_of(z, prime_sets[n - 1])));
        std::string tag = " (n = " + std::to_string(n) + ")";

        ck.require(space.point_count() == (1u << n), "point count is not 2^n" + tag);

        auto census = space.closed_set_census();
        ck.require(census.agree(), "generator and up-set enumerations disagree" + tag);
        ck.require(census.via_generators.size() == expected_closed[n - 1],
                   "closed-set count is " + std::to_string(census.via_generators.size()) +
                       ", expected " + std::to_string(expected_closed[n - 1]) + tag);

        auto dim = space.dimension();
        ck.require(dim.dimension == n, "dimension is " + std::to_string(dim.dimension) +
                                           ", expected " + std::to_string(n) + tag);
        ck.require(dim.chain_verified && dim.chain.size() == n + 1 &&
                       dim.chain.front() == space.all_points() &&
                       dim.chain.back() ==
                           (FiniteSpace::PointSet{1} << space.identity_point()),
                   "witness chain broken" + tag);

        for (FiniteSpace::PrimeMask p = 0; p < space.point_count(); ++p) {
            bool dense = space.closure(FiniteSpace::PointSet{1} << p) == space.all_points();
            ck.require(dense == (p == space.generic_point()),
                       "dense point census wrong at " + space.point_label(p) + tag);
        }

        std::string why;
        ck.require(space.closed_point_check(&why), "closed point check: " + why + tag);
        auto spectral = space.t0_and_spectral_report();
        ck.require(spectral.ok(), "separation/spectral checks: " + spectral.detail + tag);
    }

    r.seconds = timer.seconds();
    if (r.seconds > kSpaceBudget) {
        ck.ok = false;
        r.notes.push_back("time budget exceeded (limit 30s)");
    }
    r.pass = ck.ok;
    return r;
}

// ---------------------------------------------------------------------------
// 10. Stalks, sections, basic opens, and open immersions
// ---------------------------------------------------------------------------

inline CriterionResult criterion_sheaf_structure(std::uint64_t seed) {
    using namespace vdetail;
    (void)seed;
    CriterionResult r{10, "sheaf-structure", false, 0.0, {}};
    Timer timer;
    Checker ck{&r.notes};

    auto z = IntegerDomain::make();
    FiniteSpace space(LocalizedDomain::make(z, base_ids_of(z, {"2", "3", "5"})));
    auto full = space.full_primes();

    for (FiniteSpace::PrimeMask zeros = 0; zeros < space.point_count(); ++zeros) {
        auto stalk = space.stalk_at(zeros);
        int weight = std::popcount(zeros);
        StalkKind expect = weight == 0                            ? StalkKind::FractionField
                           : weight == static_cast<int>(space.prime_count())
                               ? StalkKind::WholeRing
                           : weight == 1 ? StalkKind::LocalRing
                                         : StalkKind::SemiLocalPID;
        ck.require(stalk.kind == expect,
                   "stalk at " + space.point_label(zeros) + " has the wrong shape: " +
                       stalk.str());
    }

    std::vector<long> pool{1, 2, 3, 5, 6, 10, 15, 30, 4, 45};
    for (std::size_t i = 0; i < pool.size(); ++i) {
        DomainElement a = mpz_class(pool[i]);
        auto sections = space.sections_on(a);
        std::vector<PrimeId> expect_survivors;
        for (PrimeId p = 0; p < space.prime_count(); ++p)
            if (!(space.support_of(a) >> p & 1)) expect_survivors.push_back(p);
        ck.require(sections.surviving == expect_survivors,
                   "sections over D_1(" + std::to_string(pool[i]) +
                       ") invert the wrong primes: " + sections.str());

        for (std::size_t j = i; j < pool.size(); ++j) {
            DomainElement b = mpz_class(pool[j]);
            DomainElement ab = mpz_class(pool[i] * pool[j]);
            ck.require((space.basic_open(a) & space.basic_open(b)) == space.basic_open(ab),
                       "D_1(" + std::to_string(pool[i]) + ") meet D_1(" +
                           std::to_string(pool[j]) + ") is not D_1 of the product");
        }
    }

    for (FiniteSpace::PrimeMask supp = 0; supp <= full; ++supp) {
        auto rep = space.open_immersion_check(space.element_with_support(supp));
        ck.require(rep.ok, "open immersion fails for the canonical element of support " +
                               std::to_string(supp) + ": " + rep.detail);
    }
    for (long a : pool) {
        auto rep = space.open_immersion_check(DomainElement(mpz_class(a)));
        ck.require(rep.ok, "open immersion fails for " + std::to_string(a) + ": " +
                               rep.detail);
    }

    r.seconds = timer.seconds();
    r.pass = ck.ok;
    return r;
}

// ---------------------------------------------------------------------------
// 11. Ring maps into quadratic orders and their induced space maps
// ---------------------------------------------------------------------------

inline CriterionResult criterion_morphisms(std::uint64_t seed) {
    using namespace vdetail;
    (void)seed;
    CriterionResult r{11, "induced-morphisms", false, 0.0, {}};
    Timer timer;
    Checker ck{&r.notes};

    auto z = IntegerDomain::make();
    struct Case {
        long d;
        std::vector<std::string> source_primes;  // localize Z here
    };
    // Semi-local windows chosen where the rational prime has interesting
    // behavior upstairs: 3 splits for d = -5, 5 splits for d = -1.
    const std::vector<Case> cases{{-5, {"2", "3"}}, {-1, {"2", "5"}}};

    for (const Case& c : cases) {
        auto quad = QuadDomain::make(c.d);
        std::string tag = " in " + quad->signature();
        DomainHom inc = DomainHom::inclusion_quad(z, quad);
        ck.require(inc.is_valid(), "full inclusion rejected" + tag);

        // Contraction hits every rational prime under a norm-50 cap, and
        // every upstairs prime of norm <= 50 lands on the prime below it.
        for (PrimeId t = 0; quad->prime_info(t).norm <= 50; ++t) {
            auto s = inc.contract_prime(t);
            bool good = s && z->prime_info(*s).norm == quad->rational_under(t);
            ck.require(good, "prime " + quad->prime_info(t).label +
                                 " contracts to the wrong place" + tag);
        }
        for (long p : {2L, 3L, 5L, 7L, 11L, 13L, 17L, 19L, 23L, 29L, 31L, 37L, 41L, 43L}) {
            auto split = quad->splitting(p);
            bool hit = false;
            for (PrimeId t : split.ids)
                if (auto s = inc.contract_prime(t); s && z->prime_info(*s).norm == p)
                    hit = true;
            ck.require(hit, "no prime over " + std::to_string(p) + " contracts onto it" + tag);
        }

        // Semi-local version: localize both sides at matching prime sets.
        auto source = LocalizedDomain::make(z, base_ids_of(z, c.source_primes));
        std::vector<PrimeId> over;
        for (auto& label : c.source_primes) {
            auto split = quad->splitting(mpz_class(label));
            over.insert(over.end(), split.ids.begin(), split.ids.end());
        }
        auto target = LocalizedDomain::make(quad, over);
        auto rep = induced_morphism(DomainHom::localized_inclusion(source, target));
        ck.require(rep.quasi_integral, "semi-local inclusion rejected" + tag);
        ck.require(rep.basis_preimage_ok, "basic-open preimage identity fails" + tag +
                       ": " + rep.detail);
        ck.require(rep.stalk_proper_ok, "stalk contraction loses an ideal" + tag + ": " +
                       rep.detail);
        ck.require(rep.global_sections_ok,
                   "global sections do not return the ring map" + tag + ": " + rep.detail);
    }

    r.seconds = timer.seconds();
    r.pass = ck.ok;
    return r;
}

// ---------------------------------------------------------------------------
// 12. The worked non-PID example
// ---------------------------------------------------------------------------

inline CriterionResult criterion_sqrtm5(std::uint64_t seed) {
    using namespace vdetail;
    (void)seed;
    CriterionResult r{12, "sqrt-minus5-witnesses", false, 0.0, {}};
    Timer timer;
    Checker ck{&r.notes};

    WitnessReport rep = witness_check_sqrtm5();
    ck.require(rep.ok && rep.failures.empty(), "witness battery reported failures");
    for (auto& f : rep.failures)
        if (r.notes.size() < 8) r.notes.push_back(f);
    ck.require(rep.steps.size() == 8,
               "expected 8 witness steps, saw " + std::to_string(rep.steps.size()));

    r.seconds = timer.seconds();
    if (r.seconds > kWitnessBudget) {
        ck.ok = false;
        r.notes.push_back("time budget exceeded (limit 5s)");
    }
    r.pass = ck.ok;
    return r;
}

// ---------------------------------------------------------------------------
// 13. The spectrum sits inside the space
// ---------------------------------------------------------------------------

inline CriterionResult criterion_spec_embedding(std::uint64_t seed) {
    using namespace vdetail;
    (void)seed;
    CriterionResult r{13, "spec-embedding", false, 0.0, {}};
    Timer timer;
    Checker ck{&r.notes};

    auto z = IntegerDomain::make();
    const std::vector<std::vector<std::string>> prime_sets{
        {"2"}, {"2", "3"}, {"2", "3", "5"}};
    for (std::size_t n = 1; n <= 3; ++n) {
        FiniteSpace space(LocalizedDomain::make(z, base_ids_of(z, prime_sets[n - 1])));
        auto rep = space.spec_embedding();
        std::string tag = " (n = " + std::to_string(n) + ")";
        ck.require(rep.image_is_small_zero_sets,
                   "image is not the points with at most one zero" + tag);
        ck.require(rep.basis_preimages_ok, "basic-open preimages are off" + tag + ": " +
                       rep.detail);
        ck.require(rep.homeomorphic_onto_image, "subspace topology mismatch" + tag + ": " +
                       rep.detail);
        ck.require(rep.ok, "embedding report not clean" + tag);
    }

    r.seconds = timer.seconds();
    r.pass = ck.ok;
    return r;
}

// ---------------------------------------------------------------------------
// Dispatch
// ---------------------------------------------------------------------------

inline CriterionResult run_criterion(int id, std::uint64_t seed) {
    switch (id) {
        case 1: return criterion_ring_axioms(seed);
        case 2: return criterion_units(seed);
        case 3: return criterion_moebius(seed);
        case 4: return criterion_multiplicativity(seed);
        case 5: return criterion_torsion(seed);
        case 6: return criterion_series_iso(seed);
        case 7: return criterion_valuation_metric(seed);
        case 8: return criterion_completeness(seed);
        case 9: return criterion_space_structure(seed);
        case 10: return criterion_sheaf_structure(seed);
        case 11: return criterion_morphisms(seed);
        case 12: return criterion_sqrtm5(seed);
        case 13: return criterion_spec_embedding(seed);
        default:
            throw std::invalid_argument("verify: no criterion numbered " + std::to_string(id));
    }
}

inline std::vector<int> suite_criteria(const std::string& suite) {
    if (suite == "dirichlet") return {1, 2, 3, 4, 5};
    if (suite == "series") return {6};
    if (suite == "valuation") return {7, 8};
    if (suite == "space") return {9, 10};
    if (suite == "morphisms") return {11};
    if (suite == "sqrt-5") return {12};
    if (suite == "spec-embedding") return {13};
    if (suite == "all") return {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13};
    throw std::invalid_argument(
        "verify: unknown suite '" + suite +
        "'; expected dirichlet, series, valuation, space, morphisms, sqrt-5, "
        "spec-embedding, or all");
}

inline std::vector<CriterionResult> run_suite(const std::string& suite, std::uint64_t seed) {
    std::vector<CriterionResult> out;
    for (int id : suite_criteria(suite)) out.push_back(run_criterion(id, seed));
    return out;
}

}  // namespace arithfn::verify
