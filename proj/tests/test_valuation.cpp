#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "arithfn/series.hpp"
#include "arithfn/valuation.hpp"
#include "testkit.hpp"

using namespace arithfn;

namespace {

const FieldId Q = rationals();

// Random function with v(f) exactly v: zero below level v, nonzero somewhere
// at level v.
ArithFn fn_with_valuation(const MonoidPtr& m, const std::vector<PrimeId>& w,
                          std::uint32_t v, std::uint32_t D, std::mt19937_64& rng) {
    std::map<MonoidElement, Scalar, GradedLess> table;
    auto U = enumerate_universe(m, w, D);
    bool pinned = false;
    for (auto& a : U) {
        if (a.lambda() < v) continue;
        auto c = testkit::random_scalar(rng, Q);
        if (a.lambda() == v && !pinned) {
            c = testkit::random_nonzero_scalar(rng, Q);
            pinned = true;
        }
        if (!c.is_zero()) table.emplace(a, c);
    }
    return ArithFn::from_table(m, Q, std::move(table), "v" + std::to_string(v));
}

}  // namespace

TEST_CASE("valuation reports are certified exactly on full finite windows") {
    auto M = FreeFinite::make(3);
    auto w = M->all_primes();
    auto e = ArithFn::identity_e(M, Q);
    auto rep = valuation(e, w, 8);
    REQUIRE(rep.value.value() == 0);
    REQUIRE(rep.certified);

    auto pi = ArithFn::pi_prime(M, Q, 1);
    REQUIRE(valuation(pi, w, 8).value.value() == 1);
    auto two = valuation(convolve(pi, ArithFn::pi_prime(M, Q, 2)), w, 8);
    REQUIRE(two.value.value() == 2);
    REQUIRE(two.certified);

    // partial window: found, but only window-relative
    auto partial = valuation(pi, {0, 1}, 8);
    REQUIRE(partial.value.value() == 1);
    REQUIRE_FALSE(partial.certified);

    // infinite prime supply: never certified
    auto Z = PositiveIntegers::make();
    auto repz = valuation(ArithFn::moebius(Z, Q),
                          {Z->prime_id_of(mpz_class(2)), Z->prime_id_of(mpz_class(3))}, 6);
    REQUIRE(repz.value.value() == 0);
    REQUIRE_FALSE(repz.certified);

    // nothing found up to depth: not certified, no value
    auto none = valuation(ArithFn::from_rule(M, Q,
                                             [](const MonoidElement&) {
                                                 return Scalar::integer(0);
                                             },
                                             "silent-zero"),
                          w, 4);
    REQUIRE_FALSE(none.value.has_value());
    REQUIRE_FALSE(none.certified);
}

TEST_CASE("the literal zero function is certified at v = infinity") {
    auto M = FreeFinite::make(2);
    auto w = M->all_primes();
    auto z = ArithFn::zero(M, Q);
    auto rep = valuation(z, w, 5);
    REQUIRE(rep.certified);
    REQUIRE_FALSE(rep.value.has_value());
    REQUIRE(norm_N(z, w, 5) == 0);
}

TEST_CASE("norm is multiplicative along convolution and flags units") {
    auto M = FreeFinite::make(3);
    auto w = M->all_primes();
    std::mt19937_64 rng(901);
    for (int trial = 0; trial < 10; ++trial) {
        std::uint32_t vf = trial % 3, vg = (trial / 3) % 3;
        auto f = fn_with_valuation(M, w, vf, 4, rng);
        auto g = fn_with_valuation(M, w, vg, 4, rng);
        auto repf = valuation(f, w, 8), repg = valuation(g, w, 8);
        REQUIRE(repf.value.value() == vf);
        REQUIRE(repg.value.value() == vg);
        // additivity of v under convolution (integral coefficients: a field)
        auto repfg = valuation(convolve(f, g), w, 8);
        REQUIRE(repfg.certified);
        REQUIRE(repfg.value.value() == vf + vg);
        REQUIRE(norm_N(convolve(f, g), w, 8) == norm_N(f, w, 8) * norm_N(g, w, 8));
        // N = 1 exactly for units
        REQUIRE((norm_N(f, w, 8) == 1) == (vf == 0));
    }
    REQUIRE(norm_N(ArithFn::identity_e(M, Q), w, 8) == 1);
    REQUIRE(norm_N(ArithFn::pi_prime(M, Q, 0), w, 8) == 2);
    REQUIRE_THROWS_AS(norm_N(ArithFn::moebius(PositiveIntegers::make(), Q), {0, 1}, 6),
                      std::domain_error);
}

TEST_CASE("distance is an ultrametric with exact zero only structurally") {
    auto M = FreeFinite::make(3);
    auto w = M->all_primes();
    std::mt19937_64 rng(902);
    auto U = enumerate_universe(M, w, 4);
    auto f = testkit::random_table_fn(M, Q, U, rng, false, "f");
    auto g = testkit::random_table_fn(M, Q, U, rng, false, "g");
    auto h = testkit::random_table_fn(M, Q, U, rng, false, "h");

    REQUIRE(distance(f, f, w, 8) == 0);
    auto dfg = distance(f, g, w, 8), dgh = distance(g, h, w, 8), dfh = distance(f, h, w, 8);
    REQUIRE(dfg == distance(g, f, w, 8));
    REQUIRE(dfh <= std::max(dfg, dgh));
    REQUIRE(dfg > 0);

    // d = c^v with the default c = 1/2
    auto rep = valuation(sub(f, g), w, 8);
    mpq_class expect(1);
    for (std::uint32_t i = 0; i < rep.value.value(); ++i) expect /= 2;
    REQUIRE(dfg == expect);

    // custom ratio
    MetricParams third{mpq_class(1, 3)};
    auto d3 = distance(f, g, w, 8, third);
    mpq_class expect3(1);
    for (std::uint32_t i = 0; i < rep.value.value(); ++i) expect3 /= 3;
    REQUIRE(d3 == expect3);

    REQUIRE_THROWS_AS(distance(f, g, w, 8, MetricParams{mpq_class(1)}),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(distance(f, g, w, 8, MetricParams{mpq_class(0)}),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(distance(f, g, w, 8, MetricParams{mpq_class(3, 2)}),
                      std::invalid_argument);

    // pointwise-equal but structurally distinct: honest refusal, not a fake 0
    auto f2 = add(f, ArithFn::zero(M, Q));
    REQUIRE_THROWS_AS(distance(f, f2, w, 8), std::domain_error);
}

TEST_CASE("filtration membership matches the metric balls") {
    auto M = FreeFinite::make(3);
    auto w = M->all_primes();
    std::mt19937_64 rng(903);
    for (std::uint32_t v = 0; v <= 3; ++v) {
        auto f = fn_with_valuation(M, w, v, 5, rng);
        for (std::uint32_t n = 0; n <= 5; ++n) REQUIRE(in_m_n(f, n, w) == (v >= n));
    }
    // m_m * m_n inside m_{m+n}
    auto f = fn_with_valuation(M, w, 2, 5, rng);
    auto g = fn_with_valuation(M, w, 1, 5, rng);
    REQUIRE(in_m_n(convolve(f, g), 3, w));

    // balls: d(f, g) <= c^n iff f - g in m_n; compare against the sub function
    auto a = fn_with_valuation(M, w, 2, 5, rng);
    auto b = fn_with_valuation(M, w, 0, 5, rng);
    mpq_class cn(1, 4);  // c^2
    REQUIRE((distance(a, ArithFn::zero(M, Q), w, 8) <= cn) == in_m_n(a, 2, w));
    REQUIRE((distance(b, ArithFn::zero(M, Q), w, 8) <= cn) == in_m_n(b, 2, w));
}

TEST_CASE("cauchy_limit recovers the limit from a valid modulus") {
    auto M = FreeFinite::make(2);
    auto w = M->all_primes();
    std::mt19937_64 rng(904);
    auto U6 = enumerate_universe(M, w, 6);
    auto f = testkit::random_table_fn(M, Q, U6, rng, true, "f");

    // after t(k) = |U(W, k)| terms every level-k value is settled
    auto modulus = [&](std::uint32_t k) {
        return enumerate_universe(M, w, k).size();
    };
    auto seq = [&](std::size_t m) { return partial_sum(f, w, m); };
    auto limit = cauchy_limit(seq, M, Q, w, modulus, 4);
    for (auto& a : enumerate_universe(M, w, 4)) REQUIRE(limit(a) == f(a));
}

TEST_CASE("a sequence violating its declared modulus is rejected") {
    auto M = FreeFinite::make(2);
    auto w = M->all_primes();
    auto flip = [&](std::size_t m) {
        return scale(Scalar::integer(m % 2 ? 1 : -1), ArithFn::identity_e(M, Q));
    };
    REQUIRE_THROWS_AS(
        cauchy_limit(flip, M, Q, w, [](std::uint32_t) { return std::size_t{1}; }, 2),
        std::domain_error);
}
