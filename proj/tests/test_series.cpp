#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "arithfn/series.hpp"
#include "testkit.hpp"

using namespace arithfn;

namespace {

const FieldId Q = rationals();

}  // namespace

TEST_CASE("series of mu on two primes is the inclusion-exclusion square") {
    auto Z = PositiveIntegers::make();
    std::vector<PrimeId> w{Z->prime_id_of(mpz_class(2)), Z->prime_id_of(mpz_class(3))};
    auto F = phi(ArithFn::moebius(Z, Q), w, 2);
    REQUIRE(F.str() == "1 - X_2 - X_3 + X_2*X_3");
    REQUIRE(F.coeff({{w[0], 2}}).is_zero());  // mu(4) = 0 stored as no entry
    REQUIRE(F.coefficients().size() == 4);

    auto G = phi(ArithFn::unit_u(Z, Q), w, 2);
    REQUIRE(G.str() == "1 + X_2 + X_3 + X_2^2 + X_2*X_3 + X_3^2");
    REQUIRE(phi(ArithFn::identity_e(Z, Q), w, 2).str() == "1");
}

TEST_CASE("phi is a ring map: convolution becomes the truncated product") {
    auto M = FreeFinite::make(2);
    auto w = M->all_primes();
    std::mt19937_64 rng(810);
    auto U = enumerate_universe(M, w, 4);
    for (int trial = 0; trial < 8; ++trial) {
        auto f = testkit::random_table_fn(M, Q, U, rng, false, "f");
        auto g = testkit::random_table_fn(M, Q, U, rng, false, "g");
        REQUIRE(phi(convolve(f, g), w, 4) == phi(f, w, 4) * phi(g, w, 4));
        auto c = testkit::random_scalar(rng, Q);
        REQUIRE(phi(add(scale(c, f), g), w, 4) == phi(f, w, 4).scaled(c) + phi(g, w, 4));
    }
}

TEST_CASE("phi and phi_inverse are mutually inverse on the window universe") {
    auto M = FreeFinite::make(2);
    auto w = M->all_primes();
    std::mt19937_64 rng(811);
    auto U = enumerate_universe(M, w, 5);
    auto f = testkit::random_table_fn(M, Q, U, rng, true, "f");
    auto back = phi_inverse(phi(f, w, 5));
    for (auto& a : U) REQUIRE(back(a) == f(a));

    // series -> function -> series
    TruncatedSeries F(M, Q, w, 3);
    for (auto& a : enumerate_universe(M, w, 3)) {
        auto c = testkit::random_scalar(rng, Q);
        F.set_coeff(a.exponents(), c);
    }
    REQUIRE(phi(phi_inverse(F), w, 3) == F);
}

TEST_CASE("phi_inverse vanishes outside the window universe") {
    auto M = FreeFinite::make(3);
    std::vector<PrimeId> w{0, 1};  // third prime excluded
    auto F = TruncatedSeries::constant(M, Q, w, 2, Scalar::integer(7));
    auto f = phi_inverse(F);
    REQUIRE(f(MonoidElement::identity(M)) == Scalar::integer(7));
    REQUIRE(f(MonoidElement::prime_power(M, 2)).is_zero());       // outside window
    REQUIRE(f(MonoidElement::prime_power(M, 0, 3)).is_zero());    // beyond degree
}

TEST_CASE("point mass at p corresponds to the variable X_p") {
    auto M = FreeFinite::make(2, "q");
    auto w = M->all_primes();
    auto pi1 = ArithFn::pi_prime(M, Q, 0);
    REQUIRE(phi(pi1, w, 3) == TruncatedSeries::variable(M, Q, w, 3, 0));
    auto back = phi_inverse(TruncatedSeries::variable(M, Q, w, 3, 0));
    for (auto& a : enumerate_universe(M, w, 3)) REQUIRE(back(a) == pi1(a));
    REQUIRE(pi1(MonoidElement::prime_power(M, 0, 2)).is_zero());
    REQUIRE(pi1(MonoidElement::prime_power(M, 0, 1)).is_one());
}

TEST_CASE("truncated product drops overflow degrees and w tracks the bottom") {
    auto M = FreeFinite::make(1);
    auto w = M->all_primes();
    auto X = TruncatedSeries::variable(M, Q, w, 3, 0);
    auto X2 = X * X;
    REQUIRE(X2.coeff({{0, 2}}).is_one());
    REQUIRE((X2 * X2).coefficients().empty());  // degree 4 > 3 truncated away
    REQUIRE(X2.w().value() == 2);
    REQUIRE_FALSE((X2 * X2).w().has_value());  // zero truncation: w = infinity
    REQUIRE(TruncatedSeries::constant(M, Q, w, 3, Scalar::integer(4)).w().value() == 0);

    auto Z = PositiveIntegers::make();
    std::vector<PrimeId> wz{Z->prime_id_of(mpz_class(2)), Z->prime_id_of(mpz_class(3))};
    auto one = TruncatedSeries::constant(Z, Q, wz, 2, Scalar::integer(1));
    REQUIRE((phi(ArithFn::moebius(Z, Q), wz, 2) - one).w().value() == 1);
}

TEST_CASE("series with different windows, bounds or monoids do not mix") {
    auto M = FreeFinite::make(2);
    auto N = FreeFinite::make(2, "q");
    auto a = TruncatedSeries::constant(M, Q, M->all_primes(), 3, Scalar::integer(1));
    auto b = TruncatedSeries::constant(M, Q, M->all_primes(), 4, Scalar::integer(1));
    auto c = TruncatedSeries::constant(M, Q, {0}, 3, Scalar::integer(1));
    auto d = TruncatedSeries::constant(N, Q, N->all_primes(), 3, Scalar::integer(1));
    REQUIRE_THROWS_AS(a + b, std::invalid_argument);
    REQUIRE_THROWS_AS(a * c, std::invalid_argument);
    REQUIRE_THROWS_AS(a + d, std::invalid_argument);
    REQUIRE_THROWS_AS(TruncatedSeries::variable(M, Q, {0}, 3, 1), std::invalid_argument);
}

TEST_CASE("partial sums agree with f exactly on the enumerated prefix") {
    auto M = FreeFinite::make(2);
    auto w = M->all_primes();
    std::mt19937_64 rng(812);
    auto U = enumerate_universe(M, w, 4);
    auto f = testkit::random_table_fn(M, Q, U, rng, true, "f");
    for (std::size_t t : {std::size_t{1}, std::size_t{3}, std::size_t{6}, U.size()}) {
        auto ft = partial_sum(f, w, t);
        for (std::size_t i = 0; i < U.size(); ++i) {
            if (i < t)
                REQUIRE(ft(U[i]) == f(U[i]));
            else
                REQUIRE(ft(U[i]).is_zero());
        }
    }
}

TEST_CASE("functorial square: pullback then phi equals phi then renaming") {
    auto M = FreeFinite::make(2, "p");
    auto N = FreeFinite::make(2, "q");
    std::vector<PrimeId> perm{1, 0};  // p1 -> q2, p2 -> q1
    auto h = MonoidHom::prime_permutation(M, N, perm);

    std::mt19937_64 rng(813);
    auto UN = enumerate_universe(N, N->all_primes(), 4);
    auto g = testkit::random_table_fn(N, Q, UN, rng, true, "g");

    // series-side renaming X_{h(p)} -> X_p
    std::map<PrimeId, PrimeId> var_map;
    for (PrimeId p = 0; p < 2; ++p) var_map[perm[p]] = p;

    auto lhs = phi(pullback(h, g), M->all_primes(), 4);
    auto rhs = rename_variables(phi(g, N->all_primes(), 4), M, var_map);
    REQUIRE(lhs == rhs);
}
