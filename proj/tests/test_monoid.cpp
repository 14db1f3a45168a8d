#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>
#include <set>
#include <thread>
#include <vector>

#include "arithfn/monoid.hpp"

using arithfn::enumerate_universe;
using arithfn::FreeFinite;
using arithfn::MonoidElement;
using arithfn::PositiveIntegers;
using arithfn::PrimeId;

namespace {

// Oracle for divisor sets in Z+: plain integer trial division, no exponent logic.
std::set<long> divisors_by_trial(long n) {
    std::set<long> out;
    for (long d = 1; d <= n; ++d)
        if (n % d == 0) out.insert(d);
    return out;
}

// Oracle for |U({2,3}, D)|: count distinct integers 2^a 3^b with a+b <= D.
std::size_t universe_size_by_numbers(unsigned D) {
    std::set<long long> seen;
    for (unsigned a = 0; a <= D; ++a)
        for (unsigned b = 0; a + b <= D; ++b) {
            long long v = 1;
            for (unsigned i = 0; i < a; ++i) v *= 2;
            for (unsigned i = 0; i < b; ++i) v *= 3;
            seen.insert(v);
        }
    return seen.size();
}

}  // namespace

TEST_CASE("factorization of positive integers round-trips") {
    auto Z = PositiveIntegers::make();
    auto sixty = Z->element_of(60);
    REQUIRE(sixty.str() == "2^2 * 3 * 5");
    REQUIRE(Z->value_of(sixty) == 60);
    REQUIRE(sixty.lambda() == 4);
    REQUIRE(Z->element_of(1).is_identity());
    REQUIRE(Z->element_of(9973).lambda() == 1);  // prime near 10^4
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<long> pick(1, 5000);
    for (int i = 0; i < 50; ++i) {
        long n = pick(rng);
        REQUIRE(Z->value_of(Z->element_of(n)) == n);
    }
    REQUIRE_THROWS_AS(Z->element_of(0), std::invalid_argument);
    REQUIRE_THROWS_AS(Z->element_of(-4), std::invalid_argument);
    REQUIRE_THROWS_AS(Z->prime_id_of(mpz_class(4)), std::invalid_argument);
}

TEST_CASE("divisor enumeration matches the trial-division oracle") {
    auto Z = PositiveIntegers::make();
    auto twelve = Z->element_of(12);
    auto divs = twelve.divisors();
    std::vector<long> got;
    for (auto& d : divs) got.push_back(Z->value_of(d).get_si());
    REQUIRE(got == std::vector<long>{1, 2, 3, 4, 6, 12});
    REQUIRE(twelve.lambda() == 3);

    std::mt19937_64 rng(11);
    std::uniform_int_distribution<long> pick(1, 720);
    for (int i = 0; i < 30; ++i) {
        long n = pick(rng);
        auto expect = divisors_by_trial(n);
        std::set<long> actual;
        for (auto& d : Z->element_of(n).divisors()) actual.insert(Z->value_of(d).get_si());
        REQUIRE(actual == expect);
    }
}

TEST_CASE("identity is neutral and coprime to everything") {
    auto Z = PositiveIntegers::make();
    auto one = MonoidElement::identity(Z);
    REQUIRE(one.divisors().size() == 1);
    REQUIRE(one.lambda() == 0);
    auto a = Z->element_of(84);
    REQUIRE(one * a == a);
    REQUIRE(one.coprime_to(a));
    REQUIRE(a.coprime_to(Z->element_of(25)));
    REQUIRE_FALSE(a.coprime_to(Z->element_of(14)));
}

TEST_CASE("multiplication, divisibility and exact quotients") {
    auto Z = PositiveIntegers::make();
    std::mt19937_64 rng(13);
    std::uniform_int_distribution<long> pick(1, 400);
    for (int i = 0; i < 60; ++i) {
        long x = pick(rng), y = pick(rng);
        auto a = Z->element_of(x), b = Z->element_of(y);
        auto prod = a * b;
        REQUIRE(Z->value_of(prod) == x * y);
        REQUIRE(a.divides(prod));
        REQUIRE(a.quotient_of(prod) == b);
    }
    auto six = Z->element_of(6);
    REQUIRE_FALSE(Z->element_of(4).divides(six));
    REQUIRE_THROWS_AS(Z->element_of(4).quotient_of(six), std::domain_error);
}

TEST_CASE("operations across distinct monoids are rejected") {
    auto Z = PositiveIntegers::make();
    auto F = FreeFinite::make(2);
    auto a = Z->element_of(6);
    auto x = MonoidElement::prime_power(F, 0);
    REQUIRE_THROWS_AS(a * x, std::invalid_argument);
    REQUIRE_THROWS_AS(a.divides(x), std::invalid_argument);
    REQUIRE_THROWS_AS(a.coprime_to(x), std::invalid_argument);
}

TEST_CASE("test universe U(W, D) has the expected size and order") {
    auto Z = PositiveIntegers::make();
    PrimeId p2 = Z->prime_id_of(mpz_class(2)), p3 = Z->prime_id_of(mpz_class(3));
    std::vector<PrimeId> w{p2, p3};

    auto u2 = enumerate_universe(Z, w, 2);
    std::vector<long> vals;
    for (auto& a : u2) vals.push_back(Z->value_of(a).get_si());
    REQUIRE(vals == std::vector<long>{1, 2, 3, 4, 6, 9});

    for (unsigned D = 0; D <= 8; ++D) {
        auto u = enumerate_universe(Z, w, D);
        REQUIRE(u.size() == (D + 1) * (D + 2) / 2);
        REQUIRE(u.size() == universe_size_by_numbers(D));
        // graded order: lambda never decreases, no duplicates
        for (std::size_t i = 1; i < u.size(); ++i) {
            REQUIRE(u[i - 1].lambda() <= u[i].lambda());
            REQUIRE(u[i - 1] != u[i]);
        }
        for (auto& a : u) REQUIRE(a.lambda() <= D);
    }

    REQUIRE(enumerate_universe(Z, std::vector<PrimeId>{}, 5).size() == 1);
    REQUIRE_THROWS_AS(enumerate_universe(Z, std::vector<PrimeId>{p2, p2}, 3),
                      std::invalid_argument);
}

TEST_CASE("free monoid generators carry labels but no norms") {
    auto F = FreeFinite::make(3, "q");
    REQUIRE(F->prime_count() == 3);
    REQUIRE(F->prime(0).label == "q1");
    REQUIRE(F->finite_primes());
    auto x = MonoidElement::prime_power(F, 0, 2) * MonoidElement::prime_power(F, 2);
    REQUIRE(x.str() == "q1^2 * q3");
    REQUIRE_THROWS_AS(x.norm(), std::domain_error);
    REQUIRE_THROWS_AS(F->prime(5), std::out_of_range);
    REQUIRE(F->find_prime_by_label("q2").value() == 1);
    REQUIRE_FALSE(F->find_prime_by_label("zz").has_value());

    auto Z = PositiveIntegers::make();
    REQUIRE(Z->element_of(12).norm() == 12);  // norms on Z+ are the integers themselves
}

TEST_CASE("concurrent factorization on a shared monoid is safe") {
    auto Z = PositiveIntegers::make();
    std::vector<std::thread> workers;
    std::vector<long> sums(4, 0);
    for (int t = 0; t < 4; ++t)
        workers.emplace_back([&, t] {
            for (long n = 2 + t; n < 600; n += 4) sums[t] += Z->element_of(n).lambda();
        });
    for (auto& th : workers) th.join();
    long total = sums[0] + sums[1] + sums[2] + sums[3];
    long expect = 0;
    for (long n = 2; n < 600; ++n) expect += Z->element_of(n).lambda();
    REQUIRE(total == expect);
}
