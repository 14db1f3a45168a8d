#pragma once

// Shared generators for the property-style tests.  Everything is seeded by
// the caller; same seed, same data.

#include <map>
#include <random>
#include <vector>

#include "arithfn/dirichlet.hpp"
#include "arithfn/field.hpp"
#include "arithfn/monoid.hpp"

namespace testkit {

using arithfn::ArithFn;
using arithfn::FieldId;
using arithfn::MonoidElement;
using arithfn::MonoidPtr;
using arithfn::PrimeId;
using arithfn::Scalar;

// Small scalar pool with zero: exercises vanishing coefficients.
inline Scalar random_scalar(std::mt19937_64& rng, FieldId k) {
    static const long nums[] = {0, 1, -1, 2, -2, 3, 5, -1, 1, 7};
    static const long dens[] = {1, 1, 2, 3, 1, 2, 6, 4, 5, 3};
    std::uniform_int_distribution<std::size_t> pick(0, 9);
    std::size_t i = pick(rng);
    if (k.is_rationals()) return Scalar::rational(nums[i], dens[i]);
    return Scalar::of_int(k, nums[i]);
}

inline Scalar random_nonzero_scalar(std::mt19937_64& rng, FieldId k) {
    for (;;) {
        Scalar s = random_scalar(rng, k);
        if (!s.is_zero()) return s;
    }
}

// Arbitrary function as a value table over U(window, D); zero outside.
// force_unit pins f(1) != 0.
inline ArithFn random_table_fn(const MonoidPtr& m, FieldId k,
                               const std::vector<MonoidElement>& universe,
                               std::mt19937_64& rng, bool force_unit,
                               const std::string& name = "rand") {
    std::map<MonoidElement, Scalar, arithfn::GradedLess> table;
    for (auto& a : universe) {
        Scalar v = a.is_identity() && force_unit ? random_nonzero_scalar(rng, k)
                                                 : random_scalar(rng, k);
        if (!v.is_zero()) table.emplace(a, v);
    }
    return ArithFn::from_table(m, k, std::move(table), name);
}

// Multiplicative function from independent uniform values on prime powers
// p^j, j <= D, for the window primes; other prime powers evaluate to 0.
inline ArithFn random_multiplicative(const MonoidPtr& m, FieldId k,
                                     const std::vector<PrimeId>& window, std::uint32_t D,
                                     std::mt19937_64& rng,
                                     const std::string& name = "randmult") {
    std::map<std::pair<PrimeId, std::uint32_t>, Scalar> table;
    for (PrimeId p : window)
        for (std::uint32_t j = 1; j <= D; ++j) table[{p, j}] = random_scalar(rng, k);
    return ArithFn::multiplicative_from_prime_powers(m, k, std::move(table), name);
}

// Totally multiplicative function with finitely many listed prime values.
inline ArithFn random_totally_mult(const MonoidPtr& m, FieldId k,
                                   const std::vector<PrimeId>& window,
                                   std::mt19937_64& rng) {
    arithfn::TotallyMultData data;
    data.default_value = Scalar::one(k);
    for (PrimeId p : window) data.values[p] = random_scalar(rng, k);
    return ArithFn::totally_mult(m, k, std::move(data));
}

}  // namespace testkit
