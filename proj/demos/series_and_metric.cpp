// Expands arithmetic functions into truncated power series, one variable per
// prime of a two-generator monoid, and watches partial sums converge in the
// valuation metric.

#include <cstdio>

#include "arithfn/series.hpp"
#include "arithfn/valuation.hpp"

using namespace arithfn;

int main() {
    auto m = FreeFinite::make(2);
    auto window = std::static_pointer_cast<const FreeFinite>(m)->all_primes();
    auto k = rationals();
    const std::uint32_t D = 4;

    ArithFn mu = ArithFn::moebius(m, k);
    ArithFn u = ArithFn::unit_u(m, k);

    TruncatedSeries Mu = phi(mu, window, D);
    TruncatedSeries U = phi(u, window, D);
    std::printf("series of mu:      %s\n", Mu.str().c_str());
    std::printf("series of u:       %s\n", U.str().c_str());
    std::printf("their product:     %s\n", (Mu * U).str().c_str());

    // The metric: d(f, g) = (1/2)^v(f - g).  u agrees with e only at level 0.
    ArithFn e = ArithFn::identity_e(m, k);
    std::printf("\nv(u - e) = %u, so d(u, e) = %s\n",
                *valuation(sub(u, e), window, D).value,
                distance(u, e, window, D).get_str().c_str());

    // Partial sums of the divisor count in graded order close in on it.
    // (The free monoid carries no norm, so the norm-based functions stay out.)
    ArithFn f = ArithFn::divisor_count(m, k);
    auto universe = enumerate_universe(m, window, D);
    std::printf("\npartial sums of d on a %zu-element universe:\n", universe.size());
    for (std::size_t t : {std::size_t{1}, std::size_t{3}, std::size_t{6}, std::size_t{10},
                          universe.size()}) {
        ArithFn ft = partial_sum(f, window, t);
        auto rep = valuation(sub(f, ft), window, D);
        if (rep.value)
            std::printf("  t = %2zu   v(f - f_t) = %u   d = %s\n", t, *rep.value,
                        distance(f, ft, window, D).get_str().c_str());
        else
            std::printf("  t = %2zu   f - f_t has no support up to depth %u\n", t, D);
    }
    return 0;
}
