// In Z[sqrt(-5)] the element 6 factors two inequivalent ways, 2 * 3 and
// (1+w)(1-w), yet the ideals underneath recombine into a single prime
// factorization.  This program walks through that repair.

#include <cstdio>

#include "arithfn/domain.hpp"

using namespace arithfn;

static void show(const char* text, const DomainPtr& dom) {
    auto m = dom->factor_principal(dom->parse_element(text));
    std::printf("  (%s)  =  %s\n", text, m.str().c_str());
}

int main() {
    auto dom = QuadDomain::make(-5);
    std::printf("principal ideals of %s:\n", dom->signature().c_str());
    show("2", dom);
    show("3", dom);
    show("1+w", dom);
    show("1-w", dom);
    show("6", dom);

    // The two element factorizations of 6 regroup the same four primes.
    auto six = dom->factor_principal(dom->parse_element("6"));
    auto lhs = dom->factor_principal(dom->parse_element("2")) *
               dom->factor_principal(dom->parse_element("3"));
    auto rhs = dom->factor_principal(dom->parse_element("1+w")) *
               dom->factor_principal(dom->parse_element("1-w"));
    if (!(lhs == six && rhs == six)) {
        std::printf("regrouping failed\n");
        return 1;
    }
    std::printf("both element factorizations regroup to the same ideal product\n\n");

    std::printf("splitting of the first rational primes:\n");
    for (long p : {2, 3, 5, 7, 11, 13}) {
        auto s = dom->splitting(p);
        const char* kind = s.split_kind == SplitKind::Split      ? "split"
                           : s.split_kind == SplitKind::Ramified ? "ramified"
                                                                 : "inert";
        std::printf("  %2ld  %-8s", p, kind);
        for (PrimeId id : s.ids)
            std::printf("  %s = %s", dom->prime_info(id).label.c_str(),
                        dom->prime_ideal(id).str().c_str());
        std::printf("\n");
    }
    return 0;
}
