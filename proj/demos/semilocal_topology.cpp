// Builds the prime spectrum of Z localized away from all but three primes,
// prints its specialization poset as DOT, and tabulates the stalks.

#include <cstdio>

#include "arithfn/space.hpp"

using namespace arithfn;

int main() {
    auto z = IntegerDomain::make();
    std::vector<PrimeId> kept;
    for (auto label : {"2", "3", "5"}) kept.push_back(*z->find_prime_by_label(label));
    auto dom = LocalizedDomain::make(z, std::move(kept));

    FiniteSpace space(dom);
    auto dim = space.dimension();
    std::printf("%s: %u points, dimension %zu (chain %s)\n",
                dom->signature().c_str(), space.point_count(), dim.dimension,
                dim.chain_verified ? "verified" : "unverified");

    auto census = space.closed_set_census();
    std::printf("closed sets: %zu (%s)\n\n", census.via_generators.size(),
                census.agree() ? "both enumeration routes agree" : "routes DISAGREE");

    std::printf("%s\n", space.to_dot().c_str());

    std::printf("stalks:\n");
    for (FiniteSpace::PrimeMask zp = 0; zp < space.point_count(); ++zp)
        std::printf("  %-10s ~ %s\n", space.point_label(zp).c_str(),
                    space.stalk_at(zp).str().c_str());
    return 0;
}
