#include <algorithm>
#include <bit>
#include <random>
#include <set>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "arithfn/space.hpp"

using namespace arithfn;

namespace {

using PrimeMask = FiniteSpace::PrimeMask;
using PointSet = FiniteSpace::PointSet;

DomainPtr zloc(const std::vector<int>& ps) {
    auto z = IntegerDomain::make();
    std::vector<PrimeId> ids;
    for (int p : ps) ids.push_back(z->prime_id_of(p));
    return LocalizedDomain::make(z, ids);
}

const std::vector<std::vector<int>> kPrimeSets = {{}, {2}, {2, 3}, {2, 3, 5}};

DomainElement zi(long n) { return mpz_class(n); }

// Oracle: closed sets of the n-point-per-prime model are the up-closed point
// families; count them by direct recursion over inclusion.
std::size_t up_closed_count_oracle(std::size_t n) {
    std::uint32_t points = 1u << n;
    std::size_t count = 0;
    for (std::uint64_t fam = 0; fam < (std::uint64_t{1} << points); ++fam) {
        bool up = true;
        for (std::uint32_t z = 0; z < points && up; ++z)
            if (fam >> z & 1)
                for (std::uint32_t w = 0; w < points; ++w)
                    if ((w & z) == z && !(fam >> w & 1)) {
                        up = false;
                        break;
                    }
        if (up) ++count;
    }
    return count;
}

}  // namespace

TEST_CASE("points normalize and compare by their zero sets") {
    auto dom = zloc({2, 3});
    auto m = dom->ideal_monoid();

    ZeroSetPoint a = ZeroSetPoint::from_zeros(m, {1, 0, 1});
    REQUIRE(a.listed == std::vector<PrimeId>{0, 1});
    REQUIRE(a.is_zero_at(0));
    REQUIRE(a.str() == "{2,3}");

    // over finitely many primes the complement form folds away
    ZeroSetPoint b = ZeroSetPoint::from_nonzeros(m, {0});
    REQUIRE(b.listed_are_zeros);
    REQUIRE(b.listed == std::vector<PrimeId>{1});
    REQUIRE(b == ZeroSetPoint::from_zeros(m, {1}));
    REQUIRE(ZeroSetPoint::identity_class(m) == ZeroSetPoint::from_zeros(m, {0, 1}));

    // over an infinite prime set the two forms describe different points
    auto quad = QuadDomain::make(-5);
    auto qm = quad->ideal_monoid();
    ZeroSetPoint fin = ZeroSetPoint::from_zeros(qm, {0});
    ZeroSetPoint cof = ZeroSetPoint::from_nonzeros(qm, {0});
    REQUIRE(fin != cof);
    REQUIRE(fin.is_zero_at(0));
    REQUIRE(!fin.is_zero_at(7));
    REQUIRE(!cof.is_zero_at(0));
    REQUIRE(cof.is_zero_at(7));
    REQUIRE(ZeroSetPoint::identity_class(qm).str() == "Max");
    REQUIRE(cof.str() == "Max\\{P2}");

    REQUIRE(fin != a);  // different monoids never compare equal
    REQUIRE_THROWS_AS(ZeroSetPoint::from_zeros(m, {7}), std::invalid_argument);
}

TEST_CASE("zero_set reads the prime-value table") {
    auto dom = QuadDomain::make(-5);
    auto m = dom->ideal_monoid();
    FieldId q = rationals();

    ArithFn ones = ArithFn::totally_mult(m, q, {{}, Scalar::one(q)}, "ones");
    REQUIRE(zero_set(ones) == ZeroSetPoint::from_zeros(m, {}));

    ArithFn point_mass = ArithFn::totally_mult(m, q, {{}, Scalar::zero(q)}, "unit-only");
    REQUIRE(zero_set(point_mass) == ZeroSetPoint::identity_class(m));

    TotallyMultData data{{{1, Scalar::zero(q)}, {2, Scalar::integer(5)}}, Scalar::one(q)};
    ArithFn f = ArithFn::totally_mult(m, q, data, "f");
    REQUIRE(zero_set(f) == ZeroSetPoint::from_zeros(m, {1}));

    TotallyMultData flipped{{{0, Scalar::one(q)}, {3, Scalar::zero(q)}}, Scalar::zero(q)};
    REQUIRE(zero_set(ArithFn::totally_mult(m, q, flipped)) ==
            ZeroSetPoint::from_nonzeros(m, {0}));

    REQUIRE_THROWS_AS(zero_set(ArithFn::moebius(m, q)), std::invalid_argument);
}

TEST_CASE("zero loci from generators") {
    auto dom = zloc({2, 3, 5});
    FiniteSpace space(dom);

    // no generators: everything; a unit: nothing; zero: an error
    REQUIRE(space.points_of(v_of(dom, {})) == space.all_points());
    REQUIRE(space.points_of(v_of(dom, {zi(1)})) == 0);
    REQUIRE(space.points_of(v_of(dom, {zi(7)})) == 0);
    REQUIRE_THROWS_AS(v_of(dom, {zi(0)}), std::domain_error);

    // V(6) keeps exactly the points vanishing at (2) or (3)
    PointSet v6 = space.points_of(v_of(dom, {zi(6)}));
    for (PrimeMask z = 0; z < space.point_count(); ++z)
        REQUIRE(bool(v6 >> z & 1) == ((z & 0b011) != 0));

    // the identity class lies in every nonempty closed set
    ZeroSetPoint top = ZeroSetPoint::identity_class(dom->ideal_monoid());
    REQUIRE(v_of(dom, {zi(6)}).contains(top));
    REQUIRE(v_of(dom, {zi(2), zi(15)}).contains(top));

    // mismatched domain is rejected
    FiniteSpace other(zloc({2, 3}));
    REQUIRE_THROWS_AS(other.points_of(v_of(dom, {zi(6)})), std::invalid_argument);
}

TEST_CASE("union and intersection laws on a four-element pool") {
    auto dom = zloc({2, 3, 5});
    FiniteSpace space(dom);
    std::vector<DomainElement> pool{zi(2), zi(6), zi(15), zi(7)};  // supports {2},{2,3},{3,5},{}

    auto subset = [&](unsigned bits) {
        std::vector<DomainElement> out;
        for (unsigned i = 0; i < pool.size(); ++i)
            if (bits >> i & 1) out.push_back(pool[i]);
        return out;
    };
    auto products = [&](const std::vector<DomainElement>& s, const std::vector<DomainElement>& t) {
        std::vector<DomainElement> out;
        for (const auto& a : s)
            for (const auto& b : t) out.push_back(dom->mul_elements(a, b));
        return out;
    };

    for (unsigned sb = 0; sb < 16; ++sb)
        for (unsigned tb = 0; tb < 16; ++tb) {
            auto s = subset(sb), t = subset(tb);
            ClosedSetRepr vs = v_of(dom, s), vt = v_of(dom, t);
            // V(S) union V(T) = V(ST), both via supports and via actual products
            PointSet lhs = space.points_of(vs) | space.points_of(vt);
            if (!s.empty() && !t.empty()) {
                REQUIRE(lhs == space.points_of(v_of(dom, products(s, t))));
                REQUIRE(lhs == space.points_of(closed_union(vs, vt)));
            }
            // intersections pool the generators
            std::vector<DomainElement> both = s;
            both.insert(both.end(), t.begin(), t.end());
            REQUIRE((space.points_of(vs) & space.points_of(vt)) ==
                    space.points_of(v_of(dom, both)));
            REQUIRE((space.points_of(vs) & space.points_of(vt)) ==
                    space.points_of(closed_intersection(vs, vt)));
        }
}

TEST_CASE("closure agrees with upward closure everywhere") {
    for (std::size_t n = 1; n <= 3; ++n) {
        FiniteSpace space(zloc(kPrimeSets[n]));
        REQUIRE(space.specialization_is_reverse_inclusion());
        REQUIRE(space.closure(0) == 0);
        for (PointSet y = 0; y < (PointSet{1} << space.point_count()); ++y)
            REQUIRE(space.closure(y) == space.up_closure(y));
    }
}

TEST_CASE("the operators V and I are mutually idempotent") {
    FiniteSpace space(zloc({2, 3}));
    // V I V = V over all support families
    for (std::uint32_t fam = 0; fam < 16; ++fam) {
        std::vector<PrimeMask> supports;
        for (PrimeMask s = 0; s < 4; ++s)
            if (fam >> s & 1) supports.push_back(s);
        PointSet v = space.v_of_supports(supports);
        REQUIRE(space.v_of_supports(space.ideal_of(v)) == v);
    }
    // I V I = I over all point families
    for (PointSet y = 0; y < 16; ++y) {
        auto i = space.ideal_of(y);
        REQUIRE(space.ideal_of(space.v_of_supports(i)) == i);
    }
}

TEST_CASE("closed-set lattice by two routes") {
    const std::size_t expected[] = {0, 3, 6, 20};
    for (std::size_t n = 1; n <= 3; ++n) {
        FiniteSpace space(zloc(kPrimeSets[n]));
        auto census = space.closed_set_census();
        REQUIRE(census.via_generators.size() == expected[n]);
        REQUIRE(census.via_up_sets.size() == up_closed_count_oracle(n));
        REQUIRE(census.agree());

        // every member really is closed, and closure fixes nothing else
        for (PointSet c : census.via_generators) REQUIRE(space.is_closed(c));
        std::set<PointSet> lattice(census.via_generators.begin(), census.via_generators.end());
        for (PointSet y = 0; y < (PointSet{1} << space.point_count()); ++y)
            REQUIRE(space.is_closed(y) == (lattice.count(y) > 0));
    }
}

TEST_CASE("irreducible closed sets are the principal up-sets") {
    FiniteSpace space(zloc({2, 3, 5}));
    std::size_t irreducible = 0;
    for (PointSet c : space.closed_sets()) {
        bool irr = space.is_irreducible(c);
        REQUIRE(irr == space.ideal_is_prime(c));  // two criteria, one verdict
        if (irr) {
            ++irreducible;
            REQUIRE(c == space.up_closure(c & (~c + 1)));  // generated by its lowest point
        }
    }
    REQUIRE(irreducible == space.point_count());
    REQUIRE(space.is_irreducible(space.all_points()));
    REQUIRE(!space.is_irreducible(0));
    // V(6) = V(2) union V(3) is reducible
    REQUIRE(!space.is_irreducible(space.points_of(v_of(space.domain(), {zi(6)}))));
}

TEST_CASE("dimension equals the number of maximal ideals") {
    for (std::size_t n = 1; n <= 3; ++n) {
        FiniteSpace space(zloc(kPrimeSets[n]));
        auto rep = space.dimension();
        REQUIRE(rep.dimension == n);
        REQUIRE(rep.chain_verified);
        REQUIRE(rep.chain.size() == n + 1);
        for (std::size_t m = 0; m < rep.chain.size(); ++m) {
            REQUIRE(space.is_irreducible(rep.chain[m]));
            if (m > 0) {
                REQUIRE(rep.chain[m] != rep.chain[m - 1]);
                REQUIRE((rep.chain[m] & rep.chain[m - 1]) == rep.chain[m]);
            }
        }
        REQUIRE(rep.chain.front() == space.all_points());
        REQUIRE(rep.chain.back() == PointSet{1} << space.identity_point());
    }
}

TEST_CASE("the discrete valuation case is a two-point chain") {
    FiniteSpace space(zloc({3}));
    REQUIRE(space.point_count() == 2);
    REQUIRE(space.closure(PointSet{1} << space.generic_point()) == space.all_points());
    REQUIRE(space.closed_sets() == std::vector<PointSet>{0b00, 0b10, 0b11});
    REQUIRE(space.dimension().dimension == 1);
    REQUIRE(space.closed_point_check());
}

TEST_CASE("sections invert exactly the support") {
    auto dom = zloc({2, 3, 5});
    FiniteSpace space(dom);

    auto surviving_of = [&](long a) { return space.sections_on(zi(a)).surviving; };
    REQUIRE(space.sections_on(zi(7)).kind == StalkKind::WholeRing);
    REQUIRE(surviving_of(7) == std::vector<PrimeId>{0, 1, 2});
    REQUIRE(space.sections_on(zi(2)).kind == StalkKind::SemiLocalPID);
    REQUIRE(surviving_of(2) == std::vector<PrimeId>{1, 2});
    REQUIRE(space.sections_on(zi(6)).kind == StalkKind::LocalRing);
    REQUIRE(surviving_of(6) == std::vector<PrimeId>{2});
    REQUIRE(space.sections_on(zi(30)).kind == StalkKind::FractionField);
    REQUIRE(surviving_of(30).empty());
    REQUIRE(space.sections_on(zi(8)).surviving == surviving_of(2));  // support, not exponents

    // the four stalk shapes, one at every point, classified by the zero count
    for (PrimeMask z = 0; z < space.point_count(); ++z) {
        auto stalk = space.stalk_at(z);
        REQUIRE(stalk.surviving.size() == std::size_t(std::popcount(z)));
        switch (std::popcount(z)) {
            case 0: REQUIRE(stalk.kind == StalkKind::FractionField); break;
            case 1: REQUIRE(stalk.kind == StalkKind::LocalRing); break;
            case 2: REQUIRE(stalk.kind == StalkKind::SemiLocalPID); break;
            default: REQUIRE(stalk.kind == StalkKind::WholeRing); break;
        }
    }
    REQUIRE(space.stalk_at(0).str() == "Frac(Loc(Z;2,3,5))");
    REQUIRE(space.stalk_at(0b011).str() == "Loc(Z;2,3,5) at {2,3}");
}

TEST_CASE("basic opens multiply like their elements") {
    auto dom = zloc({2, 3, 5});
    FiniteSpace space(dom);
    std::vector<DomainElement> pool;
    for (PrimeMask s = 0; s <= space.full_primes(); ++s)
        pool.push_back(space.element_with_support(s));
    pool.push_back(zi(4));
    pool.push_back(zi(36));
    REQUIRE(pool.size() == 10);

    for (const auto& a : pool)
        for (const auto& b : pool)
            REQUIRE(space.basic_open(dom->mul_elements(a, b)) ==
                    (space.basic_open(a) & space.basic_open(b)));
}

TEST_CASE("every basic open is the space of a localization") {
    auto dom = zloc({2, 3, 5});
    FiniteSpace space(dom);
    for (PrimeMask s = 0; s <= space.full_primes(); ++s) {
        DomainElement a = space.element_with_support(s);
        auto rep = space.open_immersion_check(a);
        INFO(rep.detail);
        REQUIRE(rep.ok);
        REQUIRE(rep.subspace_points == (std::size_t{1} << (3 - std::popcount(s))));
    }
    // a unit leaves the whole space, a full support just the generic point
    REQUIRE(space.open_immersion_check(zi(49)).subspace_points == 8);
    auto tiny = space.open_immersion_check(zi(60));
    REQUIRE(tiny.ok);
    REQUIRE(tiny.subspace_points == 1);

    // same story over a localized quadratic order
    auto quad = QuadDomain::make(-5);
    auto tset = LocalizedDomain::make(quad, {quad->splitting(2).ids[0],
                                             quad->splitting(3).ids[0]});
    FiniteSpace qspace(tset);
    for (PrimeMask s = 0; s <= qspace.full_primes(); ++s) {
        auto rep = qspace.open_immersion_check(qspace.element_with_support(s));
        INFO(rep.detail);
        REQUIRE(rep.ok);
    }
}

TEST_CASE("the prime spectrum embeds as the small zero sets") {
    for (std::size_t n = 1; n <= 3; ++n) {
        FiniteSpace space(zloc(kPrimeSets[n]));
        auto rep = space.spec_embedding();
        INFO(rep.detail);
        REQUIRE(rep.ok);
        REQUIRE(rep.table.size() == n + 1);
        REQUIRE(std::size_t(std::popcount(rep.image)) == n + 1);
        REQUIRE(rep.image_is_small_zero_sets);
        REQUIRE(rep.basis_preimages_ok);
        REQUIRE(rep.homeomorphic_onto_image);
    }

    // over Z at {2,3} the open D_1(6) pulls back to the zero ideal alone
    FiniteSpace space(zloc({2, 3}));
    REQUIRE(space.basic_open(zi(6)) == PointSet{1} << space.generic_point());
    auto rep = space.spec_embedding();
    REQUIRE(std::size_t(std::popcount(rep.image)) == 3);  // of the 4 points
}

TEST_CASE("separation and spectrality") {
    for (std::size_t n = 2; n <= 3; ++n) {
        FiniteSpace space(zloc(kPrimeSets[n]));
        auto rep = space.t0_and_spectral_report();
        INFO(rep.detail);
        REQUIRE(rep.t0);
        REQUIRE(rep.unique_generic_per_irreducible);
        REQUIRE(rep.basis_intersections_ok);
        REQUIRE(rep.basis_singleton_subcover);
        REQUIRE(rep.ok());
        std::string note;
        REQUIRE(space.closed_point_check(&note));
    }
}

TEST_CASE("covering relations and DOT output") {
    FiniteSpace space(zloc({2, 3, 5}));
    auto edges = space.covering_edges();
    REQUIRE(edges.size() == 12);  // n * 2^(n-1)
    for (auto& [from, to] : edges) REQUIRE(std::popcount(to) == std::popcount(from) + 1);

    std::string dot = space.to_dot();
    REQUIRE(dot.find("digraph specialization") != std::string::npos);
    REQUIRE(dot.find("(generic)") != std::string::npos);
    REQUIRE(dot.find("(closed point)") != std::string::npos);
    REQUIRE(dot.find("{2,3,5}") != std::string::npos);
    std::size_t arrows = 0;
    for (std::size_t at = dot.find("->"); at != std::string::npos; at = dot.find("->", at + 2))
        ++arrows;
    REQUIRE(arrows == 12);
}

TEST_CASE("induced maps of spaces") {
    auto z = IntegerDomain::make();

    SECTION("a further localization restricts the space") {
        auto src = zloc({2, 3, 5});
        auto dst = zloc({2, 3});
        auto rep = induced_morphism(DomainHom::localize(src, dst));
        INFO(rep.detail);
        REQUIRE(rep.ok());
        REQUIRE(rep.point_map.size() == 4);
        bool found = false;
        for (auto& [t, s] : rep.point_map)
            if (t == "{2,3}" && s == "{2,3}") found = true;
        REQUIRE(found);
    }

    SECTION("Z at (5) into the Gaussian order at the primes over 5") {
        auto gauss = QuadDomain::make(-1);
        auto five = gauss->splitting(5);
        REQUIRE(five.ids.size() == 2);
        auto src = zloc({5});
        auto dst = LocalizedDomain::make(gauss, five.ids);
        auto hom = DomainHom::localized_inclusion(src, dst);
        auto rep = induced_morphism(hom);
        INFO(rep.detail);
        REQUIRE(rep.ok());

        // the point vanishing at one prime over 5 contracts onto (5)
        std::string plus = "{" + gauss->prime_info(five.ids[0]).label + "}";
        bool found = false;
        for (auto& [t, s] : rep.point_map)
            if (t == plus) {
                REQUIRE(s == "{5}");
                found = true;
            }
        REQUIRE(found);
        // and 2+i really lies in that prime
        REQUIRE(gauss->prime_ideal(five.ids[0]).contains(QuadElem{2, 1}));
    }

    SECTION("Z at (3) into Z[sqrt(-5)] at both primes over 3") {
        auto quad = QuadDomain::make(-5);
        auto dst = LocalizedDomain::make(quad, quad->splitting(3).ids);
        auto rep = induced_morphism(DomainHom::localized_inclusion(zloc({3}), dst));
        INFO(rep.detail);
        REQUIRE(rep.ok());
        REQUIRE(rep.point_map.size() == 4);
    }

    SECTION("a map that fails to contract is rejected with its witness") {
        auto rep = induced_morphism(DomainHom::localize(zloc({2}), zloc({3})));
        REQUIRE(!rep.quasi_integral);
        REQUIRE(rep.witness == "3");
        REQUIRE(!rep.ok());
        REQUIRE(rep.detail.find("rejected") != std::string::npos);
    }

    SECTION("spaces need semi-local domains") {
        REQUIRE_THROWS_AS(induced_morphism(DomainHom::identity(z)), std::invalid_argument);
    }
}

TEST_CASE("the witness battery over Z[sqrt(-5)] passes") {
    auto rep = witness_check_sqrtm5();
    for (const auto& f : rep.failures) INFO(f);
    REQUIRE(rep.ok);
    REQUIRE(rep.failures.empty());
    REQUIRE(rep.steps.size() == 8);

    // independent cross-checks of the two pivotal facts
    for (long x = -2; x <= 2; ++x)  // no element of norm 3: x^2 + 5 y^2 = 3 is empty
        for (long y = -1; y <= 1; ++y) REQUIRE(x * x + 5 * y * y != 3);
    auto quad = QuadDomain::make(-5);
    auto sq = quad->factor_principal(QuadElem{2, -1});  // (2-w) is the "+" prime squared
    REQUIRE(sq == MonoidElement::prime_power(quad->ideal_monoid(),
                                             quad->splitting(3).ids[0], 2));
}

TEST_CASE("space construction guards") {
    REQUIRE_THROWS_AS(FiniteSpace(IntegerDomain::make()), std::invalid_argument);
    REQUIRE_THROWS_AS(FiniteSpace(QuadDomain::make(-5)), std::invalid_argument);

    FiniteSpace big(zloc({2, 3, 5, 7, 11}));  // fine pointwise, too big for the lattice
    REQUIRE(big.point_count() == 32);
    REQUIRE(big.specialization_is_reverse_inclusion());
    REQUIRE_THROWS_AS(big.closed_sets(), std::domain_error);
    REQUIRE_THROWS_AS(big.dimension(), std::domain_error);
}
