// Prints a table of the classical arithmetic functions and checks two
// convolution identities on the spot: mu * u = e and phi * u = N.

#include <cstdio>

#include "arithfn/dirichlet.hpp"

using namespace arithfn;

int main() {
    auto m = PositiveIntegers::make();
    auto k = rationals();

    ArithFn mu = ArithFn::moebius(m, k);
    ArithFn u = ArithFn::unit_u(m, k);
    ArithFn e = ArithFn::identity_e(m, k);
    ArithFn phi = ArithFn::euler_phi(m, k);
    ArithFn d = ArithFn::divisor_count(m, k);
    ArithFn s1 = ArithFn::sigma(m, k, 1);
    ArithFn N = ArithFn::ideal_norm(m, k);

    ArithFn mu_u = convolve(mu, u);
    ArithFn phi_u = convolve(phi, u);

    std::printf("%4s %6s %6s %6s %8s %10s %10s\n", "n", "mu", "phi", "d", "sigma_1",
                "(mu*u)(n)", "(phi*u)(n)");
    for (long n = 1; n <= 20; ++n) {
        auto a = m->element_of(n);
        std::printf("%4ld %6s %6s %6s %8s %10s %10s\n", n, mu(a).str().c_str(),
                    phi(a).str().c_str(), d(a).str().c_str(), s1(a).str().c_str(),
                    mu_u(a).str().c_str(), phi_u(a).str().c_str());
        if (mu_u(a) != e(a)) {
            std::printf("mu * u failed to be the convolution identity at %ld\n", n);
            return 1;
        }
        if (phi_u(a) != N(a)) {
            std::printf("phi * u failed to recover n at %ld\n", n);
            return 1;
        }
    }

    // Moebius inversion: g = f * u implies f = g * mu.
    ArithFn back = convolve(convolve(s1, u), mu);
    for (long n = 1; n <= 200; ++n) {
        auto a = m->element_of(n);
        if (back(a) != s1(a)) {
            std::printf("inversion round trip failed at %ld\n", n);
            return 1;
        }
    }
    std::printf("\nboth identities hold on the sampled range\n");
    return 0;
}
