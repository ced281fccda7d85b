#pragma once

// Graphons within a prescribed cut distance of a given one.

#include "generators.hpp"
#include "polyton/cutnorm.hpp"

namespace polyton::testing {

/// Splits every block of W in half and adds a signed checkerboard of height beta
/// on pairs with 0 < W < 1, a flat +beta on some empty pairs and -beta on some
/// full ones. beta is halved until ||U - W||_cut < bound holds exactly.
inline StepGraphon perturb_below(Rng& rng, const StepGraphon& w, const Rational& bound)
{
    const std::size_t b = w.size();
    std::vector<Rational> halves;
    for (std::size_t i = 0; i < b; ++i) halves.insert(halves.end(), 2, w.measure(i) / 2);
    const Partition p(halves);

    RationalMatrix shape(2 * b, 2 * b);
    for (std::size_t i = 0; i < b; ++i)
        for (std::size_t j = i; j < b; ++j) {
            const Rational& v = w.value(i, j);
            const bool flip = rng() % 2 == 0;
            for (std::size_t x = 0; x < 2; ++x)
                for (std::size_t y = 0; y < 2; ++y) {
                    int sign = 0;
                    if (sgn(v) > 0 && v < 1) sign = ((x == y) != flip) ? 1 : -1;
                    else if (sgn(v) == 0) sign = flip ? 1 : 0;
                    else sign = flip ? -1 : 0;
                    shape(2 * i + x, 2 * j + y) = sign;
                    shape(2 * j + y, 2 * i + x) = sign;
                }
        }

    Rational beta = 2 * bound;
    for (std::size_t i = 0; i < b; ++i)
        for (std::size_t j = 0; j < b; ++j)
            if (sgn(w.value(i, j)) > 0 && w.value(i, j) < 1)
                beta = std::min(beta, std::min(w.value(i, j), Rational(1 - w.value(i, j))));
    while (true) {
        RationalMatrix v(2 * b, 2 * b);
        for (std::size_t x = 0; x < 2 * b; ++x)
            for (std::size_t y = 0; y < 2 * b; ++y) v(x, y) = w.value(x / 2, y / 2) + beta * shape(x, y);
        StepGraphon u(p, v);
        if (cut_norm(StepKernel::from_graphon(u) - StepKernel::from_graphon(w)).value < bound) return u;
        beta /= 2;
    }
}

}  // namespace polyton::testing
