#pragma once

#include <vector>

#include "sc/core.hpp"

namespace sc {

/// One force vector per particle; zero for dead particles. The alive entries
/// sum to zero (exactly in exact arithmetic, ~1e-15 scale in doubles).
struct ForceField {
    std::vector<Vec2> values;

    Vec2 sum_alive(const Configuration& config) const;
};

/// The Coulomb kernel z / |z|^2, with kernel(0) = 0 exactly so that
/// self-interaction terms drop out.
inline Vec2 kernel(Vec2 z) {
    double n2 = z.norm2();
    if (n2 == 0.0) return {0.0, 0.0};
    return z / n2;
}

/// F^i = gamma * sum_j b^i b^j kernel(x^i - x^j) over alive j, zero for dead i.
/// Exactly coincident alive particles are an error here: the kernel's zero
/// convention would silently drop the pair instead of reporting it.
ForceField drift(const Configuration& config, const SignVector& signs, double gamma);

/// Kirchhoff-Onsager energy -gamma * sum_{i<j alive} b^i b^j log|x^i - x^j|.
double energy(const Configuration& config, const SignVector& signs, double gamma);

/// y . F(y) by the direct double sum. Independent of the positions:
/// equals gamma/2 * ((sum of alive charges)^2 - N_alive).
double radial_power(const Configuration& config, const SignVector& signs, double gamma);

}  // namespace sc
