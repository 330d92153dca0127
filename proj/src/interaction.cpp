#include "sc/interaction.hpp"

#include <cmath>
#include <sstream>

namespace sc {

namespace {

[[noreturn]] void throw_coincident(std::size_t i, std::size_t j, const char* where) {
    std::ostringstream os;
    os << where << ": alive particles " << i << " and " << j << " coincide exactly";
    throw std::invalid_argument(os.str());
}

}  // namespace

Vec2 ForceField::sum_alive(const Configuration& config) const {
    Vec2 s{};
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (config.alive[i]) s += values[i];
    }
    return s;
}

ForceField drift(const Configuration& config, const SignVector& signs, double gamma) {
    const std::size_t n = config.size();
    ForceField field;
    field.values.assign(n, Vec2{});
    for (std::size_t i = 0; i < n; ++i) {
        if (!config.alive[i]) continue;
        for (std::size_t j = i + 1; j < n; ++j) {
            if (!config.alive[j]) continue;
            Vec2 d = config.positions[i] - config.positions[j];
            if (d.norm2() == 0.0) throw_coincident(i, j, "drift");
            // Pair term is antisymmetric by construction; accumulate once.
            Vec2 fij = (gamma * signs[i] * signs[j]) * kernel(d);
            field.values[i] += fij;
            field.values[j] -= fij;
        }
    }
    return field;
}

double energy(const Configuration& config, const SignVector& signs, double gamma) {
    const std::size_t n = config.size();
    double h = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (!config.alive[i]) continue;
        for (std::size_t j = i + 1; j < n; ++j) {
            if (!config.alive[j]) continue;
            double d2 = distance2(config.positions[i], config.positions[j]);
            if (d2 == 0.0) throw_coincident(i, j, "energy");
            // log|x| = log(|x|^2) / 2
            h -= 0.5 * gamma * signs[i] * signs[j] * std::log(d2);
        }
    }
    return h;
}

double radial_power(const Configuration& config, const SignVector& signs, double gamma) {
    ForceField f = drift(config, signs, gamma);
    double s = 0.0;
    for (std::size_t i = 0; i < config.size(); ++i) {
        if (config.alive[i]) s += config.positions[i].dot(f.values[i]);
    }
    return s;
}

}  // namespace sc
