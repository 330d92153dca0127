#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "sc/core.hpp"

namespace sc {

enum class OdeTermination { reached_t_end, collision_detected, step_underflow };

struct OdeCollision {
    double time{0.0};
    std::vector<std::size_t> indices;  // >= 2 indices, mutually within eps_coll
    Vec2 site;                         // local mean of the colliding cluster
};

struct OdeRunResult {
    std::vector<std::pair<double, Configuration>> samples;  // strictly increasing times
    OdeTermination terminated{OdeTermination::reached_t_end};
    std::optional<OdeCollision> collision;
};

/// Deterministic integration of dx^i/dt = gamma sum_j b^i b^j f(x^i - x^j)
/// by classical RK4 with the adaptive step dt = min(dt_max, step_factor *
/// d_min^2), d_min the minimal alive pairwise distance. Stops at the first
/// collision (a proximity-graph cluster of >= 2 particles with diameter
/// below eps_coll), at t_end, or when the step law underflows 1e-14. The
/// run does not continue past a collision: there is no canonical way to do so.
OdeRunResult run_ode(const SimParams& params);

struct ConservationReport {
    double max_mean_drift{0.0};        // max over samples of |M(x(t)) - M(x0)|
    double dispersion_slope{0.0};      // gamma ((sum b)^2 - N)
    double initial_dispersion{0.0};
    double max_affine_abs_dev{0.0};    // max |R(x(t)) - (R0 + slope t)|
    double max_affine_rel_dev{0.0};    // same, relative, over samples with target > rel_floor
};

/// Conservation diagnostics for a finished run: the mean must stay put and
/// the dispersion must follow its affine law.
ConservationReport conservation_report(const OdeRunResult& result, const SimParams& params,
                                       double rel_floor = 0.0);

}  // namespace sc
