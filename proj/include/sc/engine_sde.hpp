#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "sc/core.hpp"

namespace sc {

enum class SdeTermination { reached_t_end, all_same_sign_remaining, step_underflow };

struct SdeRunResult {
    std::vector<std::pair<double, Configuration>> samples;
    std::vector<CollisionEvent> events;
    /// Distance from each removed pair's site to the nearest particle that
    /// was alive just before the event (other than the pair itself, and not
    /// counting particles removed in the same event). One entry per pair,
    /// flattened in event order; +inf when no such particle exists.
    std::vector<double> event_clearances;
    Configuration final;
    SdeTermination terminated{SdeTermination::reached_t_end};
    std::uint64_t steps{0};
    std::uint32_t same_sign_tight_warnings{0};
};

struct SdeRunOptions {
    /// Stop as soon as the alive particles all share one sign (or none are
    /// left). Collisions cannot happen past that point.
    bool stop_when_single_sign = false;
    /// Additional times at which a sample is recorded exactly; the step is
    /// shortened to land on them. Must be ascending, within (0, t_end].
    std::vector<double> extra_sample_times;
};

/// One Euler-Maruyama step: x^i += sqrt(dt) noise^i + dt F^i for alive i,
/// dead particles unchanged. `noise` must provide one standard 2d normal per
/// particle (dead slots included, they are ignored).
Configuration step(const Configuration& config, const SignVector& signs, double gamma, double dt,
                   std::span<const Vec2> noise);

struct RemovalOutcome {
    Configuration config;
    std::optional<CollisionEvent> event;
    std::vector<double> clearances;           // aligned with event->pairs
    std::uint32_t same_sign_tight_blocks{0};  // size->=2 same-sign blocks within eps_coll
};

/// The removal rule. Builds the proximity partition at threshold eps_coll;
/// inside every block, the closest opposite-sign pair is removed repeatedly
/// until the block is sign-constant. All pairs removed at one call form one
/// CollisionEvent (site = pair midpoint). Same-sign blocks are left alone:
/// the theory forbids same-sign collisions, so finite-dt proximity must not
/// fabricate one.
RemovalOutcome detect_and_remove(const Configuration& config, const SignVector& signs,
                                 double eps_coll, double time = 0.0);

/// Full trajectory of the signed Coulomb system with the removal rule.
/// Adaptive step dt = min(dt_max, step_factor * d_opp^2, step_factor *
/// d_min^2) with a 1e-14 underflow guard; fresh Brownian increments are drawn
/// for every particle slot each step (dead slots included and discarded), so
/// equal seeds give bit-identical runs regardless of removals.
SdeRunResult run_sde(const SimParams& params, const SdeRunOptions& options = {});

}  // namespace sc
