#include "sc/engine_sde.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "sc/interaction.hpp"
#include "sc/observables.hpp"

namespace sc {

namespace {

struct PairDistances {
    double d_min = std::numeric_limits<double>::infinity();
    double d_opp = std::numeric_limits<double>::infinity();
};

PairDistances alive_pair_distances(const Configuration& config, const SignVector& signs) {
    PairDistances out;
    auto idx = config.alive_indices();
    for (std::size_t a = 0; a < idx.size(); ++a) {
        for (std::size_t b = a + 1; b < idx.size(); ++b) {
            double d = distance(config.positions[idx[a]], config.positions[idx[b]]);
            out.d_min = std::min(out.d_min, d);
            if (signs[idx[a]] != signs[idx[b]]) out.d_opp = std::min(out.d_opp, d);
        }
    }
    return out;
}

bool sign_pure(const Configuration& config, const SignVector& signs) {
    auto idx = config.alive_indices();
    for (std::size_t i : idx) {
        if (signs[i] != signs[idx.front()]) return false;
    }
    return true;  // vacuously true when nothing is alive
}

}  // namespace

Configuration step(const Configuration& config, const SignVector& signs, double gamma, double dt,
                   std::span<const Vec2> noise) {
    if (!(dt > 0.0)) throw std::invalid_argument("step: dt must be positive");
    if (noise.size() != config.size()) {
        throw std::invalid_argument("step: need one noise vector per particle");
    }
    ForceField f = drift(config, signs, gamma);
    Configuration out = config;
    const double root_dt = std::sqrt(dt);
    for (std::size_t i = 0; i < config.size(); ++i) {
        if (!config.alive[i]) continue;
        out.positions[i] += root_dt * noise[i] + dt * f.values[i];
    }
    return out;
}

RemovalOutcome detect_and_remove(const Configuration& config, const SignVector& signs,
                                 double eps_coll, double time) {
    RemovalOutcome out;
    out.config = config;
    if (config.alive_count() < 2) return out;

    CollisionEvent event;
    event.time = time;

    Partition parts = associated_partition(config, eps_coll);
    for (const auto& block : parts.blocks) {
        if (block.size() < 2) continue;

        std::vector<std::size_t> members = block;
        bool removed_any = false;
        while (true) {
            // Closest opposite-sign pair still in the block.
            double best = std::numeric_limits<double>::infinity();
            std::size_t bi = 0, bj = 0;
            bool found = false;
            for (std::size_t a = 0; a < members.size(); ++a) {
                for (std::size_t b = a + 1; b < members.size(); ++b) {
                    if (signs[members[a]] == signs[members[b]]) continue;
                    double d = distance(config.positions[members[a]], config.positions[members[b]]);
                    if (d < best) {
                        best = d;
                        bi = members[a];
                        bj = members[b];
                        found = true;
                    }
                }
            }
            if (!found) break;  // block is sign-constant now

            event.pairs.emplace_back(bi, bj);
            event.sites.push_back(0.5 * (config.positions[bi] + config.positions[bj]));
            out.config.alive[bi] = false;
            out.config.alive[bj] = false;
            members.erase(std::remove_if(members.begin(), members.end(),
                                         [&](std::size_t m) { return m == bi || m == bj; }),
                          members.end());
            removed_any = true;
        }
        if (!removed_any && block.size() >= 2) ++out.same_sign_tight_blocks;
    }

    if (!event.pairs.empty()) {
        // Clearance: nearest survivor of the event, measured from each site.
        for (std::size_t p = 0; p < event.pairs.size(); ++p) {
            double nearest = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < config.size(); ++i) {
                if (!config.alive[i] || !out.config.alive[i]) continue;
                nearest = std::min(nearest, distance(config.positions[i], event.sites[p]));
            }
            out.clearances.push_back(nearest);
        }
        out.event = std::move(event);
    }
    return out;
}

SdeRunResult run_sde(const SimParams& params, const SdeRunOptions& options) {
    validate_or_throw(params);
    if (!std::is_sorted(options.extra_sample_times.begin(), options.extra_sample_times.end())) {
        throw std::invalid_argument("run_sde: extra_sample_times must be ascending");
    }

    SdeRunResult result;
    Configuration config = params.x0;
    double t = 0.0;
    std::mt19937_64 rng(params.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<Vec2> noise(config.size());
    std::size_t next_checkpoint = 0;

    result.samples.emplace_back(t, config);

    auto exhausted = [&]() {
        return options.stop_when_single_sign && sign_pure(config, params.signs);
    };

    if (exhausted()) {
        result.terminated = SdeTermination::all_same_sign_remaining;
        result.final = config;
        return result;
    }

    while (true) {
        if (t >= params.t_end) {
            result.terminated = SdeTermination::reached_t_end;
            break;
        }

        PairDistances dist = alive_pair_distances(config, params.signs);
        double dt = params.dt_max;
        dt = std::min(dt, params.step_factor * dist.d_opp * dist.d_opp);
        dt = std::min(dt, params.step_factor * dist.d_min * dist.d_min);
        if (dt < kDtFloor) {
            result.terminated = SdeTermination::step_underflow;
            break;
        }
        double landing = t + dt;  // land exactly on clamp targets, no ulp drift
        if (landing >= params.t_end) {
            landing = params.t_end;
            dt = landing - t;
        }
        bool at_checkpoint = false;
        while (next_checkpoint < options.extra_sample_times.size() &&
               options.extra_sample_times[next_checkpoint] <= t) {
            ++next_checkpoint;  // checkpoints at or before the current time are moot
        }
        if (next_checkpoint < options.extra_sample_times.size()) {
            double target = options.extra_sample_times[next_checkpoint];
            if (target <= landing) {
                landing = target;
                dt = landing - t;
                at_checkpoint = true;
            }
        }

        // Fixed stream layout: one 2d normal per particle slot, every step.
        for (std::size_t i = 0; i < config.size(); ++i) {
            noise[i].x = gauss(rng);
            noise[i].y = gauss(rng);
        }

        config = step(config, params.signs, params.gamma, dt, noise);
        t = landing;
        ++result.steps;

        RemovalOutcome removal = detect_and_remove(config, params.signs, params.eps_coll, t);
        result.same_sign_tight_warnings += removal.same_sign_tight_blocks;
        config = std::move(removal.config);
        if (removal.event) {
            result.events.push_back(std::move(*removal.event));
            result.event_clearances.insert(result.event_clearances.end(),
                                           removal.clearances.begin(), removal.clearances.end());
        }

        if (at_checkpoint) {
            result.samples.emplace_back(t, config);
            ++next_checkpoint;
        } else if (result.steps % params.record_stride == 0) {
            result.samples.emplace_back(t, config);
        }

        if (removal.event && exhausted()) {
            result.terminated = SdeTermination::all_same_sign_remaining;
            break;
        }
    }

    if (result.samples.back().first < t) result.samples.emplace_back(t, config);
    result.final = config;
    return result;
}

}  // namespace sc
