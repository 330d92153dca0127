#include "sc/engine_ode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sc/interaction.hpp"
#include "sc/observables.hpp"

namespace sc {

namespace {

double min_alive_distance(const Configuration& config) {
    auto idx = config.alive_indices();
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < idx.size(); ++a) {
        for (std::size_t b = a + 1; b < idx.size(); ++b) {
            best = std::min(best, distance(config.positions[idx[a]], config.positions[idx[b]]));
        }
    }
    return best;
}

double block_diameter(const Configuration& config, const std::vector<std::size_t>& block) {
    double diam = 0.0;
    for (std::size_t a = 0; a < block.size(); ++a) {
        for (std::size_t b = a + 1; b < block.size(); ++b) {
            diam = std::max(diam, distance(config.positions[block[a]], config.positions[block[b]]));
        }
    }
    return diam;
}

// A collision is a proximity cluster whose whole diameter dropped below
// eps_coll, so that every pairwise distance inside it is below threshold.
std::optional<OdeCollision> detect_collision(const Configuration& config, double eps_coll,
                                             double time) {
    Partition parts = associated_partition(config, eps_coll);
    const std::vector<std::size_t>* best_block = nullptr;
    double best_diam = std::numeric_limits<double>::infinity();
    for (const auto& block : parts.blocks) {
        if (block.size() < 2) continue;
        double diam = block_diameter(config, block);
        if (diam < eps_coll && diam < best_diam) {
            best_diam = diam;
            best_block = &block;
        }
    }
    if (!best_block) return std::nullopt;
    OdeCollision c;
    c.time = time;
    c.indices = *best_block;
    c.site = local_mean(config, c.indices);
    return c;
}

void rk4_step(Configuration& config, const SignVector& signs, double gamma, double dt) {
    const std::size_t n = config.size();
    Configuration stage = config;

    ForceField k1 = drift(config, signs, gamma);
    for (std::size_t i = 0; i < n; ++i) {
        if (config.alive[i]) stage.positions[i] = config.positions[i] + (0.5 * dt) * k1.values[i];
    }
    ForceField k2 = drift(stage, signs, gamma);
    for (std::size_t i = 0; i < n; ++i) {
        if (config.alive[i]) stage.positions[i] = config.positions[i] + (0.5 * dt) * k2.values[i];
    }
    ForceField k3 = drift(stage, signs, gamma);
    for (std::size_t i = 0; i < n; ++i) {
        if (config.alive[i]) stage.positions[i] = config.positions[i] + dt * k3.values[i];
    }
    ForceField k4 = drift(stage, signs, gamma);
    for (std::size_t i = 0; i < n; ++i) {
        if (!config.alive[i]) continue;
        Vec2 incr = k1.values[i] + 2.0 * k2.values[i] + 2.0 * k3.values[i] + k4.values[i];
        config.positions[i] += (dt / 6.0) * incr;
    }
}

}  // namespace

OdeRunResult run_ode(const SimParams& params) {
    validate_or_throw(params);

    OdeRunResult result;
    Configuration config = params.x0;
    double t = 0.0;
    std::uint64_t step_count = 0;
    result.samples.emplace_back(t, config);

    const bool interacting = config.alive_count() >= 2;

    while (true) {
        double d_min = interacting ? min_alive_distance(config)
                                   : std::numeric_limits<double>::infinity();
        // A cluster of diameter < eps_coll implies d_min < eps_coll, so the
        // partition is only worth building once a pair is that close.
        if (d_min < params.eps_coll) {
            if (auto coll = detect_collision(config, params.eps_coll, t)) {
                result.terminated = OdeTermination::collision_detected;
                result.collision = std::move(coll);
                break;
            }
        }
        if (t >= params.t_end) {
            result.terminated = OdeTermination::reached_t_end;
            break;
        }

        double dt = std::min(params.dt_max, params.step_factor * d_min * d_min);
        if (dt < kDtFloor) {
            result.terminated = OdeTermination::step_underflow;
            break;
        }
        double landing = t + dt;
        if (landing >= params.t_end) {  // land exactly on t_end, no ulp drift
            landing = params.t_end;
            dt = landing - t;
        }

        rk4_step(config, params.signs, params.gamma, dt);
        t = landing;
        ++step_count;

        if (step_count % params.record_stride == 0) result.samples.emplace_back(t, config);
    }

    if (result.samples.back().first < t) result.samples.emplace_back(t, config);
    return result;
}

ConservationReport conservation_report(const OdeRunResult& result, const SimParams& params,
                                       double rel_floor) {
    if (result.samples.size() < 2) {
        throw std::invalid_argument("conservation_report: need at least 2 samples");
    }
    ConservationReport rep;

    const Configuration& x0 = result.samples.front().second;
    auto idx = x0.alive_indices();
    Vec2 m0 = local_mean(x0, idx);
    rep.initial_dispersion = local_dispersion(x0, idx);
    double q = static_cast<double>(params.signs.net_charge());
    double n = static_cast<double>(idx.size());
    rep.dispersion_slope = params.gamma * (q * q - n);

    for (const auto& [t, cfg] : result.samples) {
        rep.max_mean_drift = std::max(rep.max_mean_drift, (local_mean(cfg, idx) - m0).norm());
        double target = rep.initial_dispersion + rep.dispersion_slope * t;
        double dev = std::abs(local_dispersion(cfg, idx) - target);
        rep.max_affine_abs_dev = std::max(rep.max_affine_abs_dev, dev);
        if (target > rel_floor && target > 0.0) {
            rep.max_affine_rel_dev = std::max(rep.max_affine_rel_dev, dev / target);
        }
    }
    return rep;
}

}  // namespace sc
