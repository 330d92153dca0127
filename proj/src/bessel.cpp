#include "sc/bessel.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <random>
#include <stdexcept>

#include "parallel.hpp"
#include "sc/core.hpp"

namespace sc {

namespace {

// Single path state shared by all entry points. Only delta < 2 absorbs; for
// delta >= 2 a nonpositive candidate is clamped (the exact process stays
// positive, absorption there would be a discretization artifact).
struct Sqb0Walker {
    double delta;
    bool absorbing;
    double t{0.0};
    double value;
    std::optional<double> hit_zero_at;
    std::mt19937_64 rng;
    std::normal_distribution<double> gauss{0.0, 1.0};

    Sqb0Walker(double delta_, double r, std::uint64_t seed)
        : delta(delta_), absorbing(delta_ < 2.0), value(r), rng(seed) {
        if (r < 0.0) throw std::invalid_argument("simulate_sqb0: r must be nonnegative");
        if (absorbing && r == 0.0 && delta <= 0.0) {
            hit_zero_at = 0.0;
        }
    }

    bool frozen() const { return hit_zero_at.has_value(); }

    void step(double dt) {
        double xi = gauss(rng);  // drawn even when frozen, to keep the stream layout fixed
        if (frozen()) {
            t += dt;
            return;
        }
        double cand = value + delta * dt + 2.0 * std::sqrt(std::max(value, 0.0) * dt) * xi;
        if (cand <= 0.0) {
            if (absorbing) {
                // Linear interpolation of the crossing inside the step.
                double frac = (value > 0.0) ? value / (value - cand) : 0.0;
                hit_zero_at = t + frac * dt;
                value = 0.0;
            } else {
                value = 0.0;
            }
        } else {
            value = cand;
        }
        t += dt;
    }
};

}  // namespace

BesselResult simulate_sqb0(double delta, double r, double dt, double t_end, std::uint64_t seed) {
    if (!(dt > 0.0) || !(t_end > 0.0) || dt > t_end) {
        throw std::invalid_argument("simulate_sqb0: need 0 < dt <= t_end");
    }
    Sqb0Walker w(delta, r, seed);
    const auto n_steps = static_cast<std::size_t>(std::ceil(t_end / dt - 1e-9));

    BesselResult out;
    out.times.reserve(n_steps + 1);
    out.values.reserve(n_steps + 1);
    out.times.push_back(0.0);
    out.values.push_back(w.value);
    for (std::size_t k = 1; k <= n_steps; ++k) {
        double target = std::min(k * dt, t_end);
        w.step(target - w.t);
        out.times.push_back(target);
        out.values.push_back(w.value);
        w.t = target;  // avoid drift from repeated addition
    }
    out.hit_zero_at = w.hit_zero_at;
    return out;
}

HittingEstimate hitting_probability(double delta, double r, double t_end, double dt,
                                    std::size_t n_samples, std::uint64_t seed) {
    if (n_samples == 0) throw std::invalid_argument("hitting_probability: n_samples must be >= 1");
    if (!(dt > 0.0) || dt > t_end) {
        throw std::invalid_argument("hitting_probability: need 0 < dt <= t_end");
    }
    const auto n_steps = static_cast<std::size_t>(std::ceil(t_end / dt - 1e-9));
    // Paths are independent with derived seeds; a hit count is order-free.
    std::atomic<std::size_t> hits{0};
    detail::parallel_for_runs(n_samples, 0, [&](std::size_t i) {
        Sqb0Walker w(delta, r, derive_seed(seed, i));
        for (std::size_t k = 1; k <= n_steps && !w.frozen(); ++k) {
            w.step(std::min(k * dt, t_end) - w.t);
        }
        if (w.hit_zero_at && *w.hit_zero_at <= t_end) hits.fetch_add(1);
    });
    HittingEstimate est;
    est.n_samples = n_samples;
    est.probability = static_cast<double>(hits) / static_cast<double>(n_samples);
    est.standard_error = binomial_se(est.probability, n_samples);
    return est;
}

std::vector<std::vector<double>> sqb0_marginals(double delta, double r, double dt,
                                                std::span<const double> times,
                                                std::size_t n_samples, std::uint64_t seed) {
    if (times.empty()) throw std::invalid_argument("sqb0_marginals: empty time grid");
    if (!std::is_sorted(times.begin(), times.end()) || times.front() < 0.0) {
        throw std::invalid_argument("sqb0_marginals: times must be ascending and nonnegative");
    }
    std::vector<std::vector<double>> out(times.size(), std::vector<double>(n_samples));
    detail::parallel_for_runs(n_samples, 0, [&](std::size_t i) {
        Sqb0Walker w(delta, r, derive_seed(seed, i));
        for (std::size_t g = 0; g < times.size(); ++g) {
            while (w.t < times[g] - 1e-15) {
                w.step(std::min(dt, times[g] - w.t));
            }
            out[g][i] = w.value;
        }
    });
    return out;
}

std::vector<ScalingCheckPoint> scaling_check(double delta, double r, double alpha,
                                             std::span<const double> t_grid,
                                             std::size_t n_samples, std::uint64_t seed,
                                             double dt) {
    if (!(alpha > 0.0)) throw std::invalid_argument("scaling_check: alpha must be positive");

    // Arm A: SqB0(delta, r) observed at alpha * s, scaled down by alpha.
    std::vector<double> stretched(t_grid.size());
    for (std::size_t g = 0; g < t_grid.size(); ++g) stretched[g] = alpha * t_grid[g];
    auto arm_a = sqb0_marginals(delta, r, alpha * dt, stretched, n_samples, derive_seed(seed, 1));

    // Arm B: fresh SqB0(delta, r / alpha) observed at s.
    auto arm_b = sqb0_marginals(delta, r / alpha, dt, t_grid, n_samples, derive_seed(seed, 2));

    std::vector<ScalingCheckPoint> out(t_grid.size());
    for (std::size_t g = 0; g < t_grid.size(); ++g) {
        for (double& v : arm_a[g]) v /= alpha;
        KsResult ks = ks_two_sample(arm_a[g], arm_b[g]);
        out[g] = {t_grid[g], ks.statistic, ks.p_value};
    }
    return out;
}

double inverse_sqrt_time_integral(const BesselResult& path) {
    if (!path.hit_zero_at) {
        throw std::invalid_argument("inverse_sqrt_time_integral: path was not absorbed");
    }
    const double sigma = *path.hit_zero_at;
    double integral = 0.0;
    double prev_t = path.times.front();
    double prev_v = path.values.front();
    for (std::size_t k = 1; k < path.times.size(); ++k) {
        double t = path.times[k];
        double v = path.values[k];
        if (t >= sigma || v <= 0.0) break;
        integral += 0.5 * (t - prev_t) * (1.0 / std::sqrt(prev_v) + 1.0 / std::sqrt(v));
        prev_t = t;
        prev_v = v;
    }
    // Final cell: linear ramp from (prev_t, prev_v) down to (sigma, 0).
    if (prev_v > 0.0 && sigma > prev_t) integral += 2.0 * (sigma - prev_t) / std::sqrt(prev_v);
    return integral;
}

}  // namespace sc
