#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "sc/stats.hpp"

namespace sc {

/// One sampled path of a squared Bessel process stopped at 0.
struct BesselResult {
    std::vector<double> times;   // times[0] = 0
    std::vector<double> values;  // values[0] = r; all >= 0; 0 from absorption on
    std::optional<double> hit_zero_at;
};

/// Euler-Maruyama path of R_t = r + delta t + int 2 sqrt(R) dbeta on a uniform
/// grid of step dt up to t_end, with the diffusion coefficient truncated at 0.
///
/// Stopping at 0: for delta < 2 a nonpositive candidate absorbs the path (the
/// crossing time is linearly interpolated and the path is frozen at 0, first
/// order accurate). For delta >= 2 the exact process never reaches 0, so a
/// nonpositive candidate is a pure discretization artifact; the value is
/// clamped at 0 and the path continues. Starting at r = 0 with delta <= 0 is
/// absorbing immediately.
BesselResult simulate_sqb0(double delta, double r, double dt, double t_end, std::uint64_t seed);

struct HittingEstimate {
    double probability{0.0};
    double standard_error{0.0};
    std::size_t n_samples{0};
};

/// Monte Carlo fraction of paths absorbed by t_end, with binomial standard
/// error. Paths are independent, seeded with derive_seed(seed, i).
HittingEstimate hitting_probability(double delta, double r, double t_end, double dt,
                                    std::size_t n_samples, std::uint64_t seed);

struct ScalingCheckPoint {
    double time{0.0};
    double ks_statistic{0.0};
    double p_value{1.0};
};

/// Scale invariance check: per grid time s, compares marginal samples of
/// (1/alpha) R_{alpha s} for SqB0(delta, r) paths against fresh
/// SqB0(delta, r/alpha) samples at s, via the two-sample KS test.
std::vector<ScalingCheckPoint> scaling_check(double delta, double r, double alpha,
                                             std::span<const double> t_grid,
                                             std::size_t n_samples, std::uint64_t seed,
                                             double dt = 1e-3);

/// Trapezoidal value of int_0^sigma R_s^{-1/2} ds for an absorbed path. The
/// final cell (last positive sample to sigma) uses the closed form for a
/// linear ramp, 2 (sigma - a) / sqrt(R_a), which handles the sqrt singularity.
double inverse_sqrt_time_integral(const BesselResult& path);

/// Marginal values R_t at the requested times (ascending), one entry per
/// path; steps are shortened to land exactly on each requested time.
std::vector<std::vector<double>> sqb0_marginals(double delta, double r, double dt,
                                                std::span<const double> times,
                                                std::size_t n_samples, std::uint64_t seed);

}  // namespace sc
