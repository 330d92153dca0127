#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sc/core.hpp"

namespace sc {

struct MomentCheck {
    std::string label;
    double t{0.0};
    double empirical{0.0};
    double target{0.0};
    double standard_error{0.0};
    bool passed{false};
};

struct KsCheck {
    std::string label;
    double statistic{0.0};
    double p_value{1.0};
    bool passed{false};
};

struct FlagCheck {
    std::string label;
    bool passed{false};
    double value{0.0};
    std::string detail;
};

/// Aggregated outcome of one verification suite. Deterministic function of
/// (params, n_runs, options): all randomness flows from params.seed.
struct EnsembleReport {
    std::string suite;
    std::size_t n_runs{0};
    std::size_t censored{0};
    std::map<int, std::size_t> event_count_histogram;   // events per run -> runs
    std::map<int, std::size_t> multiplicity_histogram;  // pairs per event -> events
    std::vector<MomentCheck> moment_checks;
    std::vector<KsCheck> ks_checks;
    std::vector<FlagCheck> flag_checks;
    bool pass{false};

    std::string to_json_string() const;  // stable key order
    std::string table() const;           // human-readable, one line per check
    std::size_t total_events() const;
};

struct VerifyOptions {
    std::size_t jobs{0};             // 0 = hardware concurrency
    double ks_threshold{1e-3};       // KS checks pass when p > this
    double moment_sigmas{3.0};       // moment checks pass within this many s.e.
    double censored_tolerance{0.05}; // max allowed censored fraction
    double clearance_factor{10.0};   // site clearance threshold, in eps_coll
    double clearance_quantile{0.99}; // fraction of events that must clear it
    std::optional<double> delta_target_override;  // dispersion-law target
    std::size_t bessel_n{100000};    // samples for Bessel cross-checks
    double bessel_dt{1e-4};
};

/// Theorem check: the number of removal events is exactly
/// m = (N - |net charge|)/2 and every event removes one opposite-sign pair.
/// Runs stop at sign exhaustion; runs still mixed at t_end count as censored.
EnsembleReport verify_collision_count(const SimParams& params, std::size_t n_runs,
                                      const VerifyOptions& options = {});

/// For single-signed systems, R(X_t) is a squared Bessel process of dimension
/// delta = gamma((sum b)^2 - N) + 2(N-1): checks the mean law R0 + delta t at
/// each grid time and a two-sample KS against the bessel module's marginals.
EnsembleReport verify_dispersion_law(const SimParams& params, std::size_t n_runs,
                                     std::span<const double> t_grid,
                                     const VerifyOptions& options = {});

/// For single-signed systems, M(X_t) - M(x0) is a 2d Brownian motion scaled
/// by N^{-1/2}: per-coordinate variance t/N, zero cross-covariance, Gaussian
/// marginals (KS).
EnsembleReport verify_mean_is_brownian(const SimParams& params, std::size_t n_runs,
                                       std::span<const double> t_grid,
                                       const VerifyOptions& options = {});

/// Scale invariance in law: first-event times from L*x0 (with eps_coll and
/// dt_max rescaled), divided by L^2, against first-event times from x0.
EnsembleReport verify_scaling_invariance(const SimParams& params, double L, std::size_t n_runs,
                                         const VerifyOptions& options = {});

/// Every collision is simple: one opposite-sign pair per event, and the
/// nearest bystander is well separated from the collision site.
EnsembleReport verify_simple_collisions(const SimParams& params, std::size_t n_runs,
                                        const VerifyOptions& options = {});

/// Collisions keep happening: the fraction of runs reaching sign exhaustion
/// grows toward 1 across three horizons. For the two-particle system the
/// first-collision CDF is checked against the SqB0(0, R(x0)) hitting law.
EnsembleReport verify_collisions_happen(const SimParams& params, std::size_t n_runs,
                                        const VerifyOptions& options = {});

}  // namespace sc
