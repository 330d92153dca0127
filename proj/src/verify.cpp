#include "sc/verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "parallel.hpp"
#include "sc/bessel.hpp"
#include "sc/engine_sde.hpp"
#include "sc/observables.hpp"
#include "sc/stats.hpp"

namespace sc {

namespace {

using detail::parallel_for_runs;

SimParams with_run_seed(const SimParams& base, std::uint64_t master, std::size_t run) {
    SimParams p = base;
    p.seed = derive_seed(master, run);
    return p;
}

void require_single_sign(const SimParams& params, const char* where) {
    if (std::abs(params.signs.net_charge()) != static_cast<int>(params.signs.size())) {
        throw std::invalid_argument(std::string(where) + ": needs a single-signed system");
    }
}

void require_both_signs(const SimParams& params, const char* where) {
    if (std::abs(params.signs.net_charge()) == static_cast<int>(params.signs.size())) {
        throw std::invalid_argument(std::string(where) + ": needs both signs present");
    }
}

MomentCheck moment_check(std::string label, double t, double empirical, double target, double se,
                         double sigmas) {
    MomentCheck c;
    c.label = std::move(label);
    c.t = t;
    c.empirical = empirical;
    c.target = target;
    c.standard_error = se;
    c.passed = std::abs(empirical - target) <= sigmas * se;
    return c;
}

KsCheck ks_check(std::string label, const KsResult& ks, double threshold) {
    return KsCheck{std::move(label), ks.statistic, ks.p_value, ks.p_value > threshold};
}

void finalize(EnsembleReport& rep) {
    rep.pass = true;
    for (const auto& c : rep.moment_checks) rep.pass = rep.pass && c.passed;
    for (const auto& c : rep.ks_checks) rep.pass = rep.pass && c.passed;
    for (const auto& c : rep.flag_checks) rep.pass = rep.pass && c.passed;
}

/// Dispersion of the full alive set of x0.
double initial_dispersion(const SimParams& params) {
    auto idx = params.x0.alive_indices();
    return local_dispersion(params.x0, idx);
}

double delta_of(const SimParams& params) {
    double q = params.signs.net_charge();
    double n = static_cast<double>(params.signs.size());
    return params.gamma * (q * q - n) + 2.0 * (n - 1.0);
}

}  // namespace

std::size_t EnsembleReport::total_events() const {
    std::size_t total = 0;
    for (const auto& [mult, count] : multiplicity_histogram) total += count;
    return total;
}

EnsembleReport verify_collision_count(const SimParams& params, std::size_t n_runs,
                                      const VerifyOptions& options) {
    validate_or_throw(params);
    EnsembleReport rep;
    rep.suite = "collision_count";
    rep.n_runs = n_runs;

    const int m_expected =
        (static_cast<int>(params.signs.size()) - std::abs(params.signs.net_charge())) / 2;

    std::vector<SdeRunResult> results(n_runs);
    parallel_for_runs(n_runs, options.jobs, [&](std::size_t i) {
        SdeRunOptions run_opts;
        run_opts.stop_when_single_sign = true;
        results[i] = run_sde(with_run_seed(params, params.seed, i), run_opts);
    });

    std::size_t bad_count = 0, multi_pair_events = 0, underflows = 0;
    for (const auto& r : results) {
        rep.event_count_histogram[static_cast<int>(r.events.size())]++;
        for (const auto& ev : r.events) {
            rep.multiplicity_histogram[static_cast<int>(ev.pairs.size())]++;
            if (ev.pairs.size() != 1) ++multi_pair_events;
        }
        if (r.terminated == SdeTermination::step_underflow) ++underflows;
        if (r.terminated != SdeTermination::all_same_sign_remaining) {
            ++rep.censored;
        } else if (static_cast<int>(r.events.size()) != m_expected) {
            ++bad_count;
        }
    }

    rep.flag_checks.push_back({"uncensored runs have exactly m=" + std::to_string(m_expected) +
                                   " events",
                               bad_count == 0, static_cast<double>(bad_count),
                               std::to_string(rep.n_runs - rep.censored) + " uncensored runs"});
    rep.flag_checks.push_back({"every event removes exactly one pair", multi_pair_events == 0,
                               static_cast<double>(multi_pair_events),
                               std::to_string(rep.total_events()) + " events"});
    double censored_frac = n_runs ? static_cast<double>(rep.censored) / n_runs : 0.0;
    rep.flag_checks.push_back({"censored fraction below tolerance",
                               censored_frac <= options.censored_tolerance && underflows == 0,
                               censored_frac,
                               "tolerance " + std::to_string(options.censored_tolerance)});
    finalize(rep);
    return rep;
}

EnsembleReport verify_dispersion_law(const SimParams& params, std::size_t n_runs,
                                     std::span<const double> t_grid,
                                     const VerifyOptions& options) {
    validate_or_throw(params);
    require_single_sign(params, "verify_dispersion_law");
    if (t_grid.empty()) throw std::invalid_argument("verify_dispersion_law: empty time grid");

    EnsembleReport rep;
    rep.suite = "dispersion_law";
    rep.n_runs = n_runs;

    const double r0 = initial_dispersion(params);
    const double delta = options.delta_target_override.value_or(delta_of(params));

    std::vector<std::vector<double>> dispersion(t_grid.size(), std::vector<double>(n_runs));
    parallel_for_runs(n_runs, options.jobs, [&](std::size_t i) {
        SdeRunOptions run_opts;
        run_opts.extra_sample_times.assign(t_grid.begin(), t_grid.end());
        SdeRunResult r = run_sde(with_run_seed(params, params.seed, i), run_opts);
        for (std::size_t g = 0; g < t_grid.size(); ++g) {
            for (const auto& [st, cfg] : r.samples) {
                if (st == t_grid[g]) {
                    dispersion[g][i] = local_dispersion(cfg, cfg.alive_indices());
                    break;
                }
            }
        }
    });

    // Independent marginals from the bessel module, one batch per grid time.
    for (std::size_t g = 0; g < t_grid.size(); ++g) {
        double t = t_grid[g];
        double se = std::sqrt(variance_of(dispersion[g]) / static_cast<double>(n_runs));
        std::ostringstream lbl;
        lbl << "mean R(X_t) at t=" << t;
        rep.moment_checks.push_back(moment_check(lbl.str(), t, mean_of(dispersion[g]),
                                                 r0 + delta * t, se, options.moment_sigmas));
    }
    auto marginals = sqb0_marginals(delta, r0, params.dt_max, t_grid,
                                    std::max<std::size_t>(n_runs, 1000),
                                    derive_seed(params.seed, n_runs + 1));
    for (std::size_t g = 0; g < t_grid.size(); ++g) {
        std::ostringstream lbl;
        lbl << "KS R(X_t) vs SqB0(" << delta << ") at t=" << t_grid[g];
        rep.ks_checks.push_back(ks_check(
            lbl.str(), ks_two_sample(dispersion[g], marginals[g]), options.ks_threshold));
    }
    finalize(rep);
    return rep;
}

EnsembleReport verify_mean_is_brownian(const SimParams& params, std::size_t n_runs,
                                       std::span<const double> t_grid,
                                       const VerifyOptions& options) {
    validate_or_throw(params);
    require_single_sign(params, "verify_mean_is_brownian");
    if (t_grid.empty()) throw std::invalid_argument("verify_mean_is_brownian: empty time grid");

    EnsembleReport rep;
    rep.suite = "mean_is_brownian";
    rep.n_runs = n_runs;

    const double n_particles = static_cast<double>(params.x0.alive_count());
    auto idx0 = params.x0.alive_indices();
    const Vec2 m0 = local_mean(params.x0, idx0);

    std::vector<std::vector<double>> dx(t_grid.size(), std::vector<double>(n_runs));
    std::vector<std::vector<double>> dy(t_grid.size(), std::vector<double>(n_runs));
    parallel_for_runs(n_runs, options.jobs, [&](std::size_t i) {
        SdeRunOptions run_opts;
        run_opts.extra_sample_times.assign(t_grid.begin(), t_grid.end());
        SdeRunResult r = run_sde(with_run_seed(params, params.seed, i), run_opts);
        for (std::size_t g = 0; g < t_grid.size(); ++g) {
            for (const auto& [st, cfg] : r.samples) {
                if (st == t_grid[g]) {
                    Vec2 d = local_mean(cfg, cfg.alive_indices()) - m0;
                    dx[g][i] = d.x;
                    dy[g][i] = d.y;
                    break;
                }
            }
        }
    });

    for (std::size_t g = 0; g < t_grid.size(); ++g) {
        const double t = t_grid[g];
        const double target_var = t / n_particles;
        const double nn = static_cast<double>(n_runs);
        for (auto [coords, name] : {std::pair{&dx, "x"}, std::pair{&dy, "y"}}) {
            double var = variance_of((*coords)[g]);
            // s.e. of a normal sample variance
            double se = var * std::sqrt(2.0 / (nn - 1.0));
            std::ostringstream lbl;
            lbl << "var M_" << name << " at t=" << t;
            rep.moment_checks.push_back(
                moment_check(lbl.str(), t, var, target_var, se, options.moment_sigmas));
        }
        double cov = covariance_of(dx[g], dy[g]);
        double se_cov =
            std::sqrt(variance_of(dx[g]) * variance_of(dy[g]) / (nn - 1.0));
        std::ostringstream lbl;
        lbl << "cov(M_x, M_y) at t=" << t;
        rep.moment_checks.push_back(
            moment_check(lbl.str(), t, cov, 0.0, se_cov, options.moment_sigmas));

        double sd = std::sqrt(target_var);
        auto cdf = [sd](double v) { return normal_cdf(v, 0.0, sd); };
        std::ostringstream lx, ly;
        lx << "KS normality M_x at t=" << t;
        ly << "KS normality M_y at t=" << t;
        rep.ks_checks.push_back(ks_check(lx.str(), ks_one_sample(dx[g], cdf), options.ks_threshold));
        rep.ks_checks.push_back(ks_check(ly.str(), ks_one_sample(dy[g], cdf), options.ks_threshold));
    }
    finalize(rep);
    return rep;
}

namespace {

/// First event time, censor-clamped at t_end.
std::vector<double> first_event_times(const SimParams& params, std::size_t n_runs,
                                      std::uint64_t seed_lane, const VerifyOptions& options,
                                      std::size_t& censored) {
    std::vector<double> times(n_runs);
    std::vector<char> was_censored(n_runs, 0);
    parallel_for_runs(n_runs, options.jobs, [&](std::size_t i) {
        SdeRunOptions run_opts;
        run_opts.stop_when_single_sign = true;
        SdeRunResult r = run_sde(with_run_seed(params, seed_lane, i), run_opts);
        if (r.events.empty()) {
            times[i] = params.t_end;
            was_censored[i] = 1;
        } else {
            times[i] = r.events.front().time;
        }
    });
    censored = static_cast<std::size_t>(std::count(was_censored.begin(), was_censored.end(), 1));
    return times;
}

}  // namespace

EnsembleReport verify_scaling_invariance(const SimParams& params, double L, std::size_t n_runs,
                                         const VerifyOptions& options) {
    validate_or_throw(params);
    require_both_signs(params, "verify_scaling_invariance");
    if (!(L > 0.0)) throw std::invalid_argument("verify_scaling_invariance: L must be positive");

    EnsembleReport rep;
    rep.suite = "scaling_invariance";
    rep.n_runs = n_runs;

    // Space scales by L, time by L^2; the numerical thresholds must follow.
    SimParams scaled = params;
    for (Vec2& p : scaled.x0.positions) p *= L;
    scaled.eps_coll = params.eps_coll * L;
    scaled.dt_max = params.dt_max * L * L;
    scaled.t_end = params.t_end * L * L;

    std::size_t censored_base = 0, censored_scaled = 0;
    std::vector<double> base =
        first_event_times(params, n_runs, params.seed, options, censored_base);
    std::vector<double> other =
        first_event_times(scaled, n_runs, derive_seed(params.seed, 0x5CA1E), options,
                          censored_scaled);
    for (double& t : other) t /= (L * L);

    rep.censored = censored_base + censored_scaled;
    rep.ks_checks.push_back(ks_check("KS first-event time, base vs 1/L^2-rescaled",
                                     ks_two_sample(base, other), options.ks_threshold));
    double max_censored_frac =
        static_cast<double>(std::max(censored_base, censored_scaled)) / std::max<std::size_t>(n_runs, 1);
    rep.flag_checks.push_back({"censored fraction below tolerance",
                               max_censored_frac <= options.censored_tolerance, max_censored_frac,
                               "per-arm maximum"});
    finalize(rep);
    return rep;
}

EnsembleReport verify_simple_collisions(const SimParams& params, std::size_t n_runs,
                                        const VerifyOptions& options) {
    validate_or_throw(params);
    require_both_signs(params, "verify_simple_collisions");

    EnsembleReport rep;
    rep.suite = "simple_collisions";
    rep.n_runs = n_runs;

    std::vector<SdeRunResult> results(n_runs);
    parallel_for_runs(n_runs, options.jobs, [&](std::size_t i) {
        SdeRunOptions run_opts;
        run_opts.stop_when_single_sign = true;
        results[i] = run_sde(with_run_seed(params, params.seed, i), run_opts);
    });

    std::size_t multi_pair_events = 0, clear_pairs = 0, total_pairs = 0;
    for (const auto& r : results) {
        rep.event_count_histogram[static_cast<int>(r.events.size())]++;
        if (r.terminated != SdeTermination::all_same_sign_remaining) ++rep.censored;
        for (const auto& ev : r.events) {
            rep.multiplicity_histogram[static_cast<int>(ev.pairs.size())]++;
            if (ev.pairs.size() != 1) ++multi_pair_events;
        }
        for (double c : r.event_clearances) {
            ++total_pairs;
            if (c > options.clearance_factor * params.eps_coll) ++clear_pairs;
        }
    }

    rep.flag_checks.push_back({"every event removes exactly one pair", multi_pair_events == 0,
                               static_cast<double>(multi_pair_events),
                               std::to_string(rep.total_events()) + " events"});
    double clear_frac = total_pairs ? static_cast<double>(clear_pairs) / total_pairs : 1.0;
    std::ostringstream detail;
    detail << "threshold " << options.clearance_factor << " * eps_coll over " << total_pairs
           << " pairs";
    rep.flag_checks.push_back({"bystander clearance quantile", clear_frac >= options.clearance_quantile,
                               clear_frac, detail.str()});
    finalize(rep);
    return rep;
}

EnsembleReport verify_collisions_happen(const SimParams& params, std::size_t n_runs,
                                        const VerifyOptions& options) {
    validate_or_throw(params);
    require_both_signs(params, "verify_collisions_happen");

    EnsembleReport rep;
    rep.suite = "collisions_happen";
    rep.n_runs = n_runs;

    std::vector<SdeRunResult> results(n_runs);
    parallel_for_runs(n_runs, options.jobs, [&](std::size_t i) {
        SdeRunOptions run_opts;
        run_opts.stop_when_single_sign = true;
        results[i] = run_sde(with_run_seed(params, params.seed, i), run_opts);
    });

    const double horizons[3] = {params.t_end / 25.0, params.t_end / 5.0, params.t_end};
    std::size_t exhausted[3] = {0, 0, 0};
    std::size_t first_by_one = 0;
    for (const auto& r : results) {
        rep.event_count_histogram[static_cast<int>(r.events.size())]++;
        for (const auto& ev : r.events) {
            rep.multiplicity_histogram[static_cast<int>(ev.pairs.size())]++;
        }
        if (r.terminated != SdeTermination::all_same_sign_remaining) {
            ++rep.censored;
        } else {
            double t_done = r.events.back().time;
            for (int h = 0; h < 3; ++h) {
                if (t_done <= horizons[h]) ++exhausted[h];
            }
        }
        if (!r.events.empty() && r.events.front().time <= 1.0) ++first_by_one;
    }

    double frac[3];
    for (int h = 0; h < 3; ++h) frac[h] = static_cast<double>(exhausted[h]) / n_runs;
    {
        std::ostringstream detail;
        detail << "fractions " << frac[0] << " / " << frac[1] << " / " << frac[2] << " at horizons "
               << horizons[0] << " / " << horizons[1] << " / " << horizons[2];
        bool grows = frac[0] <= frac[1] && frac[1] <= frac[2] && (frac[2] > frac[0] || frac[0] == 1.0);
        rep.flag_checks.push_back({"exhausted fraction grows toward 1", grows, frac[2], detail.str()});
    }

    // Two-particle reduction: the pair dispersion is a SqB0(0, R(x0)), so the
    // first-collision CDF must match the bessel module's hitting estimate.
    if (params.signs.size() == 2 && params.signs.net_charge() == 0 && params.t_end >= 1.0) {
        double t_cmp = 1.0;
        double p_sde = static_cast<double>(first_by_one) / n_runs;
        HittingEstimate hit = hitting_probability(0.0, initial_dispersion(params), t_cmp,
                                                  options.bessel_dt, options.bessel_n,
                                                  derive_seed(params.seed, 0xBE55E1));
        double joint_se = std::hypot(binomial_se(p_sde, n_runs), hit.standard_error);
        rep.moment_checks.push_back(moment_check("P(first collision <= 1) vs SqB0(0) hitting law",
                                                 t_cmp, p_sde, hit.probability, joint_se,
                                                 options.moment_sigmas));
    }
    finalize(rep);
    return rep;
}

namespace {

nlohmann::ordered_json checks_json(const EnsembleReport& rep) {
    nlohmann::ordered_json checks = nlohmann::ordered_json::array();
    for (const auto& c : rep.moment_checks) {
        checks.push_back({{"type", "moment"},
                          {"label", c.label},
                          {"t", c.t},
                          {"empirical", c.empirical},
                          {"target", c.target},
                          {"standard_error", c.standard_error},
                          {"passed", c.passed}});
    }
    for (const auto& c : rep.ks_checks) {
        checks.push_back({{"type", "ks"},
                          {"label", c.label},
                          {"statistic", c.statistic},
                          {"p_value", c.p_value},
                          {"passed", c.passed}});
    }
    for (const auto& c : rep.flag_checks) {
        checks.push_back({{"type", "flag"},
                          {"label", c.label},
                          {"value", c.value},
                          {"detail", c.detail},
                          {"passed", c.passed}});
    }
    return checks;
}

}  // namespace

std::string EnsembleReport::to_json_string() const {
    nlohmann::ordered_json j;
    j["suite"] = suite;
    j["n_runs"] = n_runs;
    j["censored"] = censored;
    nlohmann::ordered_json event_hist = nlohmann::ordered_json::object();
    for (const auto& [k, v] : event_count_histogram) event_hist[std::to_string(k)] = v;
    j["event_count_histogram"] = event_hist;
    nlohmann::ordered_json mult_hist = nlohmann::ordered_json::object();
    for (const auto& [k, v] : multiplicity_histogram) mult_hist[std::to_string(k)] = v;
    j["multiplicity_histogram"] = mult_hist;
    j["checks"] = checks_json(*this);
    j["pass"] = pass;
    return j.dump(2);
}

std::string EnsembleReport::table() const {
    std::ostringstream os;
    os << "suite: " << suite << "  (runs: " << n_runs << ", censored: " << censored << ")\n";
    for (const auto& c : moment_checks) {
        os << (c.passed ? "[PASS] " : "[FAIL] ") << c.label << ": " << c.empirical << " vs "
           << c.target << " (s.e. " << c.standard_error << ")\n";
    }
    for (const auto& c : ks_checks) {
        os << (c.passed ? "[PASS] " : "[FAIL] ") << c.label << ": D=" << c.statistic
           << " p=" << c.p_value << "\n";
    }
    for (const auto& c : flag_checks) {
        os << (c.passed ? "[PASS] " : "[FAIL] ") << c.label << ": " << c.value;
        if (!c.detail.empty()) os << " (" << c.detail << ")";
        os << "\n";
    }
    os << (pass ? "RESULT: PASS" : "RESULT: FAIL") << "\n";
    return os.str();
}

}  // namespace sc
