#include "sc/cli.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "sc/bessel.hpp"
#include "sc/config.hpp"
#include "sc/engine_ode.hpp"
#include "sc/engine_sde.hpp"
#include "sc/io.hpp"
#include "sc/observables.hpp"
#include "sc/verify.hpp"

namespace sc {

namespace {

namespace fs = std::filesystem;

struct CommonArgs {
    std::string config_path;
    std::string output_dir;
    std::vector<std::string> overrides;
    std::size_t jobs = 0;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool with_out = true) {
    cmd->add_option("-c,--config", args.config_path, "run configuration file")->required();
    if (with_out) {
        cmd->add_option("-o,--out", args.output_dir, "output directory")->required();
    }
    cmd->add_option("--set", args.overrides,
                    "override a config key, key=value (repeatable; last write wins)");
    cmd->add_option("-j,--jobs", args.jobs, "worker threads for ensembles (0 = all cores)");
}

/// Splits --set arguments into config-file overrides and verify.* knobs.
std::pair<Overrides, Overrides> partition_overrides(const std::vector<std::string>& raw) {
    Overrides config_keys, verify_keys;
    for (const std::string& kv : raw) {
        auto [key, value] = split_override(kv);
        if (key.rfind("verify.", 0) == 0) {
            verify_keys[key.substr(7)] = value;
        } else {
            config_keys[key] = value;
        }
    }
    return {config_keys, verify_keys};
}

fs::path prepare_outdir(const std::string& dir) {
    fs::path p(dir);
    fs::create_directories(p);
    return p;
}

/// Wall-clock metadata lives in its own file so the primary outputs stay
/// byte-identical across reruns.
void write_meta(const fs::path& outdir, const std::string& command) {
    nlohmann::ordered_json j;
    j["command"] = command;
    auto now = std::chrono::system_clock::now();
    j["unix_time"] = std::chrono::duration_cast<std::chrono::seconds>(now.time_since_epoch()).count();
    std::ofstream out(outdir / "run_meta.json");
    out << j.dump(2) << '\n';
}

int cmd_simulate_sde(const CommonArgs& args, bool stop_single_sign) {
    auto [config_over, verify_over] = partition_overrides(args.overrides);
    (void)verify_over;
    SimParams params = parse_config_file(args.config_path, config_over);
    validate_or_throw(params);

    SdeRunOptions opts;
    opts.stop_when_single_sign = stop_single_sign;
    SdeRunResult result = run_sde(params, opts);

    fs::path outdir = prepare_outdir(args.output_dir);
    write_trajectory_csv(outdir / "trajectory.csv", result.samples);
    write_events_jsonl(outdir / "events.jsonl", result.events);
    write_sde_summary(outdir / "summary.json", result, params.signs);
    write_meta(outdir, "simulate-sde");
    std::cout << "simulate-sde: " << result.events.size() << " events, terminated "
              << termination_name(result.terminated) << ", outputs in " << outdir.string() << "\n";
    return 0;
}

int cmd_simulate_ode(const CommonArgs& args) {
    auto [config_over, verify_over] = partition_overrides(args.overrides);
    (void)verify_over;
    SimParams params = parse_config_file(args.config_path, config_over);
    validate_or_throw(params);

    OdeRunResult result = run_ode(params);

    fs::path outdir = prepare_outdir(args.output_dir);
    write_trajectory_csv(outdir / "trajectory.csv", result.samples);
    write_ode_summary(outdir / "summary.json", result);
    write_meta(outdir, "simulate-ode");
    std::cout << "simulate-ode: terminated " << termination_name(result.terminated)
              << ", outputs in " << outdir.string() << "\n";
    return 0;
}

int cmd_bessel(double delta, double r0, double dt, double t_end, std::uint64_t seed,
               const std::string& out_dir) {
    BesselResult path = simulate_sqb0(delta, r0, dt, t_end, seed);
    fs::path outdir = prepare_outdir(out_dir);
    write_bessel_csv(outdir / "path.csv", path);
    write_meta(outdir, "bessel");
    std::cout << "bessel: wrote " << (outdir / "path.csv").string();
    if (path.hit_zero_at) std::cout << " (hit zero at t=" << *path.hit_zero_at << ")";
    std::cout << "\n";
    return 0;
}

int cmd_split_demo(const CommonArgs& args) {
    auto [config_over, verify_over] = partition_overrides(args.overrides);
    (void)verify_over;
    SimParams params = parse_config_file(args.config_path, config_over);
    validate_or_throw(params);

    auto k = split_cluster(params.x0);
    double sep = cluster_separation(params.x0, k);
    auto idx = params.x0.alive_indices();
    double r = local_dispersion(params.x0, idx);
    double n = static_cast<double>(idx.size());
    double bound = std::sqrt(2.0 * r / (n * n * n));

    std::cout << "split-demo: K = {";
    for (std::size_t i = 0; i < k.size(); ++i) std::cout << (i ? "," : "") << k[i];
    std::cout << "}  separation " << sep << " >= bound " << bound << "\n";
    for (const auto& block : associated_partition(params.x0, bound).blocks) {
        ClusterSummary s = summarize_cluster(params.x0, params.signs, params.gamma, block);
        std::cout << "  cluster {";
        for (std::size_t i = 0; i < s.index_set.size(); ++i) {
            std::cout << (i ? "," : "") << s.index_set[i];
        }
        std::cout << "}: mean (" << s.mean.x << "," << s.mean.y << "), dispersion " << s.dispersion
                  << ", bessel dimension " << s.bessel_dim << "\n";
    }
    return 0;
}

int cmd_verify(const CommonArgs& args, const std::string& suite, std::size_t runs,
               const std::string& grid_csv, double scale_L) {
    auto [config_over, verify_over] = partition_overrides(args.overrides);
    SimParams params = parse_config_file(args.config_path, config_over);
    validate_or_throw(params);

    VerifyOptions opts;
    opts.jobs = args.jobs;
    if (auto it = verify_over.find("delta_target"); it != verify_over.end()) {
        opts.delta_target_override = std::stod(it->second);
    }

    std::vector<double> grid;
    {
        std::stringstream ss(grid_csv);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            if (!tok.empty()) grid.push_back(std::stod(tok));
        }
    }

    std::vector<EnsembleReport> reports;
    auto want = [&suite](const char* name) { return suite == "all" || suite == name; };
    if (want("collision-count")) reports.push_back(verify_collision_count(params, runs, opts));
    if (want("dispersion")) reports.push_back(verify_dispersion_law(params, runs, grid, opts));
    if (want("mean-brownian")) reports.push_back(verify_mean_is_brownian(params, runs, grid, opts));
    if (want("scaling")) reports.push_back(verify_scaling_invariance(params, scale_L, runs, opts));
    if (want("simple-collisions")) reports.push_back(verify_simple_collisions(params, runs, opts));
    if (want("collisions-happen")) reports.push_back(verify_collisions_happen(params, runs, opts));
    if (reports.empty()) {
        std::cerr << "verify: unknown suite '" << suite << "'\n";
        return 1;
    }

    fs::path outdir = prepare_outdir(args.output_dir);
    bool all_pass = true;
    for (const EnsembleReport& rep : reports) {
        std::cout << rep.table() << "\n";
        std::ofstream out(outdir / ("report_" + rep.suite + ".json"));
        out << rep.to_json_string() << '\n';
        all_pass = all_pass && rep.pass;
    }
    write_meta(outdir, "verify");
    return all_pass ? 0 : 2;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"signed Coulomb particle system: simulation and verification"};
    app.require_subcommand(1);

    CommonArgs sde_args, ode_args, split_args, verify_args;
    bool stop_single_sign = false;

    CLI::App* sde = app.add_subcommand("simulate-sde", "stochastic run with the removal rule");
    add_common(sde, sde_args);
    sde->add_flag("--stop-when-single-sign", stop_single_sign,
                  "terminate once the alive particles all share one sign");

    CLI::App* ode = app.add_subcommand("simulate-ode", "deterministic run up to first collision");
    add_common(ode, ode_args);

    double b_delta = 0.0, b_r0 = 1.0, b_dt = 1e-4, b_tend = 1.0;
    std::uint64_t b_seed = 0;
    std::string b_out;
    CLI::App* bes = app.add_subcommand("bessel", "dump one squared Bessel path as CSV");
    bes->add_option("--delta", b_delta, "process dimension")->required();
    bes->add_option("--r0", b_r0, "initial value (>= 0)")->required();
    bes->add_option("--dt", b_dt, "time step");
    bes->add_option("--t-end", b_tend, "horizon");
    bes->add_option("--seed", b_seed, "RNG seed");
    bes->add_option("-o,--out", b_out, "output directory")->required();

    std::string v_suite = "all", v_grid = "0.25,0.5,1";
    std::size_t v_runs = 500;
    double v_scale = 2.0;
    CLI::App* ver = app.add_subcommand("verify", "run statistical theorem checks");
    add_common(ver, verify_args);
    ver->add_option("--suite", v_suite,
                    "collision-count | dispersion | mean-brownian | scaling | simple-collisions | "
                    "collisions-happen | all");
    ver->add_option("--runs", v_runs, "trajectories per ensemble");
    ver->add_option("--grid", v_grid, "comma-separated sample times");
    ver->add_option("--scale-L", v_scale, "spatial factor for the scaling suite");

    CLI::App* split = app.add_subcommand("split-demo", "cluster splitting of the initial configuration");
    add_common(split, split_args, /*with_out=*/false);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (sde->parsed()) return cmd_simulate_sde(sde_args, stop_single_sign);
        if (ode->parsed()) return cmd_simulate_ode(ode_args);
        if (bes->parsed()) return cmd_bessel(b_delta, b_r0, b_dt, b_tend, b_seed, b_out);
        if (ver->parsed()) return cmd_verify(verify_args, v_suite, v_runs, v_grid, v_scale);
        if (split->parsed()) return cmd_split_demo(split_args);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

}  // namespace sc
