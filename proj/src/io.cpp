#include "sc/io.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace sc {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);  // binary: byte-stable newlines
    if (!out) throw std::runtime_error("cannot open output file: " + path.string());
    return out;
}

std::string num(double d) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", d);
    return buf;
}

}  // namespace

void write_trajectory_csv(const std::filesystem::path& path,
                          const std::vector<std::pair<double, Configuration>>& samples) {
    auto out = open_out(path);
    out << "t,i,x,y,alive\n";
    for (const auto& [t, cfg] : samples) {
        for (std::size_t i = 0; i < cfg.size(); ++i) {
            out << num(t) << ',' << i << ',' << num(cfg.positions[i].x) << ','
                << num(cfg.positions[i].y) << ',' << (cfg.alive[i] ? 1 : 0) << '\n';
        }
    }
}

void write_events_jsonl(const std::filesystem::path& path,
                        const std::vector<CollisionEvent>& events) {
    auto out = open_out(path);
    for (const CollisionEvent& ev : events) {
        nlohmann::ordered_json j;
        j["time"] = ev.time;
        nlohmann::ordered_json pairs = nlohmann::ordered_json::array();
        for (const auto& [i, k] : ev.pairs) pairs.push_back({i, k});
        j["pairs"] = pairs;
        nlohmann::ordered_json sites = nlohmann::ordered_json::array();
        for (const Vec2& s : ev.sites) sites.push_back({s.x, s.y});
        j["sites"] = sites;
        out << j.dump() << '\n';
    }
}

void write_sde_summary(const std::filesystem::path& path, const SdeRunResult& result,
                       const SignVector& signs) {
    nlohmann::ordered_json j;
    j["terminated"] = termination_name(result.terminated);
    j["n_events"] = result.events.size();
    nlohmann::ordered_json alive = nlohmann::ordered_json::array();
    int net_charge = 0;
    for (std::size_t i : result.final.alive_indices()) {
        alive.push_back(i);
        net_charge += signs[i];
    }
    j["final_alive"] = alive;
    j["net_charge"] = net_charge;
    j["steps"] = result.steps;
    j["same_sign_tight_warnings"] = result.same_sign_tight_warnings;
    auto out = open_out(path);
    out << j.dump(2) << '\n';
}

void write_ode_summary(const std::filesystem::path& path, const OdeRunResult& result) {
    nlohmann::ordered_json j;
    j["terminated"] = termination_name(result.terminated);
    j["t_final"] = result.samples.back().first;
    if (result.collision) {
        j["collision"] = {{"time", result.collision->time},
                          {"indices", result.collision->indices},
                          {"site", {result.collision->site.x, result.collision->site.y}}};
    }
    auto out = open_out(path);
    out << j.dump() << '\n';
}

void write_bessel_csv(const std::filesystem::path& path, const BesselResult& path_result) {
    auto out = open_out(path);
    out << "t,R\n";
    for (std::size_t k = 0; k < path_result.times.size(); ++k) {
        out << num(path_result.times[k]) << ',' << num(path_result.values[k]) << '\n';
    }
}

std::string termination_name(SdeTermination t) {
    switch (t) {
        case SdeTermination::reached_t_end: return "reached_t_end";
        case SdeTermination::all_same_sign_remaining: return "all_same_sign_remaining";
        case SdeTermination::step_underflow: return "step_underflow";
    }
    return "unknown";
}

std::string termination_name(OdeTermination t) {
    switch (t) {
        case OdeTermination::reached_t_end: return "reached_t_end";
        case OdeTermination::collision_detected: return "collision_detected";
        case OdeTermination::step_underflow: return "step_underflow";
    }
    return "unknown";
}

}  // namespace sc
