#pragma once

#include <filesystem>
#include <string>

#include "sc/bessel.hpp"
#include "sc/engine_ode.hpp"
#include "sc/engine_sde.hpp"

namespace sc {

/// Trajectory CSV with header t,i,x,y,alive; one row per particle per sample.
/// Numbers are written with round-trip precision; output is byte-stable for
/// identical inputs.
void write_trajectory_csv(const std::filesystem::path& path,
                          const std::vector<std::pair<double, Configuration>>& samples);

/// Event log: JSON lines, one object per event with fields time, pairs, sites.
void write_events_jsonl(const std::filesystem::path& path,
                        const std::vector<CollisionEvent>& events);

/// Run summary: single JSON object (terminated, n_events, final alive
/// indices, net charge).
void write_sde_summary(const std::filesystem::path& path, const SdeRunResult& result,
                       const SignVector& signs);

/// One-line JSON termination record for an ODE run.
void write_ode_summary(const std::filesystem::path& path, const OdeRunResult& result);

/// Bessel path CSV with header t,R.
void write_bessel_csv(const std::filesystem::path& path, const BesselResult& path_result);

std::string termination_name(SdeTermination t);
std::string termination_name(OdeTermination t);

}  // namespace sc
