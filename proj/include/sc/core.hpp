#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sc/vec2.hpp"

namespace sc {

/// Adaptive steps are never taken below this; asking for less terminates a run.
inline constexpr double kDtFloor = 1e-14;

/// Deterministic per-stream seed derivation.
///
/// derive_seed(master, k) is the k-th output (0-based) of a SplitMix64
/// generator seeded with `master`:
///   z  = master + (k + 1) * 0x9E3779B97F4A7C15
///   z ^= z >> 30;  z *= 0xBF58476D1CE4E5B9
///   z ^= z >> 27;  z *= 0x94D049BB133111EB
///   return z ^ (z >> 31)
/// All arithmetic is mod 2^64. Pure function, no hidden state.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

/// Fixed array of particle charges, each -1 or +1.
class SignVector {
  public:
    SignVector() = default;
    explicit SignVector(std::vector<int> signs);

    std::size_t size() const { return signs_.size(); }
    int operator[](std::size_t i) const { return signs_[i]; }
    int net_charge() const;
    const std::vector<int>& raw() const { return signs_; }

    bool operator==(const SignVector&) const = default;

  private:
    std::vector<int> signs_;
};

/// Positions of N planar particles plus a per-particle alive flag.
/// Removed particles keep their slot (indices are stable for the whole run)
/// and are never consulted by forces or observables.
struct Configuration {
    std::vector<Vec2> positions;
    std::vector<bool> alive;

    static Configuration all_alive(std::vector<Vec2> pts);

    std::size_t size() const { return positions.size(); }
    std::size_t alive_count() const;
    std::vector<std::size_t> alive_indices() const;

    /// First pair of alive particles with exactly equal stored coordinates,
    /// if any. Exact equality, not a tolerance: dynamical closeness is the
    /// engines' business (eps_coll).
    std::optional<std::pair<std::size_t, std::size_t>> coincident_alive_pair() const;

    bool operator==(const Configuration&) const = default;
};

/// Everything a single run needs. Value type, safe to copy across threads.
struct SimParams {
    double gamma{1.0};
    SignVector signs;
    Configuration x0;
    double t_end{1.0};
    double dt_max{1e-3};
    double step_factor{0.1};
    double eps_coll{1e-4};
    std::uint64_t seed{0};
    std::uint32_t record_stride{1};

    bool operator==(const SimParams&) const = default;
};

/// Disjoint index sets covering the alive indices. Blocks are sorted
/// internally and ordered by their smallest element, so equal partitions
/// compare equal.
struct Partition {
    std::vector<std::vector<std::size_t>> blocks;

    std::size_t block_count() const { return blocks.size(); }

    /// True iff every block is sign-constant.
    bool separates_signs(const SignVector& signs) const;

    /// True iff every block of *this is contained in some block of `coarser`.
    bool refines(const Partition& coarser) const;

    bool operator==(const Partition&) const = default;
};

/// One removal event: all pairs deleted at the same instant.
struct CollisionEvent {
    double time{0.0};
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    std::vector<Vec2> sites;  // one per pair
};

struct ValidationReport {
    std::vector<std::string> errors;
    bool ok() const { return errors.empty(); }
    std::string joined() const;
};

/// Checks every SimParams invariant and reports all violations at once.
ValidationReport validate(const SimParams& params);

/// Throws std::invalid_argument with the full report if validation fails.
void validate_or_throw(const SimParams& params);

}  // namespace sc
