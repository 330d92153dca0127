#pragma once

#include <optional>
#include <span>
#include <vector>

#include "sc/core.hpp"

namespace sc {

/// Mean position of the alive particles indexed by K. K must be nonempty and
/// all its indices alive.
Vec2 local_mean(const Configuration& config, std::span<const std::size_t> K);

/// Centered second moment sum_{i in K} |x^i - M^K|^2. Zero iff all particles
/// of K share one position. Agrees with the pair-sum form
/// (1/(2|K|)) sum_{i,j in K} |x^i - x^j|^2.
double local_dispersion(const Configuration& config, std::span<const std::size_t> K);

/// Pair-sum form of the dispersion, kept as an independent algebraic route
/// for cross-checks.
double local_dispersion_pair_form(const Configuration& config, std::span<const std::size_t> K);

/// min_{i in K, j alive not in K} |x^i - x^j|. Requires 1 <= |K| <= N_alive-1.
double cluster_separation(const Configuration& config, std::span<const std::size_t> K);

/// min over blocks of the cluster separation; requires >= 2 blocks.
double partition_separation(const Configuration& config, const Partition& partition);

struct SignExtremes {
    std::optional<double> d_opp;   // min distance over alive opposite-sign pairs
    std::optional<double> d_same;  // min distance over alive same-sign pairs
};

/// Both minima over alive pairs; a category with no pairs comes back empty.
SignExtremes sign_extremes(const Configuration& config, const SignVector& signs);

/// delta_K = gamma * ((sum of K's charges)^2 - |K|) + 2 * (|K| - 1).
/// For K = the full alive set this is the dispersion's Bessel dimension.
double bessel_dimension(std::span<const std::size_t> K, const SignVector& signs, double gamma);

/// Connected components of the proximity graph on alive indices with edges
/// |x^i - x^j| < d0 (strict). Blocks are canonical: sorted internally and
/// ordered by smallest member.
Partition associated_partition(const Configuration& config, double d0);

/// A proper subset K of the alive indices with
///   cluster_separation(K) >= sqrt(2 R / N_alive^3),
/// where R is the dispersion of the whole alive set. Among the blocks of the
/// associated partition at that threshold, returns the one containing the
/// smallest alive index. The bound is a theorem, so its failure is reported
/// as an internal error.
std::vector<std::size_t> split_cluster(const Configuration& config);

/// c_N = 1 / (7^N N^{3N/2}) for N = number of alive particles.
double good_set_constant(std::size_t n_alive);

/// Good-set membership: d_same >= c_N * d_opp > 0. Requires both extremes to
/// be defined (both signs present, some sign repeated).
bool in_good_set(const Configuration& config, const SignVector& signs);

/// Everything the paper tracks about one cluster.
struct ClusterSummary {
    std::vector<std::size_t> index_set;
    Vec2 mean;
    double dispersion{0.0};
    double bessel_dim{0.0};
};

ClusterSummary summarize_cluster(const Configuration& config, const SignVector& signs,
                                 double gamma, std::span<const std::size_t> K);

}  // namespace sc
