#include "sc/observables.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace sc {

namespace {

void check_cluster(const Configuration& config, std::span<const std::size_t> K,
                   const char* where) {
    if (K.empty()) throw std::invalid_argument(std::string(where) + ": empty index set");
    for (std::size_t i : K) {
        if (i >= config.size()) {
            throw std::invalid_argument(std::string(where) + ": index out of range");
        }
        if (!config.alive[i]) {
            std::ostringstream os;
            os << where << ": index " << i << " refers to a removed particle";
            throw std::invalid_argument(os.str());
        }
    }
}

// Union-find with path halving; fine for desk-scale N.
struct UnionFind {
    std::vector<std::size_t> parent;
    explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    std::size_t find(std::size_t i) {
        while (parent[i] != i) {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        return i;
    }
    void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
};

}  // namespace

Vec2 local_mean(const Configuration& config, std::span<const std::size_t> K) {
    check_cluster(config, K, "local_mean");
    Vec2 sum{};
    for (std::size_t i : K) sum += config.positions[i];
    return sum / static_cast<double>(K.size());
}

double local_dispersion(const Configuration& config, std::span<const std::size_t> K) {
    Vec2 m = local_mean(config, K);
    double r = 0.0;
    for (std::size_t i : K) r += distance2(config.positions[i], m);
    return r;
}

double local_dispersion_pair_form(const Configuration& config, std::span<const std::size_t> K) {
    check_cluster(config, K, "local_dispersion_pair_form");
    double s = 0.0;
    for (std::size_t a = 0; a < K.size(); ++a) {
        for (std::size_t b = a + 1; b < K.size(); ++b) {
            s += distance2(config.positions[K[a]], config.positions[K[b]]);
        }
    }
    return s / static_cast<double>(K.size());
}

double cluster_separation(const Configuration& config, std::span<const std::size_t> K) {
    check_cluster(config, K, "cluster_separation");
    if (K.size() >= config.alive_count()) {
        throw std::invalid_argument("cluster_separation: K must be a proper subset of the alive set");
    }
    std::vector<bool> in_k(config.size(), false);
    for (std::size_t i : K) in_k[i] = true;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i : K) {
        for (std::size_t j = 0; j < config.size(); ++j) {
            if (!config.alive[j] || in_k[j]) continue;
            best = std::min(best, distance(config.positions[i], config.positions[j]));
        }
    }
    return best;
}

double partition_separation(const Configuration& config, const Partition& partition) {
    if (partition.block_count() < 2) {
        throw std::invalid_argument("partition_separation: need at least 2 blocks");
    }
    double best = std::numeric_limits<double>::infinity();
    for (const auto& block : partition.blocks) {
        best = std::min(best, cluster_separation(config, block));
    }
    return best;
}

SignExtremes sign_extremes(const Configuration& config, const SignVector& signs) {
    SignExtremes out;
    auto idx = config.alive_indices();
    for (std::size_t a = 0; a < idx.size(); ++a) {
        for (std::size_t b = a + 1; b < idx.size(); ++b) {
            double d = distance(config.positions[idx[a]], config.positions[idx[b]]);
            auto& slot = (signs[idx[a]] == signs[idx[b]]) ? out.d_same : out.d_opp;
            if (!slot || d < *slot) slot = d;
        }
    }
    return out;
}

double bessel_dimension(std::span<const std::size_t> K, const SignVector& signs, double gamma) {
    if (K.empty()) throw std::invalid_argument("bessel_dimension: empty index set");
    double charge = 0.0;
    for (std::size_t i : K) {
        if (i >= signs.size()) throw std::invalid_argument("bessel_dimension: index out of range");
        charge += signs[i];
    }
    double k = static_cast<double>(K.size());
    return gamma * (charge * charge - k) + 2.0 * (k - 1.0);
}

Partition associated_partition(const Configuration& config, double d0) {
    if (!(d0 > 0.0)) throw std::invalid_argument("associated_partition: d0 must be positive");
    auto idx = config.alive_indices();
    if (idx.empty()) throw std::invalid_argument("associated_partition: no alive particles");

    UnionFind uf(idx.size());
    for (std::size_t a = 0; a < idx.size(); ++a) {
        for (std::size_t b = a + 1; b < idx.size(); ++b) {
            // Strict inequality: ties at exactly d0 are not edges.
            if (distance(config.positions[idx[a]], config.positions[idx[b]]) < d0) {
                uf.unite(a, b);
            }
        }
    }

    std::vector<std::vector<std::size_t>> groups(idx.size());
    for (std::size_t a = 0; a < idx.size(); ++a) groups[uf.find(a)].push_back(idx[a]);

    Partition p;
    for (auto& g : groups) {
        if (!g.empty()) p.blocks.push_back(std::move(g));
    }
    std::sort(p.blocks.begin(), p.blocks.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    return p;
}

std::vector<std::size_t> split_cluster(const Configuration& config) {
    auto idx = config.alive_indices();
    if (idx.size() < 2) throw std::invalid_argument("split_cluster: need at least 2 alive particles");
    double r = local_dispersion(config, idx);
    if (r <= 0.0) {
        throw std::invalid_argument("split_cluster: dispersion is zero (all particles coincide)");
    }
    double n = static_cast<double>(idx.size());
    double bound = std::sqrt(2.0 * r / (n * n * n));

    Partition parts = associated_partition(config, bound);
    if (parts.block_count() < 2) {
        throw std::logic_error("split_cluster: associated partition has a single block; "
                               "this contradicts the splitting bound");
    }
    const std::vector<std::size_t>& k = parts.blocks.front();  // contains the smallest alive index
    if (cluster_separation(config, k) < bound) {
        throw std::logic_error("split_cluster: returned block violates the separation bound");
    }
    return k;
}

double good_set_constant(std::size_t n_alive) {
    double n = static_cast<double>(n_alive);
    return 1.0 / (std::pow(7.0, n) * std::pow(n, 1.5 * n));
}

bool in_good_set(const Configuration& config, const SignVector& signs) {
    SignExtremes ext = sign_extremes(config, signs);
    if (!ext.d_opp || !ext.d_same) {
        throw std::invalid_argument(
            "in_good_set: needs both signs present and some sign repeated among alive particles");
    }
    double c = good_set_constant(config.alive_count());
    return *ext.d_same >= c * *ext.d_opp && *ext.d_opp > 0.0;
}

ClusterSummary summarize_cluster(const Configuration& config, const SignVector& signs,
                                 double gamma, std::span<const std::size_t> K) {
    ClusterSummary s;
    s.index_set.assign(K.begin(), K.end());
    std::sort(s.index_set.begin(), s.index_set.end());
    s.mean = local_mean(config, K);
    s.dispersion = local_dispersion(config, K);
    s.bessel_dim = bessel_dimension(K, signs, gamma);
    return s;
}

}  // namespace sc
