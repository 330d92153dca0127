#include "sc/core.hpp"

#include <algorithm>
#include <sstream>

namespace sc {

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    std::uint64_t z = master + (index + 1) * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

SignVector::SignVector(std::vector<int> signs) : signs_(std::move(signs)) {
    if (signs_.empty()) throw std::invalid_argument("SignVector: need at least one charge");
    for (int s : signs_) {
        if (s != 1 && s != -1) {
            throw std::invalid_argument("SignVector: every entry must be -1 or +1");
        }
    }
}

int SignVector::net_charge() const {
    int q = 0;
    for (int s : signs_) q += s;
    return q;
}

Configuration Configuration::all_alive(std::vector<Vec2> pts) {
    Configuration c;
    c.alive.assign(pts.size(), true);
    c.positions = std::move(pts);
    return c;
}

std::size_t Configuration::alive_count() const {
    return static_cast<std::size_t>(std::count(alive.begin(), alive.end(), true));
}

std::vector<std::size_t> Configuration::alive_indices() const {
    std::vector<std::size_t> idx;
    idx.reserve(size());
    for (std::size_t i = 0; i < size(); ++i) {
        if (alive[i]) idx.push_back(i);
    }
    return idx;
}

std::optional<std::pair<std::size_t, std::size_t>> Configuration::coincident_alive_pair() const {
    for (std::size_t i = 0; i < size(); ++i) {
        if (!alive[i]) continue;
        for (std::size_t j = i + 1; j < size(); ++j) {
            if (!alive[j]) continue;
            if (positions[i] == positions[j]) return std::make_pair(i, j);
        }
    }
    return std::nullopt;
}

bool Partition::separates_signs(const SignVector& signs) const {
    for (const auto& block : blocks) {
        for (std::size_t i : block) {
            if (signs[i] != signs[block.front()]) return false;
        }
    }
    return true;
}

bool Partition::refines(const Partition& coarser) const {
    for (const auto& fine : blocks) {
        bool contained = false;
        for (const auto& big : coarser.blocks) {
            if (std::includes(big.begin(), big.end(), fine.begin(), fine.end())) {
                contained = true;
                break;
            }
        }
        if (!contained) return false;
    }
    return true;
}

std::string ValidationReport::joined() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < errors.size(); ++i) {
        if (i) os << "; ";
        os << errors[i];
    }
    return os.str();
}

ValidationReport validate(const SimParams& p) {
    ValidationReport rep;
    auto fail = [&rep](std::string msg) { rep.errors.push_back(std::move(msg)); };

    if (!(p.gamma > 0.0)) fail("gamma must be positive");
    if (!(p.t_end > 0.0)) fail("t_end must be positive");
    if (!(p.dt_max > 0.0)) fail("dt_max must be positive");
    if (!(p.eps_coll > 0.0)) fail("eps_coll must be positive");
    if (!(p.step_factor > 0.0 && p.step_factor <= 1.0)) fail("step_factor must be in (0, 1]");
    if (p.record_stride == 0) fail("record_stride must be a positive integer");

    if (p.signs.size() == 0) {
        fail("signs must contain at least one charge");
    } else if (p.signs.size() != p.x0.size()) {
        fail("signs and x0 must have the same length");
    }
    if (p.x0.size() != p.x0.alive.size()) fail("x0 positions and alive flags differ in length");
    if (p.x0.alive_count() == 0) fail("x0 must have at least one alive particle");
    if (p.x0.alive_count() != p.x0.size()) fail("x0 must start with every particle alive");
    if (auto pair = p.x0.coincident_alive_pair()) {
        std::ostringstream os;
        os << "x0: alive particles " << pair->first << " and " << pair->second
           << " share the same position";
        fail(os.str());
    }
    // Near the collision threshold the step law gives dt ~ step_factor * eps^2;
    // the floor must not let a single diffusion step overshoot the threshold.
    if (p.eps_coll > 0.0 && !(p.eps_coll * p.eps_coll >= 10.0 * p.step_factor * kDtFloor)) {
        fail("eps_coll too small: require eps_coll^2 >= 10 * step_factor * 1e-14");
    }
    return rep;
}

void validate_or_throw(const SimParams& params) {
    ValidationReport rep = validate(params);
    if (!rep.ok()) throw std::invalid_argument("invalid SimParams: " + rep.joined());
}

}  // namespace sc
