#include "sc/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sc {

double ks_survival(double lambda) {
    if (lambda <= 0.0) return 1.0;
    double sum = 0.0;
    double sign = 1.0;
    for (int j = 1; j <= 200; ++j) {
        double term = sign * std::exp(-2.0 * j * j * lambda * lambda);
        sum += term;
        if (std::abs(term) < 1e-14 * std::abs(sum) || std::abs(term) < 1e-300) break;
        sign = -sign;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

namespace {

double stephens_lambda(double n_effective, double d) {
    double rn = std::sqrt(n_effective);
    return (rn + 0.12 + 0.11 / rn) * d;
}

}  // namespace

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("ks_two_sample: empty sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());

    double d = 0.0;
    std::size_t ia = 0, ib = 0;
    while (ia < a.size() && ib < b.size()) {
        double v = std::min(a[ia], b[ib]);
        while (ia < a.size() && a[ia] <= v) ++ia;
        while (ib < b.size() && b[ib] <= v) ++ib;
        d = std::max(d, std::abs(ia / na - ib / nb));
    }

    KsResult out;
    out.statistic = d;
    out.p_value = ks_survival(stephens_lambda(na * nb / (na + nb), d));
    return out;
}

KsResult ks_one_sample(std::vector<double> sample, const std::function<double(double)>& cdf) {
    if (sample.empty()) throw std::invalid_argument("ks_one_sample: empty sample");
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        double f = cdf(sample[i]);
        d = std::max(d, std::abs((i + 1) / n - f));
        d = std::max(d, std::abs(f - i / n));
    }
    KsResult out;
    out.statistic = d;
    out.p_value = ks_survival(stephens_lambda(n, d));
    return out;
}

double normal_cdf(double x, double mean, double stddev) {
    return 0.5 * std::erfc(-(x - mean) / (stddev * std::sqrt(2.0)));
}

double mean_of(std::span<const double> xs) {
    if (xs.empty()) throw std::invalid_argument("mean_of: empty sample");
    double s = 0.0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
}

double variance_of(std::span<const double> xs) {
    if (xs.size() < 2) throw std::invalid_argument("variance_of: need at least 2 samples");
    double m = mean_of(xs);
    double s = 0.0;
    for (double x : xs) s += (x - m) * (x - m);
    return s / static_cast<double>(xs.size() - 1);
}

double covariance_of(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size() || xs.size() < 2) {
        throw std::invalid_argument("covariance_of: need two equal samples of size >= 2");
    }
    double mx = mean_of(xs), my = mean_of(ys);
    double s = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) s += (xs[i] - mx) * (ys[i] - my);
    return s / static_cast<double>(xs.size() - 1);
}

double binomial_se(double p_hat, std::size_t n) {
    if (n == 0) throw std::invalid_argument("binomial_se: n must be positive");
    return std::sqrt(std::max(p_hat * (1.0 - p_hat), 0.0) / static_cast<double>(n));
}

}  // namespace sc
