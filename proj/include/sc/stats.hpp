#pragma once

#include <functional>
#include <span>
#include <vector>

namespace sc {

struct KsResult {
    double statistic{0.0};
    double p_value{1.0};
};

/// Asymptotic Kolmogorov survival function Q(lambda) = 2 sum (-1)^{j-1} e^{-2 j^2 lambda^2}.
double ks_survival(double lambda);

/// Two-sample KS test with the Stephens small-sample correction for the
/// asymptotic p-value. Handles ties (atoms) by evaluating the ECDF gap at
/// pooled jump points; with heavy ties the p-value is conservative.
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

/// One-sample KS test against a continuous CDF.
KsResult ks_one_sample(std::vector<double> sample, const std::function<double(double)>& cdf);

double normal_cdf(double x, double mean, double stddev);

double mean_of(std::span<const double> xs);
double variance_of(std::span<const double> xs);  // unbiased
double covariance_of(std::span<const double> xs, std::span<const double> ys);

/// sqrt(p(1-p)/n) for a Bernoulli fraction.
double binomial_se(double p_hat, std::size_t n);

}  // namespace sc
