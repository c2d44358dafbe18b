#pragma once

#include <cstddef>
#include <vector>

namespace relcausal {

// Two-sided normal tail: P(|Z| >= |z|).
double normal_two_sided_p(double z);

// Upper tail of the chi-squared distribution with df degrees of freedom.
double chi_squared_sf(double x, double df);

// Regularized upper incomplete gamma Q(a, x).
double gamma_q(double a, double x);

struct MeanCov {
    std::vector<double> mean;
    std::vector<std::vector<double>> cov;  // unbiased (n-1) normalization
};

MeanCov mean_and_covariance(const std::vector<const std::vector<double>*>& columns);

// In-place Gauss-Jordan inverse; returns false when the matrix is
// (numerically) singular.
bool invert_in_place(std::vector<std::vector<double>>& m);

}  // namespace relcausal
