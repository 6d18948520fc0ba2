#pragma once

#include <map>
#include <string>
#include <vector>

namespace ironq {

struct TestResult {
  double statistic;
  double p_value;
};

// Statistics against the fully specified standard normal null (parameters
// known, not estimated). Defined for any n >= 1.
double ks_statistic(const std::vector<double>& sample);
double cvm_statistic(const std::vector<double>& sample);
double ad_statistic(const std::vector<double>& sample);

// P(K > lambda) for the asymptotic Kolmogorov law.
double kolmogorov_p(double lambda);
// Asymptotic CDF of n*omega^2 under the fully specified null.
double cvm_asymptotic_cdf(double x);
// Asymptotic CDF of the Anderson-Darling statistic (Marsaglia's adinf).
double ad_asymptotic_cdf(double z);

TestResult ks_test(const std::vector<double>& sample);
TestResult cvm_test(const std::vector<double>& sample);
TestResult ad_test(const std::vector<double>& sample);

// KS, CVM and AD against N(0,1); requires n >= 8 and finite input.
std::map<std::string, TestResult> normality_tests(
    const std::vector<double>& residuals);

}  // namespace ironq
