#include "ironq/gof.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ironq/special.hpp"

namespace ironq {

namespace {

std::vector<double> sorted_normal_probs(const std::vector<double>& sample) {
  if (sample.empty()) throw std::invalid_argument("gof: empty sample");
  std::vector<double> u(sample.size());
  for (std::size_t i = 0; i < sample.size(); ++i) {
    if (!std::isfinite(sample[i])) {
      throw std::invalid_argument("gof: sample contains non-finite values");
    }
    u[i] = special::normal_cdf(sample[i]);
  }
  std::sort(u.begin(), u.end());
  return u;
}

}  // namespace

double ks_statistic(const std::vector<double>& sample) {
  const auto u = sorted_normal_probs(sample);
  const double n = static_cast<double>(u.size());
  double d = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double hi = (static_cast<double>(i) + 1.0) / n - u[i];
    const double lo = u[i] - static_cast<double>(i) / n;
    d = std::max({d, hi, lo});
  }
  return d;
}

double cvm_statistic(const std::vector<double>& sample) {
  const auto u = sorted_normal_probs(sample);
  const double n = static_cast<double>(u.size());
  double w2 = 1.0 / (12.0 * n);
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double mid = (2.0 * static_cast<double>(i) + 1.0) / (2.0 * n);
    w2 += (u[i] - mid) * (u[i] - mid);
  }
  return w2;
}

double ad_statistic(const std::vector<double>& sample) {
  const auto u = sorted_normal_probs(sample);
  const std::size_t n = u.size();
  const double nd = static_cast<double>(n);
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = 2.0 * static_cast<double>(i) + 1.0;
    s += w * (std::log(u[i]) + std::log1p(-u[n - 1 - i]));
  }
  return -nd - s / nd;
}

double kolmogorov_p(double lambda) {
  if (lambda <= 0.2) return 1.0;
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 == 1) ? term : -term;
    if (term < 1e-18) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

double cvm_asymptotic_cdf(double x) {
  // Csorgo-Faraway series; each term carries exp(-q) K_{1/4}(q) with
  // q = (4j+1)^2/(16x), so four or five terms exhaust double precision.
  if (x <= 0.0) return 0.0;
  if (x > 20.0) return 1.0;
  double sum = 0.0;
  for (int j = 0; j < 10; ++j) {
    const double y = 4.0 * j + 1.0;
    const double q = y * y / (16.0 * x);
    if (q > 700.0) continue;
    const double coeff = std::exp(special::log_gamma(j + 0.5) -
                                  special::log_gamma(j + 1.0)) /
                         (std::pow(M_PI, 1.5) * std::sqrt(x));
    const double term =
        coeff * std::sqrt(y) * std::exp(-q) * special::bessel_k_quarter(q);
    sum += (j % 2 == 0) ? term : -term;
    if (term < 1e-16) break;
  }
  return std::clamp(sum, 0.0, 1.0);
}

double ad_asymptotic_cdf(double z) {
  if (z <= 0.0) return 0.0;
  if (z < 2.0) {
    return std::pow(z, -0.5) * std::exp(-1.2337141 / z) *
           (2.00012 +
            (0.247105 -
             (0.0649821 - (0.0347962 - (0.011672 - 0.00168691 * z) * z) * z) *
                 z) *
                z);
  }
  return std::exp(
      -std::exp(1.0776 - (2.30695 -
                          (0.43424 - (0.082433 - (0.008056 - 0.0003146 * z) * z) * z) *
                              z) *
                             z));
}

TestResult ks_test(const std::vector<double>& sample) {
  const double d = ks_statistic(sample);
  const double n = static_cast<double>(sample.size());
  return {d, kolmogorov_p(std::sqrt(n) * d)};
}

TestResult cvm_test(const std::vector<double>& sample) {
  const double w2 = cvm_statistic(sample);
  const double n = static_cast<double>(sample.size());
  // Stephens' small-sample modification, then the asymptotic law.
  const double w2_mod = (w2 - 0.4 / n + 0.6 / (n * n)) * (1.0 + 1.0 / n);
  return {w2, std::clamp(1.0 - cvm_asymptotic_cdf(w2_mod), 0.0, 1.0)};
}

TestResult ad_test(const std::vector<double>& sample) {
  const double a2 = ad_statistic(sample);
  return {a2, std::clamp(1.0 - ad_asymptotic_cdf(a2), 0.0, 1.0)};
}

std::map<std::string, TestResult> normality_tests(
    const std::vector<double>& residuals) {
  if (residuals.size() < 8) {
    throw std::invalid_argument("normality_tests: require n >= 8");
  }
  return {{"ks", ks_test(residuals)},
          {"cvm", cvm_test(residuals)},
          {"ad", ad_test(residuals)}};
}

}  // namespace ironq
