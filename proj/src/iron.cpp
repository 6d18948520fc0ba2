#include "ironq/iron.hpp"

#include <cmath>
#include <stdexcept>

namespace ironq {

namespace {

constexpr double kLog2 = 0.69314718055994530942;

// a_t = (sqrt(t/beta) - sqrt(beta/t))/lambda, written as
// (t - beta)/(lambda sqrt(t beta)) to avoid cancellation near t = beta.
double standardize(double t, const IronParams& p) {
  return (t - p.beta) / (p.lambda * std::sqrt(t * p.beta));
}

void check_t(double t) {
  if (!(t > 0.0) || !std::isfinite(t)) {
    throw std::domain_error("iron: require t > 0 and finite");
  }
}

}  // namespace

void IronParams::validate() const {
  if (!(beta > 0.0) || !std::isfinite(beta) || !(lambda > 0.0) ||
      !std::isfinite(lambda) || !(alpha > 0.0) || !std::isfinite(alpha)) {
    throw std::invalid_argument(
        "IronParams: beta, lambda, alpha must be positive and finite");
  }
  kernel.validate();
}

double alpha_tau(double tau) {
  if (!(tau > 0.0) || !(tau < 1.0)) {
    throw std::domain_error("alpha_tau: require tau in (0,1)");
  }
  return -std::log(tau) / kLog2;
}

double iron_logcdf(double t, const IronParams& p) {
  p.validate();
  check_t(t);
  return p.alpha * kernel_logcdf(p.kernel, standardize(t, p));
}

double iron_cdf(double t, const IronParams& p) {
  return std::exp(iron_logcdf(t, p));
}

IronLogPdfParts iron_logpdf_parts(double t, const IronParams& p) {
  p.validate();
  check_t(t);
  const double a = standardize(t, p);
  const double specific = kernel_log_density(p.kernel, a) +
                          (p.alpha - 1.0) * kernel_logcdf(p.kernel, a);
  const double common = std::log(p.alpha) - 1.5 * std::log(t) +
                        std::log(t + p.beta) - std::log(2.0 * p.lambda) -
                        0.5 * std::log(p.beta);
  return {specific, common};
}

double iron_logpdf(double t, const IronParams& p) {
  const auto parts = iron_logpdf_parts(t, p);
  return parts.specific + parts.common;
}

double iron_pdf(double t, const IronParams& p) {
  return std::exp(iron_logpdf(t, p));
}

double iron_quantile(double u, const IronParams& p) {
  p.validate();
  if (!(u > 0.0) || !(u < 1.0)) {
    throw std::domain_error("iron_quantile: require u in (0,1)");
  }
  // u^{1/alpha} in log space; tau near 0 means alpha well above 1 and the
  // direct power would underflow first.
  const double v = std::exp(std::log(u) / p.alpha);
  const double z = kernel_quantile(p.kernel, v);
  const double w = p.lambda * z;
  if (w >= 0.0) {
    const double s = w + std::sqrt(w * w + 4.0);
    return 0.25 * p.beta * s * s;
  }
  // Negative branch: w + sqrt(w^2+4) = 4/(sqrt(w^2+4) - w), no cancellation.
  const double d = std::sqrt(w * w + 4.0) - w;
  return 4.0 * p.beta / (d * d);
}

std::vector<double> iron_sample(std::size_t n, const IronParams& p, Rng& rng) {
  p.validate();
  if (n < 1) throw std::invalid_argument("iron_sample: require n >= 1");
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = iron_quantile(rng.uniform01(), p);
  }
  return out;
}

std::vector<double> iron_sample(std::size_t n, const IronParams& p,
                                std::uint64_t seed) {
  Rng rng(seed);
  return iron_sample(n, p, rng);
}

}  // namespace ironq
