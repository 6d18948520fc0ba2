#pragma once

#include <cstdint>
#include <vector>

#include "ironq/kernel.hpp"
#include "ironq/rng.hpp"

namespace ironq {

// Exponentiated Birnbaum-Saunders law with an elliptical kernel:
// CDF(t) = [F(a_t)]^alpha on t > 0, a_t = (sqrt(t/beta) - sqrt(beta/t))/lambda.
// With alpha = alpha_tau(tau), beta is exactly the tau-th quantile.
struct IronParams {
  double beta = 1.0;    // scale; the pinned quantile under alpha = alpha_tau
  double lambda = 1.0;  // shape
  double alpha = 1.0;   // exponent
  Kernel kernel = Kernel::normal();

  void validate() const;  // throws std::invalid_argument on non-finite/non-positive
};

// The exponent that pins beta to the tau-th quantile: -log(tau)/log(2).
double alpha_tau(double tau);

double iron_cdf(double t, const IronParams& p);
double iron_logcdf(double t, const IronParams& p);
double iron_pdf(double t, const IronParams& p);
double iron_logpdf(double t, const IronParams& p);

// The log-density split into a kernel-specific term and the term shared by
// every Birnbaum-Saunders-type model; their sum is iron_logpdf.
struct IronLogPdfParts {
  double specific;
  double common;
};
IronLogPdfParts iron_logpdf_parts(double t, const IronParams& p);

// Closed-form quantile: (beta/4)(lambda z + sqrt(lambda^2 z^2 + 4))^2 with
// z = F^{-1}(u^{1/alpha}); evaluated without cancellation for z < 0.
double iron_quantile(double u, const IronParams& p);

// Inverse-transform sampling; one uniform per draw, deterministic given the
// generator state.
std::vector<double> iron_sample(std::size_t n, const IronParams& p, Rng& rng);
std::vector<double> iron_sample(std::size_t n, const IronParams& p,
                                std::uint64_t seed);

}  // namespace ironq
