#include "ironq/kernel.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ironq/special.hpp"

namespace ironq {

namespace {

constexpr double kLogSqrt2Pi = 0.91893853320467274178;
constexpr double kMinShape = 0.1;
constexpr double kInvTol = 1e-12;

double t_log_density(double dof, double y) {
  return special::log_gamma(0.5 * (dof + 1.0)) - special::log_gamma(0.5 * dof) -
         0.5 * std::log(dof * M_PI) -
         0.5 * (dof + 1.0) * std::log1p(y * y / dof);
}

double ep_log_density(double kappa, double y) {
  return std::log(kappa) - std::log(2.0) - special::log_gamma(1.0 / kappa) -
         std::pow(std::fabs(y), kappa);
}

double t_cdf(double dof, double x) {
  if (x == 0.0) return 0.5;
  const double ib =
      special::reg_inc_beta(0.5 * dof, 0.5, dof / (dof + x * x));
  return (x > 0.0) ? 1.0 - 0.5 * ib : 0.5 * ib;
}

double ep_cdf(double kappa, double x) {
  if (x == 0.0) return 0.5;
  const double p =
      special::reg_lower_gamma(1.0 / kappa, std::pow(std::fabs(x), kappa));
  return (x > 0.0) ? 0.5 * (1.0 + p) : 0.5 * (1.0 - p);
}

// Inverse of a symmetric CDF by expanding bracket from [-1, 1] plus a
// bisection/Newton hybrid. Density-based Newton steps are attempted first and
// fall back to bisection whenever they leave the bracket.
template <class Cdf, class Pdf>
double invert_cdf(double u, const Cdf& cdf, const Pdf& pdf) {
  double lo = -1.0;
  double hi = 1.0;
  while (cdf(lo) > u) {
    hi = lo;
    lo *= 2.0;
    if (lo < -1e300) throw std::runtime_error("kernel_quantile: bracket blew up");
  }
  while (cdf(hi) < u) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e300) throw std::runtime_error("kernel_quantile: bracket blew up");
  }
  double x = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    const double f = cdf(x) - u;
    if (f > 0.0) {
      hi = x;
    } else {
      lo = x;
    }
    const double dens = pdf(x);
    double next;
    if (dens > 0.0 && std::isfinite(dens)) {
      next = x - f / dens;
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    } else {
      next = 0.5 * (lo + hi);
    }
    if (std::fabs(next - x) < kInvTol) return next;
    x = next;
    if (hi - lo < kInvTol) break;
  }
  return x;
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

}  // namespace

void Kernel::validate() const {
  if (wants_shape()) {
    if (!shape.has_value()) {
      throw std::invalid_argument("kernel: shape parameter required for " +
                                  name());
    }
    if (!std::isfinite(*shape) || *shape < kMinShape) {
      throw std::invalid_argument(
          "kernel: shape must be finite and >= 0.1, got " +
          std::to_string(*shape));
    }
  } else if (shape.has_value()) {
    throw std::invalid_argument("kernel: " + name() + " takes no shape");
  }
}

double Kernel::default_shape(KernelFamily family) {
  switch (family) {
    case KernelFamily::StudentT: return 4.0;
    case KernelFamily::ExponentialPower: return 2.0;
    default: return 0.0;
  }
}

Kernel Kernel::parse(std::string_view text) {
  const std::string s = lower(text);
  const auto colon = s.find(':');
  const std::string base = s.substr(0, colon);
  std::optional<double> shape;
  if (colon != std::string::npos) {
    try {
      shape = std::stod(s.substr(colon + 1));
    } catch (const std::exception&) {
      throw std::invalid_argument("kernel: cannot parse shape in '" +
                                  std::string(text) + "'");
    }
  }
  Kernel k;
  if (base == "normal" || base == "n") {
    k.family = KernelFamily::Normal;
  } else if (base == "t" || base == "student" || base == "studentt") {
    k.family = KernelFamily::StudentT;
  } else if (base == "logistic" || base == "l") {
    k.family = KernelFamily::Logistic;
  } else if (base == "ep" || base == "exponentialpower") {
    k.family = KernelFamily::ExponentialPower;
  } else if (base == "cauchy" || base == "c") {
    k.family = KernelFamily::Cauchy;
  } else {
    throw std::invalid_argument("kernel: unknown family '" + std::string(text) +
                                "'");
  }
  if (k.wants_shape()) {
    k.shape = shape.has_value() ? shape : std::optional<double>(default_shape(k.family));
  } else {
    k.shape = shape;  // validate() rejects a spurious shape below
  }
  k.validate();
  return k;
}

std::string Kernel::name() const {
  std::string base;
  switch (family) {
    case KernelFamily::Normal: base = "normal"; break;
    case KernelFamily::StudentT: base = "t"; break;
    case KernelFamily::Logistic: base = "logistic"; break;
    case KernelFamily::ExponentialPower: base = "ep"; break;
    case KernelFamily::Cauchy: base = "cauchy"; break;
  }
  if (wants_shape() && shape.has_value()) {
    base += ":" + std::to_string(*shape);
  }
  return base;
}

bool operator==(const Kernel& a, const Kernel& b) {
  return a.family == b.family && a.shape == b.shape;
}

double kernel_log_density(const Kernel& kernel, double y) {
  kernel.validate();
  if (!std::isfinite(y)) {
    throw std::domain_error("kernel_density: y must be finite");
  }
  switch (kernel.family) {
    case KernelFamily::Normal:
      return -0.5 * y * y - kLogSqrt2Pi;
    case KernelFamily::StudentT:
      return t_log_density(*kernel.shape, y);
    case KernelFamily::Logistic: {
      // e^{-y}/(1+e^{-y})^2, symmetric; |y| keeps the exponent negative.
      const double a = std::fabs(y);
      return -a - 2.0 * special::log1pexp(-a);
    }
    case KernelFamily::ExponentialPower:
      return ep_log_density(*kernel.shape, y);
    case KernelFamily::Cauchy:
      return -std::log(M_PI) - std::log1p(y * y);
  }
  throw std::logic_error("kernel_log_density: unreachable");
}

double kernel_density(const Kernel& kernel, double y) {
  return std::exp(kernel_log_density(kernel, y));
}

double kernel_cdf(const Kernel& kernel, double x) {
  kernel.validate();
  if (std::isnan(x)) throw std::domain_error("kernel_cdf: x is NaN");
  if (x == std::numeric_limits<double>::infinity()) return 1.0;
  if (x == -std::numeric_limits<double>::infinity()) return 0.0;
  switch (kernel.family) {
    case KernelFamily::Normal:
      return special::normal_cdf(x);
    case KernelFamily::StudentT:
      return t_cdf(*kernel.shape, x);
    case KernelFamily::Logistic:
      return 1.0 / (1.0 + std::exp(-x));
    case KernelFamily::ExponentialPower:
      return ep_cdf(*kernel.shape, x);
    case KernelFamily::Cauchy:
      return std::atan(x) / M_PI + 0.5;
  }
  throw std::logic_error("kernel_cdf: unreachable");
}

double kernel_logcdf(const Kernel& kernel, double x) {
  kernel.validate();
  if (std::isnan(x)) throw std::domain_error("kernel_logcdf: x is NaN");
  if (x >= 0.0) return std::log(kernel_cdf(kernel, x));
  switch (kernel.family) {
    case KernelFamily::Normal:
      return special::normal_logcdf(x);
    case KernelFamily::StudentT: {
      const double dof = *kernel.shape;
      return std::log(0.5) +
             special::log_reg_inc_beta(0.5 * dof, 0.5, dof / (dof + x * x));
    }
    case KernelFamily::Logistic:
      return x - special::log1pexp(x);
    case KernelFamily::ExponentialPower: {
      const double kappa = *kernel.shape;
      return std::log(0.5) +
             special::log_reg_upper_gamma(1.0 / kappa,
                                          std::pow(std::fabs(x), kappa));
    }
    case KernelFamily::Cauchy:
      // For x < 0: F(x) = atan(-1/x)/pi, which stays accurate as x -> -inf.
      return std::log(std::atan(-1.0 / x)) - std::log(M_PI);
  }
  throw std::logic_error("kernel_logcdf: unreachable");
}

double kernel_quantile(const Kernel& kernel, double u) {
  kernel.validate();
  if (!(u > 0.0) || !(u < 1.0)) {
    throw std::domain_error("kernel_quantile: require u in (0,1)");
  }
  if (u == 0.5) return 0.0;
  switch (kernel.family) {
    case KernelFamily::Normal:
      return special::normal_quantile(u);
    case KernelFamily::Logistic:
      return std::log(u) - std::log1p(-u);
    case KernelFamily::Cauchy:
      return std::tan(M_PI * (u - 0.5));
    case KernelFamily::StudentT:
    case KernelFamily::ExponentialPower:
      return invert_cdf(
          u, [&](double x) { return kernel_cdf(kernel, x); },
          [&](double x) { return kernel_density(kernel, x); });
  }
  throw std::logic_error("kernel_quantile: unreachable");
}

}  // namespace ironq
