#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace ironq {

enum class KernelFamily { Normal, StudentT, Logistic, ExponentialPower, Cauchy };

// A standardized symmetric density on the real line, f(y) = k(y^2).
// StudentT carries degrees of freedom, ExponentialPower the exponent; the
// other families have no shape. Immutable and freely shareable.
struct Kernel {
  KernelFamily family = KernelFamily::Normal;
  std::optional<double> shape;

  static Kernel normal() { return {KernelFamily::Normal, std::nullopt}; }
  static Kernel student_t(double dof) { return {KernelFamily::StudentT, dof}; }
  static Kernel logistic() { return {KernelFamily::Logistic, std::nullopt}; }
  static Kernel exponential_power(double exponent) {
    return {KernelFamily::ExponentialPower, exponent};
  }
  static Kernel cauchy() { return {KernelFamily::Cauchy, std::nullopt}; }

  bool wants_shape() const {
    return family == KernelFamily::StudentT ||
           family == KernelFamily::ExponentialPower;
  }

  // Throws std::invalid_argument on a malformed kernel (shape missing,
  // spurious, non-finite, or below the 0.1 floor).
  void validate() const;

  // Config/CLI spelling: "normal", "t", "logistic", "ep", "cauchy",
  // case-insensitive, with shape as "t:4.0" / "ep:0.75". A bare "t" or "ep"
  // gets the default shape (4.0 and 2.0).
  static Kernel parse(std::string_view text);
  std::string name() const;

  // Default shape used when a family that wants one is named without it;
  // also the fit initializer.
  static double default_shape(KernelFamily family);
};

bool operator==(const Kernel& a, const Kernel& b);

// Standardized density f(y) = k(y^2) and friends. All pure; all validate the
// kernel and throw std::invalid_argument / std::domain_error on bad input.
double kernel_density(const Kernel& kernel, double y);
double kernel_log_density(const Kernel& kernel, double y);
double kernel_cdf(const Kernel& kernel, double x);
// log F(x), finite and accurate far into the left tail.
double kernel_logcdf(const Kernel& kernel, double x);
// F^{-1}(u) for u in (0,1). Closed form for Normal/Logistic/Cauchy; bracketed
// bisection/Newton hybrid (abs tol 1e-12) for StudentT and ExponentialPower.
double kernel_quantile(const Kernel& kernel, double u);

}  // namespace ironq
