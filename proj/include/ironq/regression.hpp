#pragma once

#include <Eigen/Core>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ironq/iron.hpp"
#include "ironq/kernel.hpp"
#include "ironq/link.hpp"

namespace ironq {

struct FitOptions {
  int max_iter = 500;
  double grad_tol = 1e-6;
  double step_tol = 1e-8;
  std::optional<Eigen::VectorXd> init_gamma;
  std::optional<double> init_lambda;
  std::optional<double> init_shape;
};

// Design matrix, target quantile, link and kernel for one regression.
// estimate_shape defaults to "kernel carries a shape"; set it to false to fit
// with the shape pinned at the kernel's value.
struct RegressionSpec {
  Eigen::MatrixXd X;
  double tau = 0.5;
  Link link = Link::identity();
  Kernel kernel = Kernel::normal();
  bool estimate_shape = false;

  static RegressionSpec make(Eigen::MatrixXd X, double tau, Link link,
                             Kernel kernel);

  std::size_t n() const { return static_cast<std::size_t>(X.rows()); }
  std::size_t p() const { return static_cast<std::size_t>(X.cols()); }
  std::size_t q() const { return p() + 1 + (estimate_shape ? 1 : 0); }

  // n > p, full column rank (relative singular-value tolerance 1e-10),
  // tau in (0,1); throws std::invalid_argument.
  void validate() const;
};

// Free parameters are (gamma, log lambda[, log shape]); this maps between the
// optimizer scale and the natural scale.
struct ThetaLayout {
  std::size_t p = 0;
  bool has_shape = false;

  std::size_t q() const { return p + 1 + (has_shape ? 1 : 0); }
  Eigen::VectorXd to_natural(const Eigen::VectorXd& unconstrained) const;
  Eigen::VectorXd to_unconstrained(const Eigen::VectorXd& natural) const;
};

struct FitResult {
  std::string model = "riron";
  Eigen::VectorXd gamma;
  double lambda = 1.0;
  std::optional<double> shape;
  double tau = 0.5;
  Kernel kernel = Kernel::normal();
  Link link = Link::identity();

  double loglik = 0.0;
  double aic = 0.0;
  double bic = 0.0;
  bool converged = false;
  int iterations = 0;
  double grad_inf_norm = 0.0;
  std::size_t n = 0, p = 0, q = 0;

  // Natural-scale variance-covariance of (gamma, lambda[, shape]); only
  // meaningful when vcov_ok. A singular numerical Hessian leaves the
  // estimates in place, clears vcov_ok and NaNs the standard errors.
  Eigen::MatrixXd vcov;
  Eigen::VectorXd se;
  bool vcov_ok = false;

  std::vector<std::string> param_names;

  // (gamma..., lambda[, shape]) on the natural scale.
  Eigen::VectorXd theta() const;
};

// Log-likelihood at an unconstrained parameter vector. Proposals that imply a
// non-positive quantile parameter for any observation yield -inf (a sentinel
// the optimizer backtracks from), not an error. Dimension mismatches throw.
double loglik(const Eigen::VectorXd& theta_unc, const std::vector<double>& y,
              const RegressionSpec& spec);

// Reference implementation: one straight accumulation loop, no parallel path.
// Kept for equivalence tests and the benchmark.
double loglik_serial(const Eigen::VectorXd& theta_unc,
                     const std::vector<double>& y, const RegressionSpec& spec);

FitResult fit(const std::vector<double>& y, const RegressionSpec& spec,
              const FitOptions& options = {});

// Predicted tau-quantile for a covariate profile, with delta-method standard
// error. Requires a converged fit (std::logic_error otherwise).
struct Prediction {
  double estimate;
  double se;
};
Prediction predict_quantile(const FitResult& fit_result,
                            const Eigen::VectorXd& x_new);

struct InformationCriteria {
  double aic;
  double bic;
};
InformationCriteria information_criteria(double loglik_value, std::size_t q,
                                         std::size_t n);

namespace detail {
// Per-observation log-density as a function of the natural parameter vector
// (gamma, lambda[, shape]); NaN/-inf on infeasible values instead of throwing.
// Shared by the likelihood and the case-deletion diagnostics.
double case_logpdf(const Eigen::VectorXd& theta_nat, double y_i,
                   const Eigen::RowVectorXd& x_i, const RegressionSpec& spec);
// Central-difference score of one case at theta (natural scale).
Eigen::VectorXd case_score(const Eigen::VectorXd& theta_nat, double y_i,
                           const Eigen::RowVectorXd& x_i,
                           const RegressionSpec& spec);
Eigen::VectorXd ols_init(const std::vector<double>& y,
                         const RegressionSpec& spec);
// Coefficients of the best flat fit at the median response; the feasibility
// fallback when the OLS seed lands outside the parameter space.
Eigen::VectorXd flat_init(const std::vector<double>& y,
                          const RegressionSpec& spec);
// Inverse observed information at the optimum, mapped through the given
// (diagonal) Jacobian onto the natural scale. Retries with coarser
// finite-difference steps when the fine-step Hessian is cusp-contaminated
// (exponential-power kernels with exponent <= 1 interpolate observations).
// Returns false when no step yields a usable PSD matrix.
bool observed_info_vcov(const std::function<double(const Eigen::VectorXd&)>& objective,
                        const Eigen::VectorXd& x_opt, const Eigen::VectorXd& jac,
                        Eigen::MatrixXd* vcov_out, Eigen::VectorXd* se_out);
}  // namespace detail

}  // namespace ironq
