#include "ironq/rbsq.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ironq/optim.hpp"
#include "ironq/special.hpp"

namespace ironq {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double beta_from_eta(const Link& link, double eta) {
  switch (link.family) {
    case LinkFamily::Identity:
      return eta > 0.0 ? eta : std::numeric_limits<double>::quiet_NaN();
    case LinkFamily::Log:
      return std::exp(eta);
    case LinkFamily::Sqrt:
      return eta > 0.0 ? eta * eta : std::numeric_limits<double>::quiet_NaN();
  }
  return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

double rho(double u, double tau) {
  if (!(u > 0.0) || !std::isfinite(u)) {
    throw std::domain_error("rho: require u > 0");
  }
  const double z = (tau == 0.5) ? 0.0 : special::normal_quantile(tau);
  const double w = u * z;
  if (w >= 0.0) {
    const double s = w + std::sqrt(w * w + 4.0);
    return 0.25 * s * s;
  }
  const double d = std::sqrt(w * w + 4.0) - w;
  return 4.0 / (d * d);
}

void RbsqParams::validate() const {
  if (!(q_tau > 0.0) || !(lambda > 0.0) || !(tau > 0.0) || !(tau < 1.0) ||
      !std::isfinite(q_tau) || !std::isfinite(lambda)) {
    throw std::invalid_argument("RbsqParams: require q_tau, lambda > 0, tau in (0,1)");
  }
}

IronParams RbsqParams::to_iron() const {
  validate();
  IronParams p;
  p.beta = q_tau / rho(lambda, tau);
  p.lambda = lambda;
  p.alpha = 1.0;
  p.kernel = Kernel::normal();
  return p;
}

FitResult rbsq_fit(const std::vector<double>& y, const Eigen::MatrixXd& X,
                   const Link& link, double tau, const FitOptions& options) {
  // Spec carries the shared invariants (rank, n > p, tau); alpha is 1 via
  // tau = 0.5 and the actual quantile level enters through rho below.
  RegressionSpec base = RegressionSpec::make(X, 0.5, link, Kernel::normal());
  if (!(tau > 0.0) || !(tau < 1.0)) {
    throw std::invalid_argument("rbsq_fit: tau must lie in (0,1)");
  }
  if (y.size() != base.n()) {
    throw std::invalid_argument("rbsq_fit: y length does not match design rows");
  }
  for (const double v : y) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw std::invalid_argument("rbsq_fit: responses must be positive finite");
    }
  }

  const std::size_t p = base.p();
  const std::size_t q = p + 1;
  const double alpha = 1.0;
  const Kernel kernel = Kernel::normal();

  const Objective objective = [&](const Eigen::VectorXd& th) -> double {
    const Eigen::VectorXd psi = th.head(static_cast<Eigen::Index>(p));
    const double lambda = std::exp(th[static_cast<Eigen::Index>(p)]);
    if (!std::isfinite(lambda) || lambda <= 0.0) return kNegInf;
    const double r = rho(lambda, tau);
    const Eigen::VectorXd eta = X * psi;
    double sum = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
      const double q_i = beta_from_eta(link, eta[static_cast<Eigen::Index>(i)]);
      if (!std::isfinite(q_i) || q_i <= 0.0) return kNegInf;
      const double beta_i = q_i / r;
      const double a = (y[i] - beta_i) / (lambda * std::sqrt(y[i] * beta_i));
      const double logpdf = kernel_log_density(kernel, a) +
                            (alpha - 1.0) * kernel_logcdf(kernel, a) +
                            std::log(alpha) - 1.5 * std::log(y[i]) +
                            std::log(y[i] + beta_i) - std::log(2.0 * lambda) -
                            0.5 * std::log(beta_i);
      sum += logpdf;
    }
    return std::isfinite(sum) ? sum : kNegInf;
  };

  // OLS seed on the link scale, mapped to the target quantile through the
  // rho ratio at the lambda initializer (rho_{0.5} = 1, so the factor is
  // just rho_tau).
  Eigen::VectorXd psi0 = options.init_gamma.value_or(detail::ols_init(y, base));
  const double lambda0 = options.init_lambda.value_or(1.0);
  const double r0 = rho(lambda0, tau);
  switch (link.family) {
    case LinkFamily::Identity:
      psi0 *= r0;
      break;
    case LinkFamily::Sqrt:
      psi0 *= std::sqrt(r0);
      break;
    case LinkFamily::Log: {
      const auto icol = find_intercept_column(X);
      if (icol.has_value()) psi0[*icol] += std::log(r0);
      break;
    }
  }

  Eigen::VectorXd theta0(static_cast<Eigen::Index>(q));
  theta0.head(static_cast<Eigen::Index>(p)) = psi0;
  theta0[static_cast<Eigen::Index>(p)] = std::log(lambda0);

  // Same feasibility repair as fit(): shrink an infeasible OLS seed toward a
  // flat median fit.
  if (!std::isfinite(objective(theta0)) && !options.init_gamma.has_value()) {
    const Eigen::VectorXd g_flat = detail::flat_init(y, base);
    for (const double c : {0.75, 0.5, 0.25, 0.0}) {
      theta0.head(static_cast<Eigen::Index>(p)) =
          c * psi0 + (1.0 - c) * g_flat;
      if (std::isfinite(objective(theta0))) break;
    }
  }

  OptimOptions oopts;
  oopts.max_iter = options.max_iter;
  oopts.grad_tol = options.grad_tol;
  oopts.step_tol = options.step_tol;
  const OptimResult opt = maximize(objective, theta0, oopts);

  FitResult out;
  out.model = "rbsq";
  out.gamma = opt.x.head(static_cast<Eigen::Index>(p));
  out.lambda = std::exp(opt.x[static_cast<Eigen::Index>(p)]);
  out.tau = tau;
  out.kernel = kernel;
  out.link = link;
  out.loglik = opt.value;
  out.converged = opt.converged;
  out.iterations = opt.iterations;
  out.grad_inf_norm = opt.grad_inf_norm;
  out.n = base.n();
  out.p = p;
  out.q = q;
  for (std::size_t j = 0; j < p; ++j) {
    out.param_names.push_back("psi" + std::to_string(j + 1));
  }
  out.param_names.push_back("lambda");
  const auto ic = information_criteria(out.loglik, q, out.n);
  out.aic = ic.aic;
  out.bic = ic.bic;

  out.vcov_ok = false;
  out.vcov = Eigen::MatrixXd::Constant(static_cast<Eigen::Index>(q),
                                       static_cast<Eigen::Index>(q),
                                       std::numeric_limits<double>::quiet_NaN());
  out.se = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(q),
                                     std::numeric_limits<double>::quiet_NaN());
  if (std::isfinite(opt.value)) {
    Eigen::VectorXd jac = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(q));
    jac[static_cast<Eigen::Index>(p)] = out.lambda;
    out.vcov_ok =
        detail::observed_info_vcov(objective, opt.x, jac, &out.vcov, &out.se);
  }
  return out;
}

std::optional<Eigen::Index> find_intercept_column(const Eigen::MatrixXd& X) {
  for (Eigen::Index j = 0; j < X.cols(); ++j) {
    if ((X.col(j).array() == 1.0).all()) return j;
  }
  return std::nullopt;
}

Eigen::VectorXd map_across_tau(const FitResult& fit_result, double tau_star,
                               std::optional<Eigen::Index> intercept_col) {
  if (fit_result.model != "rbsq") {
    throw std::invalid_argument("map_across_tau: requires an RBSQ fit");
  }
  if (!fit_result.converged) {
    throw std::logic_error("map_across_tau: fit did not converge");
  }
  if (!(tau_star > 0.0) || !(tau_star < 1.0)) {
    throw std::domain_error("map_across_tau: tau_star must lie in (0,1)");
  }
  if (!intercept_col.has_value() ||
      *intercept_col >= fit_result.gamma.size() || *intercept_col < 0) {
    throw std::invalid_argument(
        "map_across_tau: design must include an intercept column");
  }
  const double lambda = fit_result.lambda;
  const double r_from = rho(lambda, fit_result.tau);
  const double r_to = rho(lambda, tau_star);

  Eigen::VectorXd psi = fit_result.gamma;
  switch (fit_result.link.family) {
    case LinkFamily::Log:
      psi[*intercept_col] += std::log(r_to) - std::log(r_from);
      break;
    case LinkFamily::Identity:
      psi *= r_to / r_from;
      break;
    case LinkFamily::Sqrt:
      psi *= std::sqrt(r_to / r_from);
      break;
  }
  Eigen::VectorXd out(psi.size() + 1);
  out.head(psi.size()) = psi;
  out[psi.size()] = lambda;
  return out;
}

}  // namespace ironq
