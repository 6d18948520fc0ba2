#include "ironq/regression.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ironq/optim.hpp"
#include "ironq/parallel.hpp"

namespace ironq {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kRankTol = 1e-10;

// Cheap feasibility map eta -> beta; NaN marks an invalid proposal (the
// likelihood turns it into the -inf sentinel).
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

struct DecodedTheta {
  Eigen::VectorXd gamma;
  double lambda;
  Kernel kernel;
  bool ok;
};

DecodedTheta decode_unconstrained(const Eigen::VectorXd& theta_unc,
                                  const RegressionSpec& spec) {
  const std::size_t p = spec.p();
  DecodedTheta d;
  d.gamma = theta_unc.head(static_cast<Eigen::Index>(p));
  d.lambda = std::exp(theta_unc[static_cast<Eigen::Index>(p)]);
  d.kernel = spec.kernel;
  if (spec.estimate_shape) {
    d.kernel.shape = std::exp(theta_unc[static_cast<Eigen::Index>(p) + 1]);
  }
  d.ok = std::isfinite(d.lambda) && d.lambda > 0.0 &&
         (!d.kernel.wants_shape() ||
          (std::isfinite(*d.kernel.shape) && *d.kernel.shape >= 0.1));
  return d;
}

// Single-observation log-density with every input assumed pre-screened;
// never throws, returns -inf/NaN on numerical trouble.
double obs_logpdf(double y_i, double beta_i, double lambda, double alpha,
                  const Kernel& kernel) {
  const double a = (y_i - beta_i) / (lambda * std::sqrt(y_i * beta_i));
  const double specific = kernel_log_density(kernel, a) +
                          (alpha - 1.0) * kernel_logcdf(kernel, a);
  const double common = std::log(alpha) - 1.5 * std::log(y_i) +
                        std::log(y_i + beta_i) - std::log(2.0 * lambda) -
                        0.5 * std::log(beta_i);
  return specific + common;
}

template <bool Parallel>
double loglik_impl(const Eigen::VectorXd& theta_unc,
                   const std::vector<double>& y, const RegressionSpec& spec) {
  const std::size_t n = spec.n();
  const std::size_t expected =
      spec.p() + 1 + (spec.estimate_shape ? 1 : 0);
  if (y.size() != n) {
    throw std::invalid_argument("loglik: y length does not match design rows");
  }
  if (static_cast<std::size_t>(theta_unc.size()) != expected) {
    throw std::invalid_argument("loglik: theta has wrong dimension");
  }
  const DecodedTheta d = decode_unconstrained(theta_unc, spec);
  if (!d.ok) return kNegInf;
  const double alpha = alpha_tau(spec.tau);

  const Eigen::VectorXd eta = spec.X * d.gamma;
  std::vector<double> beta(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double b = beta_from_eta(spec.link, eta[static_cast<Eigen::Index>(i)]);
    if (!std::isfinite(b) || b <= 0.0) return kNegInf;
    beta[i] = b;
  }

  if constexpr (!Parallel) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      sum += obs_logpdf(y[i], beta[i], d.lambda, alpha, d.kernel);
    }
    return std::isfinite(sum) ? sum : kNegInf;
  } else {
    // Per-observation terms are filled concurrently, then reduced in index
    // order, so the total is bit-identical to the serial loop for any thread
    // count.
    std::vector<double> terms(n);
    const double lambda = d.lambda;
    const Kernel kernel = d.kernel;
    par::parallel_for(n, [&](std::size_t i) {
      terms[i] = obs_logpdf(y[i], beta[i], lambda, alpha, kernel);
    });
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) sum += terms[i];
    return std::isfinite(sum) ? sum : kNegInf;
  }
}

void check_responses(const std::vector<double>& y) {
  std::size_t bad = 0;
  for (const double v : y) {
    if (!(v > 0.0) || !std::isfinite(v)) ++bad;
  }
  if (bad > 0) {
    throw std::invalid_argument("fit: " + std::to_string(bad) +
                                " responses are not positive finite reals");
  }
}

}  // namespace

RegressionSpec RegressionSpec::make(Eigen::MatrixXd X, double tau, Link link,
                                    Kernel kernel) {
  RegressionSpec spec;
  spec.X = std::move(X);
  spec.tau = tau;
  spec.link = link;
  spec.kernel = kernel;
  spec.estimate_shape = kernel.wants_shape();
  spec.validate();
  return spec;
}

void RegressionSpec::validate() const {
  kernel.validate();
  if (!(tau > 0.0) || !(tau < 1.0)) {
    throw std::invalid_argument("RegressionSpec: tau must lie in (0,1)");
  }
  if (X.rows() <= X.cols() || X.cols() < 1) {
    throw std::invalid_argument("RegressionSpec: need n > p >= 1");
  }
  if (!X.allFinite()) {
    throw std::invalid_argument("RegressionSpec: design contains non-finite values");
  }
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(X);
  const auto& sv = svd.singularValues();
  if (sv[sv.size() - 1] <= kRankTol * sv[0]) {
    throw std::invalid_argument(
        "RegressionSpec: design matrix is rank deficient (relative singular "
        "value below 1e-10)");
  }
  if (estimate_shape && !kernel.wants_shape()) {
    throw std::invalid_argument(
        "RegressionSpec: estimate_shape set for a kernel without shape");
  }
}

Eigen::VectorXd ThetaLayout::to_natural(const Eigen::VectorXd& unc) const {
  Eigen::VectorXd nat = unc;
  nat[static_cast<Eigen::Index>(p)] = std::exp(unc[static_cast<Eigen::Index>(p)]);
  if (has_shape) {
    nat[static_cast<Eigen::Index>(p) + 1] =
        std::exp(unc[static_cast<Eigen::Index>(p) + 1]);
  }
  return nat;
}

Eigen::VectorXd ThetaLayout::to_unconstrained(const Eigen::VectorXd& nat) const {
  Eigen::VectorXd unc = nat;
  unc[static_cast<Eigen::Index>(p)] = std::log(nat[static_cast<Eigen::Index>(p)]);
  if (has_shape) {
    unc[static_cast<Eigen::Index>(p) + 1] =
        std::log(nat[static_cast<Eigen::Index>(p) + 1]);
  }
  return unc;
}

Eigen::VectorXd FitResult::theta() const {
  Eigen::VectorXd t(static_cast<Eigen::Index>(q));
  t.head(static_cast<Eigen::Index>(p)) = gamma;
  t[static_cast<Eigen::Index>(p)] = lambda;
  if (shape.has_value()) t[static_cast<Eigen::Index>(p) + 1] = *shape;
  return t;
}

double loglik(const Eigen::VectorXd& theta_unc, const std::vector<double>& y,
              const RegressionSpec& spec) {
  return loglik_impl<true>(theta_unc, y, spec);
}

double loglik_serial(const Eigen::VectorXd& theta_unc,
                     const std::vector<double>& y,
                     const RegressionSpec& spec) {
  return loglik_impl<false>(theta_unc, y, spec);
}

namespace detail {

double case_logpdf(const Eigen::VectorXd& theta_nat, double y_i,
                   const Eigen::RowVectorXd& x_i, const RegressionSpec& spec) {
  const std::size_t p = spec.p();
  const double eta = x_i * theta_nat.head(static_cast<Eigen::Index>(p));
  const double beta_i = beta_from_eta(spec.link, eta);
  const double lambda = theta_nat[static_cast<Eigen::Index>(p)];
  Kernel kernel = spec.kernel;
  if (spec.estimate_shape) {
    kernel.shape = theta_nat[static_cast<Eigen::Index>(p) + 1];
  }
  if (!std::isfinite(beta_i) || beta_i <= 0.0 || !(lambda > 0.0) ||
      (kernel.wants_shape() && !(*kernel.shape >= 0.1))) {
    return kNegInf;
  }
  return obs_logpdf(y_i, beta_i, lambda, alpha_tau(spec.tau), kernel);
}

Eigen::VectorXd case_score(const Eigen::VectorXd& theta_nat, double y_i,
                           const Eigen::RowVectorXd& x_i,
                           const RegressionSpec& spec) {
  const Eigen::Index q = theta_nat.size();
  Eigen::VectorXd g(q);
  Eigen::VectorXd t = theta_nat;
  for (Eigen::Index j = 0; j < q; ++j) {
    const double h = 1e-6 * (1.0 + std::fabs(theta_nat[j]));
    t[j] = theta_nat[j] + h;
    const double fp = case_logpdf(t, y_i, x_i, spec);
    t[j] = theta_nat[j] - h;
    const double fm = case_logpdf(t, y_i, x_i, spec);
    t[j] = theta_nat[j];
    g[j] = (fp - fm) / (2.0 * h);
  }
  return g;
}

Eigen::VectorXd ols_init(const std::vector<double>& y,
                         const RegressionSpec& spec) {
  const std::size_t n = spec.n();
  double min_pos = std::numeric_limits<double>::infinity();
  for (const double v : y) {
    if (v > 0.0) min_pos = std::min(min_pos, v);
  }
  Eigen::VectorXd z(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    z[static_cast<Eigen::Index>(i)] =
        link_apply(spec.link, std::max(y[i], 0.5 * min_pos));
  }
  return spec.X.colPivHouseholderQr().solve(z);
}

Eigen::VectorXd flat_init(const std::vector<double>& y,
                          const RegressionSpec& spec) {
  std::vector<double> sorted = y;
  std::sort(sorted.begin(), sorted.end());
  const double med = sorted[sorted.size() / 2];
  const Eigen::VectorXd target = Eigen::VectorXd::Constant(
      static_cast<Eigen::Index>(spec.n()), link_apply(spec.link, med));
  return spec.X.colPivHouseholderQr().solve(target);
}

bool observed_info_vcov(const std::function<double(const Eigen::VectorXd&)>& objective,
                        const Eigen::VectorXd& x_opt, const Eigen::VectorXd& jac,
                        Eigen::MatrixXd* vcov_out, Eigen::VectorXd* se_out) {
  for (const double step : {1e-4, 0.02, 0.05}) {
    const Eigen::MatrixXd hess = fd_hessian(objective, x_opt, step);
    if (!hess.allFinite()) continue;
    const Eigen::FullPivLU<Eigen::MatrixXd> lu(Eigen::MatrixXd(-hess));
    if (!lu.isInvertible()) continue;
    Eigen::MatrixXd vcov_nat = jac.asDiagonal() * lu.inverse() * jac.asDiagonal();
    vcov_nat = 0.5 * (vcov_nat + vcov_nat.transpose()).eval();
    if (!vcov_nat.allFinite() || vcov_nat.diagonal().minCoeff() < 0.0) continue;
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(vcov_nat);
    const double max_eig = es.eigenvalues().maxCoeff();
    if (es.eigenvalues().minCoeff() < -1e-8 * std::max(1.0, max_eig)) continue;
    *vcov_out = vcov_nat;
    *se_out = vcov_nat.diagonal().cwiseSqrt();
    return true;
  }
  return false;
}

}  // namespace detail

FitResult fit(const std::vector<double>& y, const RegressionSpec& spec,
              const FitOptions& options) {
  spec.validate();
  if (y.size() != spec.n()) {
    throw std::invalid_argument("fit: y length does not match design rows");
  }
  check_responses(y);

  const std::size_t p = spec.p();
  const ThetaLayout layout{p, spec.estimate_shape};
  const std::size_t q = layout.q();

  Eigen::VectorXd theta0(static_cast<Eigen::Index>(q));
  theta0.head(static_cast<Eigen::Index>(p)) =
      options.init_gamma.value_or(detail::ols_init(y, spec));
  theta0[static_cast<Eigen::Index>(p)] = std::log(options.init_lambda.value_or(1.0));
  if (spec.estimate_shape) {
    theta0[static_cast<Eigen::Index>(p) + 1] = std::log(options.init_shape.value_or(
        Kernel::default_shape(spec.kernel.family)));
  }

  const Objective objective = [&](const Eigen::VectorXd& th) {
    return loglik(th, y, spec);
  };

  // Heavy-tailed responses can push the OLS seed outside the feasible set
  // (some beta_i <= 0 under the identity link). Shrink toward a flat
  // median-quantile fit until the likelihood is finite.
  if (!std::isfinite(objective(theta0)) && !options.init_gamma.has_value()) {
    const Eigen::VectorXd g_ols = theta0.head(static_cast<Eigen::Index>(p));
    const Eigen::VectorXd g_flat = detail::flat_init(y, spec);
    for (const double c : {0.75, 0.5, 0.25, 0.0}) {
      theta0.head(static_cast<Eigen::Index>(p)) = c * g_ols + (1.0 - c) * g_flat;
      if (std::isfinite(objective(theta0))) break;
    }
  }

  OptimOptions oopts;
  oopts.max_iter = options.max_iter;
  oopts.grad_tol = options.grad_tol;
  oopts.step_tol = options.step_tol;
  const OptimResult opt = maximize(objective, theta0, oopts);

  FitResult out;
  out.model = "riron";
  out.gamma = opt.x.head(static_cast<Eigen::Index>(p));
  out.lambda = std::exp(opt.x[static_cast<Eigen::Index>(p)]);
  if (spec.estimate_shape) {
    out.shape = std::exp(opt.x[static_cast<Eigen::Index>(p) + 1]);
  }
  out.tau = spec.tau;
  out.kernel = spec.kernel;
  if (spec.estimate_shape) out.kernel.shape = out.shape;
  out.link = spec.link;
  out.loglik = opt.value;
  out.converged = opt.converged;
  out.iterations = opt.iterations;
  out.grad_inf_norm = opt.grad_inf_norm;
  out.n = spec.n();
  out.p = p;
  out.q = q;

  out.param_names.reserve(q);
  for (std::size_t j = 0; j < p; ++j) {
    out.param_names.push_back("gamma" + std::to_string(j + 1));
  }
  out.param_names.push_back("lambda");
  if (spec.estimate_shape) out.param_names.push_back("shape");

  const auto ic = information_criteria(out.loglik, q, out.n);
  out.aic = ic.aic;
  out.bic = ic.bic;

  // Observed-information variance: inverse of -Hessian on the optimizer
  // scale, then the delta method onto (gamma, lambda[, shape]).
  out.vcov_ok = false;
  out.vcov = Eigen::MatrixXd::Constant(static_cast<Eigen::Index>(q),
                                       static_cast<Eigen::Index>(q),
                                       std::numeric_limits<double>::quiet_NaN());
  out.se = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(q),
                                     std::numeric_limits<double>::quiet_NaN());
  if (std::isfinite(opt.value)) {
    Eigen::VectorXd jac = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(q));
    jac[static_cast<Eigen::Index>(p)] = out.lambda;
    if (spec.estimate_shape) jac[static_cast<Eigen::Index>(p) + 1] = *out.shape;
    out.vcov_ok =
        detail::observed_info_vcov(objective, opt.x, jac, &out.vcov, &out.se);
    out.vcov_method = out.vcov_ok ? "observed_information" : "";
  }
  if (!out.vcov_ok && std::isfinite(opt.value)) {
    // Outer-product-of-gradients (BHHH) fallback. Kernels with a density
    // cusp (exponential power, exponent <= 1) interpolate observations at
    // the optimum, where the finite-difference Hessian picks up the cusp
    // spikes instead of the statistical curvature; the score outer product
    // stays positive semidefinite.
    const Eigen::VectorXd theta_nat = out.theta();
    Eigen::MatrixXd opg = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(q),
                                                static_cast<Eigen::Index>(q));
    bool usable = true;
    for (std::size_t i = 0; i < out.n && usable; ++i) {
      const Eigen::VectorXd s = detail::case_score(
          theta_nat, y[i], spec.X.row(static_cast<Eigen::Index>(i)), spec);
      usable = s.allFinite();
      opg += s * s.transpose();
    }
    if (usable) {
      const Eigen::FullPivLU<Eigen::MatrixXd> lu(opg);
      if (lu.isInvertible()) {
        Eigen::MatrixXd vcov_nat = lu.inverse();
        vcov_nat = 0.5 * (vcov_nat + vcov_nat.transpose()).eval();
        if (vcov_nat.allFinite() && vcov_nat.diagonal().minCoeff() >= 0.0) {
          out.vcov = vcov_nat;
          out.se = vcov_nat.diagonal().cwiseSqrt();
          out.vcov_ok = true;
          out.vcov_method = "opg";
        }
      }
    }
  }
  return out;
}

Prediction predict_quantile(const FitResult& fit_result,
                            const Eigen::VectorXd& x_new) {
  if (!fit_result.converged) {
    throw std::logic_error("predict_quantile: fit did not converge");
  }
  if (static_cast<std::size_t>(x_new.size()) != fit_result.p) {
    throw std::invalid_argument("predict_quantile: profile has wrong length");
  }
  const double eta = x_new.dot(fit_result.gamma);
  const double estimate = link_inverse(fit_result.link, eta);
  double se = std::numeric_limits<double>::quiet_NaN();
  if (fit_result.vcov_ok) {
    const Eigen::MatrixXd gamma_block = fit_result.vcov.topLeftCorner(
        static_cast<Eigen::Index>(fit_result.p),
        static_cast<Eigen::Index>(fit_result.p));
    const double var_eta = x_new.dot(gamma_block * x_new);
    if (var_eta >= 0.0) {
      se = std::sqrt(var_eta) / std::fabs(link_derivative(fit_result.link, estimate));
    }
  }
  return {estimate, se};
}

InformationCriteria information_criteria(double loglik_value, std::size_t q,
                                         std::size_t n) {
  const double qd = static_cast<double>(q);
  return {-2.0 * loglik_value + 2.0 * qd,
          -2.0 * loglik_value + qd * std::log(static_cast<double>(n))};
}

}  // namespace ironq
