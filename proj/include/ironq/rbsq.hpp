#pragma once

#include <Eigen/Core>
#include <optional>
#include <vector>

#include "ironq/iron.hpp"
#include "ironq/regression.hpp"

namespace ironq {

// Quantile factor of the Birnbaum-Saunders law: Q_tau = beta * rho_tau(lambda)
// with rho_tau(u) = 0.25 (u z_tau + sqrt(u^2 z_tau^2 + 4))^2, z_tau the
// standard normal quantile. rho_{0.5} is identically 1.
double rho(double u, double tau);

// Birnbaum-Saunders model parametrized by its tau-th quantile.
struct RbsqParams {
  double q_tau = 1.0;
  double lambda = 1.0;
  double tau = 0.5;

  void validate() const;
  // The same law as IronParams with alpha = 1 and the Normal kernel.
  IronParams to_iron() const;
};

// ML fit of link(Q_tau,i) = x_i' psi with lambda constant. Uses the shared
// IRON machinery at alpha = 1, Normal kernel, via the Q_tau <-> beta change
// of variables. The returned coefficients live on the Q_tau scale
// (param_names "psi1".."psip", "lambda"; model tag "rbsq").
FitResult rbsq_fit(const std::vector<double>& y, const Eigen::MatrixXd& X,
                   const Link& link, double tau, const FitOptions& options = {});

// Column of ones, if any.
std::optional<Eigen::Index> find_intercept_column(const Eigen::MatrixXd& X);

// Closed-form reparametrization of a converged RBSQ fit at fit.tau into the
// tau_star model: intercept shift by the log rho ratio under the log link,
// multiplicative rescale (or its square root) otherwise. Returns the mapped
// (psi, lambda) vector. The design must include an intercept.
Eigen::VectorXd map_across_tau(const FitResult& fit_result, double tau_star,
                               std::optional<Eigen::Index> intercept_col);

}  // namespace ironq
