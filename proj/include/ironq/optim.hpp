#pragma once

#include <Eigen/Core>
#include <functional>

namespace ironq {

// Objective to MAXIMIZE. Returning -inf marks an infeasible proposal; the
// line search treats it as "too far" and backtracks.
using Objective = std::function<double(const Eigen::VectorXd&)>;

struct OptimOptions {
  int max_iter = 500;
  double grad_tol = 1e-6;   // max-norm of the gradient
  double step_tol = 1e-8;   // relative parameter change
};

struct OptimResult {
  Eigen::VectorXd x;
  double value = 0.0;
  bool converged = false;
  int iterations = 0;
  double grad_inf_norm = 0.0;
};

// Quasi-Newton (inverse-Hessian BFGS updates) with Armijo backtracking
// (c = 1e-4). A failed line search triggers 50 Nelder-Mead steps before the
// quasi-Newton iteration resumes with a reset Hessian. converged requires
// both tolerances to hold.
OptimResult maximize(const Objective& f, const Eigen::VectorXd& x0,
                     const OptimOptions& opts = {});

// Central finite-difference gradient, step = step_scale * (1 + |x_j|)
// per coordinate. Falls back to a one-sided difference when one side of the
// stencil is infeasible.
Eigen::VectorXd fd_gradient(const Objective& f, const Eigen::VectorXd& x,
                            double step_scale = 1e-6);

// Hessian by central differences of fd_gradient; symmetrized.
Eigen::MatrixXd fd_hessian(const Objective& f, const Eigen::VectorXd& x,
                           double step_scale = 1e-4);

// Simplex search; used as the wall-robust fallback and to recover a feasible
// start when the initializer lands on -inf.
OptimResult nelder_mead(const Objective& f, const Eigen::VectorXd& x0,
                        int max_iter, double scale = 0.1);

}  // namespace ironq
