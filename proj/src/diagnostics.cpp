#include "ironq/diagnostics.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "ironq/parallel.hpp"
#include "ironq/rng.hpp"
#include "ironq/special.hpp"

namespace ironq {

namespace {

constexpr double kClampEps = 1e-12;
const double kNaN = std::numeric_limits<double>::quiet_NaN();

void require_riron_converged(const FitResult& fit_result) {
  if (fit_result.model != "riron") {
    throw std::invalid_argument("diagnostics: expected a RIRON kernel fit");
  }
  if (!fit_result.converged) {
    throw std::logic_error("diagnostics: fit did not converge");
  }
}

RegressionSpec spec_from_fit(const FitResult& fit_result,
                             const Eigen::MatrixXd& X) {
  RegressionSpec spec;
  spec.X = X;
  spec.tau = fit_result.tau;
  spec.link = fit_result.link;
  spec.kernel = fit_result.kernel;
  spec.estimate_shape = fit_result.shape.has_value();
  return spec;
}

FitOptions warm_start(const FitResult& fit_result, const FitOptions& base) {
  FitOptions opts = base;
  opts.init_gamma = fit_result.gamma;
  opts.init_lambda = fit_result.lambda;
  if (fit_result.shape.has_value()) opts.init_shape = *fit_result.shape;
  return opts;
}

// Rows of X and entries of y with the given (sorted, unique) cases removed.
void drop_cases(const Eigen::MatrixXd& X, const std::vector<double>& y,
                const std::vector<std::size_t>& drop, Eigen::MatrixXd* x_out,
                std::vector<double>* y_out) {
  const std::size_t n = y.size();
  std::vector<bool> keep(n, true);
  for (const std::size_t i : drop) {
    if (i >= n) throw std::invalid_argument("diagnostics: case index out of range");
    keep[i] = false;
  }
  const std::size_t m = n - drop.size();
  x_out->resize(static_cast<Eigen::Index>(m), X.cols());
  y_out->clear();
  y_out->reserve(m);
  Eigen::Index r = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!keep[i]) continue;
    x_out->row(r++) = X.row(static_cast<Eigen::Index>(i));
    y_out->push_back(y[i]);
  }
}

// Per-case score of the log-density at theta (natural scale), by central
// differences.
Eigen::VectorXd case_score(const Eigen::VectorXd& theta,
                           const double y_i, const Eigen::RowVectorXd& x_i,
                           const RegressionSpec& spec) {
  const Eigen::Index q = theta.size();
  Eigen::VectorXd g(q);
  Eigen::VectorXd t = theta;
  for (Eigen::Index j = 0; j < q; ++j) {
    const double h = 1e-6 * (1.0 + std::fabs(theta[j]));
    t[j] = theta[j] + h;
    const double fp = detail::case_logpdf(t, y_i, x_i, spec);
    t[j] = theta[j] - h;
    const double fm = detail::case_logpdf(t, y_i, x_i, spec);
    t[j] = theta[j];
    g[j] = (fp - fm) / (2.0 * h);
  }
  return g;
}

Eigen::MatrixXd case_hessian(const Eigen::VectorXd& theta, const double y_i,
                             const Eigen::RowVectorXd& x_i,
                             const RegressionSpec& spec) {
  const Eigen::Index q = theta.size();
  Eigen::MatrixXd h_mat(q, q);
  Eigen::VectorXd t = theta;
  for (Eigen::Index j = 0; j < q; ++j) {
    const double h = 1e-4 * (1.0 + std::fabs(theta[j]));
    t[j] = theta[j] + h;
    const Eigen::VectorXd gp = case_score(t, y_i, x_i, spec);
    t[j] = theta[j] - h;
    const Eigen::VectorXd gm = case_score(t, y_i, x_i, spec);
    t[j] = theta[j];
    h_mat.col(j) = (gp - gm) / (2.0 * h);
  }
  return 0.5 * (h_mat + h_mat.transpose());
}

// Sample quantile with linear interpolation between order statistics.
double quantile_type7(std::vector<double> v, double prob) {
  std::sort(v.begin(), v.end());
  const double h = (static_cast<double>(v.size()) - 1.0) * prob;
  const std::size_t lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (h - std::floor(h)) * (v[hi] - v[lo]);
}

}  // namespace

std::vector<double> rqr(const FitResult& fit_result,
                        const std::vector<double>& y, const Eigen::MatrixXd& X,
                        std::vector<bool>* clamped) {
  require_riron_converged(fit_result);
  if (y.size() != static_cast<std::size_t>(X.rows()) ||
      static_cast<std::size_t>(X.cols()) != fit_result.p) {
    throw std::invalid_argument("rqr: data dimensions do not match the fit");
  }
  const double alpha = alpha_tau(fit_result.tau);
  const std::size_t n = y.size();
  std::vector<double> out(n);
  if (clamped) clamped->assign(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    const double eta = X.row(static_cast<Eigen::Index>(i)) * fit_result.gamma;
    const double beta_i = link_inverse(fit_result.link, eta);
    IronParams params{beta_i, fit_result.lambda, alpha, fit_result.kernel};
    double u = iron_cdf(y[i], params);
    if (u < kClampEps || u > 1.0 - kClampEps) {
      u = std::clamp(u, kClampEps, 1.0 - kClampEps);
      if (clamped) (*clamped)[i] = true;
    }
    out[i] = special::normal_quantile(u);
  }
  return out;
}

std::vector<double> gcd_exact(const FitResult& fit_result,
                              const std::vector<double>& y,
                              const Eigen::MatrixXd& X, std::vector<bool>* ok,
                              const FitOptions& refit_options) {
  require_riron_converged(fit_result);
  const std::size_t n = y.size();
  if (n < fit_result.q + 2) {
    throw std::invalid_argument("gcd_exact: require n >= q + 2");
  }
  if (!fit_result.vcov_ok) {
    throw std::logic_error("gcd_exact: full-fit covariance is unavailable");
  }
  const Eigen::MatrixXd vcov_inv = fit_result.vcov.inverse();
  const Eigen::VectorXd theta_hat = fit_result.theta();
  const double qd = static_cast<double>(fit_result.q);
  const FitOptions warm = warm_start(fit_result, refit_options);

  std::vector<double> out(n, kNaN);
  std::vector<char> good(n, 0);
  par::parallel_for(n, [&](std::size_t i) {
    try {
      Eigen::MatrixXd x_i;
      std::vector<double> y_i;
      drop_cases(X, y, {i}, &x_i, &y_i);
      RegressionSpec spec_i = spec_from_fit(fit_result, x_i);
      spec_i.validate();
      const FitResult refit = fit(y_i, spec_i, warm);
      if (!refit.converged) return;
      const Eigen::VectorXd d = theta_hat - refit.theta();
      const double v = d.dot(vcov_inv * d) / qd;
      if (std::isfinite(v)) {
        out[i] = v;
        good[i] = 1;
      }
    } catch (const std::exception&) {
      // entry stays flagged
    }
  });
  if (ok) {
    ok->assign(n, false);
    for (std::size_t i = 0; i < n; ++i) (*ok)[i] = good[i] != 0;
  }
  return out;
}

std::vector<double> gcd_approx(const FitResult& fit_result,
                               const std::vector<double>& y,
                               const Eigen::MatrixXd& X,
                               std::vector<bool>* ok) {
  require_riron_converged(fit_result);
  const std::size_t n = y.size();
  const std::size_t q = fit_result.q;
  const Eigen::VectorXd theta_hat = fit_result.theta();
  const RegressionSpec spec = spec_from_fit(fit_result, X);
  const double qd = static_cast<double>(q);

  std::vector<Eigen::VectorXd> scores(n);
  std::vector<Eigen::MatrixXd> hessians(n);
  par::parallel_for(n, [&](std::size_t i) {
    const Eigen::RowVectorXd x_i = X.row(static_cast<Eigen::Index>(i));
    scores[i] = case_score(theta_hat, y[i], x_i, spec);
    hessians[i] = case_hessian(theta_hat, y[i], x_i, spec);
  });

  Eigen::VectorXd total_score = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(q));
  Eigen::MatrixXd total_hess = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(q),
                                                     static_cast<Eigen::Index>(q));
  for (std::size_t i = 0; i < n; ++i) {
    total_score += scores[i];
    total_hess += hessians[i];
  }

  std::vector<double> out(n, kNaN);
  if (ok) ok->assign(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    const Eigen::VectorXd score_wo = total_score - scores[i];
    const Eigen::MatrixXd hess_wo = total_hess - hessians[i];
    const Eigen::FullPivLU<Eigen::MatrixXd> lu(hess_wo);
    if (!lu.isInvertible()) continue;
    const Eigen::VectorXd v = lu.solve(score_wo);
    const double g = v.dot((-total_hess) * v) / qd;
    if (std::isfinite(g)) {
      out[i] = g;
      if (ok) (*ok)[i] = true;
    }
  }
  return out;
}

RcTable relative_change(const FitResult& fit_result,
                        const std::vector<double>& y, const Eigen::MatrixXd& X,
                        const std::vector<std::size_t>& drop_set,
                        const FitOptions& refit_options) {
  require_riron_converged(fit_result);

  FitResult refit;
  if (drop_set.empty()) {
    refit = fit_result;
  } else {
    Eigen::MatrixXd x_d;
    std::vector<double> y_d;
    drop_cases(X, y, drop_set, &x_d, &y_d);
    RegressionSpec spec_d = spec_from_fit(fit_result, x_d);
    spec_d.validate();
    refit = fit(y_d, spec_d, warm_start(fit_result, refit_options));
    if (!refit.converged) {
      std::ostringstream msg;
      msg << "relative_change: refit without cases {";
      for (std::size_t k = 0; k < drop_set.size(); ++k) {
        msg << (k ? "," : "") << drop_set[k];
      }
      msg << "} did not converge";
      throw std::runtime_error(msg.str());
    }
  }

  const Eigen::VectorXd full = fit_result.theta();
  const Eigen::VectorXd dropped = refit.theta();
  RcTable table;
  table.dropped = drop_set;
  for (std::size_t t = 0; t < fit_result.q; ++t) {
    const auto ti = static_cast<Eigen::Index>(t);
    RcEntry entry;
    entry.parameter = fit_result.param_names[t];
    entry.rc_estimate = std::fabs((full[ti] - dropped[ti]) / full[ti]) * 100.0;
    entry.rc_se = (fit_result.vcov_ok && refit.vcov_ok)
                      ? std::fabs((fit_result.se[ti] - refit.se[ti]) /
                                  fit_result.se[ti]) *
                            100.0
                      : kNaN;
    entry.p_value = refit.vcov_ok
                        ? 2.0 * special::normal_cdf(
                                    -std::fabs(dropped[ti] / refit.se[ti]))
                        : kNaN;
    table.entries.push_back(entry);
  }
  return table;
}

EnvelopeBand envelope(const FitResult& fit_result, const std::vector<double>& y,
                      const Eigen::MatrixXd& X, int replicates, double level,
                      bool refit, std::uint64_t seed,
                      const FitOptions& refit_options) {
  require_riron_converged(fit_result);
  if (replicates < 20) {
    throw std::invalid_argument("envelope: require replicates >= 20");
  }
  if (!(level > 0.5) || !(level < 1.0)) {
    throw std::invalid_argument("envelope: require level in (0.5, 1)");
  }
  const std::size_t n = y.size();
  const double alpha = alpha_tau(fit_result.tau);

  std::vector<double> beta_hat(n);
  for (std::size_t i = 0; i < n; ++i) {
    beta_hat[i] = link_inverse(
        fit_result.link, X.row(static_cast<Eigen::Index>(i)) * fit_result.gamma);
  }

  const RegressionSpec spec = spec_from_fit(fit_result, X);
  const FitOptions warm = warm_start(fit_result, refit_options);

  std::vector<std::vector<double>> sorted_rqr(static_cast<std::size_t>(replicates));
  std::vector<char> usable(static_cast<std::size_t>(replicates), 0);
  par::parallel_for(static_cast<std::size_t>(replicates), [&](std::size_t r) {
    try {
      Rng rng(derive_seed(seed, r));
      std::vector<double> y_sim(n);
      for (std::size_t i = 0; i < n; ++i) {
        IronParams params{beta_hat[i], fit_result.lambda, alpha,
                          fit_result.kernel};
        y_sim[i] = iron_quantile(rng.uniform01(), params);
      }
      const FitResult* eval_fit = &fit_result;
      FitResult refit_result;
      if (refit) {
        refit_result = fit(y_sim, spec, warm);
        if (!refit_result.converged) return;
        eval_fit = &refit_result;
      }
      std::vector<double> resid = rqr(*eval_fit, y_sim, X);
      std::sort(resid.begin(), resid.end());
      sorted_rqr[r] = std::move(resid);
      usable[r] = 1;
    } catch (const std::exception&) {
      // replicate dropped
    }
  });

  int used = 0;
  for (const char c : usable) used += c;
  const int failed = replicates - used;
  if (failed > replicates / 5) {
    throw std::runtime_error("envelope: more than 20% of replicates failed (" +
                             std::to_string(failed) + "/" +
                             std::to_string(replicates) + ")");
  }

  EnvelopeBand band;
  band.level = level;
  band.replicates_used = used;
  band.replicates_failed = failed;
  band.lower.resize(n);
  band.median.resize(n);
  band.upper.resize(n);
  const double lo_p = 0.5 * (1.0 - level);
  const double hi_p = 0.5 * (1.0 + level);
  std::vector<double> column;
  column.reserve(static_cast<std::size_t>(used));
  for (std::size_t i = 0; i < n; ++i) {
    column.clear();
    for (std::size_t r = 0; r < sorted_rqr.size(); ++r) {
      if (usable[r]) column.push_back(sorted_rqr[r][i]);
    }
    band.lower[i] = quantile_type7(column, lo_p);
    band.median[i] = quantile_type7(column, 0.5);
    band.upper[i] = quantile_type7(column, hi_p);
  }
  band.observed = rqr(fit_result, y, X);
  std::sort(band.observed.begin(), band.observed.end());
  return band;
}

DiagnosticsReport diagnose(const FitResult& fit_result,
                           const std::vector<double>& y,
                           const Eigen::MatrixXd& X,
                           const DiagnosticsOptions& options) {
  require_riron_converged(fit_result);
  DiagnosticsReport report;
  report.n = y.size();
  report.q = fit_result.q;
  report.rqr = rqr(fit_result, y, X, &report.rqr_clamped);
  if (report.n >= 8) {
    report.tests = normality_tests(report.rqr);
  }
  report.gcd_approx = gcd_approx(fit_result, y, X, &report.gcd_approx_ok);
  if (options.compute_gcd_exact && fit_result.vcov_ok) {
    report.gcd_exact = gcd_exact(fit_result, y, X, &report.gcd_exact_ok,
                                 options.refit_options);
  }
  if (options.compute_envelope) {
    report.envelope =
        envelope(fit_result, y, X, options.envelope_replicates,
                 options.envelope_level, options.envelope_refit, options.seed,
                 options.refit_options);
  }

  report.gcd_threshold = options.gcd_threshold_factor *
                         static_cast<double>(fit_result.q) /
                         static_cast<double>(report.n);
  const std::vector<double>& ranking =
      report.gcd_exact.has_value() ? *report.gcd_exact : report.gcd_approx;
  for (std::size_t i = 0; i < ranking.size(); ++i) {
    if (std::isfinite(ranking[i]) && ranking[i] > report.gcd_threshold) {
      report.influential.push_back(i);
    }
  }
  return report;
}

nlohmann::json DiagnosticsReport::to_json() const {
  nlohmann::json j;
  j["schema_version"] = 1;
  j["n"] = n;
  j["q"] = q;
  j["rqr"] = rqr;
  j["rqr_clamped"] = rqr_clamped;
  j["gcd_approx"] = gcd_approx;
  j["gcd_approx_ok"] = gcd_approx_ok;
  if (gcd_exact.has_value()) {
    // NaN is not representable in JSON; flagged entries are emitted as null.
    nlohmann::json arr = nlohmann::json::array();
    for (std::size_t i = 0; i < gcd_exact->size(); ++i) {
      if (gcd_exact_ok[i]) {
        arr.push_back((*gcd_exact)[i]);
      } else {
        arr.push_back(nullptr);
      }
    }
    j["gcd_exact"] = arr;
  }
  nlohmann::json tests_json;
  for (const auto& [name, result] : tests) {
    tests_json[name] = {{"statistic", result.statistic},
                        {"p_value", result.p_value}};
  }
  j["tests"] = tests_json;
  if (envelope.has_value()) {
    j["envelope"] = {{"level", envelope->level},
                     {"lower", envelope->lower},
                     {"median", envelope->median},
                     {"upper", envelope->upper},
                     {"observed", envelope->observed},
                     {"replicates_used", envelope->replicates_used},
                     {"replicates_failed", envelope->replicates_failed}};
  }
  j["gcd_threshold"] = gcd_threshold;
  j["influential"] = influential;
  j["influential_count"] = influential.size();
  return j;
}

void DiagnosticsReport::write_case_csv(std::ostream& os) const {
  os << "index,rqr,rqr_clamped,gcd_approx,gcd_approx_ok,gcd_exact,gcd_exact_ok\n";
  for (std::size_t i = 0; i < rqr.size(); ++i) {
    os << i << ',' << rqr[i] << ',' << (rqr_clamped[i] ? 1 : 0) << ',';
    if (gcd_approx_ok[i]) os << gcd_approx[i];
    os << ',' << (gcd_approx_ok[i] ? 1 : 0) << ',';
    if (gcd_exact.has_value() && gcd_exact_ok[i]) os << (*gcd_exact)[i];
    os << ',' << (gcd_exact.has_value() && gcd_exact_ok[i] ? 1 : 0) << '\n';
  }
}

}  // namespace ironq
