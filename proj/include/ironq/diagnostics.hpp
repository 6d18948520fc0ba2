#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "ironq/gof.hpp"
#include "ironq/regression.hpp"

namespace ironq {

struct DiagnosticsOptions {
  // Influence benchmark: a case is flagged when GCD_i > factor * q / n.
  double gcd_threshold_factor = 2.0;
  bool compute_gcd_exact = true;
  bool compute_envelope = true;
  int envelope_replicates = 100;
  double envelope_level = 0.95;
  bool envelope_refit = true;
  std::uint64_t seed = 20260801;
  FitOptions refit_options;
};

struct EnvelopeBand {
  std::vector<double> lower;
  std::vector<double> median;
  std::vector<double> upper;
  std::vector<double> observed;  // sorted observed residuals
  int replicates_used = 0;
  int replicates_failed = 0;
  double level = 0.95;
};

struct RcEntry {
  std::string parameter;
  double rc_estimate;  // percent
  double rc_se;        // percent
  double p_value;      // Wald, from the refit
};

struct RcTable {
  std::vector<std::size_t> dropped;
  std::vector<RcEntry> entries;
};

struct DiagnosticsReport {
  std::vector<double> rqr;
  std::vector<bool> rqr_clamped;
  std::vector<double> gcd_approx;
  std::vector<bool> gcd_approx_ok;
  std::optional<std::vector<double>> gcd_exact;
  std::vector<bool> gcd_exact_ok;
  std::map<std::string, TestResult> tests;
  std::optional<EnvelopeBand> envelope;
  double gcd_threshold = 0.0;
  std::vector<std::size_t> influential;  // indices above the threshold
  std::size_t n = 0;
  std::size_t q = 0;

  nlohmann::json to_json() const;
  // Per-case long table: index, rqr, rqr_clamped, gcd_approx, gcd_exact, flags.
  void write_case_csv(std::ostream& os) const;
};

// Quantile residuals Phi^{-1}(CDF(y_i)) under the fitted model. The response
// is continuous, so no randomization enters; CDF values are clamped to
// [1e-12, 1 - 1e-12] with a per-case flag. Requires a converged RIRON fit.
std::vector<double> rqr(const FitResult& fit_result,
                        const std::vector<double>& y, const Eigen::MatrixXd& X,
                        std::vector<bool>* clamped = nullptr);

// Generalized Cook's distance by leave-one-out refits warm-started at the
// full-fit optimum: (1/q)(theta - theta_(i))' vcov^{-1} (theta - theta_(i)).
// A refit that fails to converge flags its entry instead of aborting.
std::vector<double> gcd_exact(const FitResult& fit_result,
                              const std::vector<double>& y,
                              const Eigen::MatrixXd& X,
                              std::vector<bool>* ok = nullptr,
                              const FitOptions& refit_options = {});

// One-pass first-order approximation from case-deleted scores and Hessians,
// all evaluated at the full-fit optimum; no refits.
std::vector<double> gcd_approx(const FitResult& fit_result,
                               const std::vector<double>& y,
                               const Eigen::MatrixXd& X,
                               std::vector<bool>* ok = nullptr);

// Percent relative change of every estimate and standard error when the
// given cases are dropped, plus the refit's Wald p-values.
RcTable relative_change(const FitResult& fit_result,
                        const std::vector<double>& y, const Eigen::MatrixXd& X,
                        const std::vector<std::size_t>& drop_set,
                        const FitOptions& refit_options = {});

// Simulated envelope for the sorted residuals under the fitted model.
EnvelopeBand envelope(const FitResult& fit_result, const std::vector<double>& y,
                      const Eigen::MatrixXd& X, int replicates, double level,
                      bool refit, std::uint64_t seed,
                      const FitOptions& refit_options = {});

DiagnosticsReport diagnose(const FitResult& fit_result,
                           const std::vector<double>& y,
                           const Eigen::MatrixXd& X,
                           const DiagnosticsOptions& options = {});

}  // namespace ironq
