#include "ironq/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "ironq/dataset.hpp"
#include "ironq/iron.hpp"
#include "ironq/parallel.hpp"
#include "ironq/rng.hpp"

namespace ironq {

namespace {

const double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string mode_name(ScenarioMode m) {
  return m == ScenarioMode::BiasRmse ? "bias_rmse" : "model_selection";
}

std::string protocol_name(SelectionProtocol p) {
  return p == SelectionProtocol::SharedSample ? "case1_shared_sample"
                                              : "case2_per_tau";
}

std::string source_name(CovariateSource s) {
  return s == CovariateSource::UniformFixed ? "uniform_fixed" : "resample";
}

// Fixed design for one sample size: intercept plus p-1 uniform columns.
Eigen::MatrixXd fixed_design(int n, std::size_t p, std::uint64_t seed) {
  Rng rng(seed);
  Eigen::MatrixXd x(n, static_cast<Eigen::Index>(p));
  x.col(0).setOnes();
  for (Eigen::Index j = 1; j < static_cast<Eigen::Index>(p); ++j) {
    for (Eigen::Index i = 0; i < n; ++i) x(i, j) = rng.uniform01();
  }
  return x;
}

std::vector<double> simulate_responses(const Eigen::MatrixXd& x,
                                       const ScenarioConfig& config,
                                       const Kernel& kernel,
                                       std::uint64_t seed) {
  const Eigen::Map<const Eigen::VectorXd> gamma(config.gamma_true.data(),
                                                static_cast<Eigen::Index>(
                                                    config.gamma_true.size()));
  Rng rng(seed);
  const double alpha = alpha_tau(config.tau_true);
  std::vector<double> y(static_cast<std::size_t>(x.rows()));
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const double beta_i = link_inverse(config.link, x.row(i) * gamma);
    if (!(beta_i > 0.0)) {
      throw std::invalid_argument(
          "montecarlo: generating model yields a non-positive quantile");
    }
    IronParams params{beta_i, config.lambda_true, alpha, kernel};
    y[static_cast<std::size_t>(i)] = iron_quantile(rng.uniform01(), params);
  }
  return y;
}

// Rows sampled without replacement via partial Fisher-Yates.
void subsample_rows(const Dataset& data, int rows, Rng& rng,
                    Eigen::MatrixXd* x_out, std::vector<double>* y_out) {
  const std::size_t n = data.y.size();
  if (static_cast<std::size_t>(rows) > n) {
    throw std::invalid_argument("montecarlo: resample_rows exceeds data size");
  }
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  for (int k = 0; k < rows; ++k) {
    const std::size_t j =
        k + static_cast<std::size_t>(rng.uniform01() * static_cast<double>(n - k));
    std::swap(idx[k], idx[std::min(j, n - 1)]);
  }
  x_out->resize(rows, data.X.cols());
  y_out->resize(static_cast<std::size_t>(rows));
  for (int k = 0; k < rows; ++k) {
    x_out->row(k) = data.X.row(static_cast<Eigen::Index>(idx[k]));
    (*y_out)[static_cast<std::size_t>(k)] = data.y[idx[k]];
  }
}

FitResult fit_kernel(const std::vector<double>& y, const Eigen::MatrixXd& x,
                     double tau, const ScenarioConfig& config,
                     const Kernel& kernel) {
  RegressionSpec spec;
  spec.X = x;
  spec.tau = tau;
  spec.link = config.link;
  spec.kernel = kernel;
  spec.estimate_shape = kernel.wants_shape() && !config.fix_shape;
  spec.validate();
  return fit(y, spec, config.fit_options);
}

}  // namespace

void ScenarioConfig::validate() const {
  if (replicates < 1) {
    throw std::invalid_argument("ScenarioConfig: replicates must be >= 1");
  }
  if (kernels.empty()) {
    throw std::invalid_argument("ScenarioConfig: need at least one kernel");
  }
  for (const auto& k : kernels) k.validate();
  if (mode == ScenarioMode::BiasRmse) {
    if (covariate_source == CovariateSource::Resample) {
      throw std::invalid_argument(
          "ScenarioConfig: BiasRmse requires simulated data (UniformFixed)");
    }
    const int min_n = static_cast<int>(gamma_true.size()) + 2;
    for (const int n : sample_sizes) {
      if (n <= min_n) {
        throw std::invalid_argument(
            "ScenarioConfig: sample sizes must exceed p + 2");
      }
    }
    if (!(lambda_true > 0.0)) {
      throw std::invalid_argument("ScenarioConfig: lambda_true must be positive");
    }
  }
  if (mode == ScenarioMode::ModelSelection && tau_grid.empty()) {
    throw std::invalid_argument("ScenarioConfig: model selection needs a tau grid");
  }
  for (const double t : tau_grid) {
    if (!(t > 0.0) || !(t < 1.0)) {
      throw std::invalid_argument("ScenarioConfig: tau values must lie in (0,1)");
    }
  }
  if (covariate_source == CovariateSource::Resample) {
    if (resample_file.empty() || resample_response.empty() ||
        resample_covariates.empty()) {
      throw std::invalid_argument(
          "ScenarioConfig: resample source needs file, response and covariates");
    }
  }
}

StudyResult run_bias_rmse(const ScenarioConfig& config) {
  config.validate();
  if (config.mode != ScenarioMode::BiasRmse) {
    throw std::invalid_argument("run_bias_rmse: config mode mismatch");
  }
  const std::size_t p = config.gamma_true.size();
  const double tau = config.tau_true;

  StudyResult result;
  result.mode = ScenarioMode::BiasRmse;
  result.protocol_label = "bias_rmse";
  result.replicates_requested = config.replicates;

  std::size_t cell_index = 0;
  for (const int n : config.sample_sizes) {
    // Covariates drawn once per sample size and kept fixed on each replicate.
    const Eigen::MatrixXd x =
        fixed_design(n, p, derive_seed(config.seed, 0x100000u + n));
    for (const auto& kernel : config.kernels) {
      const std::uint64_t cell_seed = derive_seed(config.seed, ++cell_index);
      const std::size_t reps = static_cast<std::size_t>(config.replicates);

      // Collected per replicate slot, then reduced in index order.
      std::vector<Eigen::VectorXd> estimates(reps);
      std::vector<char> converged(reps, 0);
      par::parallel_for(reps, [&](std::size_t r) {
        try {
          const std::vector<double> y = simulate_responses(
              x, config, kernel, derive_seed(cell_seed, r));
          const FitResult f = fit_kernel(y, x, tau, config, kernel);
          if (f.converged) {
            estimates[r] = f.theta();
            converged[r] = 1;
          }
        } catch (const std::exception&) {
          // replicate dropped
        }
      });

      // Truth on the natural scale in fit order.
      const bool has_shape = kernel.wants_shape() && !config.fix_shape;
      const std::size_t q = p + 1 + (has_shape ? 1 : 0);
      Eigen::VectorXd truth(static_cast<Eigen::Index>(q));
      std::vector<std::string> names;
      for (std::size_t j = 0; j < p; ++j) {
        truth[static_cast<Eigen::Index>(j)] = config.gamma_true[j];
        names.push_back("gamma" + std::to_string(j + 1));
      }
      truth[static_cast<Eigen::Index>(p)] = config.lambda_true;
      names.push_back("lambda");
      if (has_shape) {
        truth[static_cast<Eigen::Index>(p) + 1] = *kernel.shape;
        names.push_back("shape");
      }

      int n_conv = 0;
      Eigen::VectorXd mean = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(q));
      Eigen::VectorXd mse = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(q));
      for (std::size_t r = 0; r < reps; ++r) {
        if (!converged[r]) continue;
        ++n_conv;
        mean += estimates[r];
        mse += (estimates[r] - truth).cwiseAbs2();
      }
      for (std::size_t t = 0; t < q; ++t) {
        BiasRmseCell cell;
        cell.n = n;
        cell.tau = tau;
        cell.kernel = kernel.name();
        cell.parameter = names[t];
        cell.n_converged = n_conv;
        if (n_conv == 0) {
          cell.rb = kNaN;
          cell.rmse = kNaN;
          cell.rb_is_absolute_bias = false;
        } else {
          const auto ti = static_cast<Eigen::Index>(t);
          const double avg = mean[ti] / n_conv;
          const double truth_t = truth[ti];
          cell.rb_is_absolute_bias = truth_t == 0.0;
          cell.rb = cell.rb_is_absolute_bias ? (avg - truth_t)
                                             : (avg - truth_t) / truth_t;
          cell.rmse = std::sqrt(mse[ti] / n_conv);
        }
        result.bias_cells.push_back(cell);
      }
    }
  }
  return result;
}

StudyResult run_model_selection(const ScenarioConfig& config) {
  config.validate();
  if (config.mode != ScenarioMode::ModelSelection) {
    throw std::invalid_argument("run_model_selection: config mode mismatch");
  }
  const std::size_t n_kernels = config.kernels.size();
  const std::size_t n_taus = config.tau_grid.size();
  const std::size_t reps = static_cast<std::size_t>(config.replicates);

  Dataset resample_data;
  if (config.covariate_source == CovariateSource::Resample) {
    DatasetSchema schema;
    schema.response = config.resample_response;
    schema.covariates = config.resample_covariates;
    resample_data = ingest_csv(config.resample_file, schema);
  }

  StudyResult result;
  result.mode = ScenarioMode::ModelSelection;
  result.protocol_label = protocol_name(config.protocol);
  result.replicates_requested = config.replicates;

  std::vector<int> sizes = config.sample_sizes;
  if (config.covariate_source == CovariateSource::Resample) {
    sizes = {config.resample_rows};
  }

  for (const int n : sizes) {
    const std::size_t p = config.covariate_source == CovariateSource::Resample
                              ? static_cast<std::size_t>(resample_data.X.cols())
                              : config.gamma_true.size();
    Eigen::MatrixXd fixed_x;
    if (config.covariate_source == CovariateSource::UniformFixed) {
      fixed_x = fixed_design(n, p, derive_seed(config.seed, 0x200000u + n));
    }

    // winner[r][t] = kernel index or -1 (replicate unusable at that tau).
    std::vector<std::vector<int>> winner(reps, std::vector<int>(n_taus, -1));

    par::parallel_for(reps, [&](std::size_t r) {
      const std::uint64_t rep_seed = derive_seed(config.seed, 0x300000u + r);
      try {
        // Case I: one dataset per replicate, reused across the tau grid.
        Eigen::MatrixXd x_shared;
        std::vector<double> y_shared;
        if (config.protocol == SelectionProtocol::SharedSample) {
          if (config.covariate_source == CovariateSource::Resample) {
            Rng rng(rep_seed);
            subsample_rows(resample_data, n, rng, &x_shared, &y_shared);
          } else {
            x_shared = fixed_x;
            y_shared = simulate_responses(fixed_x, config, config.kernel_true,
                                          rep_seed);
          }
        }
        for (std::size_t t = 0; t < n_taus; ++t) {
          const Eigen::MatrixXd* x_ptr = &x_shared;
          const std::vector<double>* y_ptr = &y_shared;
          Eigen::MatrixXd x_own;
          std::vector<double> y_own;
          if (config.protocol == SelectionProtocol::PerTau) {
            const std::uint64_t tau_seed = derive_seed(rep_seed, t + 1);
            if (config.covariate_source == CovariateSource::Resample) {
              Rng rng(tau_seed);
              subsample_rows(resample_data, n, rng, &x_own, &y_own);
            } else {
              x_own = fixed_x;
              y_own = simulate_responses(fixed_x, config, config.kernel_true,
                                         tau_seed);
            }
            x_ptr = &x_own;
            y_ptr = &y_own;
          }
          int best = -1;
          double best_aic = std::numeric_limits<double>::infinity();
          for (std::size_t k = 0; k < n_kernels; ++k) {
            try {
              const FitResult f = fit_kernel(*y_ptr, *x_ptr,
                                             config.tau_grid[t], config,
                                             config.kernels[k]);
              // Strict < keeps ties on the earliest declared kernel.
              if (f.converged && f.aic < best_aic) {
                best_aic = f.aic;
                best = static_cast<int>(k);
              }
            } catch (const std::exception&) {
              // kernel skipped for this replicate
            }
          }
          winner[r][t] = best;
        }
      } catch (const std::exception&) {
        // whole replicate dropped (generation failure)
      }
    });

    for (std::size_t t = 0; t < n_taus; ++t) {
      std::vector<int> counts(n_kernels, 0);
      int used = 0;
      for (std::size_t r = 0; r < reps; ++r) {
        const int w = winner[r][t];
        if (w >= 0) {
          ++counts[static_cast<std::size_t>(w)];
          ++used;
        }
      }
      result.replicates_dropped += static_cast<int>(reps) - used;
      for (std::size_t k = 0; k < n_kernels; ++k) {
        SelectionCell cell;
        cell.n = n;
        cell.tau = config.tau_grid[t];
        cell.kernel = config.kernels[k].name();
        cell.n_selected = counts[k];
        cell.n_used = used;
        cell.percent = used > 0 ? 100.0 * counts[k] / used : kNaN;
        result.selection_cells.push_back(cell);
      }
    }
  }
  return result;
}

StudyResult run_study(const ScenarioConfig& config) {
  return config.mode == ScenarioMode::BiasRmse ? run_bias_rmse(config)
                                               : run_model_selection(config);
}

ScenarioConfig ScenarioConfig::from_json(const nlohmann::json& j) {
  ScenarioConfig c;
  const std::string mode = j.value("mode", "bias_rmse");
  if (mode == "bias_rmse") {
    c.mode = ScenarioMode::BiasRmse;
  } else if (mode == "model_selection") {
    c.mode = ScenarioMode::ModelSelection;
  } else {
    throw std::invalid_argument("ScenarioConfig: unknown mode '" + mode + "'");
  }
  if (j.contains("gamma_true")) {
    c.gamma_true = j.at("gamma_true").get<std::vector<double>>();
  }
  c.lambda_true = j.value("lambda_true", c.lambda_true);
  if (j.contains("kernel_true")) {
    c.kernel_true = Kernel::parse(j.at("kernel_true").get<std::string>());
  }
  c.tau_true = j.value("tau_true", c.tau_true);
  if (j.contains("link")) c.link = Link::parse(j.at("link").get<std::string>());
  if (j.contains("sample_sizes")) {
    c.sample_sizes = j.at("sample_sizes").get<std::vector<int>>();
  }
  c.replicates = j.value("replicates", c.replicates);
  if (j.contains("tau_grid")) {
    c.tau_grid = j.at("tau_grid").get<std::vector<double>>();
  }
  if (j.contains("kernels")) {
    c.kernels.clear();
    for (const auto& name : j.at("kernels")) {
      c.kernels.push_back(Kernel::parse(name.get<std::string>()));
    }
  }
  c.seed = j.value("seed", c.seed);
  const std::string protocol = j.value("protocol", "case1_shared_sample");
  if (protocol == "case1_shared_sample") {
    c.protocol = SelectionProtocol::SharedSample;
  } else if (protocol == "case2_per_tau") {
    c.protocol = SelectionProtocol::PerTau;
  } else {
    throw std::invalid_argument("ScenarioConfig: unknown protocol '" +
                                protocol + "'");
  }
  const std::string source = j.value("covariate_source", "uniform_fixed");
  if (source == "uniform_fixed") {
    c.covariate_source = CovariateSource::UniformFixed;
  } else if (source == "resample") {
    c.covariate_source = CovariateSource::Resample;
  } else {
    throw std::invalid_argument("ScenarioConfig: unknown covariate source '" +
                                source + "'");
  }
  c.resample_file = j.value("resample_file", std::string());
  c.resample_response = j.value("resample_response", std::string());
  if (j.contains("resample_covariates")) {
    c.resample_covariates =
        j.at("resample_covariates").get<std::vector<std::string>>();
  }
  c.resample_rows = j.value("resample_rows", c.resample_rows);
  c.fix_shape = j.value("fix_shape", false);
  c.fit_options.max_iter = j.value("max_iter", c.fit_options.max_iter);
  c.fit_options.grad_tol = j.value("grad_tol", c.fit_options.grad_tol);
  c.fit_options.step_tol = j.value("step_tol", c.fit_options.step_tol);
  c.validate();
  return c;
}

nlohmann::json ScenarioConfig::to_json() const {
  nlohmann::json j;
  j["mode"] = mode_name(mode);
  j["gamma_true"] = gamma_true;
  j["lambda_true"] = lambda_true;
  j["kernel_true"] = kernel_true.name();
  j["tau_true"] = tau_true;
  j["link"] = link.name();
  j["sample_sizes"] = sample_sizes;
  j["replicates"] = replicates;
  j["tau_grid"] = tau_grid;
  std::vector<std::string> kernel_names;
  for (const auto& k : kernels) kernel_names.push_back(k.name());
  j["kernels"] = kernel_names;
  j["seed"] = seed;
  j["protocol"] = protocol_name(protocol);
  j["covariate_source"] = source_name(covariate_source);
  j["resample_file"] = resample_file;
  j["resample_response"] = resample_response;
  j["resample_covariates"] = resample_covariates;
  j["resample_rows"] = resample_rows;
  j["fix_shape"] = fix_shape;
  j["max_iter"] = fit_options.max_iter;
  j["grad_tol"] = fit_options.grad_tol;
  j["step_tol"] = fit_options.step_tol;
  return j;
}

nlohmann::json StudyResult::to_json() const {
  nlohmann::json j;
  j["schema_version"] = 1;
  j["mode"] = mode_name(mode);
  j["protocol"] = protocol_label;
  j["replicates_requested"] = replicates_requested;
  j["replicates_dropped"] = replicates_dropped;
  nlohmann::json cells = nlohmann::json::array();
  for (const auto& c : bias_cells) {
    cells.push_back({{"n", c.n},
                     {"tau", c.tau},
                     {"kernel", c.kernel},
                     {"parameter", c.parameter},
                     {"rb", c.rb},
                     {"rmse", c.rmse},
                     {"n_converged", c.n_converged},
                     {"rb_is_absolute_bias", c.rb_is_absolute_bias}});
  }
  j["bias_cells"] = cells;
  nlohmann::json sel = nlohmann::json::array();
  for (const auto& c : selection_cells) {
    sel.push_back({{"n", c.n},
                   {"tau", c.tau},
                   {"kernel", c.kernel},
                   {"percent", c.percent},
                   {"n_selected", c.n_selected},
                   {"n_used", c.n_used}});
  }
  j["selection_cells"] = sel;
  return j;
}

void StudyResult::write_csv(std::ostream& os) const {
  os << "scenario,n,tau,kernel,parameter,rb,rmse,n_converged\n";
  os.precision(17);
  for (const auto& c : bias_cells) {
    os << "bias_rmse," << c.n << ',' << c.tau << ',' << c.kernel << ','
       << c.parameter << ',' << c.rb << ',' << c.rmse << ',' << c.n_converged
       << '\n';
  }
  for (const auto& c : selection_cells) {
    os << "model_selection," << c.n << ',' << c.tau << ',' << c.kernel
       << ",selection_percent," << c.percent << ",," << c.n_used << '\n';
  }
}

}  // namespace ironq
