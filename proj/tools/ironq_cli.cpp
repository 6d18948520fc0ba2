// Command-line front end: fit / diagnose / sample / simulate / compare /
// describe. Every command writes a run manifest next to its outputs; outputs
// themselves carry no timestamps so a rerun from the manifest's argv is
// byte-identical.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "ironq/dataset.hpp"
#include "ironq/diagnostics.hpp"
#include "ironq/fit_io.hpp"
#include "ironq/manifest.hpp"
#include "ironq/montecarlo.hpp"
#include "ironq/rbsq.hpp"
#include "ironq/regression.hpp"
#include "ironq/special.hpp"
#include "ironq/version.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitNonConverged = 2;

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void ensure_out_dir(const std::string& out_dir) {
  fs::create_directories(out_dir);
}

void write_output(const std::string& out_dir, const std::string& name,
                  const std::string& content) {
  ironq::write_text_atomic((fs::path(out_dir) / name).string(), content);
}

void write_manifest(const std::string& out_dir, const std::string& command,
                    const std::vector<std::string>& argv, const json& config,
                    std::uint64_t seed,
                    const std::vector<std::string>& input_files) {
  ironq::RunManifest m;
  m.command = command;
  m.argv = argv;
  m.config = config;
  m.seed = seed;
  m.version = ironq::kVersion;
  for (const auto& f : input_files) {
    m.input_digests.emplace_back(f, ironq::file_digest_hex(f));
  }
  m.created_at = ironq::utc_timestamp_now();
  write_output(out_dir, "manifest.json", m.to_json().dump(2) + "\n");
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  json j;
  in >> j;
  return j;
}

// ---------------------------------------------------------------------------
// shared fit plumbing

struct DataArgs {
  std::string data;
  std::string response;
  std::vector<std::string> covariates;
  bool no_intercept = false;
};

void add_data_options(CLI::App* cmd, DataArgs* args) {
  cmd->add_option("--data", args->data, "CSV file (RFC-4180, header row)")
      ->required();
  cmd->add_option("--response", args->response, "response column")->required();
  cmd->add_option("--covariates", args->covariates,
                  "comma-separated covariate columns")
      ->delimiter(',');
  cmd->add_flag("--no-intercept", args->no_intercept,
                "do not prepend a constant column");
}

ironq::Dataset load_dataset(const DataArgs& args) {
  ironq::DatasetSchema schema;
  schema.response = args.response;
  schema.covariates = args.covariates;
  schema.intercept = !args.no_intercept;
  return ironq::ingest_csv(args.data, schema);
}

struct FitArgs {
  DataArgs data;
  double tau = 0.5;
  std::string kernel = "normal";
  std::string link = "identity";
  bool fix_shape = false;
  int max_iter = 500;
  double grad_tol = 1e-6;
  double step_tol = 1e-8;
  double init_lambda = 1.0;
  bool init_lambda_set = false;
  double init_shape = 0.0;
  bool init_shape_set = false;
};

void add_fit_options(CLI::App* cmd, FitArgs* args) {
  add_data_options(cmd, &args->data);
  cmd->add_option("--tau", args->tau, "target quantile in (0,1)")
      ->check(CLI::Range(1e-9, 1.0 - 1e-9));
  cmd->add_option("--kernel", args->kernel,
                  "normal|t[:dof]|logistic|ep[:exp]|cauchy|rbsq");
  cmd->add_option("--link", args->link, "identity|log|sqrt");
  cmd->add_flag("--fix-shape", args->fix_shape,
                "keep the kernel shape fixed instead of estimating it");
  cmd->add_option("--max-iter", args->max_iter, "iteration cap");
  cmd->add_option("--grad-tol", args->grad_tol, "gradient tolerance");
  cmd->add_option("--step-tol", args->step_tol, "relative step tolerance");
  cmd->add_option("--init-lambda", args->init_lambda, "lambda initializer")
      ->each([args](const std::string&) { args->init_lambda_set = true; });
  cmd->add_option("--init-shape", args->init_shape, "shape initializer")
      ->each([args](const std::string&) { args->init_shape_set = true; });
}

ironq::FitOptions fit_options_from(const FitArgs& args) {
  ironq::FitOptions opts;
  opts.max_iter = args.max_iter;
  opts.grad_tol = args.grad_tol;
  opts.step_tol = args.step_tol;
  if (args.init_lambda_set) opts.init_lambda = args.init_lambda;
  if (args.init_shape_set) opts.init_shape = args.init_shape;
  return opts;
}

ironq::FitResult run_fit_on(const ironq::Dataset& data, const FitArgs& args) {
  const ironq::Link link = ironq::Link::parse(args.link);
  if (args.kernel == "rbsq") {
    return ironq::rbsq_fit(data.y, data.X, link, args.tau,
                           fit_options_from(args));
  }
  const ironq::Kernel kernel = ironq::Kernel::parse(args.kernel);
  ironq::RegressionSpec spec;
  spec.X = data.X;
  spec.tau = args.tau;
  spec.link = link;
  spec.kernel = kernel;
  spec.estimate_shape = kernel.wants_shape() && !args.fix_shape;
  spec.validate();
  return ironq::fit(data.y, spec, fit_options_from(args));
}

json fit_args_config(const FitArgs& args) {
  json c;
  c["data"] = args.data.data;
  c["response"] = args.data.response;
  c["covariates"] = args.data.covariates;
  c["intercept"] = !args.data.no_intercept;
  c["tau"] = args.tau;
  c["kernel"] = args.kernel;
  c["link"] = args.link;
  c["fix_shape"] = args.fix_shape;
  c["max_iter"] = args.max_iter;
  c["grad_tol"] = args.grad_tol;
  c["step_tol"] = args.step_tol;
  return c;
}

std::string fit_table(const ironq::FitResult& f) {
  std::ostringstream os;
  os << (f.model == "rbsq" ? "RBSQ" : "RIRON") << " quantile regression"
     << "  kernel=" << f.kernel.name() << "  tau=" << f.tau
     << "  link=" << f.link.name() << "\n";
  os << "n=" << f.n << "  loglik=" << f.loglik << "  AIC=" << f.aic
     << "  BIC=" << f.bic << "  converged=" << (f.converged ? "yes" : "no")
     << " (" << f.iterations << " iterations)\n\n";
  char line[160];
  std::snprintf(line, sizeof(line), "%-12s %14s %12s %10s %12s\n", "parameter",
                "estimate", "se", "z", "p");
  os << line;
  const Eigen::VectorXd theta = f.theta();
  for (std::size_t t = 0; t < f.q; ++t) {
    const auto ti = static_cast<Eigen::Index>(t);
    if (f.vcov_ok) {
      const double z = theta[ti] / f.se[ti];
      const double p = 2.0 * ironq::special::normal_cdf(-std::fabs(z));
      std::snprintf(line, sizeof(line), "%-12s %14.6g %12.4g %10.3f %12.4g\n",
                    f.param_names[t].c_str(), theta[ti], f.se[ti], z, p);
    } else {
      std::snprintf(line, sizeof(line), "%-12s %14.6g %12s %10s %12s\n",
                    f.param_names[t].c_str(), theta[ti], "-", "-", "-");
    }
    os << line;
  }
  if (!f.vcov_ok) {
    os << "\nnote: numerical Hessian singular; standard errors unavailable\n";
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// commands

int cmd_fit(const FitArgs& args, const std::string& out_dir,
            const std::vector<double>& predict_profile,
            const std::vector<std::string>& argv) {
  const ironq::Dataset data = load_dataset(args.data);
  const ironq::FitResult f = run_fit_on(data, args);

  json out = ironq::fit_to_json(f);
  out["n_dropped_rows"] = data.n_dropped;
  std::string table = fit_table(f);

  if (!predict_profile.empty()) {
    Eigen::VectorXd x_new;
    if (!args.data.no_intercept) {
      x_new.resize(static_cast<Eigen::Index>(predict_profile.size()) + 1);
      x_new[0] = 1.0;
      for (std::size_t i = 0; i < predict_profile.size(); ++i) {
        x_new[static_cast<Eigen::Index>(i) + 1] = predict_profile[i];
      }
    } else {
      x_new = Eigen::Map<const Eigen::VectorXd>(
          predict_profile.data(),
          static_cast<Eigen::Index>(predict_profile.size()));
    }
    const auto pred = ironq::predict_quantile(f, x_new);
    out["prediction"] = {{"profile", predict_profile},
                         {"estimate", pred.estimate},
                         {"se", pred.se}};
    table += "\npredicted tau-quantile at profile: " + num(pred.estimate) +
             "  (se " + num(pred.se) + ")\n";
  }

  ensure_out_dir(out_dir);
  write_output(out_dir, "fit.json", out.dump(2) + "\n");
  write_output(out_dir, "fit.txt", table);
  write_manifest(out_dir, "fit", argv, fit_args_config(args), 0, {args.data.data});
  std::cout << table;
  return f.converged ? kExitOk : kExitNonConverged;
}

int cmd_describe(const DataArgs& args, const std::string& out_dir,
                 const std::vector<std::string>& argv) {
  const ironq::Dataset data = load_dataset(args);
  const auto summaries = ironq::describe(data);

  std::ostringstream csv;
  csv << "variable,mean,median,sd,cv,cs,ck,min,max,n\n";
  std::ostringstream table;
  char line[220];
  std::snprintf(line, sizeof(line), "%-14s %10s %10s %10s %8s %8s %8s %10s %12s %6s\n",
                "variable", "mean", "median", "sd", "cv", "cs", "ck", "min",
                "max", "n");
  table << line;
  for (const auto& s : summaries) {
    csv << s.name << ',' << num(s.mean) << ',' << num(s.median) << ','
        << num(s.sd) << ',' << (s.cv_defined ? num(s.cv) : "") << ','
        << num(s.cs) << ',' << num(s.ck) << ',' << num(s.min) << ','
        << num(s.max) << ',' << s.n << '\n';
    std::snprintf(line, sizeof(line),
                  "%-14s %10.2f %10.2f %10.2f %8.2f %8.2f %8.2f %10.2f %12.2f %6zu\n",
                  s.name.c_str(), s.mean, s.median, s.sd,
                  s.cv_defined ? s.cv : std::nan(""), s.cs, s.ck, s.min, s.max,
                  s.n);
    table << line;
  }
  if (data.n_dropped > 0) {
    table << "\nrows dropped by ingestion policy: " << data.n_dropped << "\n";
  }

  ensure_out_dir(out_dir);
  write_output(out_dir, "describe.csv", csv.str());
  json config;
  config["data"] = args.data;
  config["response"] = args.response;
  config["covariates"] = args.covariates;
  write_manifest(out_dir, "describe", argv, config, 0, {args.data});
  std::cout << table.str();
  return kExitOk;
}

int cmd_diagnose(const FitArgs& args, const std::string& fit_file,
                 const ironq::DiagnosticsOptions& dopts,
                 const std::vector<std::size_t>& drop_set,
                 const std::string& out_dir,
                 const std::vector<std::string>& argv) {
  const ironq::Dataset data = load_dataset(args.data);
  ironq::FitResult f;
  if (!fit_file.empty()) {
    f = ironq::fit_from_json(load_json_file(fit_file));
  } else {
    f = run_fit_on(data, args);
  }
  if (!f.converged) {
    std::cerr << "diagnose: fit did not converge\n";
    return kExitNonConverged;
  }

  const ironq::DiagnosticsReport report =
      ironq::diagnose(f, data.y, data.X, dopts);
  json out = report.to_json();

  if (!drop_set.empty()) {
    const ironq::RcTable rc = ironq::relative_change(f, data.y, data.X,
                                                     drop_set,
                                                     dopts.refit_options);
    json rc_json;
    rc_json["dropped"] = rc.dropped;
    json entries = json::array();
    for (const auto& e : rc.entries) {
      entries.push_back({{"parameter", e.parameter},
                         {"rc_estimate_pct", e.rc_estimate},
                         {"rc_se_pct", e.rc_se},
                         {"p_value", e.p_value}});
    }
    rc_json["entries"] = entries;
    out["relative_change"] = rc_json;
  }

  std::ostringstream case_csv;
  report.write_case_csv(case_csv);

  ensure_out_dir(out_dir);
  write_output(out_dir, "diagnostics.json", out.dump(2) + "\n");
  write_output(out_dir, "diagnostics.csv", case_csv.str());

  json config = fit_args_config(args);
  config["fit_file"] = fit_file;
  config["gcd_threshold_factor"] = dopts.gcd_threshold_factor;
  config["envelope_replicates"] = dopts.envelope_replicates;
  config["envelope_level"] = dopts.envelope_level;
  config["envelope_refit"] = dopts.envelope_refit;
  config["drop"] = drop_set;
  config["seed"] = dopts.seed;
  write_manifest(out_dir, "diagnose", argv, config, dopts.seed,
                 {args.data.data});

  std::cout << "diagnostics: n=" << report.n << "  influential cases (GCD > "
            << num(report.gcd_threshold) << "): " << report.influential.size()
            << "\n";
  for (const auto& [name, result] : report.tests) {
    std::cout << "  " << name << ": statistic=" << num(result.statistic)
              << " p=" << num(result.p_value) << "\n";
  }
  return kExitOk;
}

int cmd_sample(std::size_t n, double beta, double lambda, double tau,
               double alpha_opt, bool alpha_set, const std::string& kernel_name,
               std::uint64_t seed, const std::string& out_dir,
               const std::vector<std::string>& argv) {
  ironq::IronParams params;
  params.beta = beta;
  params.lambda = lambda;
  params.alpha = alpha_set ? alpha_opt : ironq::alpha_tau(tau);
  params.kernel = ironq::Kernel::parse(kernel_name);
  params.validate();

  const std::vector<double> draws = ironq::iron_sample(n, params, seed);
  std::ostringstream csv;
  csv << "index,value\n";
  for (std::size_t i = 0; i < draws.size(); ++i) {
    csv << i << ',' << num(draws[i]) << '\n';
  }

  ensure_out_dir(out_dir);
  write_output(out_dir, "samples.csv", csv.str());
  json config;
  config["n"] = n;
  config["beta"] = beta;
  config["lambda"] = lambda;
  config["alpha"] = params.alpha;
  config["kernel"] = params.kernel.name();
  config["seed"] = seed;
  write_manifest(out_dir, "sample", argv, config, seed, {});
  std::cout << "wrote " << draws.size() << " draws to " << out_dir
            << "/samples.csv\n";
  return kExitOk;
}

int cmd_simulate(const std::string& config_file, const std::string& out_dir,
                 const std::vector<std::string>& argv) {
  const json config_json = load_json_file(config_file);
  const ironq::ScenarioConfig config =
      ironq::ScenarioConfig::from_json(config_json);
  const ironq::StudyResult result = ironq::run_study(config);

  std::ostringstream csv;
  result.write_csv(csv);
  ensure_out_dir(out_dir);
  write_output(out_dir, "results.csv", csv.str());
  write_output(out_dir, "results.json", result.to_json().dump(2) + "\n");
  std::vector<std::string> inputs = {config_file};
  if (config.covariate_source == ironq::CovariateSource::Resample) {
    inputs.push_back(config.resample_file);
  }
  write_manifest(out_dir, "simulate", argv, config.to_json(), config.seed,
                 inputs);
  std::cout << "study complete: " << result.bias_cells.size() << " bias cells, "
            << result.selection_cells.size() << " selection cells\n";
  return kExitOk;
}

int cmd_compare(const FitArgs& base_args, const std::vector<std::string>& kernels,
                const std::vector<double>& taus, const std::string& out_dir,
                const std::vector<std::string>& argv) {
  const ironq::Dataset data = load_dataset(base_args.data);

  struct Row {
    std::string kernel;
    double tau;
    ironq::FitResult fit;
    bool aic_min = false;
    bool bic_min = false;
  };
  std::vector<Row> rows;
  bool all_converged = true;
  for (const double tau : taus) {
    std::size_t aic_arg = 0, bic_arg = 0;
    double best_aic = std::numeric_limits<double>::infinity();
    double best_bic = std::numeric_limits<double>::infinity();
    const std::size_t first = rows.size();
    for (const auto& k : kernels) {
      FitArgs args = base_args;
      args.kernel = k;
      args.tau = tau;
      Row row;
      row.kernel = k;
      row.tau = tau;
      row.fit = run_fit_on(data, args);
      all_converged = all_converged && row.fit.converged;
      rows.push_back(std::move(row));
      const auto& f = rows.back().fit;
      if (f.converged && f.aic < best_aic) {
        best_aic = f.aic;
        aic_arg = rows.size() - 1;
      }
      if (f.converged && f.bic < best_bic) {
        best_bic = f.bic;
        bic_arg = rows.size() - 1;
      }
    }
    if (rows.size() > first && std::isfinite(best_aic)) {
      rows[aic_arg].aic_min = true;
      rows[bic_arg].bic_min = true;
    }
  }

  std::ostringstream csv;
  csv << "model,kernel,tau,link,loglik,aic,bic,converged,aic_min,bic_min\n";
  std::ostringstream table;
  char line[200];
  std::snprintf(line, sizeof(line), "%-12s %6s %12s %12s %12s %5s %4s %4s\n",
                "kernel", "tau", "loglik", "AIC", "BIC", "conv", "aic*",
                "bic*");
  table << line;
  for (const auto& r : rows) {
    const auto& f = r.fit;
    csv << f.model << ',' << r.kernel << ',' << num(r.tau) << ','
        << f.link.name() << ',' << num(f.loglik) << ',' << num(f.aic) << ','
        << num(f.bic) << ',' << (f.converged ? 1 : 0) << ','
        << (r.aic_min ? 1 : 0) << ',' << (r.bic_min ? 1 : 0) << '\n';
    std::snprintf(line, sizeof(line),
                  "%-12s %6.3f %12.2f %12.2f %12.2f %5s %4s %4s\n",
                  r.kernel.c_str(), r.tau, f.loglik, f.aic, f.bic,
                  f.converged ? "yes" : "no", r.aic_min ? "*" : "",
                  r.bic_min ? "*" : "");
    table << line;
  }

  ensure_out_dir(out_dir);
  write_output(out_dir, "compare.csv", csv.str());
  json config = fit_args_config(base_args);
  config["kernels"] = kernels;
  config["taus"] = taus;
  write_manifest(out_dir, "compare", argv, config, 0, {base_args.data.data});
  std::cout << table.str();
  return all_converged ? kExitOk : kExitNonConverged;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> raw_argv(argv, argv + argc);

  CLI::App app{"IRON-family quantile regression toolkit"};
  app.set_version_flag("--version", ironq::kVersion);
  app.require_subcommand(1);

  // fit
  auto* fit_cmd = app.add_subcommand("fit", "fit one quantile regression");
  FitArgs fit_args;
  std::string fit_out = "ironq-out";
  std::vector<double> predict_profile;
  add_fit_options(fit_cmd, &fit_args);
  fit_cmd->add_option("--out-dir", fit_out, "output directory");
  fit_cmd->add_option("--predict", predict_profile,
                      "covariate profile for a predicted quantile")
      ->delimiter(',');

  // describe
  auto* describe_cmd = app.add_subcommand("describe", "descriptive statistics");
  DataArgs describe_args;
  std::string describe_out = "ironq-out";
  add_data_options(describe_cmd, &describe_args);
  describe_cmd->add_option("--out-dir", describe_out, "output directory");

  // diagnose
  auto* diagnose_cmd =
      app.add_subcommand("diagnose", "residual and influence diagnostics");
  FitArgs diag_args;
  std::string diag_out = "ironq-out";
  std::string diag_fit_file;
  ironq::DiagnosticsOptions dopts;
  bool no_gcd_exact = false;
  bool no_envelope = false;
  bool no_envelope_refit = false;
  std::vector<std::size_t> drop_set;
  add_fit_options(diagnose_cmd, &diag_args);
  diagnose_cmd->add_option("--fit", diag_fit_file,
                           "reuse a serialized fit.json instead of refitting");
  diagnose_cmd->add_option("--out-dir", diag_out, "output directory");
  diagnose_cmd->add_flag("--no-gcd-exact", no_gcd_exact,
                         "skip leave-one-out refits");
  diagnose_cmd->add_flag("--no-envelope", no_envelope, "skip the envelope");
  diagnose_cmd->add_flag("--no-envelope-refit", no_envelope_refit,
                         "envelope without per-replicate refits");
  diagnose_cmd->add_option("--envelope-replicates", dopts.envelope_replicates);
  diagnose_cmd->add_option("--envelope-level", dopts.envelope_level);
  diagnose_cmd->add_option("--gcd-factor", dopts.gcd_threshold_factor,
                           "influence threshold factor (threshold = f*q/n)");
  diagnose_cmd->add_option("--drop", drop_set,
                           "case indices for the relative-change table")
      ->delimiter(',');
  diagnose_cmd->add_option("--seed", dopts.seed, "envelope seed");

  // sample
  auto* sample_cmd = app.add_subcommand("sample", "draw from one IRON law");
  std::size_t sample_n = 100;
  double sample_beta = 1.0, sample_lambda = 1.0, sample_tau = 0.5,
         sample_alpha = 1.0;
  std::string sample_kernel = "normal";
  std::uint64_t sample_seed = 1;
  std::string sample_out = "ironq-out";
  bool sample_alpha_set = false;
  sample_cmd->add_option("--n", sample_n, "number of draws")->required();
  sample_cmd->add_option("--beta", sample_beta, "scale / pinned quantile");
  sample_cmd->add_option("--lambda", sample_lambda, "shape");
  sample_cmd->add_option("--tau", sample_tau, "quantile level (sets alpha)");
  sample_cmd->add_option("--alpha", sample_alpha, "exponent (overrides --tau)")
      ->each([&sample_alpha_set](const std::string&) { sample_alpha_set = true; });
  sample_cmd->add_option("--kernel", sample_kernel, "kernel spec");
  sample_cmd->add_option("--seed", sample_seed, "RNG seed");
  sample_cmd->add_option("--out-dir", sample_out, "output directory");

  // simulate
  auto* simulate_cmd =
      app.add_subcommand("simulate", "run a Monte Carlo study from a config");
  std::string sim_config;
  std::string sim_out = "ironq-out";
  simulate_cmd->add_option("--config", sim_config, "scenario config JSON")
      ->required();
  simulate_cmd->add_option("--out-dir", sim_out, "output directory");

  // compare
  auto* compare_cmd =
      app.add_subcommand("compare", "kernel x tau AIC/BIC comparison grid");
  FitArgs compare_args;
  std::vector<std::string> compare_kernels = {"normal", "t", "logistic", "ep"};
  std::vector<double> compare_taus = {0.4, 0.5};
  std::string compare_out = "ironq-out";
  add_fit_options(compare_cmd, &compare_args);
  compare_cmd->add_option("--kernels", compare_kernels, "kernels (or rbsq)")
      ->delimiter(',');
  compare_cmd->add_option("--taus", compare_taus, "quantile levels")
      ->delimiter(',');
  compare_cmd->add_option("--out-dir", compare_out, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (fit_cmd->parsed()) {
      return cmd_fit(fit_args, fit_out, predict_profile, raw_argv);
    }
    if (describe_cmd->parsed()) {
      return cmd_describe(describe_args, describe_out, raw_argv);
    }
    if (diagnose_cmd->parsed()) {
      dopts.compute_gcd_exact = !no_gcd_exact;
      dopts.compute_envelope = !no_envelope;
      dopts.envelope_refit = !no_envelope_refit;
      dopts.refit_options = fit_options_from(diag_args);
      return cmd_diagnose(diag_args, diag_fit_file, dopts, drop_set, diag_out,
                          raw_argv);
    }
    if (sample_cmd->parsed()) {
      return cmd_sample(sample_n, sample_beta, sample_lambda, sample_tau,
                        sample_alpha, sample_alpha_set, sample_kernel,
                        sample_seed, sample_out, raw_argv);
    }
    if (simulate_cmd->parsed()) {
      return cmd_simulate(sim_config, sim_out, raw_argv);
    }
    if (compare_cmd->parsed()) {
      return cmd_compare(compare_args, compare_kernels, compare_taus,
                         compare_out, raw_argv);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
