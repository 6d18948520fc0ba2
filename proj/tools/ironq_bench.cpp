// Timing harness: serial reference vs OpenMP path for the likelihood kernel,
// the Monte Carlo replicate loop and the leave-one-out influence scan.
// The parallel path is forced serial through IRONQ_THREADS=1, so both sides
// run the same code and the outputs can be compared exactly.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "ironq/diagnostics.hpp"
#include "ironq/iron.hpp"
#include "ironq/montecarlo.hpp"
#include "ironq/parallel.hpp"
#include "ironq/regression.hpp"
#include "ironq/rng.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

struct Problem {
  Eigen::MatrixXd x;
  std::vector<double> y;
  ironq::RegressionSpec spec;
  Eigen::VectorXd theta;
};

Problem make_problem(int n, std::uint64_t seed) {
  ironq::Rng rng(seed);
  Eigen::MatrixXd x(n, 3);
  x.col(0).setOnes();
  for (int i = 0; i < n; ++i) {
    x(i, 1) = rng.uniform01();
    x(i, 2) = rng.uniform01();
  }
  Eigen::VectorXd gamma(3);
  gamma << 0.5, 1.5, -0.5;
  const double alpha = ironq::alpha_tau(0.5);
  std::vector<double> y(n);
  for (int i = 0; i < n; ++i) {
    ironq::IronParams params{x.row(i) * gamma, 2.0, alpha,
                             ironq::Kernel::normal()};
    y[i] = ironq::iron_quantile(rng.uniform01(), params);
  }
  Problem prob;
  prob.x = std::move(x);
  prob.y = std::move(y);
  prob.spec = ironq::RegressionSpec::make(prob.x, 0.5, ironq::Link::identity(),
                                          ironq::Kernel::normal());
  prob.theta.resize(4);
  prob.theta << 0.5, 1.5, -0.5, std::log(2.0);
  return prob;
}

template <class F>
double time_best_of(int reps, const F& body) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = Clock::now();
    body();
    best = std::min(best, ms_since(t0));
  }
  return best;
}

void report(const char* name, double serial_ms, double parallel_ms,
            bool identical) {
  std::printf("%-28s %10.2f ms %10.2f ms %8.2fx   %s\n", name, serial_ms,
              parallel_ms, serial_ms / parallel_ms,
              identical ? "outputs identical" : "OUTPUTS DIFFER");
}

}  // namespace

int main(int argc, char** argv) {
  const int n = argc > 1 ? std::atoi(argv[1]) : 200000;
  std::printf("threads available: %d (cap with IRONQ_THREADS)\n\n",
              ironq::par::max_threads());
  std::printf("%-28s %13s %13s %9s\n", "kernel", "serial", "parallel",
              "speedup");

  // 1. likelihood evaluation
  {
    const Problem prob = make_problem(n, 42);
    double serial_val = 0.0, parallel_val = 0.0;
    const double t_serial = time_best_of(5, [&] {
      serial_val = ironq::loglik_serial(prob.theta, prob.y, prob.spec);
    });
    const double t_parallel = time_best_of(5, [&] {
      parallel_val = ironq::loglik(prob.theta, prob.y, prob.spec);
    });
    report("loglik (n=200k)", t_serial, t_parallel,
           serial_val == parallel_val);
  }

  // 2. Monte Carlo replicate loop
  {
    ironq::ScenarioConfig config;
    config.mode = ironq::ScenarioMode::BiasRmse;
    config.sample_sizes = {100};
    config.replicates = 64;
    config.seed = 7;
    setenv("IRONQ_THREADS", "1", 1);
    ironq::StudyResult serial_result;
    const double t_serial =
        time_best_of(1, [&] { serial_result = ironq::run_bias_rmse(config); });
    unsetenv("IRONQ_THREADS");
    ironq::StudyResult parallel_result;
    const double t_parallel =
        time_best_of(1, [&] { parallel_result = ironq::run_bias_rmse(config); });
    report("bias/rmse study (64 reps)", t_serial, t_parallel,
           serial_result.to_json().dump() == parallel_result.to_json().dump());
  }

  // 3. leave-one-out influence scan
  {
    const Problem prob = make_problem(80, 99);
    const ironq::FitResult f = ironq::fit(prob.y, prob.spec);
    if (f.converged && f.vcov_ok) {
      setenv("IRONQ_THREADS", "1", 1);
      std::vector<double> serial_gcd;
      const double t_serial = time_best_of(1, [&] {
        serial_gcd = ironq::gcd_exact(f, prob.y, prob.x);
      });
      unsetenv("IRONQ_THREADS");
      std::vector<double> parallel_gcd;
      const double t_parallel = time_best_of(1, [&] {
        parallel_gcd = ironq::gcd_exact(f, prob.y, prob.x);
      });
      report("gcd_exact (n=80 refits)", t_serial, t_parallel,
             serial_gcd == parallel_gcd);
    } else {
      std::printf("gcd_exact benchmark skipped (fit not usable)\n");
    }
  }
  return 0;
}
