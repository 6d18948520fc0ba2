#include "ironq/fit_io.hpp"

#include <limits>

#include "ironq/version.hpp"

namespace ironq {

nlohmann::json fit_to_json(const FitResult& f) {
  nlohmann::json j;
  j["schema_version"] = kSchemaVersion;
  j["model"] = f.model;
  j["kernel"] = f.kernel.name();
  j["tau"] = f.tau;
  j["link"] = f.link.name();
  j["n"] = f.n;
  j["p"] = f.p;
  j["q"] = f.q;
  j["param_names"] = f.param_names;
  j["gamma"] = std::vector<double>(f.gamma.data(), f.gamma.data() + f.gamma.size());
  j["lambda"] = f.lambda;
  if (f.shape.has_value()) {
    j["shape"] = *f.shape;
  } else {
    j["shape"] = nullptr;
  }
  j["loglik"] = f.loglik;
  j["aic"] = f.aic;
  j["bic"] = f.bic;
  j["converged"] = f.converged;
  j["iterations"] = f.iterations;
  j["grad_inf_norm"] = f.grad_inf_norm;
  j["vcov_ok"] = f.vcov_ok;
  if (f.vcov_ok) {
    std::vector<std::vector<double>> v(f.q, std::vector<double>(f.q));
    for (std::size_t r = 0; r < f.q; ++r) {
      for (std::size_t c = 0; c < f.q; ++c) {
        v[r][c] = f.vcov(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
      }
    }
    j["vcov"] = v;
    j["se"] = std::vector<double>(f.se.data(), f.se.data() + f.se.size());
  } else {
    j["vcov"] = nullptr;
    j["se"] = nullptr;
  }
  return j;
}

FitResult fit_from_json(const nlohmann::json& j) {
  FitResult f;
  f.model = j.at("model").get<std::string>();
  f.kernel = Kernel::parse(j.at("kernel").get<std::string>());
  f.tau = j.at("tau").get<double>();
  f.link = Link::parse(j.at("link").get<std::string>());
  f.n = j.at("n").get<std::size_t>();
  f.p = j.at("p").get<std::size_t>();
  f.q = j.at("q").get<std::size_t>();
  f.param_names = j.at("param_names").get<std::vector<std::string>>();
  const auto gamma = j.at("gamma").get<std::vector<double>>();
  f.gamma = Eigen::Map<const Eigen::VectorXd>(gamma.data(),
                                              static_cast<Eigen::Index>(gamma.size()));
  f.lambda = j.at("lambda").get<double>();
  if (!j.at("shape").is_null()) {
    f.shape = j.at("shape").get<double>();
    f.kernel.shape = f.shape;
  }
  f.loglik = j.at("loglik").get<double>();
  f.aic = j.at("aic").get<double>();
  f.bic = j.at("bic").get<double>();
  f.converged = j.at("converged").get<bool>();
  f.iterations = j.at("iterations").get<int>();
  f.grad_inf_norm = j.value("grad_inf_norm", 0.0);
  f.vcov_ok = j.at("vcov_ok").get<bool>();
  const auto qi = static_cast<Eigen::Index>(f.q);
  if (f.vcov_ok) {
    const auto v = j.at("vcov").get<std::vector<std::vector<double>>>();
    f.vcov.resize(qi, qi);
    for (std::size_t r = 0; r < f.q; ++r) {
      for (std::size_t c = 0; c < f.q; ++c) {
        f.vcov(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = v[r][c];
      }
    }
    const auto se = j.at("se").get<std::vector<double>>();
    f.se = Eigen::Map<const Eigen::VectorXd>(se.data(),
                                             static_cast<Eigen::Index>(se.size()));
  } else {
    f.vcov = Eigen::MatrixXd::Constant(qi, qi,
                                       std::numeric_limits<double>::quiet_NaN());
    f.se = Eigen::VectorXd::Constant(qi, std::numeric_limits<double>::quiet_NaN());
  }
  return f;
}

}  // namespace ironq
