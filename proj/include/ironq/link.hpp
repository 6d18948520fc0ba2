#pragma once

#include <string>
#include <string_view>

namespace ironq {

enum class LinkFamily { Identity, Log, Sqrt };

// Monotone, invertible, twice differentiable transform tying the quantile
// parameter to the linear predictor.
struct Link {
  LinkFamily family = LinkFamily::Identity;

  static Link identity() { return {LinkFamily::Identity}; }
  static Link log() { return {LinkFamily::Log}; }
  static Link sqrt() { return {LinkFamily::Sqrt}; }

  static Link parse(std::string_view text);  // "identity" | "log" | "sqrt"
  std::string name() const;
};

double link_apply(const Link& link, double beta);    // eta = link(beta)
double link_inverse(const Link& link, double eta);   // beta = link^{-1}(eta)
// d link(beta)/d beta; the delta method uses its reciprocal for predicted
// quantiles.
double link_derivative(const Link& link, double beta);

}  // namespace ironq
