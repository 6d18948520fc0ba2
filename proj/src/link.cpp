#include "ironq/link.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>

namespace ironq {

Link Link::parse(std::string_view text) {
  std::string s(text);
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (s == "identity" || s == "id") return identity();
  if (s == "log") return log();
  if (s == "sqrt") return sqrt();
  throw std::invalid_argument("link: unknown link '" + std::string(text) + "'");
}

std::string Link::name() const {
  switch (family) {
    case LinkFamily::Identity: return "identity";
    case LinkFamily::Log: return "log";
    case LinkFamily::Sqrt: return "sqrt";
  }
  return "";
}

double link_apply(const Link& link, double beta) {
  switch (link.family) {
    case LinkFamily::Identity:
      return beta;
    case LinkFamily::Log:
      if (!(beta > 0.0)) throw std::domain_error("log link: require beta > 0");
      return std::log(beta);
    case LinkFamily::Sqrt:
      if (!(beta >= 0.0)) throw std::domain_error("sqrt link: require beta >= 0");
      return std::sqrt(beta);
  }
  throw std::logic_error("link_apply: unreachable");
}

double link_inverse(const Link& link, double eta) {
  switch (link.family) {
    case LinkFamily::Identity:
      return eta;
    case LinkFamily::Log:
      return std::exp(eta);
    case LinkFamily::Sqrt:
      if (!(eta >= 0.0)) {
        throw std::domain_error("sqrt link inverse: require eta >= 0");
      }
      return eta * eta;
  }
  throw std::logic_error("link_inverse: unreachable");
}

double link_derivative(const Link& link, double beta) {
  switch (link.family) {
    case LinkFamily::Identity:
      return 1.0;
    case LinkFamily::Log:
      if (!(beta > 0.0)) throw std::domain_error("log link: require beta > 0");
      return 1.0 / beta;
    case LinkFamily::Sqrt:
      if (!(beta > 0.0)) throw std::domain_error("sqrt link: require beta > 0");
      return 0.5 / std::sqrt(beta);
  }
  throw std::logic_error("link_derivative: unreachable");
}

}  // namespace ironq
