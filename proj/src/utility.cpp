#include "hetnet/utility.hpp"

#include <cmath>

namespace hetnet {

double utility_eval(const UtilitySpec& spec, double rate_nats) {
  switch (spec.kind) {
    case UtilityKind::wsr:
      return spec.weight * rate_nats;
    case UtilityKind::proportional_fair:
      return std::log(std::max(rate_nats, spec.rate_floor));
    case UtilityKind::harmonic_mean:
      return -1.0 / std::max(rate_nats, spec.rate_floor);
  }
  throw DomainError("utility_eval: unknown kind");
}

double utility_alpha(const UtilitySpec& spec, double rate_nats) {
  switch (spec.kind) {
    case UtilityKind::wsr:
      return spec.weight;
    case UtilityKind::proportional_fair:
      return 1.0 / std::max(rate_nats, spec.rate_floor);
    case UtilityKind::harmonic_mean: {
      const double r = std::max(rate_nats, spec.rate_floor);
      return 1.0 / (r * r);
    }
  }
  throw DomainError("utility_alpha: unknown kind");
}

UtilityKind parse_utility_kind(const std::string& name) {
  if (name == "wsr") return UtilityKind::wsr;
  if (name == "proportional_fair") return UtilityKind::proportional_fair;
  if (name == "harmonic_mean") return UtilityKind::harmonic_mean;
  throw ConfigError("unknown utility_kind '" + name + "'");
}

std::string utility_kind_name(UtilityKind kind) {
  switch (kind) {
    case UtilityKind::wsr:
      return "wsr";
    case UtilityKind::proportional_fair:
      return "proportional_fair";
    case UtilityKind::harmonic_mean:
      return "harmonic_mean";
  }
  return "?";
}

}  // namespace hetnet
