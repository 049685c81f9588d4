#pragma once
// Utility families f_n(R_n) over per-user rates (nats) and the derivative
// alpha_n = f_n'(R_n). All three families are strictly increasing and concave
// on (0, inf); alpha is therefore positive and nonincreasing.

#include <string>

#include "hetnet/errors.hpp"

namespace hetnet {

enum class UtilityKind { wsr, proportional_fair, harmonic_mean };

struct UtilitySpec {
  UtilityKind kind = UtilityKind::wsr;
  double weight = 1.0;       // used by wsr only
  double rate_floor = 1e-8;  // nats; guards ln(R) and -1/R at R = 0
};

// wsr: w * R;  proportional_fair: ln(max(R, floor));
// harmonic_mean: -1 / max(R, floor).
double utility_eval(const UtilitySpec& spec, double rate_nats);

// df/dR evaluated with the same floor; strictly positive (w for wsr).
double utility_alpha(const UtilitySpec& spec, double rate_nats);

UtilityKind parse_utility_kind(const std::string& name);  // ConfigError
std::string utility_kind_name(UtilityKind kind);

}  // namespace hetnet
