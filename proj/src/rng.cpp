#include "hetnet/rng.hpp"

#include <cmath>

namespace hetnet {
namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += kGolden);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t state = seed ^ (salt * kGolden + 0x2545f4914f6cdd1dULL);
  (void)splitmix64(state);
  return splitmix64(state);
}

Rng::Rng(std::uint64_t seed, std::uint64_t purpose)
    : state_(mix_seed(seed, purpose)) {}

std::uint64_t Rng::next_u64() { return splitmix64(state_); }

double Rng::uniform() {
  // 53 random bits into [0, 1).
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

int Rng::uniform_index(int n) {
  int k = static_cast<int>(uniform() * n);
  return k >= n ? n - 1 : k;
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  // Box-Muller; u1 kept away from zero so the log is finite.
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * M_PI * u2;
  spare_ = r * std::sin(theta);
  has_spare_ = true;
  return r * std::cos(theta);
}

std::complex<double> Rng::cnormal(double sigma) {
  const double scale = sigma / std::sqrt(2.0);
  const double re = normal();
  const double im = normal();
  return {scale * re, scale * im};
}

}  // namespace hetnet
