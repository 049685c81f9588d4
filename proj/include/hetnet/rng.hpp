#pragma once
// Deterministic random streams. One master seed is split into independent
// substreams (topology, channels, user order, ...) so reruns are byte-exact
// and joint/fixed modes can consume identical channel draws. Gaussian draws
// are generated with an explicit Box-Muller transform to keep the stream
// independent of standard-library distribution internals.

#include <complex>
#include <cstdint>

namespace hetnet {

enum class Substream : std::uint64_t {
  topology = 1,
  channels = 2,
  user_order = 3,
  init = 4,
  test = 99,
};

class Rng {
 public:
  Rng(std::uint64_t seed, std::uint64_t purpose);
  Rng(std::uint64_t seed, Substream purpose)
      : Rng(seed, static_cast<std::uint64_t>(purpose)) {}

  std::uint64_t next_u64();

  double uniform();  // [0, 1)
  double uniform(double lo, double hi);
  int uniform_index(int n);  // {0, ..., n-1}, n >= 1

  double normal();  // standard normal
  // Circular complex Gaussian CN(0, sigma^2): real and imaginary parts are
  // independent N(0, sigma^2 / 2).
  std::complex<double> cnormal(double sigma);

 private:
  std::uint64_t state_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// Derives a child seed; used to give every (snr, trial) cell its own master
// seed in the experiment driver.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt);

}  // namespace hetnet
