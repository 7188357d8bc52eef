#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace hesim {

// Deterministic random source. The engine is std::mt19937_64 (bit-exact by
// the standard on every platform) and all output transforms are pinned here,
// so a (seed, draw order) pair identifies a stream across implementations:
//
//   uniform    : (x >> 11) * 2^-53            in [0, 1)
//   uniform_pos: ((x >> 11) + 1) * 2^-53      in (0, 1]
//   exponential: -log(uniform_pos) / rate
//   gaussian   : Box-Muller on (uniform_pos, uniform); the second value of
//                each pair is cached and returned by the next call
//   poisson    : Knuth product-of-uniforms; means above 500 are halved
//                recursively (a sum of independent Poissons is Poisson)
//   fork       : child seed = splitmix64(seed ^ splitmix64(stream + 1))
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const { return seed_; }

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform_pos() {
    return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
  }

  bool bernoulli(double p) { return uniform() < p; }

  double exponential(double rate) { return -std::log(uniform_pos()) / rate; }

  double gaussian(double mean, double sigma) {
    if (have_cache_) {
      have_cache_ = false;
      return mean + sigma * cache_;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform_pos()));
    const double a = 2.0 * 3.14159265358979323846 * uniform();
    cache_ = r * std::sin(a);
    have_cache_ = true;
    return mean + sigma * r * std::cos(a);
  }

  std::int64_t poisson(double mean) {
    if (!(mean > 0.0)) return 0;
    if (mean > 500.0) return poisson(mean * 0.5) + poisson(mean * 0.5);
    const double limit = std::exp(-mean);
    std::int64_t k = 0;
    double p = 1.0;
    do {
      ++k;
      p *= uniform();
    } while (p > limit);
    return k - 1;
  }

  // Independent child stream; deterministic in (seed, stream).
  Rng fork(std::uint64_t stream) const {
    return Rng(splitmix64(seed_ ^ splitmix64(stream + 1)));
  }

  static std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  bool have_cache_ = false;
  double cache_ = 0.0;
};

}  // namespace hesim
