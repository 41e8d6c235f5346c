#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>
#include <vector>

namespace gnnseed {

// splitmix64: the standard 64-bit finalizer-based generator, used here only
// to derive independent child seeds from (base seed, key words).
inline uint64_t splitmix64(uint64_t& state) {
  uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline uint64_t fnv1a64(std::string_view s) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Pure function of the inputs; folding each word through splitmix64 keeps
// nearby (seed, index) pairs statistically unrelated.
inline uint64_t derive_seed(uint64_t base, std::initializer_list<uint64_t> words) {
  uint64_t state = base ^ 0x6a09e667f3bcc908ULL;
  uint64_t out = splitmix64(state);
  for (uint64_t w : words) {
    state ^= w;
    out = splitmix64(state);
  }
  return out;
}

// mt19937_64 plus hand-rolled distributions. std::*_distribution output is
// implementation-defined, so every draw here is spelled out to keep results
// bit-identical across standard libraries.
class Rng {
 public:
  explicit Rng(uint64_t seed = 0) : engine_(seed) {}

  uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1) with full 53-bit mantissa resolution.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  // Uniform integer in [0, bound) by rejection from a power-of-two mask.
  uint64_t uniform_int(uint64_t bound) {
    if (bound <= 1) return 0;
    uint64_t mask = ~0ULL >> std::countl_zero(bound - 1);
    uint64_t v;
    do {
      v = engine_() & mask;
    } while (v >= bound);
    return v;
  }

  // Box-Muller, cosine branch only; two uniforms per draw, no cached spare.
  double normal() {
    double u1 = 1.0 - uniform();  // (0, 1]: keeps the log finite
    double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
  }

  // Marsaglia-Tsang for shape >= 1; boosted by u^(1/shape) below 1.
  double gamma(double shape) {
    if (shape < 1.0) {
      double u = 1.0 - uniform();
      return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
    }
    double d = shape - 1.0 / 3.0;
    double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x, v;
      do {
        x = normal();
        v = 1.0 + c * x;
      } while (v <= 0.0);
      v = v * v * v;
      double u = 1.0 - uniform();
      if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
      if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
  }

  double beta(double a, double b) {
    double x = gamma(a);
    double y = gamma(b);
    return x / (x + y);
  }

  // Fisher-Yates; uniform over permutations given the stream.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) {
      size_t j = static_cast<size_t>(uniform_int(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace gnnseed
