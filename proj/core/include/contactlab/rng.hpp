#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace contactlab {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Derives independent substream seeds from (seed, tag, index, ...) tuples so
// that every replica, and every site inside a graphical window, owns a stream
// that does not depend on scheduling or query order.
inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  return splitmix64(splitmix64(a) ^ (0x9e3779b97f4a7c15ULL + b));
}
inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  return mix_seed(mix_seed(a, b), c);
}
inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b, std::uint64_t c,
                              std::uint64_t d) {
  return mix_seed(mix_seed(a, b, c), d);
}

// stream tags for mix_seed, so different consumers never share a stream
enum : std::uint64_t {
  kStreamReplica = 0x5245504cULL,   // per-replica event stream
  kStreamWindowSite = 0x57494e44ULL,  // per-site graphical window stream
  kStreamScratch = 0x53435241ULL,   // auxiliary draws (recentering, walks, ...)
};

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(splitmix64(seed ^ 0x6a09e667f3bcc908ULL)) {}

  std::uint64_t next() { return eng_(); }

  // uniform in [0,1), 53 bit resolution; avoids distribution objects so the
  // stream is identical across standard library implementations
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  // uniform in (0,1], safe to feed into std::log
  double uniform_pos() { return (static_cast<double>(eng_() >> 11) + 1.0) * 0x1.0p-53; }

  double exponential(double rate) { return -std::log(uniform_pos()) / rate; }

  // unbiased integer in [0, n)
  std::uint64_t uniform_index(std::uint64_t n) {
    std::uint64_t x, r;
    do {
      x = eng_();
      r = x % n;
    } while (x - r > std::uint64_t(0) - n);
    return r;
  }

  long poisson(double mean) {
    if (!(mean > 0.0)) return 0;
    if (mean > 60.0) {
      double half = mean / 2;
      return poisson(half) + poisson(mean - half);
    }
    const double limit = std::exp(-mean);
    double p = 1.0;
    long k = 0;
    do {
      ++k;
      p *= uniform_pos();
    } while (p > limit);
    return k - 1;
  }

  std::mt19937_64& engine() { return eng_; }

 private:
  std::mt19937_64 eng_;
};

}  // namespace contactlab
