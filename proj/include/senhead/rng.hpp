#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "senhead/common.hpp"

namespace senhead {

// xoshiro256++ with splitmix64 seeding. Chosen over std engines for a
// compact, exactly serializable state (checkpoint resume must reproduce the
// training stream bit for bit).
class Rng {
 public:
  explicit Rng(uint64_t seed) { reseed(seed); }

  void reseed(uint64_t seed) {
    uint64_t x = seed;
    for (auto& w : s_) w = splitmix64(x);
  }

  uint64_t next_u64() {
    const uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Uniform in [0, 1), 53-bit resolution.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, n).
  int uniform_int(int n) {
    require(n > 0, "Rng::uniform_int: n must be positive, got ", n);
    return static_cast<int>(uniform() * n) % n;
  }

  bool bernoulli(double p) { return uniform() < p; }

  // Draws an index proportional to weights (need not be normalized).
  int categorical(std::span<const double> weights) {
    require(!weights.empty(), "Rng::categorical: empty weights");
    double total = 0.0;
    for (double w : weights) total += w;
    require(total > 0.0, "Rng::categorical: non-positive total weight ", total);
    double r = uniform() * total;
    double acc = 0.0;
    int last_positive = -1;
    for (size_t i = 0; i < weights.size(); ++i) {
      if (weights[i] <= 0.0) continue;
      last_positive = static_cast<int>(i);
      acc += weights[i];
      if (r < acc) return last_positive;
    }
    // summation rounding may leave r >= acc; fall back to the last viable index
    return last_positive;
  }

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) {
      size_t j = static_cast<size_t>(uniform_int(static_cast<int>(i)));
      std::swap(v[i - 1], v[j]);
    }
  }

  std::array<uint64_t, 4> state() const { return {s_[0], s_[1], s_[2], s_[3]}; }
  void set_state(const std::array<uint64_t, 4>& st) {
    for (int i = 0; i < 4; ++i) s_[i] = st[i];
  }

  // Stateless derivation of child seeds (per-example streams stay identical
  // regardless of batch composition or thread count).
  static uint64_t mix(uint64_t a, uint64_t b) {
    uint64_t x = a ^ (b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2));
    return splitmix64(x);
  }

 private:
  static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  static uint64_t splitmix64(uint64_t& x) {
    uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  uint64_t s_[4];
};

}  // namespace senhead
