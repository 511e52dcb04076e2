#pragma once

#include <cmath>
#include <cstdint>

namespace gfa {

// splitmix64, used to derive independent stream seeds.
inline uint64_t splitmix64(uint64_t& state) {
  uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// xoshiro256++. One instance per logical stream (per UE, per churn
// process, per replication) so draws never interleave between actors.
class Rng {
 public:
  Rng() : Rng(0x853c49e6748fea9bULL) {}

  explicit Rng(uint64_t seed) { reseed(seed); }

  // Independent stream `stream_id` of a master seed.
  Rng(uint64_t master_seed, uint64_t stream_id) {
    uint64_t s = master_seed ^ (stream_id * 0x9e3779b97f4a7c15ULL + 0x7f4a7c15ULL);
    reseed(s);
  }

  void reseed(uint64_t seed) {
    uint64_t sm = seed;
    for (auto& w : s_) w = splitmix64(sm);
    // avoid the all-zero state
    if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1;
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

  // uniform on (0,1), never exactly 0 or 1
  double u01() { return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53; }

  // unit-mean exponential (Rayleigh channel power gain)
  double exp1() { return -std::log(u01()); }

  double expo(double rate) { return -std::log(u01()) / rate; }

  // Poisson by inversion; meant for small means (per-TTI counts).
  int poisson(double mean) {
    double p = std::exp(-mean);
    double cum = p;
    double u = u01();
    int k = 0;
    while (u > cum && k < 1024) {
      ++k;
      p *= mean / k;
      cum += p;
    }
    return k;
  }

  // integer in [0, n)
  uint32_t below(uint32_t n) {
    // Lemire's unbiased bounded draw
    uint64_t x = next_u64() >> 32;
    uint64_t m = x * n;
    uint32_t l = static_cast<uint32_t>(m);
    if (l < n) {
      uint32_t t = (~n + 1u) % n;
      while (l < t) {
        x = next_u64() >> 32;
        m = x * n;
        l = static_cast<uint32_t>(m);
      }
    }
    return static_cast<uint32_t>(m >> 32);
  }

 private:
  static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  uint64_t s_[4];
};

}  // namespace gfa
