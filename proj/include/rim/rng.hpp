#pragma once

#include <cstdint>

namespace rim {

inline constexpr uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

// Finalizer of the splitmix64 generator. Used both as a mixer for seed
// derivation and as the engine behind Rng.
inline uint64_t splitmix64(uint64_t x) {
  x += kGolden;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Uniform double in [0, 1) from the top 53 bits.
inline double unit_double(uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

inline uint64_t mix2(uint64_t a, uint64_t b) {
  return splitmix64(splitmix64(a) ^ (b + kGolden));
}

inline uint64_t mix3(uint64_t a, uint64_t b, uint64_t c) {
  return mix2(mix2(a, b), c);
}

// Counter-based splitmix64 stream. Bit-exact on every platform, so seeded
// runs reproduce byte-identical outputs.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  uint64_t next_u64() { return splitmix64(state_++); }
  double next_unit() { return unit_double(next_u64()); }
  bool bernoulli(double p) { return next_unit() < p; }

  // Derive an independent substream seed.
  uint64_t fork() { return mix2(next_u64(), 0xf02cu); }

 private:
  uint64_t state_;
};

// Stateless coin for edge `eid` within one simulation. The outcome depends
// only on (sim_seed, eid), not on traversal order, so lazily-sampled
// cascades equal an up-front live-edge draw and candidate evaluations can
// share realizations (common random numbers).
inline bool edge_live_draw(uint64_t sim_seed, int eid, double p) {
  if (p <= 0.0) return false;
  if (p >= 1.0) return true;
  return unit_double(splitmix64(sim_seed ^ ((static_cast<uint64_t>(eid) + 1) * kGolden))) < p;
}

}  // namespace rim
