#pragma once
// Deterministic random streams: xoshiro256++ seeded through SplitMix64.
// std::uniform_real_distribution / std::normal_distribution are deliberately
// avoided — their draw sequences differ between standard libraries, and chain
// outputs must be bit-identical for a fixed (seed, stream).

#include <cstdint>

namespace cgas {

struct SplitMix64 {
  std::uint64_t s;
  explicit SplitMix64(std::uint64_t seed) : s(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (s += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }
};

class Rng {
 public:
  // Stream derivation recorded in run manifests: the xoshiro state is the
  // first four SplitMix64 outputs seeded at seed ^ 0xD1B54A32D192ED03*(stream+1).
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t next_u64();
  double uniform();                            // (0, 1]
  double uniform(double a, double b);          // a + (b-a)*U with U in (0,1]
  double normal();                             // standard Gaussian
  std::uint32_t uniform_int(std::uint32_t n);  // unbiased in [0, n)

 private:
  std::uint64_t s_[4];
  double spare_ = 0;
  bool have_spare_ = false;
};

}  // namespace cgas
