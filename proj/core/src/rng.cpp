#include "cgas/rng.hpp"

#include <cmath>

namespace cgas {
namespace {

inline std::uint64_t rotl(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}

constexpr double kTwoPi = 6.28318530717958647692;

}  // namespace

Rng::Rng(std::uint64_t seed, std::uint64_t stream) {
  SplitMix64 sm(seed ^ (0xD1B54A32D192ED03ull * (stream + 1)));
  for (auto& w : s_) w = sm.next();
}

std::uint64_t Rng::next_u64() {
  const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double Rng::uniform() {
  // 53-bit mantissa, shifted into (0,1] so log(u) is always finite
  return ((next_u64() >> 11) + 1) * 0x1.0p-53;
}

double Rng::uniform(double a, double b) { return a + (b - a) * uniform(); }

double Rng::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  double u2 = uniform();
  double r = std::sqrt(-2.0 * std::log(u1));
  spare_ = r * std::sin(kTwoPi * u2);
  have_spare_ = true;
  return r * std::cos(kTwoPi * u2);
}

std::uint32_t Rng::uniform_int(std::uint32_t n) {
  // Lemire rejection on the top 32 bits
  std::uint32_t x = (std::uint32_t)(next_u64() >> 32);
  std::uint64_t m = (std::uint64_t)x * n;
  std::uint32_t l = (std::uint32_t)m;
  if (l < n) {
    std::uint32_t t = (std::uint32_t)(-(std::int64_t)n) % n;
    while (l < t) {
      x = (std::uint32_t)(next_u64() >> 32);
      m = (std::uint64_t)x * n;
      l = (std::uint32_t)m;
    }
  }
  return (std::uint32_t)(m >> 32);
}

}  // namespace cgas
