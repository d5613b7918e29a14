#include "core/rng.hpp"

#include <cmath>
#include <numbers>

namespace fieldinfer {

namespace {

constexpr uint32_t kMult0 = 0xD2511F53u;
constexpr uint32_t kMult1 = 0xCD9E8D57u;
constexpr uint32_t kWeyl0 = 0x9E3779B9u;
constexpr uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(uint32_t a, uint32_t b, uint32_t* hi, uint32_t* lo) {
  uint64_t p = static_cast<uint64_t>(a) * b;
  *hi = static_cast<uint32_t>(p >> 32);
  *lo = static_cast<uint32_t>(p);
}

// 53-bit uniform in (0,1) from two 32-bit words.
inline double to_unit(uint32_t a, uint32_t b) {
  uint64_t k = ((static_cast<uint64_t>(a) << 32) | b) >> 11;
  return (static_cast<double>(k) + 0.5) * 0x1p-53;
}

inline std::pair<double, double> box_muller(const std::array<uint32_t, 4>& w) {
  double u1 = to_unit(w[0], w[1]);
  double u2 = to_unit(w[2], w[3]);
  double r = std::sqrt(-2.0 * std::log(u1));
  double a = 2.0 * std::numbers::pi * u2;
  return {r * std::cos(a), r * std::sin(a)};
}

}  // namespace

std::array<uint32_t, 4> philox4x32(const std::array<uint32_t, 4>& counter,
                                   uint64_t key) {
  std::array<uint32_t, 4> c = counter;
  uint32_t k0 = static_cast<uint32_t>(key);
  uint32_t k1 = static_cast<uint32_t>(key >> 32);
  for (int round = 0; round < 10; round++) {
    uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kMult0, c[0], &hi0, &lo0);
    mulhilo(kMult1, c[2], &hi1, &lo1);
    c = {hi1 ^ c[1] ^ k0, lo1, hi0 ^ c[3] ^ k1, lo0};
    k0 += kWeyl0;
    k1 += kWeyl1;
  }
  return c;
}

std::pair<double, double> normal_pair(uint64_t seed, StreamPurpose purpose,
                                      uint32_t lane_lo, uint32_t lane_hi) {
  return box_muller(
      philox4x32({lane_lo, lane_hi, 0, static_cast<uint32_t>(purpose)}, seed));
}

double keyed_uniform(uint64_t seed, StreamPurpose purpose, uint32_t stream,
                     uint32_t index) {
  auto w = philox4x32({index, 0, stream, static_cast<uint32_t>(purpose)}, seed);
  return to_unit(w[0], w[1]);
}

uint64_t derive_seed(uint64_t master, uint32_t index, uint32_t salt) {
  auto w = philox4x32(
      {index, salt, 0, static_cast<uint32_t>(StreamPurpose::kSimDerive)}, master);
  return (static_cast<uint64_t>(w[0]) << 32) | w[1];
}

double NormalStream::next() {
  if (has_cached_) {
    has_cached_ = false;
    return cached_;
  }
  auto w = philox4x32({static_cast<uint32_t>(block_),
                       static_cast<uint32_t>(block_ >> 32), stream_, purpose_},
                      seed_);
  block_++;
  auto [z0, z1] = box_muller(w);
  cached_ = z1;
  has_cached_ = true;
  return z0;
}

}  // namespace fieldinfer
