#ifndef FIELDINFER_CORE_RNG_HPP_
#define FIELDINFER_CORE_RNG_HPP_

#include <array>
#include <cstdint>
#include <utility>

namespace fieldinfer {

// Philox4x32-10 counter-based block cipher (Salmon et al. 2011 constants).
// Counter-based generation gives cheap random access keyed by
// (seed, purpose, stream, block), which the replicate / simulation / lattice
// keying below relies on.
std::array<uint32_t, 4> philox4x32(const std::array<uint32_t, 4>& counter,
                                   uint64_t key);

// Purpose tags partition the counter space between independent uses of one seed.
enum class StreamPurpose : uint32_t {
  kBootstrapReplicate = 1,
  kNoiseField = 2,
  kSimDerive = 3,
  kVbFullField = 4,
  kVbBlockCorner = 5,
  kVbBlockField = 6,
};

// Two standard normals from one Philox block via Box-Muller.
std::pair<double, double> normal_pair(uint64_t seed, StreamPurpose purpose,
                                      uint32_t lane_lo, uint32_t lane_hi);

// Uniform on (0,1) keyed by (seed, purpose, stream, index).
double keyed_uniform(uint64_t seed, StreamPurpose purpose, uint32_t stream,
                     uint32_t index);

// Derives a child seed (e.g. per simulation) from a master seed.
uint64_t derive_seed(uint64_t master, uint32_t index, uint32_t salt);

// Sequential stream of standard normals; blocks advance a 64-bit counter in the
// low two counter lanes, so streams keyed by (seed, purpose, stream) never
// collide with the lattice-keyed draws above.
class NormalStream {
 public:
  NormalStream(uint64_t seed, StreamPurpose purpose, uint32_t stream)
      : seed_(seed), purpose_(static_cast<uint32_t>(purpose)), stream_(stream) {}
  double next();

 private:
  uint64_t seed_;
  uint32_t purpose_, stream_;
  uint64_t block_ = 0;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace fieldinfer

#endif  // FIELDINFER_CORE_RNG_HPP_
