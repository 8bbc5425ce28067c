#pragma once

#include <array>
#include <cstdint>

namespace gvtraj {

// One block of the Philox4x32-10 counter-based generator (Salmon et al.
// style): 4 output words from a 2-word key and 4-word counter. Stateless,
// so results are reproducible across platforms and independent of call
// order.
std::array<uint32_t, 4> philox4x32(const std::array<uint32_t, 2>& key,
                                   const std::array<uint32_t, 4>& ctr);

// Stream ids used by the toolkit so that e.g. trajectory sampling and
// noise injection never share random draws even under the same seed.
namespace rng_stream {
inline constexpr uint64_t kTrajectory = 1;
inline constexpr uint64_t kMeasurementNoise = 2;
inline constexpr uint64_t kNoiseInjection = 3;
inline constexpr uint64_t kOutlierInjection = 4;
inline constexpr uint64_t kGraphClosures = 5;
inline constexpr uint64_t kTest = 1000;
}  // namespace rng_stream

// Convenience engine on top of philox4x32: key <- seed, counter high words
// <- stream id, counter low words increment per block.
class Rng {
 public:
  Rng(uint64_t seed, uint64_t stream);

  uint32_t next_u32();
  uint64_t next_u64();

  // uniform in [0, 1), 53-bit resolution
  double uniform01();
  double uniform(double lo, double hi);

  // standard normal via Box-Muller (second value cached)
  double normal();

 private:
  void refill();

  std::array<uint32_t, 2> key_;
  uint64_t stream_;
  uint64_t block_ = 0;
  std::array<uint32_t, 4> buf_{};
  int buf_pos_ = 4;
  double cached_normal_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace gvtraj
