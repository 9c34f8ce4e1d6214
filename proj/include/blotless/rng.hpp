#ifndef BLOTLESS_RNG_HPP
#define BLOTLESS_RNG_HPP

#include <cstdint>

namespace blotless {

// All randomness in the library flows through the generators below so that
// every experiment is reproducible bit-for-bit across platforms. The stack
// is fixed by convention, not left to the standard library:
//
//   * splitmix64 for seed expansion and seed mixing,
//   * xoshiro256++ as the uniform stream,
//   * uniform doubles take the top 53 bits: (x >> 11) * 2^-53,
//   * gaussians via Box-Muller, z = sqrt(-2 ln(1-u1)) * cos(2 pi u2),
//     consuming exactly two uniforms per draw (no caching of the sine
//     branch, so the stream position is a pure function of the number of
//     draws).

inline std::uint64_t splitmix64_next(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Deterministic combination of a base seed with a stream tag (operation id,
// grid index, trial index, ...). Chaining is associative enough in practice:
// mix_seed(mix_seed(base, a), b) defines the documented two-level scheme.
inline std::uint64_t mix_seed(std::uint64_t base, std::uint64_t tag) {
  std::uint64_t state = base ^ (0xA0761D6478BD642FULL + tag);
  std::uint64_t h = splitmix64_next(state);
  return h ^ tag;
}

// Per-operation stream tags. Each generator derives its own stream from
// (seed, tag) so that the output of one operation never depends on whether
// another operation ran before it.
enum class StreamTag : std::uint64_t {
  kDictionary = 1,
  kCoeffs = 2,
  kNoise = 3,
  kCorrupt = 4,
  kLearnInit = 5,
  kPatchSample = 6,
  kImageNoise = 7,
};

inline std::uint64_t stream_seed(std::uint64_t seed, StreamTag tag) {
  return mix_seed(seed, static_cast<std::uint64_t>(tag));
}

class Xoshiro256pp {
public:
  explicit Xoshiro256pp(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& word : state_) word = splitmix64_next(sm);
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform in [0, 1).
  double uniform() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller; always consumes two uniforms.
  double gaussian();

  // Uniform integer in [0, bound) by rejection (unbiased).
  std::uint64_t uniform_below(std::uint64_t bound);

private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }
  std::uint64_t state_[4];
};

}  // namespace blotless

#endif
