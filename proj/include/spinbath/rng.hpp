#pragma once

#include <cstdint>
#include <random>

namespace spinbath {

// splitmix64 step; used both as a mixer for seed derivation and to seed the
// per-stream engines.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Documented seed-splitting rule: a child stream is identified by a purpose
// tag and an index. child = mix(mix(root ^ tag), index). Independent streams
// for bath placement vs. frozen mean-field states never collide.
enum class SeedPurpose : std::uint64_t {
  bath_placement = 0x1,
  mean_field_states = 0x2,
  configuration = 0x3,
};

inline std::uint64_t child_seed(std::uint64_t root, SeedPurpose purpose,
                                std::uint64_t index) {
  std::uint64_t s = root ^ (0xa0761d6478bd642full * static_cast<std::uint64_t>(purpose));
  std::uint64_t a = splitmix64(s);
  s = a ^ (0xe7037ed1a0b428dbull * (index + 1));
  return splitmix64(s);
}

// mt19937_64 with an explicit uniform mapping; avoids the
// implementation-defined behaviour of std distributions so identical seeds
// give identical draws on any platform.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  bool bernoulli(double p) { return uniform01() < p; }

  // +1/2 or -1/2 with equal probability.
  double spin_half() { return (engine_() & 1ull) ? 0.5 : -0.5; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace spinbath
