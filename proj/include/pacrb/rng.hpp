#pragma once

#include <cstdint>
#include <string_view>

namespace pacrb {

/// splitmix64: the seeding/stream-derivation generator used throughout.
/// Small, portable, and bit-stable across platforms, which the seeded
/// reproducibility contract relies on.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) {
    return lo + (hi - lo) * next_double();
  }

 private:
  std::uint64_t state_;
};

/// FNV-1a, used to fold labels into derived stream seeds.
constexpr std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// Order-independent per-stream seed from (root seed, tag, index).
inline std::uint64_t derive_seed(std::uint64_t root, std::uint64_t tag,
                                 std::uint64_t index) {
  SplitMix64 mix(root ^ (tag * 0x9e3779b97f4a7c15ULL) ^
                 (index + 0x632be59bd9b4e019ULL));
  mix.next_u64();
  return mix.next_u64();
}

}  // namespace pacrb
