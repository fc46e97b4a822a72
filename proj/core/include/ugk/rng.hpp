#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>

namespace ugk {

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t basis = 0xcbf29ce484222325ULL);

/// Lower-case, zero-padded 16 digit hex rendering of a hash.
std::string hash_hex(std::uint64_t h);

/// xoshiro256** seeded through SplitMix64. All draws are defined in terms of
/// the raw 64-bit stream, so sequences are identical on every platform
/// (unlike the std distributions).
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  /// Independent stream derived from a root seed and a stable name, e.g.
  /// Rng::named(seed, "init/rgcn0/w_self").
  static Rng named(std::uint64_t seed, std::string_view name);

  /// Child stream; the parent advances by one draw.
  Rng split(std::string_view name);

  std::uint64_t next_u64();
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi);
  /// Uniform integer on [0, n).
  std::uint64_t below(std::uint64_t n);
  /// Standard normal via Box-Muller (one value per call).
  double normal();

  template <class T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::uint64_t s_[4];
};

}  // namespace ugk
