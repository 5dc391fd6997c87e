#pragma once

#include <cstdint>
#include <initializer_list>
#include <optional>
#include <random>
#include <string_view>

namespace bdpr {

/// SplitMix64 finalizer (Steele, Lea, Flood 2014). Bijective on 64-bit words.
std::uint64_t splitmix64(std::uint64_t x);

/// Folds a sequence of words into a seed: s ← splitmix64(s ⊕ w) for each w,
/// starting from s = splitmix64(master).
std::uint64_t mix_seed(std::uint64_t master, std::initializer_list<std::uint64_t> words);

/// Seeded generator with a platform-independent output sequence.
///
/// std::mt19937_64 is fully specified by the standard; the distribution
/// objects of <random> are not, so uniforms and normals are derived here:
/// uniform = (top 53 bits + 0.5) / 2^53, normal = Box–Muller on two such
/// uniforms (cosine branch first, sine branch cached for the next call).
class Rng {
 public:
  static constexpr std::string_view kName = "mt19937_64/uniform53/box-muller";

  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on the open interval (0, 1).
  double uniform();
  double normal();
  std::uint64_t next_u64() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  std::optional<double> cached_normal_;
};

}  // namespace bdpr
