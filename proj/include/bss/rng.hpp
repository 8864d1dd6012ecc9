#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace bss {

/// SplitMix64 finalizer. Used to expand a master seed into independent
/// stream seeds; never used as a generator on its own.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Folds a sequence of words into one stream seed.
constexpr std::uint64_t derive_seed(std::uint64_t root) { return splitmix64(root); }

template <typename... Rest>
constexpr std::uint64_t derive_seed(std::uint64_t root, std::uint64_t next, Rest... rest) {
  return derive_seed(splitmix64(root) ^ splitmix64(next + 0x632be59bd9b4e019ULL), rest...);
}

/// FNV-1a over a label; gives algorithm streams that do not depend on list order.
constexpr std::uint64_t label_hash(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1), 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n). n must be positive.
  int uniform_int(int n) {
    std::uniform_int_distribution<int> dist(0, n - 1);
    return dist(engine_);
  }

  bool bernoulli(double p) { return uniform() < p; }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace bss
