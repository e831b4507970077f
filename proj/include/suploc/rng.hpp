#ifndef SUPLOC_RNG_HPP_
#define SUPLOC_RNG_HPP_

#include <cstdint>
#include <limits>

namespace suploc {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Counter-based stream: the i-th output of path p under seed s is a pure
/// function of (s, p, i), so samples do not depend on how paths are spread
/// over threads. Satisfies UniformRandomBitGenerator.
class PathStream {
 public:
  using result_type = std::uint64_t;
  static constexpr const char *generator_id = "splitmix64-counter/1";

  PathStream(std::uint64_t seed, std::uint64_t path)
      : key_(mix64(seed ^ 0x9e3779b97f4a7c15ULL) ^ mix64(path + 0x632be59bd9b4e019ULL)) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() { return mix64(key_ + 0x9e3779b97f4a7c15ULL * ++counter_); }

  /// Uniform double in [0,1) with 53 random bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace suploc

#endif  // SUPLOC_RNG_HPP_
