#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace zerofolio {

/// splitmix64. Pinned so shuffles and forest seeds agree across platforms.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Value in [0, bound); bound > 0. Plain modulo, no rejection.
  std::uint64_t below(std::uint64_t bound) { return next() % bound; }

  /// Uniform double in [0, 1).
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// One-shot mix of `x`, i.e. the first output of a generator seeded with x.
  static std::uint64_t mix(std::uint64_t x) { return SplitMix64(x).next(); }

 private:
  std::uint64_t state_;
};

struct SerializationConfig {
  std::size_t budget_chars = 10000;
  std::uint64_t seed = 0;
  bool shuffle = true;
};

/// Seeded Fisher-Yates permutation: for i = n-1 .. 1, swap(i, next() % (i+1)).
std::vector<std::string> shuffle_lines(std::vector<std::string> lines, std::uint64_t seed);

/// Text fed to the embedder for one instance: files' lines concatenated in
/// order, shuffled when `config.shuffle`, joined with '\n', and cut to
/// `config.budget_chars` Unicode scalar values. Invalid UTF-8 bytes become
/// U+FFFD first.
std::string serialize_instance(const std::vector<std::string>& files, const SerializationConfig& config);

/// Lines of all files after UTF-8 repair, in file order.
std::vector<std::string> instance_lines(const std::vector<std::string>& files);

}  // namespace zerofolio
