#ifndef EFG_RNG_HPP
#define EFG_RNG_HPP

#include <algorithm>
#include <cstdint>
#include <utility>
#include <vector>

namespace efg {

// Seedable PRNG with a fixed cross-platform output sequence (splitmix64).
// The bounded-draw and shuffle helpers below avoid
// std::uniform_int_distribution, whose mapping is implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(split_mix(seed)) {}

  std::uint64_t next_u64() {
    std::uint64_t x = state_ += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
  }

  // Uniform integer in [0, n) by rejection; exact for any n >= 1.
  std::uint64_t next_below(std::uint64_t n) {
    std::uint64_t threshold = (0 - n) % n;
    for (;;) {
      std::uint64_t r = next_u64();
      if (r >= threshold) return r % n;
    }
  }

  // Uniform double in [0, 1) with 53 random bits.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniformly chosen k-subset of items, returned sorted. Partial
  // Fisher-Yates on a scratch copy.
  std::vector<int> sample_subset(const std::vector<int>& items, std::size_t k);

  // In-place uniform shuffle (Fisher-Yates).
  void shuffle(std::vector<int>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(next_below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  static std::uint64_t split_mix(std::uint64_t seed) {
    return seed ^ 0xD1B54A32D192ED03ull;
  }
  std::uint64_t state_;
};

inline std::vector<int> Rng::sample_subset(const std::vector<int>& items,
                                           std::size_t k) {
  if (k > items.size()) k = items.size();
  std::vector<int> pool = items;
  std::vector<int> out;
  out.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    std::size_t j = i + static_cast<std::size_t>(next_below(pool.size() - i));
    std::swap(pool[i], pool[j]);
    out.push_back(pool[i]);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace efg

#endif  // EFG_RNG_HPP
