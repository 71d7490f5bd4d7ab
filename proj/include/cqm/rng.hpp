#ifndef CQM_RNG_HPP_
#define CQM_RNG_HPP_

#include <cstdint>
#include <string_view>

namespace cqm {

// Small deterministic generator (splitmix64). We roll our own instead of
// using <random> distributions because their output is implementation
// defined, and reports must be reproducible byte for byte from a seed.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, n), n >= 1.
  std::uint64_t below(std::uint64_t n) { return next() % n; }

  // Uniform in [lo, hi] inclusive.
  long long range(long long lo, long long hi) {
    return lo + static_cast<long long>(below(static_cast<std::uint64_t>(hi - lo + 1)));
  }

  bool chance(std::uint64_t num, std::uint64_t den) { return below(den) < num; }

  // Derive an independent stream for a named task so that adding a consumer
  // does not shift the values seen by another.
  SeededRng fork(std::string_view tag) const {
    std::uint64_t h = 0xcbf29ce484222325ULL ^ state_;
    for (char c : tag) {
      h ^= static_cast<unsigned char>(c);
      h *= 0x100000001b3ULL;
    }
    return SeededRng(h);
  }

 private:
  std::uint64_t state_;
};

}  // namespace cqm

#endif  // CQM_RNG_HPP_
