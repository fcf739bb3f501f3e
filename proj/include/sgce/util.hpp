#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace sgce {

// Lowercases, trims, and collapses internal whitespace runs to a single space.
std::string normalize_label(std::string_view label);

// Splits on single spaces (input is expected to be normalized).
std::vector<std::string> split_tokens(std::string_view label);

// 64-bit FNV-1a; stable across platforms, used for content-addressed caches.
class Fnv1a {
 public:
  Fnv1a& add(std::string_view bytes);
  Fnv1a& add(double value);
  Fnv1a& add(std::uint64_t value);
  std::uint64_t digest() const noexcept { return state_; }
  std::string hex() const;

 private:
  std::uint64_t state_ = 0xcbf29ce484222325ULL;
};

// Deterministic random source. Only raw mt19937_64 output is used so sequences
// are identical across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // Uniform in [0, n) without modulo bias.
  std::uint64_t below(std::uint64_t n);
  // Standard normal via Box-Muller.
  double normal();

  template <typename T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::swap(items[i - 1], items[below(i)]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

// Runs fn(i) for i in [0, count) on up to `threads` workers. Each index is
// processed exactly once; callers write results into per-index slots.
template <typename Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn);

// Formats a double with enough digits to round-trip exactly.
std::string format_double(double value);

}  // namespace sgce

#include "sgce/detail/parallel_impl.hpp"
