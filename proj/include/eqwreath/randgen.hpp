#pragma once

// Deterministic generation for randomized trials. All draws go through
// mt19937_64 (a fully specified engine) with modulo sampling, so identical
// seeds give identical results on every platform and standard library.

#include <cstdint>
#include <random>

#include "eqwreath/word.hpp"

namespace eqw {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  std::uint64_t below(std::uint64_t n) { return n <= 1 ? 0 : engine_() % n; }
  int below_int(int n) { return static_cast<int>(below(static_cast<std::uint64_t>(n))); }
  bool coin() { return (engine_() & 1) != 0; }

 private:
  std::mt19937_64 engine_;
};

// SplitMix64 step; decorrelates per-trial seeds derived from one root seed.
std::uint64_t derive_seed(std::uint64_t root, std::uint64_t index);

// Random letters over a<=max_k constants and <=max_n variables, then reduced;
// the result may be shorter than `len` or empty.
Word random_word(Rng& rng, int max_k, int max_n, int len);

// r in 1..max_r words with total pre-reduction length <= max_total_len.
EquationSystem random_system(Rng& rng, int max_k, int max_n, int max_total_len,
                             int max_r);

}  // namespace eqw
