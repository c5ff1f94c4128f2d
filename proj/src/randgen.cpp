#include "eqwreath/randgen.hpp"

namespace eqw {

std::uint64_t derive_seed(std::uint64_t root, std::uint64_t index) {
  std::uint64_t z = root + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

Word random_word(Rng& rng, int max_k, int max_n, int len) {
  std::vector<Letter> letters;
  letters.reserve(len);
  for (int i = 0; i < len; ++i) {
    bool constant = max_n == 0 || (max_k > 0 && rng.coin());
    SymbolKind kind = constant ? SymbolKind::Constant : SymbolKind::Variable;
    int index = 1 + rng.below_int(constant ? max_k : max_n);
    int sign = rng.coin() ? 1 : -1;
    letters.push_back(Letter{kind, index, sign});
  }
  return Word(std::move(letters));
}

EquationSystem random_system(Rng& rng, int max_k, int max_n, int max_total_len,
                             int max_r) {
  int r = 1 + rng.below_int(max_r);
  std::vector<Word> words;
  int remaining = max_total_len;
  for (int i = 0; i < r; ++i) {
    int budget = remaining - (r - 1 - i);  // leave one letter per later word
    int len = 1 + rng.below_int(std::max(1, budget));
    remaining -= len;
    words.push_back(random_word(rng, max_k, max_n, len));
  }
  return EquationSystem(std::move(words));
}

}  // namespace eqw
