#pragma once

// Freely reduced words over two symbol families: constants a1, a2, ... and
// variables x1, x2, .... Words are reduced at construction and stay reduced;
// the empty word is the identity. An equation system is a nonempty list of
// words, read as "each word = 1".
//
// Concrete syntax: terms separated by whitespace, each term a symbol with an
// optional caret exponent, e.g. "x1^2 a1 x1^-1". Exponent 0 contributes
// nothing.

#include <cstdint>
#include <string>
#include <vector>

#include "eqwreath/error.hpp"

namespace eqw {

class FiniteGroup;

enum class SymbolKind : std::uint8_t { Constant, Variable };

struct Letter {
  SymbolKind kind;
  int index;  // 1-based
  int sign;   // +1 or -1

  Letter inverted() const { return Letter{kind, index, -sign}; }
  friend bool operator==(const Letter&, const Letter&) = default;
};

class Word {
 public:
  Word() = default;
  // Reduces the sequence; the stored form never contains an adjacent
  // letter/inverse pair.
  explicit Word(std::vector<Letter> letters);

  const std::vector<Letter>& letters() const { return letters_; }
  std::size_t length() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }

  Word inverted() const;
  friend Word operator*(const Word& lhs, const Word& rhs);
  friend bool operator==(const Word&, const Word&) = default;

  // Run-length text form, e.g. "x1^2 a1 x1^-1". The empty word prints as "".
  std::string str() const;

  int max_constant_index() const;
  int max_variable_index() const;

 private:
  std::vector<Letter> letters_;
};

// Free reduction: cancels adjacent inverse pairs until none remain.
Word reduce(const std::vector<Letter>& letters);

// Parses the concrete syntax above. Symbol indices start at 1; index 0 and
// malformed tokens raise ParseError with a 1-based position.
Word parse_word(const std::string& text);

// All initial segments of p, ordered by length: the empty word first, p last.
// Exactly length(p) + 1 entries, each itself reduced.
std::vector<Word> prefix_set(const Word& p);

class EquationSystem {
 public:
  // Rejects an empty word list. Constant/variable counts are the largest
  // indices appearing in the words (0 when a family is absent).
  explicit EquationSystem(std::vector<Word> words);

  const std::vector<Word>& words() const { return words_; }
  int constant_count() const { return k_; }
  int variable_count() const { return n_; }
  int equation_count() const { return r_; }

 private:
  std::vector<Word> words_;
  int k_ = 0;
  int n_ = 0;
  int r_ = 0;
};

// One word per line; blank lines and lines starting with '#' are skipped.
EquationSystem parse_system(const std::string& text);

// Group-valued evaluation: left-to-right product of the assigned letters,
// inverse letters through the group inverse. consts[i-1] assigns a<i>,
// vars[i-1] assigns x<i>; a letter without an assignment raises Error naming
// the symbol.
int evaluate(const Word& w, const FiniteGroup& group,
             const std::vector<int>& consts, const std::vector<int>& vars);

std::vector<int> evaluate_system(const EquationSystem& system,
                                 const FiniteGroup& group,
                                 const std::vector<int>& consts,
                                 const std::vector<int>& vars);

// Values of a word set under one assignment, sorted and deduplicated.
std::vector<int> prefix_values(const std::vector<Word>& words,
                               const FiniteGroup& group,
                               const std::vector<int>& consts,
                               const std::vector<int>& vars);

// Evaluation in the additive group of integers (used as the ambient group of
// integer quotient towers).
long long evaluate_additive(const Word& w, const std::vector<long long>& consts,
                            const std::vector<long long>& vars);

}  // namespace eqw
