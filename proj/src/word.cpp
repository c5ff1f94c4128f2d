#include "eqwreath/word.hpp"

#include <algorithm>
#include <cctype>

#include "eqwreath/group.hpp"

namespace eqw {

namespace {

constexpr long kMaxIndex = 1'000'000;
constexpr long kMaxExponent = 1'000'000;

std::string symbol_name(SymbolKind kind, int index) {
  return (kind == SymbolKind::Constant ? "a" : "x") + std::to_string(index);
}

}  // namespace

Word::Word(std::vector<Letter> letters) {
  letters_.reserve(letters.size());
  for (const Letter& l : letters) {
    if (!letters_.empty() && letters_.back() == l.inverted()) {
      letters_.pop_back();
    } else {
      letters_.push_back(l);
    }
  }
}

Word Word::inverted() const {
  std::vector<Letter> out;
  out.reserve(letters_.size());
  for (auto it = letters_.rbegin(); it != letters_.rend(); ++it)
    out.push_back(it->inverted());
  Word w;
  w.letters_ = std::move(out);  // reversal of a reduced word is reduced
  return w;
}

Word operator*(const Word& lhs, const Word& rhs) {
  std::vector<Letter> all = lhs.letters_;
  all.insert(all.end(), rhs.letters_.begin(), rhs.letters_.end());
  return Word(std::move(all));
}

std::string Word::str() const {
  std::string out;
  std::size_t i = 0;
  while (i < letters_.size()) {
    std::size_t j = i;
    while (j < letters_.size() && letters_[j] == letters_[i]) ++j;
    if (!out.empty()) out += ' ';
    const Letter& l = letters_[i];
    out += symbol_name(l.kind, l.index);
    long run = static_cast<long>(j - i);
    if (l.sign < 0) {
      out += "^-" + std::to_string(run);
    } else if (run > 1) {
      out += "^" + std::to_string(run);
    }
    i = j;
  }
  return out;
}

int Word::max_constant_index() const {
  int m = 0;
  for (const Letter& l : letters_)
    if (l.kind == SymbolKind::Constant) m = std::max(m, l.index);
  return m;
}

int Word::max_variable_index() const {
  int m = 0;
  for (const Letter& l : letters_)
    if (l.kind == SymbolKind::Variable) m = std::max(m, l.index);
  return m;
}

Word reduce(const std::vector<Letter>& letters) { return Word(letters); }

Word parse_word(const std::string& text) {
  std::vector<Letter> letters;
  std::size_t i = 0;
  const std::size_t len = text.size();
  auto fail = [](const std::string& msg, std::size_t pos) {
    throw ParseError(msg + " at position " + std::to_string(pos + 1), pos + 1);
  };
  while (true) {
    while (i < len && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    if (i >= len) break;
    char c = text[i];
    SymbolKind kind;
    if (c == 'a') {
      kind = SymbolKind::Constant;
    } else if (c == 'x') {
      kind = SymbolKind::Variable;
    } else {
      fail(std::string("expected symbol 'a<i>' or 'x<i>', found '") + c + "'", i);
      return Word{};  // unreachable
    }
    ++i;
    if (i >= len || !std::isdigit(static_cast<unsigned char>(text[i])))
      fail("expected digits after symbol letter", i < len ? i : len - 1);
    std::size_t digit_pos = i;
    long index = 0;
    while (i < len && std::isdigit(static_cast<unsigned char>(text[i]))) {
      index = index * 10 + (text[i] - '0');
      if (index > kMaxIndex) fail("symbol index too large", digit_pos);
      ++i;
    }
    if (index == 0) fail("symbol index 0 is not allowed", digit_pos);

    long exponent = 1;
    if (i < len && text[i] == '^') {
      ++i;
      bool negative = false;
      if (i < len && (text[i] == '-' || text[i] == '+')) {
        negative = text[i] == '-';
        ++i;
      }
      if (i >= len || !std::isdigit(static_cast<unsigned char>(text[i])))
        fail("expected integer exponent after '^'", i < len ? i : len - 1);
      long magnitude = 0;
      while (i < len && std::isdigit(static_cast<unsigned char>(text[i]))) {
        magnitude = magnitude * 10 + (text[i] - '0');
        if (magnitude > kMaxExponent) fail("exponent too large", i);
        ++i;
      }
      exponent = negative ? -magnitude : magnitude;
    }
    if (i < len && !std::isspace(static_cast<unsigned char>(text[i])))
      fail("expected whitespace between terms", i);

    int sign = exponent >= 0 ? 1 : -1;
    long count = exponent >= 0 ? exponent : -exponent;
    for (long r = 0; r < count; ++r)
      letters.push_back(Letter{kind, static_cast<int>(index), sign});
  }
  return Word(std::move(letters));
}

std::vector<Word> prefix_set(const Word& p) {
  std::vector<Word> out;
  out.reserve(p.length() + 1);
  std::vector<Letter> acc;
  out.emplace_back();
  for (const Letter& l : p.letters()) {
    acc.push_back(l);
    out.emplace_back(acc);
  }
  return out;
}

EquationSystem::EquationSystem(std::vector<Word> words) : words_(std::move(words)) {
  if (words_.empty())
    throw ParseError("empty equation system: at least one word is required");
  r_ = static_cast<int>(words_.size());
  for (const Word& w : words_) {
    k_ = std::max(k_, w.max_constant_index());
    n_ = std::max(n_, w.max_variable_index());
  }
}

EquationSystem parse_system(const std::string& text) {
  std::vector<Word> words;
  std::size_t start = 0;
  int line_no = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    std::string line = text.substr(start, end - start);
    ++line_no;
    start = end + 1;
    std::size_t first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') {
      if (end == text.size()) break;
      continue;
    }
    try {
      words.push_back(parse_word(line));
    } catch (const ParseError& e) {
      throw ParseError("line " + std::to_string(line_no) + ": " + e.what(),
                       e.position);
    }
    if (end == text.size()) break;
  }
  return EquationSystem(std::move(words));
}

int evaluate(const Word& w, const FiniteGroup& group, const std::vector<int>& consts,
             const std::vector<int>& vars) {
  int acc = 0;
  for (const Letter& l : w.letters()) {
    const std::vector<int>& assignment =
        l.kind == SymbolKind::Constant ? consts : vars;
    if (l.index > static_cast<int>(assignment.size()))
      throw Error("unassigned symbol " + symbol_name(l.kind, l.index));
    int value = assignment[l.index - 1];
    if (value < 0 || value >= group.order())
      throw Error("assignment for " + symbol_name(l.kind, l.index) +
                  " is outside the group");
    if (l.sign < 0) value = group.inv(value);
    acc = group.mul(acc, value);
  }
  return acc;
}

std::vector<int> evaluate_system(const EquationSystem& system, const FiniteGroup& group,
                                 const std::vector<int>& consts,
                                 const std::vector<int>& vars) {
  std::vector<int> out;
  out.reserve(system.words().size());
  for (const Word& w : system.words()) out.push_back(evaluate(w, group, consts, vars));
  return out;
}

std::vector<int> prefix_values(const std::vector<Word>& words, const FiniteGroup& group,
                               const std::vector<int>& consts,
                               const std::vector<int>& vars) {
  std::vector<int> out;
  out.reserve(words.size());
  for (const Word& w : words) out.push_back(evaluate(w, group, consts, vars));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

long long evaluate_additive(const Word& w, const std::vector<long long>& consts,
                            const std::vector<long long>& vars) {
  long long acc = 0;
  for (const Letter& l : w.letters()) {
    const std::vector<long long>& assignment =
        l.kind == SymbolKind::Constant ? consts : vars;
    if (l.index > static_cast<int>(assignment.size()))
      throw Error("unassigned symbol " + symbol_name(l.kind, l.index));
    acc += l.sign * assignment[l.index - 1];
  }
  return acc;
}

}  // namespace eqw
