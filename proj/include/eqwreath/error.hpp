#pragma once

#include <stdexcept>
#include <string>

namespace eqw {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed text input (words, group files, tower files). `position` is a
// 1-based character offset into the offending text where known, 0 otherwise.
struct ParseError : Error {
  explicit ParseError(const std::string& msg, std::size_t pos = 0)
      : Error(msg), position(pos) {}
  std::size_t position;
};

// A constructed object failed an axiom or consistency check.
struct ValidationError : Error {
  using Error::Error;
};

// A search exceeded its configured node budget.
struct BudgetError : Error {
  using Error::Error;
};

// A construction would exceed a configured size cap.
struct SizeError : Error {
  using Error::Error;
};

}  // namespace eqw
