#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace kstar {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Invalid arguments or configuration (k out of range, bad fractions, ...).
struct ParameterError : Error {
  using Error::Error;
};

// Malformed input files. Row and column are 1-based, 0 when unknown.
struct ParseError : Error {
  ParseError(const std::string& msg, long row = 0, long col = 0)
      : Error(msg), row(row), col(col) {}
  long row;
  long col;
};

// Data that violates a type invariant (size, finiteness, sign, labels).
struct DataError : Error {
  using Error::Error;
};

// Overflow, singular systems and other numerical breakdowns.
struct NumericalError : Error {
  using Error::Error;
};

using Warnings = std::vector<std::string>;

inline void warn(Warnings* sink, std::string msg) {
  if (sink) sink->push_back(std::move(msg));
}

}  // namespace kstar
