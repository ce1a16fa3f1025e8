#pragma once

#include <stdexcept>
#include <string>

namespace rcnu {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// An order relation contains a cycle.
struct CycleError : Error {
  using Error::Error;
};

// An enumeration exceeded its configured cap.
struct SizeError : Error {
  using Error::Error;
};

struct FiringError : Error {
  using Error::Error;
};

struct ParseError : Error {
  ParseError(const std::string& what, int line = 0)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line(line) {}
  int line;
};

struct ValidationError : Error {
  using Error::Error;
};

// A search or solve ran out of its node budget before finishing.
struct BudgetError : Error {
  using Error::Error;
};

}  // namespace rcnu
