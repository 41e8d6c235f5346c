#pragma once

#include <stdexcept>
#include <string>

namespace gnnseed {

// All library failures derive from Error so callers can catch one type;
// the concrete classes exist so tests can assert the precise failure mode.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct OutOfRangeError : Error {
  using Error::Error;
};
struct ShapeError : Error {
  using Error::Error;
};
// Operations that need edges (modularity, GEE, training) on an m = 0 graph.
struct DegenerateGraphError : Error {
  using Error::Error;
};
struct EmptyClassError : Error {
  using Error::Error;
};
struct InsufficientPointsError : Error {
  using Error::Error;
};
struct DegenerateFitError : Error {
  using Error::Error;
};
struct InfeasibleSplitError : Error {
  using Error::Error;
};
struct EmptyMaskError : Error {
  using Error::Error;
};
struct ParseError : Error {
  using Error::Error;
};
struct SizeMismatchError : Error {
  using Error::Error;
};
struct ConfigError : Error {
  using Error::Error;
};

}  // namespace gnnseed
