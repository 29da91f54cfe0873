#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace causaldir {

/// Causal direction between the two coordinates of a pair.
enum class Direction { XtoY, YtoX, Undecided };

/// Which coordinate a conditional slice is taken at.
enum class Axis { GivenX, GivenY };

std::string_view to_string(Direction d);
Direction parse_direction(std::string_view s);

// Error taxonomy. The CLI maps DegeneratePairError to exit code 2 and
// every other Error to exit code 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(what + " (line " + std::to_string(line) + ")"), line_(line) {}
  explicit ParseError(const std::string& what) : Error(what) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_ = 0;
};

class DimensionError : public Error {
  using Error::Error;
};

class DegeneratePairError : public Error {
  using Error::Error;
};

class ParameterError : public Error {
  using Error::Error;
};

class ConfigError : public Error {
  using Error::Error;
};

class ScoringError : public Error {
  using Error::Error;
};

}  // namespace causaldir
