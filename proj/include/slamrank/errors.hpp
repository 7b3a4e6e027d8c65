#ifndef SLAMRANK_ERRORS_HPP_
#define SLAMRANK_ERRORS_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace slamrank {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Mismatched vector/matrix shapes between paired inputs.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Invalid grades, ranks, cutoffs, relevance patterns or other parameters.
class InvalidArgumentError : public Error {
 public:
  using Error::Error;
};

// Weight vector with no positive entry where one is required.
class DegenerateWeightsError : public Error {
 public:
  using Error::Error;
};

// Problem size beyond what exhaustive enumeration supports.
class SizeError : public Error {
 public:
  using Error::Error;
};

// Malformed ranking-file content; carries the 1-based line number.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(what + " (line " + std::to_string(line) + ")"), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Malformed model or sidecar file.
class FormatError : public Error {
 public:
  using Error::Error;
};

// Input with no query instances at all.
class EmptyDatasetError : public Error {
 public:
  using Error::Error;
};

}  // namespace slamrank

#endif  // SLAMRANK_ERRORS_HPP_
