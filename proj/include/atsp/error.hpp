#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace atsp {

// Base class for every error raised by the library. Callers that only need
// to report a failure can catch this; the subclasses carry the detail.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidSize : public Error {
 public:
  using Error::Error;
};

class InvalidRange : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line, std::string field)
      : Error("line " + std::to_string(line) + ", field '" + field + "': " + what),
        line_(line),
        field_(std::move(field)) {}

  int line() const { return line_; }
  const std::string& field() const { return field_; }

 private:
  int line_;
  std::string field_;
};

class InconsistentRestriction : public Error {
 public:
  using Error::Error;
};

// No perfect matching respects the restriction. `hall_witness()` is a set of
// rows S whose admissible neighbourhood N(S) satisfies |N(S)| < |S|.
class Infeasible : public Error {
 public:
  Infeasible(const std::string& what, std::vector<int> hall_witness)
      : Error(what), witness_(std::move(hall_witness)) {}

  const std::vector<int>& hall_witness() const { return witness_; }

 private:
  std::vector<int> witness_;
};

class InvalidEdge : public Error {
 public:
  using Error::Error;
};

class SizeGuard : public Error {
 public:
  using Error::Error;
};

class InvalidSubstitution : public Error {
 public:
  using Error::Error;
};

class InvalidInput : public Error {
 public:
  using Error::Error;
};

}  // namespace atsp
