#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cbaco {

// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// portgraph
class InvalidMorphism : public Error {
 public:
  using Error::Error;
};

class InvalidRule : public Error {
 public:
  using Error::Error;
};

class PositionViolation : public Error {
 public:
  using Error::Error;
};

class BannedViolation : public Error {
 public:
  using Error::Error;
};

// strategy
class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& msg, std::size_t line, std::size_t column)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " +
              msg),
        line_(line),
        column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

class UnknownRule : public Error {
 public:
  using Error::Error;
};

class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

// policy-model
class NotAPath : public Error {
 public:
  using Error::Error;
};

class NotWellFormed : public Error {
 public:
  NotWellFormed(const std::string& msg, std::vector<std::string> details)
      : Error(msg), details_(std::move(details)) {}

  const std::vector<std::string>& details() const { return details_; }

 private:
  std::vector<std::string> details_;
};

class UnknownEntity : public Error {
 public:
  using Error::Error;
};

// obligation-engine
class TimeRegression : public Error {
 public:
  using Error::Error;
};

class HistoryConflict : public Error {
 public:
  using Error::Error;
};

class DuplicateEvent : public Error {
 public:
  using Error::Error;
};

class UnknownDuty : public Error {
 public:
  using Error::Error;
};

// workspace
class ParseError : public Error {
 public:
  using Error::Error;
};

class TypeError : public Error {
 public:
  TypeError(const std::string& msg, std::string entity)
      : Error(msg + ": " + entity), entity_(std::move(entity)) {}

  const std::string& entity() const { return entity_; }

 private:
  std::string entity_;
};

}  // namespace cbaco
