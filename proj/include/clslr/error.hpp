#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace clslr {

/// Base class of every diagnostic raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SourceLocation {
  std::size_t line = 0;
  std::size_t column = 0;
};

class SyntaxError : public Error {
 public:
  SyntaxError(SourceLocation where, std::string expected)
      : Error(std::to_string(where.line) + ":" + std::to_string(where.column) +
              ": syntax error: expected " + expected),
        where_(where),
        expected_(std::move(expected)) {}

  SourceLocation where() const { return where_; }
  const std::string& expected() const { return expected_; }

 private:
  SourceLocation where_;
  std::string expected_;
};

/// Raised at load time when a rule violates one of the well-formedness clauses.
class IllFormedRule : public Error {
 public:
  IllFormedRule(SourceLocation where, std::string clause, std::string rule)
      : Error(std::to_string(where.line) + ":" + std::to_string(where.column) +
              ": ill-formed rule " + rule + ": " + clause),
        where_(where),
        clause_(std::move(clause)) {}

  SourceLocation where() const { return where_; }
  const std::string& clause() const { return clause_; }

 private:
  SourceLocation where_;
  std::string clause_;
};

class UnboundVariable : public Error {
 public:
  explicit UnboundVariable(std::string variable)
      : Error("unbound variable " + variable), variable_(std::move(variable)) {}
  const std::string& variable() const { return variable_; }

 private:
  std::string variable_;
};

class UnknownElement : public Error {
 public:
  explicit UnknownElement(std::string element)
      : Error("element '" + element + "' has no membrane type in the classification"),
        element_(std::move(element)) {}
  const std::string& element() const { return element_; }

 private:
  std::string element_;
};

/// A typing rule premise that does not hold, e.g. the membrane check of Tcomp.
class SideConditionViolated : public Error {
 public:
  SideConditionViolated(std::string rule, std::string location, std::string got,
                        std::string needed)
      : Error(rule + ": " + got + " not contained in " + needed + " at " + location),
        rule_(std::move(rule)),
        location_(std::move(location)),
        got_(std::move(got)),
        needed_(std::move(needed)) {}

  const std::string& rule() const { return rule_; }
  const std::string& location() const { return location_; }
  const std::string& got() const { return got_; }
  const std::string& needed() const { return needed_; }

 private:
  std::string rule_;
  std::string location_;
  std::string got_;
  std::string needed_;
};

/// The matcher explored more candidate assignments than its configured cap.
class ResourceLimitExceeded : public Error {
 public:
  using Error::Error;
};

class StepCapExceeded : public Error {
 public:
  using Error::Error;
};

/// A reduction label that no longer describes a redex of the term it is applied to.
class StaleLabel : public Error {
 public:
  using Error::Error;
};

}  // namespace clslr
