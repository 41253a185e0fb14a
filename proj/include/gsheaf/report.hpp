#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace gsheaf {

using Json = nlohmann::ordered_json;

/// Raised on malformed input or a violated operation precondition.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Syntax error carrying a 1-based source location.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line, int column)
      : Error(what + " at " + std::to_string(line) + ":" + std::to_string(column)),
        line_(line),
        column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

struct Violation {
  std::string kind;
  std::string detail;
  Json witness = Json::object();
};

/// Outcome of a validation or verification run. Violations are data; an
/// empty violation list means the check passed.
struct CheckReport {
  std::string check;
  Json bounds = Json::object();
  std::vector<Violation> violations;
  std::vector<Violation> findings;  // reported, never counted as failures
  long long cases = 0;

  bool ok() const { return violations.empty(); }

  void add(std::string kind, std::string detail, Json witness = Json::object()) {
    violations.push_back({std::move(kind), std::move(detail), std::move(witness)});
  }

  void merge(const CheckReport& other) {
    violations.insert(violations.end(), other.violations.begin(), other.violations.end());
    findings.insert(findings.end(), other.findings.begin(), other.findings.end());
    cases += other.cases;
  }

  Json to_json() const;
  std::string to_text() const;
};

}  // namespace gsheaf
