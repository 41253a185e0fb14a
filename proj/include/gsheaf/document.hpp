#pragma once

#include <string>

#include "gsheaf/forcing.hpp"

namespace gsheaf {

/// Raised when a document parses but fails validation; carries the report.
class ValidationError : public Error {
 public:
  explicit ValidationError(CheckReport report)
      : Error("document failed validation:\n" + report.to_text()), report_(std::move(report)) {}
  const CheckReport& report() const { return report_; }

 private:
  CheckReport report_;
};

struct Document {
  GPresheaf presheaf;
  SemanticsMode semantics = SemanticsMode::Local;
};

struct LoadOptions {
  /// Close the open family under union and intersection before building.
  bool complete_topology = false;
  /// Run validate_presheaf and throw ValidationError on violations.
  bool validate = true;
};

/// Format-1 JSON document. Throws ParseError on malformed JSON, Error on
/// unknown names or non-total tables, ValidationError on validator output.
Document parse_document(const std::string& text, const LoadOptions& opts = {});
Document load_document(const std::string& path, const LoadOptions& opts = {});

Json document_to_json(const GPresheaf& p, SemanticsMode semantics = SemanticsMode::Local);
/// Deterministic serialization (two-space indent, trailing newline).
std::string dump_document(const GPresheaf& p, SemanticsMode semantics = SemanticsMode::Local);
void save_document(const std::string& path, const GPresheaf& p, SemanticsMode semantics = SemanticsMode::Local);

/// Element tuple by names, resolved in M_u. Names are comma separated.
std::vector<int> parse_tuple(const GStructure& m, const std::string& text);

}  // namespace gsheaf
