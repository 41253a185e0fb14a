#include <fstream>
#include <sstream>

#include "doctest.h"
#include "fixtures.hpp"
#include "gsheaf/document.hpp"

using namespace gsheaf;

namespace {

std::string fixture(const char* name) { return std::string(FIXTURE_DIR) + "/" + name; }

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("worked example document") {
  const Document d = load_document(fixture("sierpinski.json"));
  CHECK(is_sheaf(d.presheaf).ok());
  CHECK(d.semantics == SemanticsMode::Local);
  const GPresheaf ref = fixtures::sierpinski_worked();
  for (PointSet u : ref.opens()) CHECK(find_isomorphism(d.presheaf.at(u), ref.at(u)));
  CHECK(parse_tuple(d.presheaf.at(3u), "1,0") == std::vector<int>{1, 0});
  CHECK_THROWS_AS(parse_tuple(d.presheaf.at(3u), "2"), Error);
}

TEST_CASE("broken composite is rejected by validation") {
  try {
    load_document(fixture("broken_composite.json"));
    FAIL("expected a validation error");
  } catch (const ValidationError& e) {
    bool functoriality = false;
    for (const auto& v : e.report().violations) functoriality = functoriality || v.kind == "functoriality";
    CHECK(functoriality);
  }
  LoadOptions lax;
  lax.validate = false;
  const Document d = load_document(fixture("broken_composite.json"), lax);
  CHECK_FALSE(validate_presheaf(d.presheaf).ok());
}

TEST_CASE("missing action table is an input error") {
  try {
    load_document(fixture("missing_action.json"));
    FAIL("expected an error");
  } catch (const ValidationError&) {
    FAIL("expected a table error, not a validation error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("action") != std::string::npos);
  }
}

TEST_CASE("malformed json reports a position") {
  try {
    parse_document("{\"format\": 1,\n  \"space\": [}");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
}

TEST_CASE("dump is deterministic and round-trips") {
  const Document d = load_document(fixture("sierpinski.json"));
  const std::string once = dump_document(d.presheaf, d.semantics);
  const Document again = parse_document(once);
  CHECK(dump_document(again.presheaf, again.semantics) == once);
  CHECK(read_file(fixture("sierpinski.json")).size() > 0);
}
