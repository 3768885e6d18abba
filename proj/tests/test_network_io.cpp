#include <string>

#include "doctest.h"
#include "semrd/errors.hpp"
#include "semrd/info.hpp"
#include "semrd/network_io.hpp"
#include "semrd/networks.hpp"

using namespace semrd;

namespace {

const char* kFork = R"({
  "variables": [{"name": "Y", "cardinality": 2}, {"name": "X1", "cardinality": 2},
                {"name": "X2", "cardinality": 2}],
  "edges": [["Y", "X1"], ["Y", "X2"]],
  "cpts": [
    {"child": "Y", "parents": [], "rows": [[0.5, 0.5]]},
    {"child": "X1", "parents": ["Y"], "rows": [[0.9, 0.1], [0.1, 0.9]]},
    {"child": "X2", "parents": ["Y"], "rows": [[0.9, 0.1], [0.1, 0.9]]}
  ]
})";

std::string replaced(std::string text, const std::string& from, const std::string& to) {
  const auto at = text.find(from);
  REQUIRE(at != std::string::npos);
  return text.replace(at, from.size(), to);
}

std::string message_of(const std::string& text) {
  try {
    parse_network(text);
  } catch (const std::exception& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("parses the fork document") {
  const BayesNet net = parse_network(kFork);
  CHECK(net.size() == 3);
  CHECK(net.variables[1].name == "X1");
  CHECK(net.parents(2) == std::vector<int>{0});
  CHECK(joint_entropy_factorized(net) == doctest::Approx(1.93799118718).epsilon(1e-10));
}

TEST_CASE("serialization round-trips and is canonical") {
  const BayesNet net = binary_fork(0.1, 0.2);
  const BayesNet back = parse_network(to_json_text(net));
  CHECK(canonical_serialization(back) == canonical_serialization(net));
  CHECK(canonical_serialization(binary_fork(0.1, 0.2)) == canonical_serialization(net));
  CHECK(canonical_serialization(binary_fork(0.1, 0.3)) != canonical_serialization(net));
}

TEST_CASE("bundled networks load") {
  for (const char* name : {"fig4a.json", "fig4b.json", "scene.json"}) {
    const BayesNet net = load_network(std::string(SEMRD_NETWORK_DIR) + "/" + name);
    CHECK(validate(net).ok());
  }
  CHECK_THROWS_AS(load_network(std::string(SEMRD_NETWORK_DIR) + "/absent.json"), SchemaError);
}

TEST_CASE("syntax errors carry a location") {
  const std::string bad = replaced(kFork, "\"edges\":", "\"edges\" ");
  CHECK_THROWS_AS(parse_network(bad), SchemaError);
  CHECK(message_of(bad).find("line 4") != std::string::npos);
}

TEST_CASE("schema problems name the culprit") {
  const std::string missing = replaced(
      kFork, R"(,
    {"child": "X2", "parents": ["Y"], "rows": [[0.9, 0.1], [0.1, 0.9]]})", "");
  CHECK_THROWS_AS(parse_network(missing), SchemaError);
  CHECK(message_of(missing).find("missing cpts entry for variable 'X2'") != std::string::npos);

  const std::string unknown = replaced(kFork, R"(["Y", "X2"])", R"(["Z", "X2"])");
  CHECK_THROWS_AS(parse_network(unknown), SchemaError);
  CHECK(message_of(unknown).find("'Z'") != std::string::npos);

  const std::string dup = replaced(kFork, R"({"name": "X2")", R"({"name": "X1")");
  CHECK_THROWS_AS(parse_network(dup), SchemaError);

  const std::string no_vars = replaced(kFork, "\"variables\"", "\"vars\"");
  CHECK_THROWS_AS(parse_network(no_vars), SchemaError);
}

TEST_CASE("numeric problems are validation errors") {
  const std::string bad_row = replaced(kFork, "[[0.5, 0.5]]", "[[0.6, 0.6]]");
  CHECK_THROWS_AS(parse_network(bad_row), ValidationError);
  CHECK(message_of(bad_row).find("row sum") != std::string::npos);

  const std::string short_row = replaced(kFork, "[[0.5, 0.5]]", "[[1.0]]");
  CHECK_THROWS_AS(parse_network(short_row), ValidationError);

  const std::string edges = replaced(kFork, R"(["Y", "X2"])", R"(["X1", "X2"])");
  CHECK_THROWS_AS(parse_network(edges), ValidationError);
}
