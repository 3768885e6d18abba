#pragma once

// JSON network files.
//
//   {
//     "variables": [{"name": "Y", "cardinality": 2}, ...],
//     "edges":     [["Y", "X1"], ...],              // [parent, child]
//     "cpts":      [{"child": "X1", "parents": ["Y"],
//                    "rows": [[0.9, 0.1], [0.1, 0.9]]}, ...]
//   }
//
// Variable ids follow the order of "variables". Each CPT row corresponds to a
// parent configuration in mixed-radix order, last parent fastest. "edges"
// must agree with the union of CPT parent lists. An optional top-level
// "description" string is ignored.

#include <filesystem>
#include <string>
#include <string_view>

#include "semrd/bayes_net.hpp"

namespace semrd {

// Throws SchemaError (with line/column for syntax errors) or ValidationError.
BayesNet parse_network(std::string_view text, std::string_view source_name = "<memory>");
BayesNet load_network(const std::filesystem::path& path);

// Compact, deterministic serialization; identical nets give identical bytes.
std::string canonical_serialization(const BayesNet& net);
// Indented form of the same document, suitable for writing files.
std::string to_json_text(const BayesNet& net);

}  // namespace semrd
