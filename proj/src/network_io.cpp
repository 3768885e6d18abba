#include "semrd/network_io.hpp"

#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"
#include "semrd/errors.hpp"

namespace semrd {

namespace {

using nlohmann::json;

[[noreturn]] void schema_fail(std::string_view source, const std::string& what) {
  throw SchemaError(std::string(source) + ": " + what);
}

std::string location(std::string_view text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

const json& require(const json& obj, const char* key, std::string_view source,
                    const std::string& context) {
  if (!obj.is_object() || !obj.contains(key))
    schema_fail(source, context + " is missing field '" + key + "'");
  return obj.at(key);
}

json to_document(const BayesNet& net) {
  json doc;
  doc["variables"] = json::array();
  for (const auto& v : net.variables)
    doc["variables"].push_back({{"name", v.name}, {"cardinality", v.cardinality}});
  doc["edges"] = json::array();
  for (int i = 0; i < net.size(); ++i)
    for (int p : net.parents(i))
      doc["edges"].push_back({net.variables[p].name, net.variables[i].name});
  doc["cpts"] = json::array();
  for (int i = 0; i < net.size(); ++i) {
    json parents = json::array();
    for (int p : net.parents(i)) parents.push_back(net.variables[p].name);
    json rows = json::array();
    for (std::size_t r = 0; r < net.parent_configurations(i); ++r) {
      auto row = net.row(i, r);
      rows.push_back(json(std::vector<double>(row.begin(), row.end())));
    }
    doc["cpts"].push_back(
        {{"child", net.variables[i].name}, {"parents", parents}, {"rows", rows}});
  }
  return doc;
}

}  // namespace

BayesNet parse_network(std::string_view text, std::string_view source) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    schema_fail(source, "JSON syntax error at " + location(text, e.byte) + ": " + e.what());
  }
  if (!doc.is_object()) schema_fail(source, "top level must be an object");

  const json& vars = require(doc, "variables", source, "network");
  if (!vars.is_array() || vars.empty())
    schema_fail(source, "'variables' must be a non-empty array");

  std::vector<Variable> variables;
  std::map<std::string, int> ids;
  for (const auto& v : vars) {
    const std::string ctx = "variables[" + std::to_string(variables.size()) + "]";
    const json& name = require(v, "name", source, ctx);
    const json& card = require(v, "cardinality", source, ctx);
    if (!name.is_string()) schema_fail(source, ctx + ".name must be a string");
    if (!card.is_number_integer()) schema_fail(source, ctx + ".cardinality must be an integer");
    Variable var{static_cast<int>(variables.size()), name.get<std::string>(), card.get<int>()};
    if (!ids.emplace(var.name, var.id).second)
      schema_fail(source, "duplicate variable name '" + var.name + "'");
    variables.push_back(std::move(var));
  }
  auto lookup = [&](const json& name, const std::string& ctx) {
    if (!name.is_string()) schema_fail(source, ctx + " must be a variable name");
    auto it = ids.find(name.get<std::string>());
    if (it == ids.end())
      schema_fail(source, ctx + " names unknown variable '" + name.get<std::string>() + "'");
    return it->second;
  };

  std::set<std::pair<int, int>> edges;
  if (doc.contains("edges")) {
    const json& e = doc.at("edges");
    if (!e.is_array()) schema_fail(source, "'edges' must be an array");
    for (std::size_t i = 0; i < e.size(); ++i) {
      const std::string ctx = "edges[" + std::to_string(i) + "]";
      if (!e[i].is_array() || e[i].size() != 2)
        schema_fail(source, ctx + " must be a [parent, child] pair");
      edges.emplace(lookup(e[i][0], ctx + "[0]"), lookup(e[i][1], ctx + "[1]"));
    }
  }

  const json& cpt_docs = require(doc, "cpts", source, "network");
  if (!cpt_docs.is_array()) schema_fail(source, "'cpts' must be an array");
  std::vector<Cpt> cpts;
  std::vector<char> has_cpt(variables.size(), 0);
  for (std::size_t i = 0; i < cpt_docs.size(); ++i) {
    const std::string ctx = "cpts[" + std::to_string(i) + "]";
    const json& c = cpt_docs[i];
    Cpt cpt;
    cpt.child = lookup(require(c, "child", source, ctx), ctx + ".child");
    if (has_cpt[cpt.child])
      schema_fail(source, "duplicate CPT for variable '" + variables[cpt.child].name + "'");
    has_cpt[cpt.child] = 1;
    if (c.contains("parents")) {
      const json& ps = c.at("parents");
      if (!ps.is_array()) schema_fail(source, ctx + ".parents must be an array");
      for (const auto& p : ps) cpt.parents.push_back(lookup(p, ctx + ".parents"));
    }
    const json& rows = require(c, "rows", source, ctx);
    if (!rows.is_array()) schema_fail(source, ctx + ".rows must be an array of rows");
    for (const auto& r : rows) {
      if (!r.is_array()) schema_fail(source, ctx + ".rows must be an array of rows");
      if (static_cast<int>(r.size()) != variables[cpt.child].cardinality)
        throw ValidationError(std::string(source) + ": CPT of '" + variables[cpt.child].name +
                              "' has a row of length " + std::to_string(r.size()) +
                              ", expected cardinality " +
                              std::to_string(variables[cpt.child].cardinality));
      for (const auto& x : r) {
        if (!x.is_number()) schema_fail(source, ctx + ".rows entries must be numbers");
        cpt.table.push_back(x.get<double>());
      }
    }
    cpts.push_back(std::move(cpt));
  }
  for (std::size_t i = 0; i < variables.size(); ++i)
    if (!has_cpt[i]) schema_fail(source, "missing cpts entry for variable '" + variables[i].name + "'");

  if (doc.contains("edges")) {
    std::set<std::pair<int, int>> from_cpts;
    for (const auto& c : cpts)
      for (int p : c.parents) from_cpts.emplace(p, c.child);
    if (from_cpts != edges)
      throw ValidationError(std::string(source) + ": 'edges' disagree with CPT parent lists");
  }

  try {
    return make_network(std::move(variables), std::move(cpts));
  } catch (const ValidationError& e) {
    throw ValidationError(std::string(source) + ": " + e.what());
  }
}

BayesNet load_network(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SchemaError(path.string() + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_network(buf.str(), path.string());
}

std::string canonical_serialization(const BayesNet& net) { return to_document(net).dump(); }

std::string to_json_text(const BayesNet& net) { return to_document(net).dump(2) + "\n"; }

}  // namespace semrd
