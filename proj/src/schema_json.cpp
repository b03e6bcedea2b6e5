#include <json.hpp>

#include "chaosbound/schema.hpp"

namespace chaosbound {

namespace {

using nlohmann::json;

void reject_unknown_fields(const json& obj, const std::vector<std::string>& allowed,
                           const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end())
      throw SchemaParseError("unknown field \"" + it.key() + "\" in " + where);
  }
}

IndexSet parse_index_set(const json& arr, const std::string& where) {
  if (!arr.is_array()) throw SchemaParseError(where + " must be an array of indices");
  IndexSet out;
  for (const auto& v : arr) {
    if (!v.is_number_integer()) throw SchemaParseError(where + " entries must be integers");
    out.push_back(v.get<int>());
  }
  return out;
}

Constraint parse_constraint(const json& obj) {
  if (!obj.is_object() || !obj.contains("type"))
    throw SchemaParseError("weight constraint must be an object with a \"type\" field");
  const std::string type = obj.at("type").get<std::string>();
  if (type == "all_distinct") {
    reject_unknown_fields(obj, {"type", "indices"}, "all_distinct constraint");
    return AllDistinct{parse_index_set(obj.at("indices"), "all_distinct.indices")};
  }
  if (type == "less" || type == "greater") {
    reject_unknown_fields(obj, {"type", "a", "b"}, type + " constraint");
    const int a = obj.at("a").get<int>();
    const int b = obj.at("b").get<int>();
    if (type == "less") return Less{a, b};
    return Greater{a, b};
  }
  if (type == "not_equal_tuple") {
    reject_unknown_fields(obj, {"type", "left", "right"}, "not_equal_tuple constraint");
    return NotEqualTuple{parse_index_set(obj.at("left"), "not_equal_tuple.left"),
                         parse_index_set(obj.at("right"), "not_equal_tuple.right")};
  }
  throw SchemaParseError("unknown constraint type \"" + type + "\"");
}

json constraint_to_json(const Constraint& c) {
  return std::visit(
      [](const auto& constraint) -> json {
        using T = std::decay_t<decltype(constraint)>;
        if constexpr (std::is_same_v<T, AllDistinct>) {
          return {{"type", "all_distinct"}, {"indices", constraint.indices}};
        } else if constexpr (std::is_same_v<T, Less>) {
          return {{"type", "less"}, {"a", constraint.a}, {"b", constraint.b}};
        } else if constexpr (std::is_same_v<T, Greater>) {
          return {{"type", "greater"}, {"a", constraint.a}, {"b", constraint.b}};
        } else {
          return {{"type", "not_equal_tuple"}, {"left", constraint.left}, {"right", constraint.right}};
        }
      },
      c);
}

DistributionKind parse_kind(const std::string& name) {
  if (name == "gaussian") return DistributionKind::Gaussian;
  if (name == "rademacher") return DistributionKind::Rademacher;
  if (name == "standardized_bernoulli") return DistributionKind::StandardizedBernoulli;
  if (name == "edge_rademacher") return DistributionKind::EdgeRademacher;
  if (name == "centered_chisq1") return DistributionKind::CenteredChiSq1;
  throw SchemaParseError("unknown distribution kind \"" + name + "\"");
}

}  // namespace

ChaosSchema schema_from_json_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaParseError(std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw SchemaParseError("schema document must be a JSON object");
  reject_unknown_fields(doc,
                        {"p", "dims", "q", "chaos_coords", "row_coord", "col_coord", "weight",
                         "distribution", "labels"},
                        "schema");
  for (const char* field : {"p", "dims", "q", "chaos_coords", "row_coord", "col_coord"}) {
    if (!doc.contains(field))
      throw SchemaParseError(std::string("missing field \"") + field + "\"");
  }

  ChaosSchema s;
  s.p = doc.at("p").get<int>();
  for (const auto& entry : doc.at("dims")) {
    if (entry.is_number_integer()) {
      s.dims.push_back(entry.get<long long>());
      s.dim_symbols.emplace_back();  // default S<u>
    } else if (entry.is_string()) {
      s.dims.push_back(0);  // size unset until overridden
      s.dim_symbols.push_back(entry.get<std::string>());
    } else {
      throw SchemaParseError("dims entries must be integers or symbol strings");
    }
  }
  s.q = doc.at("q").get<int>();
  if (!doc.at("chaos_coords").is_array())
    throw SchemaParseError("chaos_coords must be an array of index arrays");
  for (const auto& coord : doc.at("chaos_coords"))
    s.chaos_coords.push_back(parse_index_set(coord, "chaos coordinate"));
  s.row_coord = parse_index_set(doc.at("row_coord"), "row_coord");
  s.col_coord = parse_index_set(doc.at("col_coord"), "col_coord");

  if (doc.contains("weight")) {
    const auto& weight = doc.at("weight");
    reject_unknown_fields(weight, {"constraints"}, "weight");
    if (weight.contains("constraints"))
      for (const auto& c : weight.at("constraints")) s.weight.constraints.push_back(parse_constraint(c));
  }
  if (doc.contains("distribution")) {
    const auto& dist = doc.at("distribution");
    reject_unknown_fields(dist, {"kind", "param"}, "distribution");
    s.distribution.kind = parse_kind(dist.at("kind").get<std::string>());
    if (dist.contains("param")) s.distribution.param = dist.at("param").get<double>();
  }
  if (doc.contains("labels")) {
    for (const auto& label : doc.at("labels")) s.labels.push_back(label.get<std::string>());
  }
  return s;
}

std::string schema_to_json_text(const ChaosSchema& s) {
  json doc;
  doc["p"] = s.p;
  json dims = json::array();
  for (int u = 0; u < s.p; ++u) {
    if (s.dims[static_cast<size_t>(u)] >= 1 &&
        (static_cast<size_t>(u) >= s.dim_symbols.size() || s.dim_symbols[static_cast<size_t>(u)].empty()))
      dims.push_back(s.dims[static_cast<size_t>(u)]);
    else if (s.dims[static_cast<size_t>(u)] >= 1)
      dims.push_back(s.dims[static_cast<size_t>(u)]);
    else
      dims.push_back(s.dim_symbol(u));
  }
  doc["dims"] = dims;
  doc["q"] = s.q;
  doc["chaos_coords"] = s.chaos_coords;
  doc["row_coord"] = s.row_coord;
  doc["col_coord"] = s.col_coord;
  json constraints = json::array();
  for (const auto& c : s.weight.constraints) constraints.push_back(constraint_to_json(c));
  doc["weight"] = {{"constraints", constraints}};
  json dist;
  dist["kind"] = to_string(s.distribution.kind);
  if (s.distribution.kind == DistributionKind::StandardizedBernoulli)
    dist["param"] = s.distribution.param;
  doc["distribution"] = dist;
  if (!s.labels.empty()) doc["labels"] = s.labels;
  return doc.dump(2) + "\n";
}

}  // namespace chaosbound
