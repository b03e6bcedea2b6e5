#include "chaosbound/shape.hpp"

#include <json.hpp>
#include <algorithm>
#include <map>
#include <set>

namespace chaosbound {

std::vector<int> Shape::middle() const {
  std::set<int> sides(left.begin(), left.end());
  sides.insert(right.begin(), right.end());
  std::vector<int> out;
  for (int v = 0; v < vertex_count(); ++v)
    if (!sides.count(v)) out.push_back(v);
  return out;
}

int Shape::degree(int v) const {
  int deg = 0;
  for (const auto& e : edges)
    if (e.first == v || e.second == v) ++deg;
  return deg;
}

bool Shape::has_edge(int a, int b) const {
  if (a > b) std::swap(a, b);
  return std::find(edges.begin(), edges.end(), std::make_pair(a, b)) != edges.end();
}

std::vector<int> Shape::isolated_middle() const {
  std::vector<int> out;
  for (int v : middle())
    if (degree(v) == 0) out.push_back(v);
  return out;
}

std::vector<std::string> shape_issues(const Shape& shape) {
  std::vector<std::string> issues;
  const int n = shape.vertex_count();
  std::set<std::string> names(shape.vertex_names.begin(), shape.vertex_names.end());
  if (static_cast<int>(names.size()) != n) issues.push_back("duplicate vertex names");
  auto check_tuple = [&](const std::vector<int>& tuple, const char* what) {
    std::set<int> seen;
    for (int v : tuple) {
      if (v < 0 || v >= n) issues.push_back(std::string(what) + " references unknown vertex");
      else if (!seen.insert(v).second) issues.push_back(std::string(what) + " repeats a vertex");
    }
  };
  check_tuple(shape.left, "left tuple");
  check_tuple(shape.right, "right tuple");
  std::set<std::pair<int, int>> seen;
  for (const auto& e : shape.edges) {
    if (e.first == e.second) issues.push_back("self-loop");
    if (e.first < 0 || e.first >= n || e.second < 0 || e.second >= n)
      issues.push_back("edge references unknown vertex");
    else if (!seen.insert({std::min(e.first, e.second), std::max(e.first, e.second)}).second)
      issues.push_back("duplicate edge");
  }
  return issues;
}

Shape shape_from_json_text(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ShapeParseError(std::string("malformed JSON: ") + e.what());
  }
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    const std::string& key = it.key();
    if (key != "vertices" && key != "left" && key != "right" && key != "edges")
      throw ShapeParseError("unknown field \"" + key + "\" in shape");
  }
  for (const char* field : {"vertices", "left", "right", "edges"})
    if (!doc.contains(field)) throw ShapeParseError(std::string("missing field \"") + field + "\"");

  Shape shape;
  std::map<std::string, int> id;
  for (const auto& name : doc.at("vertices")) {
    const std::string s = name.get<std::string>();
    if (id.count(s)) throw ShapeParseError("duplicate vertex name \"" + s + "\"");
    id[s] = shape.vertex_count();
    shape.vertex_names.push_back(s);
  }
  auto resolve = [&](const nlohmann::json& name) {
    const std::string s = name.get<std::string>();
    auto it = id.find(s);
    if (it == id.end()) throw ShapeParseError("unknown vertex \"" + s + "\"");
    return it->second;
  };
  for (const auto& name : doc.at("left")) shape.left.push_back(resolve(name));
  for (const auto& name : doc.at("right")) shape.right.push_back(resolve(name));
  for (const auto& e : doc.at("edges")) {
    if (!e.is_array() || e.size() != 2) throw ShapeParseError("edges must be pairs");
    int a = resolve(e[0]), b = resolve(e[1]);
    if (a == b) throw ShapeParseError("self-loops are not allowed");
    if (a > b) std::swap(a, b);
    shape.edges.emplace_back(a, b);
  }
  return shape;
}

std::string shape_to_json_text(const Shape& shape) {
  nlohmann::json doc;
  doc["vertices"] = shape.vertex_names;
  nlohmann::json left = nlohmann::json::array(), right = nlohmann::json::array();
  for (int v : shape.left) left.push_back(shape.name_of(v));
  for (int v : shape.right) right.push_back(shape.name_of(v));
  doc["left"] = left;
  doc["right"] = right;
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& e : shape.edges)
    edges.push_back({shape.name_of(e.first), shape.name_of(e.second)});
  doc["edges"] = edges;
  return doc.dump(2) + "\n";
}

Shape wigner_shape() {
  Shape s;
  s.vertex_names = {"i", "j"};
  s.left = {0};
  s.right = {1};
  s.edges = {{0, 1}};
  return s;
}

Shape z_shape() {
  Shape s;
  s.vertex_names = {"i", "j", "k", "l"};
  s.left = {0, 1};
  s.right = {2, 3};
  s.edges = {{0, 2}, {1, 2}, {1, 3}};
  return s;
}

Shape star_shape() {
  Shape s;
  s.vertex_names = {"i", "j", "k", "l", "m", "o"};
  s.left = {0, 1};
  s.right = {2, 3};
  s.edges = {{0, 4}, {1, 4}, {2, 4}, {3, 4}};
  return s;
}

}  // namespace chaosbound
