#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace chaosbound {

/// A graph-matrix shape: a small template graph with ordered left and right
/// vertex tuples. Left and right may intersect; middle vertices are those on
/// neither side.
struct Shape {
  std::vector<std::string> vertex_names;
  std::vector<int> left;    // U
  std::vector<int> right;   // V
  std::vector<std::pair<int, int>> edges;  // unordered, stored with first < second

  int vertex_count() const { return static_cast<int>(vertex_names.size()); }

  std::vector<int> middle() const;           // vertices outside left/right
  std::vector<int> isolated_middle() const;  // degree-0 middle vertices
  int degree(int v) const;
  bool has_edge(int a, int b) const;

  std::string name_of(int v) const { return vertex_names[static_cast<size_t>(v)]; }
};

struct ShapeParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Validates vertex references, self-loops, duplicate edges/tuple entries.
std::vector<std::string> shape_issues(const Shape& shape);

/// JSON shape format: {vertices:[names], left:[...], right:[...], edges:[[a,b],...]}.
Shape shape_from_json_text(const std::string& text);
std::string shape_to_json_text(const Shape& shape);

Shape wigner_shape();  // U={i}, V={j}, one edge
Shape z_shape();       // U={i,j}, V={k,l}, edges ik, jk, jl
Shape star_shape();    // U={i,j}, V={k,l}, hub m, isolated o

}  // namespace chaosbound
