#include "chaosbound/separator.hpp"

#include <algorithm>
#include <deque>
#include <set>

namespace chaosbound {

namespace {

// Unit-capacity max-flow on the vertex-split network. Node 2v is the entry
// half of vertex v, 2v+1 the exit half; source and sink are appended last.
struct FlowNetwork {
  struct Arc {
    int to;
    int cap;
    int flow = 0;
    size_t rev;
  };
  std::vector<std::vector<Arc>> adj;

  explicit FlowNetwork(int nodes) : adj(static_cast<size_t>(nodes)) {}

  void add_arc(int from, int to, int cap) {
    adj[static_cast<size_t>(from)].push_back({to, cap, 0, adj[static_cast<size_t>(to)].size()});
    adj[static_cast<size_t>(to)].push_back({from, 0, 0, adj[static_cast<size_t>(from)].size() - 1});
  }

  bool augment(int source, int sink) {
    std::vector<std::pair<int, size_t>> parent(adj.size(), {-1, 0});
    std::deque<int> queue{source};
    parent[static_cast<size_t>(source)] = {source, 0};
    while (!queue.empty() && parent[static_cast<size_t>(sink)].first < 0) {
      const int node = queue.front();
      queue.pop_front();
      for (size_t i = 0; i < adj[static_cast<size_t>(node)].size(); ++i) {
        const Arc& arc = adj[static_cast<size_t>(node)][i];
        if (arc.cap - arc.flow > 0 && parent[static_cast<size_t>(arc.to)].first < 0) {
          parent[static_cast<size_t>(arc.to)] = {node, i};
          queue.push_back(arc.to);
        }
      }
    }
    if (parent[static_cast<size_t>(sink)].first < 0) return false;
    for (int node = sink; node != source;) {
      auto [from, idx] = parent[static_cast<size_t>(node)];
      Arc& arc = adj[static_cast<size_t>(from)][idx];
      arc.flow += 1;
      adj[static_cast<size_t>(arc.to)][arc.rev].flow -= 1;
      node = from;
    }
    return true;
  }

  std::vector<bool> residual_reachable(int source) const {
    std::vector<bool> seen(adj.size(), false);
    std::deque<int> queue{source};
    seen[static_cast<size_t>(source)] = true;
    while (!queue.empty()) {
      const int node = queue.front();
      queue.pop_front();
      for (const Arc& arc : adj[static_cast<size_t>(node)]) {
        if (arc.cap - arc.flow > 0 && !seen[static_cast<size_t>(arc.to)]) {
          seen[static_cast<size_t>(arc.to)] = true;
          queue.push_back(arc.to);
        }
      }
    }
    return seen;
  }

  // Follows one unit of flow out of `node`, consuming it.
  int next_flow_node(int node) {
    for (Arc& arc : adj[static_cast<size_t>(node)]) {
      if (arc.flow > 0) {
        arc.flow -= 1;
        return arc.to;
      }
    }
    return -1;
  }
};

}  // namespace

bool is_vertex_separator(const Shape& shape, const std::vector<int>& separator) {
  const int n = shape.vertex_count();
  std::vector<bool> removed(static_cast<size_t>(n), false);
  for (int v : separator) removed[static_cast<size_t>(v)] = true;

  std::vector<bool> seen(static_cast<size_t>(n), false);
  std::deque<int> queue;
  for (int u : shape.left)
    if (!removed[static_cast<size_t>(u)] && !seen[static_cast<size_t>(u)]) {
      seen[static_cast<size_t>(u)] = true;
      queue.push_back(u);
    }
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop_front();
    for (const auto& e : shape.edges) {
      int w = -1;
      if (e.first == v) w = e.second;
      else if (e.second == v) w = e.first;
      if (w >= 0 && !removed[static_cast<size_t>(w)] && !seen[static_cast<size_t>(w)]) {
        seen[static_cast<size_t>(w)] = true;
        queue.push_back(w);
      }
    }
  }
  for (int v : shape.right)
    if (!removed[static_cast<size_t>(v)] && seen[static_cast<size_t>(v)]) return false;
  return true;
}

SeparatorResult min_vertex_separator(const Shape& shape) {
  SeparatorResult result;
  const int n = shape.vertex_count();
  if (shape.left.empty() || shape.right.empty()) return result;

  const std::set<int> left(shape.left.begin(), shape.left.end());
  const std::set<int> right(shape.right.begin(), shape.right.end());

  // vertices in both tuples lie on every left-right path: forced into the
  // separator, with the length-one path as certificate
  std::vector<bool> forced(static_cast<size_t>(n), false);
  for (int v : shape.left)
    if (right.count(v)) {
      forced[static_cast<size_t>(v)] = true;
      result.separator.push_back(v);
      result.disjoint_paths.push_back({v});
    }

  const int source = 2 * n;
  const int sink = 2 * n + 1;
  FlowNetwork net(2 * n + 2);
  const int inf = n + 1;
  for (int v = 0; v < n; ++v)
    if (!forced[static_cast<size_t>(v)]) net.add_arc(2 * v, 2 * v + 1, 1);
  for (const auto& e : shape.edges) {
    if (forced[static_cast<size_t>(e.first)] || forced[static_cast<size_t>(e.second)]) continue;
    net.add_arc(2 * e.first + 1, 2 * e.second, inf);
    net.add_arc(2 * e.second + 1, 2 * e.first, inf);
  }
  // infinite terminal arcs keep the minimum cut on the vertex arcs, so U and
  // V vertices themselves remain cuttable
  for (int v : shape.left)
    if (!forced[static_cast<size_t>(v)]) net.add_arc(source, 2 * v, inf);
  for (int v : shape.right)
    if (!forced[static_cast<size_t>(v)]) net.add_arc(2 * v + 1, sink, inf);

  while (net.augment(source, sink)) {
  }

  // cut closest to the left side: entry half reachable, exit half not
  const std::vector<bool> reach = net.residual_reachable(source);
  for (int v = 0; v < n; ++v) {
    if (forced[static_cast<size_t>(v)]) continue;
    if (reach[static_cast<size_t>(2 * v)] && !reach[static_cast<size_t>(2 * v + 1)])
      result.separator.push_back(v);
  }

  // decompose the flow into paths; unit vertex capacities make them
  // vertex-disjoint
  for (size_t i = 0; i < net.adj[static_cast<size_t>(source)].size(); ++i) {
    if (net.adj[static_cast<size_t>(source)][i].flow <= 0) continue;
    net.adj[static_cast<size_t>(source)][i].flow -= 1;
    std::vector<int> path;
    int node = net.adj[static_cast<size_t>(source)][i].to;
    while (node != sink && node >= 0) {
      if (node % 2 == 0) path.push_back(node / 2);
      node = net.next_flow_node(node);
    }
    // keep the segment from the last left vertex before the first right
    // vertex, so the path meets each tuple exactly once
    size_t stop = 0;
    while (stop < path.size() && !right.count(path[stop])) ++stop;
    size_t start = stop;
    while (start > 0 && !left.count(path[start])) --start;
    result.disjoint_paths.push_back(std::vector<int>(path.begin() + static_cast<long>(start),
                                                     path.begin() + static_cast<long>(stop) + 1));
  }

  return result;
}

}  // namespace chaosbound
