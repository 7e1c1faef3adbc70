#include "netvmo/comm_graph.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <queue>
#include <string>

#include "netvmo/error.hpp"

namespace netvmo {

namespace {

constexpr std::size_t kUnreached = std::numeric_limits<std::size_t>::max();

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent_[b] = a;
    return true;
  }

 private:
  std::vector<std::size_t> parent_;
};

}  // namespace

CommGraph::CommGraph(std::size_t node_count, const std::vector<Edge>& edges)
    : adjacency_(node_count) {
  for (auto [a, b] : edges) {
    if (a >= node_count || b >= node_count) {
      throw Error(ErrorCode::kInvalidArgument,
                  "edge (" + std::to_string(a) + "," + std::to_string(b) +
                      ") references a node outside [0, " + std::to_string(node_count) + ")");
    }
    if (a == b) {
      throw Error(ErrorCode::kInvalidArgument,
                  "self-loop on node " + std::to_string(a));
    }
    edges_.emplace_back(std::min(a, b), std::max(a, b));
  }
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
  for (auto [a, b] : edges_) {
    adjacency_[a].push_back(b);
    adjacency_[b].push_back(a);
  }
  for (auto& list : adjacency_) std::sort(list.begin(), list.end());
}

const std::vector<std::size_t>& CommGraph::neighbors(std::size_t i) const {
  return adjacency_.at(i);
}

bool CommGraph::has_edge(std::size_t a, std::size_t b) const {
  if (a >= size() || b >= size()) return false;
  const auto& list = adjacency_[a];
  return std::binary_search(list.begin(), list.end(), b);
}

std::vector<std::size_t> CommGraph::distances_from(std::size_t source) const {
  std::vector<std::size_t> dist(size(), kUnreached);
  std::queue<std::size_t> frontier;
  dist.at(source) = 0;
  frontier.push(source);
  while (!frontier.empty()) {
    const std::size_t u = frontier.front();
    frontier.pop();
    for (std::size_t v : adjacency_[u]) {
      if (dist[v] == kUnreached) {
        dist[v] = dist[u] + 1;
        frontier.push(v);
      }
    }
  }
  return dist;
}

bool CommGraph::is_connected() const {
  if (size() == 0) return false;
  const auto dist = distances_from(0);
  return std::none_of(dist.begin(), dist.end(),
                      [](std::size_t d) { return d == kUnreached; });
}

std::size_t CommGraph::diameter() const {
  if (!is_connected()) {
    throw Error(ErrorCode::kDisconnectedGraph, "diameter of a disconnected graph");
  }
  std::size_t best = 0;
  for (std::size_t s = 0; s < size(); ++s) {
    const auto dist = distances_from(s);
    best = std::max(best, *std::max_element(dist.begin(), dist.end()));
  }
  return best;
}

std::vector<std::size_t> SpanningTree::depths() const {
  std::vector<std::size_t> depth(size(), kUnreached);
  depth.at(root) = 0;
  // Parent chains have length < n, so memoised walks terminate.
  for (std::size_t i = 0; i < size(); ++i) {
    std::vector<std::size_t> chain;
    std::size_t v = i;
    while (depth[v] == kUnreached) {
      chain.push_back(v);
      if (chain.size() > size()) {
        throw Error(ErrorCode::kInvalidArgument, "parent map contains a cycle");
      }
      v = parent.at(v);
    }
    std::size_t d = depth[v];
    for (auto it = chain.rbegin(); it != chain.rend(); ++it) depth[*it] = ++d;
  }
  return depth;
}

std::size_t SpanningTree::height() const {
  const auto d = depths();
  return d.empty() ? 0 : *std::max_element(d.begin(), d.end());
}

std::vector<Edge> SpanningTree::oriented_edges() const {
  std::vector<Edge> out;
  for (std::size_t i = 0; i < size(); ++i) {
    if (i != root) out.emplace_back(parent[i], i);
  }
  return out;
}

SpanningTree orient_tree(std::size_t node_count, const std::vector<Edge>& tree_edges,
                         std::size_t root) {
  if (tree_edges.size() + 1 != node_count) {
    throw Error(ErrorCode::kInvalidArgument, "tree must have n - 1 edges");
  }
  const CommGraph tree(node_count, tree_edges);
  SpanningTree out{root, std::vector<std::size_t>(node_count, kUnreached)};
  out.parent.at(root) = root;
  std::queue<std::size_t> frontier;
  frontier.push(root);
  while (!frontier.empty()) {
    const std::size_t u = frontier.front();
    frontier.pop();
    for (std::size_t v : tree.neighbors(u)) {
      if (out.parent[v] == kUnreached) {
        out.parent[v] = u;
        frontier.push(v);
      }
    }
  }
  if (std::find(out.parent.begin(), out.parent.end(), kUnreached) != out.parent.end()) {
    throw Error(ErrorCode::kInvalidArgument, "edge set does not span the graph");
  }
  return out;
}

namespace {

// Whether chosen edges plus candidates edges[next..] still connect all nodes.
bool can_span(std::size_t n, const std::vector<Edge>& chosen,
              const std::vector<Edge>& edges, std::size_t next) {
  DisjointSets sets(n);
  std::size_t components = n;
  for (auto [a, b] : chosen) components -= sets.unite(a, b) ? 1 : 0;
  for (std::size_t k = next; k < edges.size() && components > 1; ++k) {
    components -= sets.unite(edges[k].first, edges[k].second) ? 1 : 0;
  }
  return components == 1;
}

bool joins_components(std::size_t n, const std::vector<Edge>& chosen, const Edge& e) {
  DisjointSets sets(n);
  for (auto [a, b] : chosen) sets.unite(a, b);
  return sets.find(e.first) != sets.find(e.second);
}

void enumerate_from(std::size_t n, const std::vector<Edge>& edges, std::size_t next,
                    std::vector<Edge>& chosen,
                    const std::function<void(const std::vector<Edge>&)>& visit) {
  if (chosen.size() + 1 == n) {
    visit(chosen);
    return;
  }
  if (next == edges.size()) return;
  if (joins_components(n, chosen, edges[next])) {
    chosen.push_back(edges[next]);
    enumerate_from(n, edges, next + 1, chosen, visit);
    chosen.pop_back();
  }
  if (can_span(n, chosen, edges, next + 1)) {
    enumerate_from(n, edges, next + 1, chosen, visit);
  }
}

}  // namespace

void for_each_spanning_tree(const CommGraph& graph,
                            const std::function<void(const std::vector<Edge>&)>& visit) {
  const std::size_t n = graph.size();
  if (n > kMaxTreeEnumerationNodes) {
    throw Error(ErrorCode::kGraphSizeLimit,
                "spanning-tree enumeration limited to " +
                    std::to_string(kMaxTreeEnumerationNodes) + " nodes, graph has " +
                    std::to_string(n));
  }
  if (n == 0) return;
  std::vector<Edge> chosen;
  if (!can_span(n, chosen, graph.edges(), 0)) return;
  enumerate_from(n, graph.edges(), 0, chosen, visit);
}

std::vector<SpanningTree> enumerate_spanning_trees(const CommGraph& graph,
                                                   std::size_t root) {
  if (root >= graph.size()) {
    throw Error(ErrorCode::kInvalidArgument, "root outside the graph");
  }
  std::vector<SpanningTree> trees;
  for_each_spanning_tree(graph, [&](const std::vector<Edge>& edges) {
    trees.push_back(orient_tree(graph.size(), edges, root));
  });
  return trees;
}

std::size_t tree_cost(const SpanningTree& tree) {
  const std::size_t n = tree.size();
  const auto depth = tree.depths();
  // load[v] = sum of depths over the subtree of v, i.e. over every node whose
  // root path uses the edge (parent[v], v). Accumulate deepest nodes first.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return depth[a] > depth[b]; });
  std::vector<std::size_t> load(depth);
  std::size_t best = 0;
  for (std::size_t v : order) {
    if (v == tree.root) continue;
    best = std::max(best, load[v]);
    load[tree.parent[v]] += load[v];
  }
  return best;
}

TreeCostWitness min_spanning_tree_cost(const CommGraph& graph) {
  if (!graph.is_connected()) {
    throw Error(ErrorCode::kDisconnectedGraph, "graph is not connected");
  }
  TreeCostWitness best;
  bool found = false;
  for_each_spanning_tree(graph, [&](const std::vector<Edge>& edges) {
    for (std::size_t root = 0; root < graph.size(); ++root) {
      SpanningTree tree = orient_tree(graph.size(), edges, root);
      const std::size_t cost = tree_cost(tree);
      if (!found || cost < best.value) {
        best = {cost, root, std::move(tree)};
        found = true;
      }
    }
  });
  return best;
}

}  // namespace netvmo
