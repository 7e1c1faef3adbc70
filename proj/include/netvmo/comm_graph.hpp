#pragma once

#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

namespace netvmo {

inline constexpr std::size_t kMaxTreeEnumerationNodes = 12;

/// Undirected edge between zero-based node indices, stored with first < second.
using Edge = std::pair<std::size_t, std::size_t>;

/// Fixed undirected graph over nodes 0..n-1 without self-loops or duplicate
/// edges. Scenario files use 1-based indices; conversion happens at load.
class CommGraph {
 public:
  CommGraph() = default;
  /// Throws kInvalidArgument on self-loops or out-of-range indices.
  /// Duplicate edges are merged.
  CommGraph(std::size_t node_count, const std::vector<Edge>& edges);

  std::size_t size() const { return adjacency_.size(); }
  const std::vector<Edge>& edges() const { return edges_; }

  /// Sorted neighbour indices of node i.
  const std::vector<std::size_t>& neighbors(std::size_t i) const;

  bool has_edge(std::size_t a, std::size_t b) const;
  bool is_connected() const;

  /// Hop-count distances from `source`; unreachable nodes get SIZE_MAX.
  std::vector<std::size_t> distances_from(std::size_t source) const;

  /// Longest shortest path. Throws kDisconnectedGraph if not connected.
  std::size_t diameter() const;

 private:
  std::vector<Edge> edges_;
  std::vector<std::vector<std::size_t>> adjacency_;
};

/// Spanning tree oriented away from `root`; parent[root] == root.
struct SpanningTree {
  std::size_t root = 0;
  std::vector<std::size_t> parent;

  std::size_t size() const { return parent.size(); }
  /// Number of tree edges on the path from the root to node i.
  std::vector<std::size_t> depths() const;
  std::size_t height() const;
  /// Tree edges as (parent, child), ordered by child index.
  std::vector<Edge> oriented_edges() const;
};

/// Orients an undirected tree edge set away from `root`.
SpanningTree orient_tree(std::size_t node_count, const std::vector<Edge>& tree_edges,
                         std::size_t root);

/// Calls `visit` once with the edge set of every spanning tree of the graph.
/// Throws kGraphSizeLimit above kMaxTreeEnumerationNodes nodes.
void for_each_spanning_tree(const CommGraph& graph,
                            const std::function<void(const std::vector<Edge>&)>& visit);

/// Every spanning tree oriented away from `root`.
std::vector<SpanningTree> enumerate_spanning_trees(const CommGraph& graph,
                                                   std::size_t root);

/// Path-load cost of a rooted tree: the maximum, over tree edges, of the
/// summed depths of all nodes whose root path crosses that edge.
std::size_t tree_cost(const SpanningTree& tree);

struct TreeCostWitness {
  std::size_t value = 0;
  std::size_t root = 0;
  SpanningTree tree;
};

/// Minimum tree_cost over all roots and all spanning trees.
TreeCostWitness min_spanning_tree_cost(const CommGraph& graph);

}  // namespace netvmo
